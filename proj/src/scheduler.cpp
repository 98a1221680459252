// SPDX-License-Identifier: Apache-2.0
#include "fdcell/scheduler.hpp"

#include <cmath>
#include <stdexcept>

namespace fdcell {
namespace {

// proj(m, k) = squared projection of user k on beam m. Greedy selection in
// stream order; already-scheduled users are excluded so the M picks are
// distinct. `passes(k)` encodes the stream-independent part of the candidate
// test (uplink interference for downlink scheduling, vacuous for uplink).
template <typename CrossBeamOk, typename ExtraOk>
StreamAssignment greedy_select(const Eigen::MatrixXd& proj, CrossBeamOk cross_ok,
                               ExtraOk extra_ok) {
  const Eigen::Index streams = proj.rows();
  const Eigen::Index n = proj.cols();
  StreamAssignment out;
  out.users.assign(static_cast<std::size_t>(streams), -1);
  out.fallback.assign(static_cast<std::size_t>(streams), false);
  std::vector<bool> taken(static_cast<std::size_t>(n), false);

  for (Eigen::Index m = 0; m < streams; ++m) {
    int best = -1;
    double best_proj = -1.0;
    int best_any = -1;
    double best_any_proj = -1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (taken[static_cast<std::size_t>(k)]) continue;
      const double own = proj(m, k);
      if (own > best_any_proj) {
        best_any_proj = own;
        best_any = static_cast<int>(k);
      }
      if (!extra_ok(k) || !cross_ok(m, k)) continue;
      if (own > best_proj) {
        best_proj = own;
        best = static_cast<int>(k);
      }
    }
    if (best < 0) {
      best = best_any;
      out.fallback[static_cast<std::size_t>(m)] = true;
    }
    out.users[static_cast<std::size_t>(m)] = best;
    taken[static_cast<std::size_t>(best)] = true;
  }
  return out;
}

}  // namespace

double epsilon_value(const EpsilonSchedule& schedule, int n) {
  if (schedule.mode == EpsilonMode::constant) {
    return schedule.value;
  }
  if (n < 2) {
    throw std::invalid_argument("epsilon_value: decaying mode needs n >= 2");
  }
  return schedule.value / std::log(static_cast<double>(n));
}

StreamAssignment schedule_uplink(const ComplexMatrix& channels,
                                 const ComplexMatrix& beams, double threshold) {
  const Eigen::Index streams = beams.cols();
  if (channels.rows() != streams) {
    throw std::invalid_argument("schedule_uplink: channel/beam dimension mismatch");
  }
  if (channels.cols() < streams) {
    throw std::invalid_argument("schedule_uplink: need at least as many users as streams");
  }
  // proj(r, k) = |beam_r^H h_k|^2
  const Eigen::MatrixXd proj = (beams.adjoint() * channels).cwiseAbs2();
  auto cross_ok = [&](Eigen::Index m, Eigen::Index k) {
    for (Eigen::Index r = 0; r < streams; ++r) {
      if (r != m && proj(r, k) > threshold) return false;
    }
    return true;
  };
  return greedy_select(proj, cross_ok, [](Eigen::Index) { return true; });
}

StreamAssignment schedule_downlink(
    const ComplexMatrix& channels, const ComplexMatrix& beams,
    const std::vector<int>& uplink_users,
    const std::vector<const ComplexVector*>& interference_columns,
    double threshold) {
  const Eigen::Index streams = beams.cols();
  const Eigen::Index n = channels.rows();
  if (channels.cols() != streams) {
    throw std::invalid_argument("schedule_downlink: channel/beam dimension mismatch");
  }
  if (n < streams) {
    throw std::invalid_argument("schedule_downlink: need at least as many users as streams");
  }
  if (interference_columns.size() != uplink_users.size()) {
    throw std::invalid_argument(
        "schedule_downlink: one interference column per scheduled uplink user required");
  }
  for (const ComplexVector* col : interference_columns) {
    if (col == nullptr || col->size() != n) {
      throw std::invalid_argument("schedule_downlink: missing interference column");
    }
  }
  // proj(k, r) = |beam_r^H h_k|^2, transposed below to match greedy_select.
  const Eigen::MatrixXd proj = (channels * beams).cwiseAbs2().transpose();
  auto cross_ok = [&](Eigen::Index m, Eigen::Index k) {
    for (Eigen::Index r = 0; r < streams; ++r) {
      if (r != m && proj(r, k) > threshold) return false;
    }
    return true;
  };
  auto interference_ok = [&](Eigen::Index k) {
    for (const ComplexVector* col : interference_columns) {
      if (std::norm((*col)(k)) > threshold) return false;
    }
    return true;
  };
  return greedy_select(proj, cross_ok, interference_ok);
}

}  // namespace fdcell
