// SPDX-License-Identifier: Apache-2.0
#include "fdcell/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "fdcell/errors.hpp"

namespace fdcell {
namespace {

// C(n, m), or nullopt once the running value exceeds cap.
std::optional<std::uint64_t> count_subsets(int n, int m, std::uint64_t cap) {
  if (m < 0 || m > n) return 0;
  m = std::min(m, n - m);
  long double c = 1.0L;
  for (int i = 1; i <= m; ++i) {
    c = c * static_cast<long double>(n - m + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap) * 2.0L) return std::nullopt;
  }
  const auto rounded = static_cast<std::uint64_t>(c + 0.5L);
  if (rounded > cap) return std::nullopt;
  return rounded;
}

bool next_combination(std::vector<int>& idx, int n) {
  const int m = static_cast<int>(idx.size());
  int i = m - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < m; ++j) {
    idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

// In-place Cholesky of I + c * gram[idx, idx] on the lower triangle of buf.
// Returns the log determinant when take_log, otherwise the raw determinant
// (caller guarantees it cannot overflow).
template <bool take_log>
double subset_logdet(const Eigen::MatrixXcd& gram, const std::vector<int>& idx,
                     double c, Eigen::MatrixXcd& buf) {
  const int m = static_cast<int>(idx.size());
  for (int j = 0; j < m; ++j) {
    for (int i = j; i < m; ++i) {
      buf(i, j) = c * gram(idx[static_cast<std::size_t>(i)],
                           idx[static_cast<std::size_t>(j)]);
    }
    buf(j, j) += 1.0;
  }
  double acc = take_log ? 0.0 : 1.0;
  for (int j = 0; j < m; ++j) {
    Complex s = buf(j, j);
    for (int t = 0; t < j; ++t) s -= buf(j, t) * std::conj(buf(j, t));
    const double pivot = s.real();
    if (!(pivot > 0.0)) {
      throw std::runtime_error("mac_m_sum_capacity_exact: subset Gram lost positivity");
    }
    if constexpr (take_log) {
      acc += std::log(pivot);
    } else {
      acc *= pivot;
    }
    const double l = std::sqrt(pivot);
    buf(j, j) = l;
    for (int i = j + 1; i < m; ++i) {
      Complex v = buf(i, j);
      for (int t = 0; t < j; ++t) v -= buf(i, t) * std::conj(buf(j, t));
      buf(i, j) = v / l;
    }
  }
  return acc;
}

// Water level mu with sum_k (mu - floor_k)_+ = budget over the finite floors.
std::vector<double> waterfill(const std::vector<double>& floors, double budget) {
  const std::size_t n = floors.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (floors[a] != floors[b]) return floors[a] < floors[b];
    return a < b;
  });
  std::vector<double> out(n, 0.0);
  double prefix = 0.0;
  double level = 0.0;
  std::size_t active = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double f = floors[order[t]];
    if (!std::isfinite(f)) break;
    prefix += f;
    const double candidate = (budget + prefix) / static_cast<double>(t + 1);
    if (t + 1 < n && std::isfinite(floors[order[t + 1]]) &&
        candidate > floors[order[t + 1]]) {
      continue;  // next user also joins the active set
    }
    level = candidate;
    active = t + 1;
    break;
  }
  for (std::size_t t = 0; t < active; ++t) {
    out[order[t]] = std::max(0.0, level - floors[order[t]]);
  }
  return out;
}

}  // namespace

double mac_m_sum_capacity_exact(const ComplexMatrix& channels, double per_user_power,
                                int streams, std::uint64_t subset_cap) {
  const int n = static_cast<int>(channels.cols());
  if (streams < 1 || channels.rows() != streams) {
    throw std::invalid_argument("mac_m_sum_capacity_exact: channels must be streams x n");
  }
  if (n < streams) {
    throw std::invalid_argument("mac_m_sum_capacity_exact: need n >= streams");
  }
  if (!(per_user_power >= 0.0)) {
    throw std::invalid_argument("mac_m_sum_capacity_exact: power must be >= 0");
  }
  const auto subsets = count_subsets(n, streams, subset_cap);
  if (!subsets) {
    throw SubsetCapError(
        "mac_m_sum_capacity_exact: subset count exceeds cap; use mac_m_capacity_bound "
        "instead");
  }
  if (n == streams) {
    return logdet_id_plus_gram(channels, per_user_power);
  }

  const Eigen::MatrixXcd gram = channels.adjoint() * channels;
  const double max_diag = gram.diagonal().real().maxCoeff();
  // Stay in plain determinants when they cannot overflow; one log at the end.
  const bool safe_product =
      static_cast<double>(streams) * std::log1p(per_user_power * max_diag) < 600.0;

  std::vector<int> idx(static_cast<std::size_t>(streams));
  std::iota(idx.begin(), idx.end(), 0);
  Eigen::MatrixXcd buf(streams, streams);
  double best = -std::numeric_limits<double>::infinity();
  if (safe_product) {
    do {
      const double det = subset_logdet<false>(gram, idx, per_user_power, buf);
      if (det > best) best = det;
    } while (next_combination(idx, n));
    return std::log(best);
  }
  do {
    const double logdet = subset_logdet<true>(gram, idx, per_user_power, buf);
    if (logdet > best) best = logdet;
  } while (next_combination(idx, n));
  return best;
}

double mac_m_capacity_bound(const ComplexMatrix& channels, double per_user_power,
                            int streams) {
  const double max_norm = channels.colwise().squaredNorm().maxCoeff();
  return static_cast<double>(streams) * std::log1p(per_user_power * max_norm);
}

DpcSolution bc_sum_capacity_dpc_solve(const ComplexMatrix& channels, double total_power,
                                      double tol, int max_iters) {
  const Eigen::Index n = channels.rows();
  const Eigen::Index m = channels.cols();
  if (n < 1 || m < 1) {
    throw std::invalid_argument("bc_sum_capacity_dpc: empty channel matrix");
  }
  if (!(total_power > 0.0)) {
    throw std::invalid_argument("bc_sum_capacity_dpc: total power must be > 0");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("bc_sum_capacity_dpc: tol must be > 0");
  }

  // Columns of `users` are the channel vectors h_k.
  const Eigen::MatrixXcd users = channels.adjoint();

  DpcSolution sol;
  sol.powers.assign(static_cast<std::size_t>(n), 0.0);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(n);

  Eigen::MatrixXcd cov(m, m);
  Eigen::VectorXd grad(n);
  auto factor = [&](const Eigen::VectorXd& weights) {
    cov = Eigen::MatrixXcd::Identity(m, m);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (weights(k) > 0.0) {
        cov.selfadjointView<Eigen::Lower>().rankUpdate(users.col(k), weights(k));
      }
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(cov.selfadjointView<Eigen::Lower>());
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("bc_sum_capacity_dpc: Cholesky failed");
    }
    return llt;
  };
  auto objective_of = [](const Eigen::LLT<Eigen::MatrixXcd>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
  };

  for (int iter = 0; iter < max_iters; ++iter) {
    const auto llt = factor(q);
    const double objective = objective_of(llt);
    sol.objective_trace.push_back(objective);
    sol.value = objective;
    sol.iterations = iter + 1;
    std::copy(q.data(), q.data() + n, sol.powers.begin());

    // grad_k = h_k^H cov^{-1} h_k
    const Eigen::MatrixXcd back = llt.matrixL().solve(users);
    grad = back.colwise().squaredNorm().transpose();

    const double fw_gap = total_power * grad.maxCoeff() - q.dot(grad);
    if (fw_gap <= tol) {
      sol.converged = true;
      return sol;
    }

    // Waterfill target on the leave-one-out effective channels.
    std::vector<double> floors(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
      const double denom = 1.0 - q(k) * grad(k);
      const double eff = denom > 1e-14 ? grad(k) / denom : std::numeric_limits<double>::infinity();
      floors[static_cast<std::size_t>(k)] =
          eff > 0.0 ? 1.0 / eff : std::numeric_limits<double>::infinity();
    }
    const std::vector<double> target = waterfill(floors, total_power);

    Eigen::VectorXd direction(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      direction(k) = target[static_cast<std::size_t>(k)] - q(k);
    }

    // The waterfill direction usually ascends; when it does not, the
    // Frank-Wolfe vertex (all power on the steepest user) always does.
    auto directional_derivative = [&](double theta) {
      const auto llt_theta = factor(q + theta * direction);
      const Eigen::MatrixXcd back_theta = llt_theta.matrixL().solve(users);
      double d = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (direction(k) != 0.0) {
          d += direction(k) * back_theta.col(k).squaredNorm();
        }
      }
      return d;
    };
    if (grad.dot(direction) <= 0.0) {
      Eigen::Index steepest = 0;
      grad.maxCoeff(&steepest);
      direction = -q;
      direction(steepest) += total_power;
    }

    double step = 1.0;
    if (directional_derivative(1.0) < 0.0) {
      double lo = 0.0, hi = 1.0;
      for (int b = 0; b < 60; ++b) {
        const double mid = 0.5 * (lo + hi);
        (directional_derivative(mid) > 0.0 ? lo : hi) = mid;
      }
      step = 0.5 * (lo + hi);
    }
    q = (q + step * direction).cwiseMax(0.0);
  }

  sol.converged = false;
  return sol;
}

double bc_sum_capacity_dpc(const ComplexMatrix& channels, double total_power,
                           double tol, int max_iters) {
  const DpcSolution sol = bc_sum_capacity_dpc_solve(channels, total_power, tol, max_iters);
  if (!sol.converged) {
    throw ConvergenceError("bc_sum_capacity_dpc: no convergence within max_iters",
                           sol.value);
  }
  return sol.value;
}

double bc_capacity_bound(const ComplexMatrix& channels, double total_power, int streams) {
  const double max_norm = channels.rowwise().squaredNorm().maxCoeff();
  const double stream_power = total_power / static_cast<double>(streams);
  return static_cast<double>(streams) * std::log1p(stream_power * max_norm);
}

double clustered_isolated_capacity(const ClusteredBoundInputs& in) {
  const double m = static_cast<double>(in.clusters);
  const double h2 = in.channel_gain * in.channel_gain;
  return m * std::log1p(h2 * in.downlink_power / m) +
         m * std::log1p(h2 * in.uplink_power);
}

double clustered_fd_upper_bound(const ClusteredBoundInputs& in) {
  const double m = static_cast<double>(in.clusters);
  const double h = in.channel_gain;
  const double g = in.interference_gain;
  const double h2 = h * h;
  const double g2 = g * g;
  const double uplink_term =
      m * std::log1p(h2 * in.uplink_power / (1.0 + g2 * in.uplink_power));
  const double cross = 2.0 * g * h * std::sqrt(in.uplink_power * in.downlink_power / m);
  const double downlink_term =
      m * std::log1p(h2 * in.downlink_power / m + g2 * in.uplink_power + cross);
  return uplink_term + downlink_term;
}

double clustered_time_objective(std::span<const int> uplink_counts,
                                std::span<const double> stream_powers,
                                const ClusteredBoundInputs& in) {
  const int m = in.clusters;
  if (static_cast<int>(uplink_counts.size()) != m ||
      static_cast<int>(stream_powers.size()) != m) {
    throw std::invalid_argument("clustered_time_objective: need one entry per cluster");
  }
  int total_users = 0;
  double total_power = 0.0;
  for (int k : uplink_counts) {
    if (k < 0) throw std::invalid_argument("clustered_time_objective: counts must be >= 0");
    total_users += k;
  }
  for (double p : stream_powers) {
    if (p < 0.0) throw std::invalid_argument("clustered_time_objective: powers must be >= 0");
    total_power += p;
  }
  if (total_users > m) {
    throw std::invalid_argument("clustered_time_objective: sum of counts exceeds M");
  }
  if (total_power > in.downlink_power * (1.0 + 1e-12) + 1e-12) {
    throw std::invalid_argument("clustered_time_objective: sum of powers exceeds P");
  }

  const double h = in.channel_gain;
  const double g = in.interference_gain;
  const double h2 = h * h;
  const double g2 = g * g;
  double value = 0.0;
  for (int i = 0; i < m; ++i) {
    const double k = static_cast<double>(uplink_counts[static_cast<std::size_t>(i)]);
    const double p = stream_powers[static_cast<std::size_t>(i)];
    const double cross = 2.0 * g * h * std::sqrt(k * p * in.uplink_power);
    value += std::log1p(h2 * p + k * g2 * in.uplink_power + cross);
    value += std::log1p(k * h2 * in.uplink_power / (1.0 + k * g2 * in.uplink_power));
  }
  return value;
}

ClusteredBoundInputs snr_parameterization(const SnrParams& sp) {
  if (!(sp.snr > 0.0)) {
    throw std::invalid_argument("snr_parameterization: snr must be > 0");
  }
  if (sp.clusters < 1) {
    throw std::invalid_argument("snr_parameterization: clusters must be >= 1");
  }
  const double log_snr = std::log(sp.snr);
  const double uplink_power = std::exp(sp.beta * log_snr);
  const double g_squared = std::exp((sp.alpha - sp.beta) * log_snr);
  if (!std::isfinite(uplink_power) || !std::isfinite(g_squared)) {
    throw std::overflow_error("snr_parameterization: exponent overflow");
  }
  ClusteredBoundInputs out;
  out.clusters = sp.clusters;
  out.channel_gain = 1.0;
  out.interference_gain = std::sqrt(g_squared);
  out.downlink_power = static_cast<double>(sp.clusters) * sp.snr;
  out.uplink_power = uplink_power;
  return out;
}

}  // namespace fdcell
