// SPDX-License-Identifier: Apache-2.0
#include "fdcell/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace fdcell {
namespace {

void check_users(const std::vector<int>& users, Eigen::Index n, const char* where) {
  for (int u : users) {
    if (u < 0 || u >= n) throw std::invalid_argument(std::string(where) + ": user index out of range");
  }
}

}  // namespace

std::vector<double> uplink_stream_rates(const ComplexMatrix& channels,
                                        const ComplexMatrix& beams,
                                        const std::vector<int>& users,
                                        double power_per_user) {
  const Eigen::Index streams = beams.cols();
  if (static_cast<Eigen::Index>(users.size()) != streams) {
    throw std::invalid_argument("uplink_stream_rates: one user per stream required");
  }
  check_users(users, channels.cols(), "uplink_stream_rates");

  // proj(m, j) = |beam_m^H h_{users[j]}|^2
  Eigen::MatrixXd proj(streams, streams);
  for (Eigen::Index j = 0; j < streams; ++j) {
    proj.col(j) = (beams.adjoint() * channels.col(users[static_cast<std::size_t>(j)]))
                      .cwiseAbs2();
  }
  std::vector<double> rates(static_cast<std::size_t>(streams));
  for (Eigen::Index m = 0; m < streams; ++m) {
    double interference = 0.0;
    for (Eigen::Index r = 0; r < streams; ++r) {
      if (r != m) interference += proj(m, r);
    }
    const double sinr =
        power_per_user * proj(m, m) / (1.0 + power_per_user * interference);
    rates[static_cast<std::size_t>(m)] = std::log1p(sinr);
  }
  return rates;
}

std::vector<double> downlink_stream_rates(
    const ComplexMatrix& channels, const ComplexMatrix& beams,
    const std::vector<int>& users, const std::vector<int>& uplink_users,
    const std::vector<const ComplexVector*>& interference_columns,
    double total_power, double uplink_power) {
  const Eigen::Index streams = beams.cols();
  const Eigen::Index n = channels.rows();
  if (static_cast<Eigen::Index>(users.size()) != streams) {
    throw std::invalid_argument("downlink_stream_rates: one user per stream required");
  }
  if (interference_columns.size() != uplink_users.size()) {
    throw std::invalid_argument(
        "downlink_stream_rates: one interference column per uplink user required");
  }
  check_users(users, n, "downlink_stream_rates");
  for (const ComplexVector* col : interference_columns) {
    if (col == nullptr || col->size() != n) {
      throw std::invalid_argument("downlink_stream_rates: missing interference column");
    }
  }

  const double stream_power = total_power / static_cast<double>(streams);
  std::vector<double> rates(static_cast<std::size_t>(streams));
  for (Eigen::Index m = 0; m < streams; ++m) {
    const int user = users[static_cast<std::size_t>(m)];
    // proj(r) = |beam_r^H h_user|^2; row `user` of `channels` is h_user^H.
    const Eigen::VectorXd proj = (channels.row(user) * beams).cwiseAbs2().transpose();
    double beam_interference = 0.0;
    for (Eigen::Index r = 0; r < streams; ++r) {
      if (r != m) beam_interference += proj(r);
    }
    double uplink_interference = 0.0;
    for (const ComplexVector* col : interference_columns) {
      uplink_interference += std::norm((*col)(user));
    }
    const double denom =
        1.0 + stream_power * beam_interference + uplink_power * uplink_interference;
    rates[static_cast<std::size_t>(m)] = std::log1p(stream_power * proj(m) / denom);
  }
  return rates;
}

double downlink_rate_floor(double max_projection, double total_power, int streams,
                           double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("downlink_rate_floor: threshold must be > 0");
  }
  const double stream_power = total_power / static_cast<double>(streams);
  const double penalty = 1.0 + (2.0 * streams - 1.0) * threshold;
  return std::log1p(stream_power * max_projection / penalty);
}

std::pair<double, double> sidechannel_clustered_rates(const ClusteredNetwork& net,
                                                      double total_power,
                                                      double uplink_power) {
  const double m = static_cast<double>(net.clusters);
  const double h2 = net.channel_gain * net.channel_gain;
  const double uplink_sum = m * std::log1p(h2 * uplink_power / 2.0);
  const double downlink_sum = m * std::log1p(h2 * total_power / (2.0 * m));
  return {uplink_sum, downlink_sum};
}

}  // namespace fdcell
