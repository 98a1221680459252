// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fdcell/channel.hpp"
#include "fdcell/linalg.hpp"

namespace fdcell {

/// Per-stream achievable rates plus the benchmark capacities and gaps when
/// they were computed. All rates are in nats per channel use.
struct RateReport {
  std::vector<double> uplink_stream_rates;
  std::vector<double> downlink_stream_rates;
  double uplink_sum = 0.0;
  double downlink_sum = 0.0;
  std::optional<double> mac_capacity;    // isolated uplink benchmark
  std::optional<double> bc_capacity;     // isolated downlink benchmark
  std::optional<double> uplink_gap;      // mac_capacity - uplink_sum
  std::optional<double> downlink_gap;    // bc_capacity - downlink_sum
  bool mac_benchmark_exact = true;       // false when the trace bound was used
};

/// Rates of the scheduled uplink users through unit-norm receive beams,
/// treating inter-stream interference as noise. Stream m decodes
/// users[m]; every scheduled user transmits at `power_per_user`.
std::vector<double> uplink_stream_rates(const ComplexMatrix& channels,
                                        const ComplexMatrix& beams,
                                        const std::vector<int>& users,
                                        double power_per_user);

/// Downlink rates with equal power split across beams and uplink
/// interference treated as noise. interference_columns runs parallel to
/// uplink_users, as in schedule_downlink.
std::vector<double> downlink_stream_rates(
    const ComplexMatrix& channels, const ComplexMatrix& beams,
    const std::vector<int>& users, const std::vector<int>& uplink_users,
    const std::vector<const ComplexVector*>& interference_columns,
    double total_power, double uplink_power);

/// Closed-form per-stream lower bound
/// log(1 + (P/M) * max_projection / (1 + (2M-1) * threshold)).
double downlink_rate_floor(double max_projection, double total_power, int streams,
                           double threshold);

/// Replication scheme over orthogonal device-to-device side channels with
/// half the uplink power on each copy: downlink users subtract the
/// side-channel output, which removes the interference but doubles the
/// noise. Returns (uplink sum, downlink sum); independent of the
/// interference gain by construction.
std::pair<double, double> sidechannel_clustered_rates(const ClusteredNetwork& net,
                                                      double total_power,
                                                      double uplink_power);

}  // namespace fdcell
