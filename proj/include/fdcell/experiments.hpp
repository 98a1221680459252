// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "fdcell/capacity.hpp"
#include "fdcell/channel.hpp"
#include "fdcell/rates.hpp"
#include "fdcell/scheduler.hpp"
#include "fdcell/table.hpp"

namespace fdcell {

/// Everything produced by one block: the joint schedule, the achieved rates,
/// and (optionally) the benchmark capacities and gaps.
struct TrialResult {
  Schedule schedule;
  RateReport report;
  double epsilon = 0.0;
  int users = 0;
  int streams = 0;
};

/// Subset cap above which the exact MAC-M benchmark switches to the trace
/// bound.
inline constexpr std::uint64_t kBenchmarkSubsetCap = 1000000;

/// Full per-trial pipeline: sample channels and beams, schedule uplink then
/// downlink, compute rates and (optionally) benchmarks and gaps. A pure
/// function of (config, trial).
TrialResult run_single_trial(const NetworkConfig& config, std::uint64_t trial,
                             bool with_benchmarks = true);

/// Gap-to-benchmark trend over the user count: per n, the mean total gap,
/// the empirical exceedance P(gap > delta) with its binomial standard error,
/// and the fallback rates.
ExperimentTable run_gap_vs_n(const NetworkConfig& base, const std::vector<int>& n_list,
                             int trials, double delta, int workers = 1);

/// Per-stream rate ratio (uplink sum + downlink sum) / (2M) with the antenna
/// count scaled as M = max(1, round(alpha * ln n)). Requires a constant
/// epsilon schedule; no benchmarks are computed.
ExperimentTable run_antenna_scaling(const NetworkConfig& base, double alpha,
                                    const std::vector<int>& n_list, int trials,
                                    int workers = 1);

/// Closed-form clustered sweep: isolated capacity, full-duplex upper bound,
/// their gap, and the gap normalized by M ln snr. With at least two points
/// in the top decade, metadata carries the least-squares slope of the gap
/// against M ln snr over that decade. zero_interference forces g = 0.
ExperimentTable run_clustered_snr_sweep(double alpha, double beta, int clusters,
                                        const std::vector<double>& snr_list,
                                        bool zero_interference = false);

/// Side-channel replication scheme versus the isolated capacity for each
/// cluster count; checks the 2M log 2 bound row by row.
ExperimentTable run_sidechannel_check(const std::vector<int>& cluster_counts,
                                      double channel_gain, double downlink_power,
                                      double uplink_power);

/// Monte Carlo membership probabilities of the uplink and downlink candidate
/// sets against their closed forms (1-e^-eps)^(M-1) and (1-e^-eps)^(2M-1),
/// with binomial z-scores. `draws` individual membership samples are
/// accumulated, n users per sampled system.
ExperimentTable run_candidate_prob_check(int streams, double threshold, int users,
                                         std::int64_t draws, std::uint64_t seed);

}  // namespace fdcell
