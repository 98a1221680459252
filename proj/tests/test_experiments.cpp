// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdcell/errors.hpp"
#include "fdcell/experiments.hpp"

using namespace fdcell;

namespace {

NetworkConfig base_config(std::uint64_t seed) {
  NetworkConfig config;
  config.users = 16;
  config.streams = 2;
  config.downlink_power = 10.0;
  config.uplink_power = 10.0;
  config.epsilon = EpsilonSchedule::decaying(1.0);
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("single trial produces a consistent report") {
  const auto config = base_config(77);
  const auto trial = run_single_trial(config, 0, true);
  CHECK(trial.users == 16);
  CHECK(trial.streams == 2);
  CHECK(trial.schedule.uplink_users.size() == 2);
  CHECK(trial.schedule.downlink_users.size() == 2);
  CHECK(trial.schedule.uplink_users[0] != trial.schedule.uplink_users[1]);
  CHECK(trial.schedule.downlink_users[0] != trial.schedule.downlink_users[1]);

  const auto& report = trial.report;
  double sum = 0.0;
  for (double r : report.uplink_stream_rates) {
    CHECK(r >= 0.0);
    sum += r;
  }
  CHECK(report.uplink_sum == doctest::Approx(sum).epsilon(1e-12));
  REQUIRE(report.mac_capacity.has_value());
  REQUIRE(report.bc_capacity.has_value());
  CHECK(*report.uplink_gap >= -1e-9);
  CHECK(*report.downlink_gap >= -1e-6);

  const auto again = run_single_trial(config, 0, true);
  CHECK(again.schedule.uplink_users == trial.schedule.uplink_users);
  CHECK(again.report.uplink_sum == trial.report.uplink_sum);
  CHECK(*again.report.bc_capacity == *report.bc_capacity);
}

TEST_CASE("gap experiment rejects bad arguments") {
  const auto config = base_config(1);
  CHECK_THROWS_AS(run_gap_vs_n(config, {16}, 0, 1.0), ConfigError);
  CHECK_THROWS_AS(run_gap_vs_n(config, {}, 10, 1.0), ConfigError);
  CHECK_THROWS_AS(run_gap_vs_n(config, {1}, 10, 1.0), ConfigError);  // n < M
  CHECK_THROWS_AS(run_gap_vs_n(config, {16}, 10, -1.0), ConfigError);
}

TEST_CASE("gap experiment is deterministic and worker-independent") {
  const auto config = base_config(99);
  const auto one = run_gap_vs_n(config, {8, 16}, 12, 1.0, 1);
  const auto four = run_gap_vs_n(config, {8, 16}, 12, 1.0, 4);
  const auto again = run_gap_vs_n(config, {8, 16}, 12, 1.0, 1);
  CHECK(one.rows == four.rows);
  CHECK(one.rows == again.rows);
  CHECK(one.to_csv() == four.to_csv());
  CHECK(one.columns.size() == one.rows.at(0).size());
  CHECK(one.at(0, "n") == 8.0);
  CHECK(one.at(1, "n") == 16.0);
  CHECK(one.at(0, "mac_benchmark_exact") == 1.0);
  CHECK(one.at(0, "mean_gap_total_nats") >= 0.0);
  CHECK(one.at(0, "mean_gap_total_bits") ==
        doctest::Approx(one.at(0, "mean_gap_total_nats") / std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("antenna scaling experiment guards its preconditions") {
  auto config = base_config(5);
  CHECK_THROWS_AS(run_antenna_scaling(config, 0.5, {64}, 5), ConfigError);
  config.epsilon = EpsilonSchedule::constant(4.0);
  CHECK_THROWS_AS(run_antenna_scaling(config, -0.5, {64}, 5), ConfigError);
  CHECK_THROWS_AS(run_antenna_scaling(config, 0.5, {64}, 0), ConfigError);
}

TEST_CASE("antenna scaling with tiny alpha keeps one stream") {
  auto config = base_config(6);
  config.epsilon = EpsilonSchedule::constant(4.0);
  const auto table = run_antenna_scaling(config, 1e-6, {16, 32}, 10);
  CHECK(table.at(0, "streams") == 1.0);
  CHECK(table.at(1, "streams") == 1.0);
  CHECK(table.at(0, "mean_ratio_nats") > 0.0);

  const auto again = run_antenna_scaling(config, 1e-6, {16, 32}, 10, 3);
  CHECK(table.to_csv() == again.to_csv());
}

TEST_CASE("clustered sweep validates and reports the fitted slope") {
  CHECK_THROWS_AS(run_clustered_snr_sweep(1.0, 1.0, 2, {}), ConfigError);
  CHECK_THROWS_AS(run_clustered_snr_sweep(1.0, 1.0, 2, {0.5, 10.0}), ConfigError);
  CHECK_THROWS_AS(run_clustered_snr_sweep(1.0, 1.0, 2, {10.0, 10.0}), ConfigError);

  const std::vector<double> snrs{1e2, 1e3, 1e4, 1e5, 1e6};
  const auto table = run_clustered_snr_sweep(1.0, 1.0, 2, snrs);
  CHECK(table.rows.size() == 5);
  REQUIRE(table.metadata.contains("top_decade_slope"));
  const double slope = table.metadata["top_decade_slope"].get<double>();
  CHECK(slope >= 0.95);
  CHECK(slope <= 1.05);

  const auto single = run_clustered_snr_sweep(1.0, 1.0, 2, {1e4});
  CHECK(single.rows.size() == 1);
  CHECK(!single.metadata.contains("top_decade_slope"));

  const auto quiet = run_clustered_snr_sweep(1.0, 1.0, 2, snrs, true);
  for (std::size_t i = 0; i < quiet.rows.size(); ++i) {
    CHECK(quiet.at(i, "gap_nats") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(quiet.at(i, "gap_over_m_log_snr") == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("side-channel table satisfies the 2M log2 bound") {
  const auto table = run_sidechannel_check({1, 2, 4, 8}, 1.0, 10.0, 10.0);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(table.at(i, "within_bound") == 1.0);
    CHECK(table.at(i, "difference_nats") <= table.at(i, "bound_nats") + 1e-12);
  }

  // Large-power regime approaches the bound.
  const int m = 3;
  const auto tight = run_sidechannel_check({m}, 1.0, 1e6 * m, 1e6);
  const double diff = tight.at(0, "difference_nats");
  const double bound = 2.0 * m * std::log(2.0);
  CHECK(std::abs(diff - bound) <= 0.01 * bound);

  const auto zero = run_sidechannel_check({2}, 0.0, 5.0, 5.0);
  CHECK(zero.at(0, "difference_nats") == 0.0);
}

TEST_CASE("candidate probabilities match the closed forms") {
  CHECK_THROWS_AS(run_candidate_prob_check(2, 0.5, 16, 100, 1), ConfigError);

  const auto table = run_candidate_prob_check(3, 0.5, 64, 100000, 7);
  const double member = 1.0 - std::exp(-0.5);
  CHECK(table.at(0, "p_ul_analytic") == doctest::Approx(member * member).epsilon(1e-12));
  CHECK(std::abs(table.at(0, "z_ul")) <= 3.0);
  CHECK(std::abs(table.at(0, "z_dl")) <= 3.0);

  const auto sure = run_candidate_prob_check(2, 1e6, 64, 10000, 7);
  CHECK(sure.at(0, "p_ul_empirical") >= 1.0 - 1e-4);
  CHECK(sure.at(0, "p_dl_empirical") >= 1.0 - 1e-4);

  const auto trivial = run_candidate_prob_check(1, 0.5, 16, 10000, 7);
  CHECK(trivial.at(0, "p_ul_analytic") == 1.0);
  CHECK(trivial.at(0, "p_ul_empirical") == 1.0);
  CHECK(trivial.at(0, "z_ul") == 0.0);
}

TEST_CASE("fallback rates trend down as the user count grows") {
  const auto config = base_config(123);
  const auto table = run_gap_vs_n(config, {16, 64, 256, 1024}, 40, 1.0, 2);
  // Downward trend with one-standard-error slack on the emitted errors.
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const double slack = std::sqrt(std::pow(table.at(i - 1, "se_fallback_rate_dl"), 2) +
                                   std::pow(table.at(i, "se_fallback_rate_dl"), 2));
    CHECK(table.at(i, "fallback_rate_dl") <=
          table.at(i - 1, "fallback_rate_dl") + slack + 1e-12);
  }
  CHECK(table.at(3, "fallback_rate_ul") <=
        table.at(0, "fallback_rate_ul") + table.at(0, "se_fallback_rate_ul") + 1e-12);
}

TEST_CASE("extreme-value sanity for exponential maxima") {
  // Thresholds for unit-mean exponentials: a chi-square(2) variable is twice
  // ours, so 2 log N - 2 log log N becomes log N - log log N, and for squared
  // norms (sums of M exponentials) 2 log N + (2M+2) log log N becomes
  // log N + (M+1) log log N.
  const int n = 10000;
  const double ln_n = std::log(static_cast<double>(n));
  const double lnln_n = std::log(ln_n);

  RandomStream rng(2025, 0, "ev-exp");
  double max_exp = 0.0;
  for (int i = 0; i < n; ++i) max_exp = std::max(max_exp, rng.next_exponential());
  CHECK(max_exp >= ln_n - lnln_n);

  const int m = 2;
  RandomStream norm_rng(2025, 0, "ev-norm");
  double max_norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int a = 0; a < m; ++a) s += std::norm(norm_rng.next_cn());
    max_norm = std::max(max_norm, s);
  }
  CHECK(max_norm <= ln_n + (m + 1) * lnln_n);
}

TEST_CASE("clustered single trial keeps nonnegative gaps") {
  NetworkConfig config;
  config.users = 6;
  config.streams = 2;
  config.downlink_power = 4.0;
  config.uplink_power = 2.0;
  config.epsilon = EpsilonSchedule::constant(0.5);
  config.model = ChannelModel::clustered;
  config.cluster_gain = 1.0;
  config.cluster_interference = 0.5;
  config.seed = 31;
  const auto trial = run_single_trial(config, 0, true);
  CHECK(*trial.report.uplink_gap >= -1e-9);
  CHECK(*trial.report.downlink_gap >= -1e-6);
}
