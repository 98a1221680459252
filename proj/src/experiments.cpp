// SPDX-License-Identifier: Apache-2.0
#include "fdcell/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "fdcell/errors.hpp"

namespace fdcell {
namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::vector<const ComplexVector*> gather_columns(const ChannelRealization& real,
                                                 const std::vector<int>& users) {
  std::vector<const ComplexVector*> cols;
  cols.reserve(users.size());
  for (int j : users) {
    cols.push_back(&real.interference_column(j));
  }
  return cols;
}

// Static stride partition; results must land in per-trial slots so the
// aggregation order is independent of the worker count.
void parallel_trials(int trials, int workers, const std::function<void(int)>& body) {
  workers = std::clamp(workers, 1, std::max(1, trials));
  if (workers == 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int t = w; t < trials; t += workers) body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(v.size() - 1);
  return std::sqrt(var / static_cast<double>(v.size()));
}

double fallback_fraction(const std::vector<bool>& flags) {
  if (flags.empty()) return 0.0;
  const auto hits = std::count(flags.begin(), flags.end(), true);
  return static_cast<double>(hits) / static_cast<double>(flags.size());
}

nlohmann::json config_echo(const NetworkConfig& config) {
  return {
      {"users", config.users},
      {"streams", config.streams},
      {"downlink_power", config.downlink_power},
      {"uplink_power", config.uplink_power},
      {"epsilon_mode", config.epsilon.mode == EpsilonMode::decaying ? "decaying" : "constant"},
      {"epsilon_value", config.epsilon.value},
      {"model", config.model == ChannelModel::homogeneous ? "homogeneous" : "clustered"},
      {"cluster_gain", config.cluster_gain},
      {"cluster_interference", config.cluster_interference},
      {"seed", config.seed},
  };
}

}  // namespace

TrialResult run_single_trial(const NetworkConfig& config, std::uint64_t trial,
                             bool with_benchmarks) {
  config.validate();
  const int n = config.users;
  const int m = config.streams;
  const double eps = epsilon_value(config.epsilon, n);

  const ChannelRealization real = sample_realization(config, trial);
  const std::string tag = std::to_string(n) + ":" + std::to_string(m);
  RandomStream uplink_beam_rng(config.seed, trial, "phi_ul:" + tag);
  RandomStream downlink_beam_rng(config.seed, trial, "phi_dl:" + tag);
  const ComplexMatrix uplink_beams = sample_haar_unitary(m, uplink_beam_rng);
  const ComplexMatrix downlink_beams = sample_haar_unitary(m, downlink_beam_rng);

  const StreamAssignment ul = schedule_uplink(real.uplink(), uplink_beams, eps);
  const auto gcols = gather_columns(real, ul.users);
  const StreamAssignment dl =
      schedule_downlink(real.downlink(), downlink_beams, ul.users, gcols, eps);

  TrialResult out;
  out.schedule = Schedule{ul.users, dl.users, ul.fallback, dl.fallback, eps};
  out.epsilon = eps;
  out.users = n;
  out.streams = m;

  RateReport& report = out.report;
  report.uplink_stream_rates =
      uplink_stream_rates(real.uplink(), uplink_beams, ul.users, config.uplink_power);
  report.downlink_stream_rates =
      downlink_stream_rates(real.downlink(), downlink_beams, dl.users, ul.users, gcols,
                            config.downlink_power, config.uplink_power);
  report.uplink_sum = std::accumulate(report.uplink_stream_rates.begin(),
                                      report.uplink_stream_rates.end(), 0.0);
  report.downlink_sum = std::accumulate(report.downlink_stream_rates.begin(),
                                        report.downlink_stream_rates.end(), 0.0);

  if (with_benchmarks) {
    try {
      report.mac_capacity = mac_m_sum_capacity_exact(real.uplink(), config.uplink_power,
                                                     m, kBenchmarkSubsetCap);
      report.mac_benchmark_exact = true;
    } catch (const SubsetCapError&) {
      report.mac_capacity = mac_m_capacity_bound(real.uplink(), config.uplink_power, m);
      report.mac_benchmark_exact = false;
    }
    report.bc_capacity = bc_sum_capacity_dpc(real.downlink(), config.downlink_power);
    report.uplink_gap = *report.mac_capacity - report.uplink_sum;
    report.downlink_gap = *report.bc_capacity - report.downlink_sum;
  }
  return out;
}

ExperimentTable run_gap_vs_n(const NetworkConfig& base, const std::vector<int>& n_list,
                             int trials, double delta, int workers) {
  if (trials < 1) throw ConfigError("gap-vs-n: trials must be >= 1");
  if (n_list.empty()) throw ConfigError("gap-vs-n: n_list must not be empty");
  if (!(delta > 0.0)) throw ConfigError("gap-vs-n: delta must be > 0");

  ExperimentTable table;
  table.columns = {"n",
                   "trials",
                   "epsilon",
                   "mac_benchmark_exact",
                   "mean_gap_total_nats",
                   "mean_gap_total_bits",
                   "se_mean_gap_nats",
                   "p_gap_gt_delta",
                   "se_p_gap_gt_delta",
                   "mean_gap_ul_nats",
                   "se_mean_gap_ul_nats",
                   "mean_gap_dl_nats",
                   "se_mean_gap_dl_nats",
                   "fallback_rate_ul",
                   "se_fallback_rate_ul",
                   "fallback_rate_dl",
                   "se_fallback_rate_dl"};

  struct TrialRow {
    double gap_ul = 0.0;
    double gap_dl = 0.0;
    double fallback_ul = 0.0;
    double fallback_dl = 0.0;
    bool mac_exact = true;
  };

  for (int n : n_list) {
    NetworkConfig config = base;
    config.users = n;
    config.validate();

    std::vector<TrialRow> results(static_cast<std::size_t>(trials));
    parallel_trials(trials, workers, [&](int t) {
      const TrialResult r = run_single_trial(config, static_cast<std::uint64_t>(t), true);
      TrialRow& row = results[static_cast<std::size_t>(t)];
      row.gap_ul = *r.report.uplink_gap;
      row.gap_dl = *r.report.downlink_gap;
      row.fallback_ul = fallback_fraction(r.schedule.uplink_fallback);
      row.fallback_dl = fallback_fraction(r.schedule.downlink_fallback);
      row.mac_exact = r.report.mac_benchmark_exact;
    });

    const std::size_t count = static_cast<std::size_t>(trials);
    std::vector<double> total(count), gap_ul(count), gap_dl(count), fb_ul(count),
        fb_dl(count);
    int exceed = 0;
    for (std::size_t t = 0; t < count; ++t) {
      const TrialRow& row = results[t];
      total[t] = row.gap_ul + row.gap_dl;
      gap_ul[t] = row.gap_ul;
      gap_dl[t] = row.gap_dl;
      fb_ul[t] = row.fallback_ul;
      fb_dl[t] = row.fallback_dl;
      if (total[t] > delta) ++exceed;
    }
    const double mean_total = mean_of(total);
    const double mean_gap_ul = mean_of(gap_ul);
    const double mean_gap_dl = mean_of(gap_dl);
    const double mean_fb_ul = mean_of(fb_ul);
    const double mean_fb_dl = mean_of(fb_dl);
    const double p = static_cast<double>(exceed) / static_cast<double>(trials);
    const double se_p = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));

    table.rows.push_back({static_cast<double>(n), static_cast<double>(trials),
                          epsilon_value(config.epsilon, n),
                          results.front().mac_exact ? 1.0 : 0.0, mean_total,
                          mean_total / kLn2, standard_error(total, mean_total), p, se_p,
                          mean_gap_ul, standard_error(gap_ul, mean_gap_ul), mean_gap_dl,
                          standard_error(gap_dl, mean_gap_dl), mean_fb_ul,
                          standard_error(fb_ul, mean_fb_ul), mean_fb_dl,
                          standard_error(fb_dl, mean_fb_dl)});
  }

  table.metadata = {
      {"experiment", "gap_vs_n"},
      {"config", config_echo(base)},
      {"n_list", n_list},
      {"trials", trials},
      {"delta", delta},
      {"benchmark_policy",
       "exact MAC-M while C(n,M) <= " + std::to_string(kBenchmarkSubsetCap) +
           " subsets, trace bound otherwise; BC always exact"},
      {"code_version", "fdcell 0.1.0"},
  };
  return table;
}

ExperimentTable run_antenna_scaling(const NetworkConfig& base, double alpha,
                                    const std::vector<int>& n_list, int trials,
                                    int workers) {
  if (base.epsilon.mode != EpsilonMode::constant) {
    throw ConfigError("antenna-scaling: a constant epsilon schedule is required");
  }
  if (!(alpha > 0.0)) throw ConfigError("antenna-scaling: alpha must be > 0");
  if (trials < 1) throw ConfigError("antenna-scaling: trials must be >= 1");
  if (n_list.empty()) throw ConfigError("antenna-scaling: n_list must not be empty");

  ExperimentTable table;
  table.columns = {"n",
                   "streams",
                   "trials",
                   "epsilon",
                   "mean_ratio_nats",
                   "mean_ratio_bits",
                   "se_ratio_nats",
                   "fallback_rate_ul",
                   "se_fallback_rate_ul",
                   "fallback_rate_dl",
                   "se_fallback_rate_dl"};

  for (int n : n_list) {
    const int m = std::max(
        1, static_cast<int>(std::lround(alpha * std::log(static_cast<double>(n)))));
    if (m > n) {
      throw ConfigError("antenna-scaling: alpha too large, M exceeds n at n=" +
                        std::to_string(n));
    }
    NetworkConfig config = base;
    config.users = n;
    config.streams = m;
    config.validate();

    struct TrialRow {
      double ratio = 0.0;
      double fallback_ul = 0.0;
      double fallback_dl = 0.0;
    };
    std::vector<TrialRow> results(static_cast<std::size_t>(trials));
    parallel_trials(trials, workers, [&](int t) {
      const TrialResult r = run_single_trial(config, static_cast<std::uint64_t>(t), false);
      TrialRow& row = results[static_cast<std::size_t>(t)];
      row.ratio = (r.report.uplink_sum + r.report.downlink_sum) / (2.0 * m);
      row.fallback_ul = fallback_fraction(r.schedule.uplink_fallback);
      row.fallback_dl = fallback_fraction(r.schedule.downlink_fallback);
    });

    const std::size_t count = static_cast<std::size_t>(trials);
    std::vector<double> ratios(count), fb_ul(count), fb_dl(count);
    for (std::size_t t = 0; t < count; ++t) {
      ratios[t] = results[t].ratio;
      fb_ul[t] = results[t].fallback_ul;
      fb_dl[t] = results[t].fallback_dl;
    }
    const double mean_ratio = mean_of(ratios);
    const double mean_fb_ul = mean_of(fb_ul);
    const double mean_fb_dl = mean_of(fb_dl);
    table.rows.push_back({static_cast<double>(n), static_cast<double>(m),
                          static_cast<double>(trials), base.epsilon.value, mean_ratio,
                          mean_ratio / kLn2, standard_error(ratios, mean_ratio),
                          mean_fb_ul, standard_error(fb_ul, mean_fb_ul), mean_fb_dl,
                          standard_error(fb_dl, mean_fb_dl)});
  }

  table.metadata = {
      {"experiment", "antenna_scaling"}, {"config", config_echo(base)},
      {"alpha", alpha},                  {"n_list", n_list},
      {"trials", trials},                {"code_version", "fdcell 0.1.0"},
  };
  return table;
}

ExperimentTable run_clustered_snr_sweep(double alpha, double beta, int clusters,
                                        const std::vector<double>& snr_list,
                                        bool zero_interference) {
  if (snr_list.empty()) throw ConfigError("clustered-sweep: snr_list must not be empty");
  for (std::size_t i = 0; i < snr_list.size(); ++i) {
    if (!(snr_list[i] > 1.0)) {
      throw ConfigError("clustered-sweep: every snr must be > 1");
    }
    if (i > 0 && !(snr_list[i] > snr_list[i - 1])) {
      throw ConfigError("clustered-sweep: snr_list must be strictly increasing");
    }
  }

  ExperimentTable table;
  table.columns = {"snr",      "isolated_nats", "fd_upper_bound_nats",
                   "gap_nats", "gap_bits",      "gap_over_m_log_snr"};

  std::vector<double> fit_x, fit_y;
  const double top_decade = snr_list.back() / 10.0 * (1.0 - 1e-12);
  for (double snr : snr_list) {
    ClusteredBoundInputs in = snr_parameterization({snr, alpha, beta, clusters});
    if (zero_interference) in.interference_gain = 0.0;
    const double isolated = clustered_isolated_capacity(in);
    const double bound = clustered_fd_upper_bound(in);
    const double gap = isolated - bound;
    const double scale = static_cast<double>(clusters) * std::log(snr);
    table.rows.push_back({snr, isolated, bound, gap, gap / kLn2, gap / scale});
    if (snr >= top_decade) {
      fit_x.push_back(scale);
      fit_y.push_back(gap);
    }
  }

  table.metadata = {
      {"experiment", "clustered_snr_sweep"},
      {"alpha", alpha},
      {"beta", beta},
      {"clusters", clusters},
      {"zero_interference", zero_interference},
      {"code_version", "fdcell 0.1.0"},
  };
  if (fit_x.size() >= 2) {
    const double mx = mean_of(fit_x);
    const double my = mean_of(fit_y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < fit_x.size(); ++i) {
      sxx += (fit_x[i] - mx) * (fit_x[i] - mx);
      sxy += (fit_x[i] - mx) * (fit_y[i] - my);
    }
    table.metadata["top_decade_slope"] = sxy / sxx;
  }
  return table;
}

ExperimentTable run_sidechannel_check(const std::vector<int>& cluster_counts,
                                      double channel_gain, double downlink_power,
                                      double uplink_power) {
  if (cluster_counts.empty()) {
    throw ConfigError("sidechannel-check: cluster_counts must not be empty");
  }
  ExperimentTable table;
  table.columns = {"clusters",        "isolated_nats", "scheme_sum_nats",
                   "difference_nats", "bound_nats",    "within_bound"};
  for (int m : cluster_counts) {
    if (m < 1) throw ConfigError("sidechannel-check: cluster counts must be >= 1");
    ClusteredNetwork net;
    net.clusters = m;
    net.users = m;
    net.channel_gain = channel_gain;
    net.interference_gain = 0.0;
    const auto [ul, dl] = sidechannel_clustered_rates(net, downlink_power, uplink_power);
    const double scheme = ul + dl;
    const double isolated = clustered_isolated_capacity(
        {m, channel_gain, 0.0, downlink_power, uplink_power});
    const double diff = isolated - scheme;
    const double bound = 2.0 * static_cast<double>(m) * kLn2;
    table.rows.push_back({static_cast<double>(m), isolated, scheme, diff, bound,
                          diff <= bound + 1e-12 ? 1.0 : 0.0});
  }
  table.metadata = {
      {"experiment", "sidechannel_check"},
      {"channel_gain", channel_gain},
      {"downlink_power", downlink_power},
      {"uplink_power", uplink_power},
      {"code_version", "fdcell 0.1.0"},
  };
  return table;
}

ExperimentTable run_candidate_prob_check(int streams, double threshold, int users,
                                         std::int64_t draws, std::uint64_t seed) {
  if (streams < 1) throw ConfigError("candidate-prob: streams must be >= 1");
  if (users < streams) throw ConfigError("candidate-prob: users must be >= streams");
  if (!(threshold > 0.0)) throw ConfigError("candidate-prob: threshold must be > 0");
  if (draws < 10000) throw ConfigError("candidate-prob: draws must be >= 10000");

  const double member = 1.0 - std::exp(-threshold);
  const double p_ul = std::pow(member, streams - 1);
  const double p_dl = std::pow(member, 2 * streams - 1);

  std::int64_t counted = 0;
  std::int64_t hits_ul = 0;
  std::int64_t hits_dl = 0;
  for (std::uint64_t block = 0; counted < draws; ++block) {
    RandomStream ul_chan_rng(seed, block, "cp:H_ul");
    RandomStream ul_beam_rng(seed, block, "cp:phi_ul");
    RandomStream dl_chan_rng(seed, block, "cp:H_dl");
    RandomStream dl_beam_rng(seed, block, "cp:phi_dl");
    const ComplexMatrix h_ul = sample_gaussian_matrix(streams, users, ul_chan_rng);
    const ComplexMatrix phi_ul = sample_haar_unitary(streams, ul_beam_rng);
    const ComplexMatrix h_dl = sample_gaussian_matrix(users, streams, dl_chan_rng);
    const ComplexMatrix phi_dl = sample_haar_unitary(streams, dl_beam_rng);

    const Eigen::MatrixXd proj_ul = (phi_ul.adjoint() * h_ul).cwiseAbs2();
    const Eigen::MatrixXd proj_dl = (h_dl * phi_dl).cwiseAbs2();

    const StreamAssignment scheduled = schedule_uplink(h_ul, phi_ul, threshold);
    std::vector<ComplexVector> gcols;
    gcols.reserve(scheduled.users.size());
    for (int j : scheduled.users) {
      RandomStream col_rng(seed, block, "cp:gcol:" + std::to_string(j));
      ComplexVector col(users);
      for (int i = 0; i < users; ++i) col(i) = col_rng.next_cn();
      gcols.push_back(std::move(col));
    }

    const std::int64_t take =
        std::min<std::int64_t>(users, draws - counted);
    for (int k = 0; k < take; ++k) {
      bool ul_member = true;
      for (int r = 1; r < streams; ++r) {
        if (proj_ul(r, k) > threshold) {
          ul_member = false;
          break;
        }
      }
      if (ul_member) ++hits_ul;

      bool dl_member = true;
      for (int r = 1; r < streams && dl_member; ++r) {
        if (proj_dl(k, r) > threshold) dl_member = false;
      }
      for (const auto& col : gcols) {
        if (!dl_member) break;
        if (std::norm(col(k)) > threshold) dl_member = false;
      }
      if (dl_member) ++hits_dl;
    }
    counted += take;
  }

  const double n_samples = static_cast<double>(counted);
  const double emp_ul = static_cast<double>(hits_ul) / n_samples;
  const double emp_dl = static_cast<double>(hits_dl) / n_samples;
  auto z_score = [n_samples](double emp, double expect) {
    const double var = expect * (1.0 - expect);
    if (var <= 0.0) {
      return emp == expect ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return (emp - expect) / std::sqrt(var / n_samples);
  };

  ExperimentTable table;
  table.columns = {"streams",        "threshold",       "draws",
                   "p_ul_analytic",  "p_ul_empirical",  "z_ul",
                   "p_dl_analytic",  "p_dl_empirical",  "z_dl"};
  table.rows.push_back({static_cast<double>(streams), threshold, n_samples, p_ul, emp_ul,
                        z_score(emp_ul, p_ul), p_dl, emp_dl, z_score(emp_dl, p_dl)});
  table.metadata = {
      {"experiment", "candidate_prob_check"},
      {"streams", streams},
      {"threshold", threshold},
      {"users_per_block", users},
      {"draws", draws},
      {"seed", seed},
      {"code_version", "fdcell 0.1.0"},
  };
  return table;
}

}  // namespace fdcell
