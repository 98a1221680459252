// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: parses a JSON config plus flags (flags win),
// dispatches to the experiment runners, writes <out>.csv and
// <out>.manifest.json.
//
// Exit codes: 0 success, 2 usage error, 3 config error, 4 runtime or
// convergence error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdcell/errors.hpp"
#include "fdcell/experiments.hpp"
#include "fdcell/table.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "fdcell 0.1.0";

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int trials = 0;
  int workers = 1;
  json config;  // parsed config file, empty object when absent

  bool seed_given = false;
  bool trials_given = false;
  bool workers_given = false;
};

// Flag wins over config file, config file over the built-in default.
template <typename T>
T resolve(bool flag_given, T flag_value, const json& config, const char* key,
          T fallback) {
  if (flag_given) return flag_value;
  if (config.contains(key)) {
    try {
      return config.at(key).get<T>();
    } catch (const json::exception& e) {
      throw fdcell::ConfigError(std::string("config key '") + key + "': " + e.what());
    }
  }
  return fallback;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) {
    throw fdcell::ConfigError("cannot open config file: " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw fdcell::ConfigError("malformed config file " + path + ": " + e.what());
  }
}

fdcell::EpsilonSchedule resolve_epsilon(const CommonArgs& args, bool mode_given,
                                        const std::string& mode_flag, bool value_given,
                                        double value_flag) {
  const std::string mode =
      resolve<std::string>(mode_given, mode_flag, args.config, "eps_mode", "decaying");
  const double value =
      resolve<double>(value_given, value_flag, args.config, "eps_value", 1.0);
  if (mode == "decaying") return fdcell::EpsilonSchedule::decaying(value);
  if (mode == "constant") return fdcell::EpsilonSchedule::constant(value);
  throw fdcell::ConfigError("eps_mode must be 'decaying' or 'constant', got " + mode);
}

void write_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << contents;
}

void emit_outputs(const std::string& subcommand, const std::string& out_base,
                  const fdcell::ExperimentTable& table, const json& resolved,
                  std::uint64_t seed, double duration_seconds) {
  const std::string csv_path = out_base + ".csv";
  const std::string manifest_path = out_base + ".manifest.json";
  write_file(csv_path, table.to_csv());

  json manifest = {
      {"subcommand", subcommand},
      {"seed", seed},
      {"config", resolved},
      {"outputs", {csv_path}},
      {"duration_seconds", duration_seconds},
      {"tool_version", kVersion},
  };
  write_file(manifest_path, manifest.dump(2) + "\n");
  std::cout << "wrote " << csv_path << " and " << manifest_path << "\n";
}

void require_out(const CommonArgs& args) {
  if (args.out_path.empty()) {
    throw fdcell::ConfigError("--out is required for this subcommand");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-duplex cellular scheduling and capacity toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonArgs common;

  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON config file");
    sub->add_option("--out", common.out_path, "output basename (<out>.csv, <out>.manifest.json)");
    sub->add_option("--seed", common.seed, "master seed")
        ->each([&common](const std::string&) { common.seed_given = true; });
    sub->add_option("--trials", common.trials, "Monte Carlo trials")
        ->each([&common](const std::string&) { common.trials_given = true; });
    sub->add_option("--workers", common.workers,
                    "worker threads (never changes output bytes)")
        ->each([&common](const std::string&) { common.workers_given = true; });
  };

  // gap-vs-n
  auto* gap_cmd = app.add_subcommand("gap-vs-n", "gap to the isolated benchmarks vs n");
  std::vector<int> n_list_flag;
  int m_flag = 0;
  double p_flag = 0.0, pbar_flag = 0.0, delta_flag = 0.0, eps_value_flag = 0.0;
  std::string eps_mode_flag;
  add_common(gap_cmd);
  auto* gap_n = gap_cmd->add_option("--n-list", n_list_flag, "user counts");
  auto* gap_m = gap_cmd->add_option("--m", m_flag, "antennas per direction");
  auto* gap_p = gap_cmd->add_option("--p", p_flag, "total downlink power");
  auto* gap_pbar = gap_cmd->add_option("--pbar", pbar_flag, "per-user uplink power");
  auto* gap_delta = gap_cmd->add_option("--delta", delta_flag, "gap threshold (nats)");
  auto* gap_eps_mode = gap_cmd->add_option("--eps-mode", eps_mode_flag, "decaying|constant");
  auto* gap_eps_value = gap_cmd->add_option("--eps-value", eps_value_flag,
                                            "decay constant or constant threshold");

  // antenna-scaling
  auto* scale_cmd = app.add_subcommand("antenna-scaling",
                                       "per-stream rate ratio with M ~ alpha ln n");
  double alpha_flag = 0.0;
  add_common(scale_cmd);
  auto* scale_n = scale_cmd->add_option("--n-list", n_list_flag, "user counts");
  auto* scale_alpha = scale_cmd->add_option("--alpha", alpha_flag, "antenna growth rate");
  auto* scale_p = scale_cmd->add_option("--p", p_flag, "total downlink power");
  auto* scale_pbar = scale_cmd->add_option("--pbar", pbar_flag, "per-user uplink power");
  auto* scale_eps = scale_cmd->add_option("--eps-value", eps_value_flag,
                                          "constant threshold (required mode)");

  // clustered-sweep
  auto* sweep_cmd = app.add_subcommand("clustered-sweep",
                                       "isolated vs upper bound over an SNR sweep");
  std::vector<double> snr_list_flag;
  double beta_flag = 0.0;
  bool zero_g_flag = false;
  add_common(sweep_cmd);
  auto* sweep_alpha = sweep_cmd->add_option("--alpha", alpha_flag, "g^2 Pbar exponent");
  auto* sweep_beta = sweep_cmd->add_option("--beta", beta_flag, "h^2 Pbar exponent");
  auto* sweep_m = sweep_cmd->add_option("--m", m_flag, "cluster count");
  auto* sweep_snr = sweep_cmd->add_option("--snr-list", snr_list_flag, "SNR points");
  sweep_cmd->add_flag("--zero-g", zero_g_flag, "force zero interference");

  // sidechannel-check
  auto* side_cmd = app.add_subcommand("sidechannel-check",
                                      "replication scheme vs isolated capacity");
  std::vector<int> m_list_flag;
  double h_flag = 0.0;
  add_common(side_cmd);
  auto* side_m = side_cmd->add_option("--m-list", m_list_flag, "cluster counts");
  auto* side_h = side_cmd->add_option("--h-gain", h_flag, "cluster channel gain");
  auto* side_p = side_cmd->add_option("--p", p_flag, "total downlink power");
  auto* side_pbar = side_cmd->add_option("--pbar", pbar_flag, "per-user uplink power");

  // candidate-prob
  auto* prob_cmd = app.add_subcommand("candidate-prob",
                                      "candidate-set membership probabilities");
  std::int64_t draws_flag = 0;
  int n_flag = 0;
  double epsilon_flag = 0.0;
  add_common(prob_cmd);
  auto* prob_m = prob_cmd->add_option("--m", m_flag, "antennas per direction");
  auto* prob_eps = prob_cmd->add_option("--epsilon", epsilon_flag, "threshold");
  auto* prob_n = prob_cmd->add_option("--n", n_flag, "users per sampled block");
  auto* prob_draws = prob_cmd->add_option("--draws", draws_flag, "membership samples");

  // single-trial
  auto* trial_cmd = app.add_subcommand("single-trial",
                                       "run one block and print the full report");
  std::uint64_t trial_flag = 0;
  std::string model_flag;
  double g_flag = 0.0;
  add_common(trial_cmd);
  auto* st_n = trial_cmd->add_option("--n", n_flag, "users");
  auto* st_m = trial_cmd->add_option("--m", m_flag, "antennas per direction");
  auto* st_p = trial_cmd->add_option("--p", p_flag, "total downlink power");
  auto* st_pbar = trial_cmd->add_option("--pbar", pbar_flag, "per-user uplink power");
  auto* st_eps_mode = trial_cmd->add_option("--eps-mode", eps_mode_flag, "decaying|constant");
  auto* st_eps_value = trial_cmd->add_option("--eps-value", eps_value_flag, "threshold parameter");
  auto* st_model = trial_cmd->add_option("--model", model_flag, "homogeneous|clustered");
  auto* st_h = trial_cmd->add_option("--h-gain", h_flag, "cluster channel gain");
  auto* st_g = trial_cmd->add_option("--g-gain", g_flag, "cluster interference gain");
  trial_cmd->add_option("--trial", trial_flag, "trial index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&started]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
        .count();
  };

  try {
    common.config = load_config(common.config_path);
    const auto& cfg = common.config;
    const std::uint64_t seed =
        resolve<std::uint64_t>(common.seed_given, common.seed, cfg, "seed", 0);
    const int workers =
        resolve<int>(common.workers_given, common.workers, cfg, "workers", 1);

    if (gap_cmd->parsed()) {
      require_out(common);
      fdcell::NetworkConfig config;
      config.streams = resolve<int>(!gap_m->empty(), m_flag, cfg, "m", 2);
      config.downlink_power = resolve<double>(!gap_p->empty(), p_flag, cfg, "p", 10.0);
      config.uplink_power =
          resolve<double>(!gap_pbar->empty(), pbar_flag, cfg, "pbar", 10.0);
      config.epsilon = resolve_epsilon(common, !gap_eps_mode->empty(), eps_mode_flag,
                                       !gap_eps_value->empty(), eps_value_flag);
      config.seed = seed;
      const auto n_list = resolve<std::vector<int>>(!gap_n->empty(), n_list_flag, cfg,
                                                    "n_list", {16, 64, 256, 1024});
      config.users = n_list.empty() ? 0 : n_list.front();
      const int trials =
          resolve<int>(common.trials_given, common.trials, cfg, "trials", 500);
      const double delta =
          resolve<double>(!gap_delta->empty(), delta_flag, cfg, "delta", 1.0);

      const auto table = fdcell::run_gap_vs_n(config, n_list, trials, delta, workers);
      json resolved = table.metadata;
      resolved["workers"] = workers;
      emit_outputs("gap-vs-n", common.out_path, table, resolved, seed, elapsed());
      return 0;
    }

    if (scale_cmd->parsed()) {
      require_out(common);
      fdcell::NetworkConfig config;
      config.streams = 1;  // recomputed per n by the runner
      config.downlink_power = resolve<double>(!scale_p->empty(), p_flag, cfg, "p", 10.0);
      config.uplink_power =
          resolve<double>(!scale_pbar->empty(), pbar_flag, cfg, "pbar", 10.0);
      config.epsilon = fdcell::EpsilonSchedule::constant(
          resolve<double>(!scale_eps->empty(), eps_value_flag, cfg, "eps_value", 4.0));
      config.seed = seed;
      const auto n_list = resolve<std::vector<int>>(!scale_n->empty(), n_list_flag, cfg,
                                                    "n_list", {64, 256, 1024, 4096});
      config.users = n_list.empty() ? 0 : n_list.front();
      const double alpha =
          resolve<double>(!scale_alpha->empty(), alpha_flag, cfg, "alpha", 0.5);
      const int trials =
          resolve<int>(common.trials_given, common.trials, cfg, "trials", 200);

      const auto table =
          fdcell::run_antenna_scaling(config, alpha, n_list, trials, workers);
      json resolved = table.metadata;
      resolved["workers"] = workers;
      emit_outputs("antenna-scaling", common.out_path, table, resolved, seed, elapsed());
      return 0;
    }

    if (sweep_cmd->parsed()) {
      require_out(common);
      const double alpha =
          resolve<double>(!sweep_alpha->empty(), alpha_flag, cfg, "alpha", 1.0);
      const double beta =
          resolve<double>(!sweep_beta->empty(), beta_flag, cfg, "beta", 1.0);
      const int clusters = resolve<int>(!sweep_m->empty(), m_flag, cfg, "m", 2);
      const auto snr_list =
          resolve<std::vector<double>>(!sweep_snr->empty(), snr_list_flag, cfg,
                                       "snr_list", {1e2, 1e3, 1e4, 1e5, 1e6});
      const bool zero_g = zero_g_flag || cfg.value("zero_g", false);

      const auto table =
          fdcell::run_clustered_snr_sweep(alpha, beta, clusters, snr_list, zero_g);
      emit_outputs("clustered-sweep", common.out_path, table, table.metadata, seed,
                   elapsed());
      return 0;
    }

    if (side_cmd->parsed()) {
      require_out(common);
      const auto m_list = resolve<std::vector<int>>(!side_m->empty(), m_list_flag, cfg,
                                                    "m_list", {1, 2, 4, 8});
      const double h = resolve<double>(!side_h->empty(), h_flag, cfg, "h", 1.0);
      const double p = resolve<double>(!side_p->empty(), p_flag, cfg, "p", 10.0);
      const double pbar = resolve<double>(!side_pbar->empty(), pbar_flag, cfg, "pbar", 10.0);

      const auto table = fdcell::run_sidechannel_check(m_list, h, p, pbar);
      emit_outputs("sidechannel-check", common.out_path, table, table.metadata, seed,
                   elapsed());
      return 0;
    }

    if (prob_cmd->parsed()) {
      require_out(common);
      const int streams = resolve<int>(!prob_m->empty(), m_flag, cfg, "m", 3);
      const double eps =
          resolve<double>(!prob_eps->empty(), epsilon_flag, cfg, "epsilon", 0.5);
      const int users = resolve<int>(!prob_n->empty(), n_flag, cfg, "n", 64);
      const std::int64_t draws =
          resolve<std::int64_t>(!prob_draws->empty(), draws_flag, cfg, "draws", 100000);

      const auto table = fdcell::run_candidate_prob_check(streams, eps, users, draws, seed);
      emit_outputs("candidate-prob", common.out_path, table, table.metadata, seed,
                   elapsed());
      return 0;
    }

    if (trial_cmd->parsed()) {
      fdcell::NetworkConfig config;
      config.users = resolve<int>(!st_n->empty(), n_flag, cfg, "n", 16);
      config.streams = resolve<int>(!st_m->empty(), m_flag, cfg, "m", 2);
      config.downlink_power = resolve<double>(!st_p->empty(), p_flag, cfg, "p", 10.0);
      config.uplink_power =
          resolve<double>(!st_pbar->empty(), pbar_flag, cfg, "pbar", 10.0);
      config.epsilon = resolve_epsilon(common, !st_eps_mode->empty(), eps_mode_flag,
                                       !st_eps_value->empty(), eps_value_flag);
      const std::string model =
          resolve<std::string>(!st_model->empty(), model_flag, cfg, "model", "homogeneous");
      if (model == "clustered") {
        config.model = fdcell::ChannelModel::clustered;
        config.cluster_gain = resolve<double>(!st_h->empty(), h_flag, cfg, "h", 1.0);
        config.cluster_interference =
            resolve<double>(!st_g->empty(), g_flag, cfg, "g", 0.0);
      } else if (model != "homogeneous") {
        throw fdcell::ConfigError("model must be 'homogeneous' or 'clustered'");
      }
      config.seed = seed;

      const auto result = fdcell::run_single_trial(config, trial_flag, true);
      const auto& rep = result.report;
      std::printf("single-trial: n=%d M=%d P=%.17g Pbar=%.17g seed=%llu trial=%llu\n",
                  result.users, result.streams, config.downlink_power,
                  config.uplink_power, static_cast<unsigned long long>(seed),
                  static_cast<unsigned long long>(trial_flag));
      std::printf("epsilon=%.17g\n", result.epsilon);
      for (int m = 0; m < result.streams; ++m) {
        std::printf("uplink stream %d: user=%d fallback=%d rate=%.17g nats\n", m,
                    result.schedule.uplink_users[m],
                    result.schedule.uplink_fallback[m] ? 1 : 0,
                    rep.uplink_stream_rates[m]);
      }
      for (int m = 0; m < result.streams; ++m) {
        std::printf("downlink stream %d: user=%d fallback=%d rate=%.17g nats\n", m,
                    result.schedule.downlink_users[m],
                    result.schedule.downlink_fallback[m] ? 1 : 0,
                    rep.downlink_stream_rates[m]);
      }
      std::printf("uplink sum rate   = %.17g nats (%.17g bits)\n", rep.uplink_sum,
                  rep.uplink_sum / std::log(2.0));
      std::printf("downlink sum rate = %.17g nats (%.17g bits)\n", rep.downlink_sum,
                  rep.downlink_sum / std::log(2.0));
      std::printf("mac benchmark (%s) = %.17g nats\n",
                  rep.mac_benchmark_exact ? "exact" : "bound", *rep.mac_capacity);
      std::printf("bc benchmark (dpc)  = %.17g nats\n", *rep.bc_capacity);
      std::printf("uplink gap   = %.17g nats\n", *rep.uplink_gap);
      std::printf("downlink gap = %.17g nats\n", *rep.downlink_gap);

      if (!common.out_path.empty()) {
        fdcell::ExperimentTable table;
        table.columns = {"trial",        "epsilon",      "uplink_sum_nats",
                         "downlink_sum_nats", "mac_capacity_nats", "bc_capacity_nats",
                         "uplink_gap_nats",   "downlink_gap_nats"};
        table.rows.push_back({static_cast<double>(trial_flag), result.epsilon,
                              rep.uplink_sum, rep.downlink_sum, *rep.mac_capacity,
                              *rep.bc_capacity, *rep.uplink_gap, *rep.downlink_gap});
        json resolved = {{"experiment", "single_trial"},
                         {"trial", trial_flag},
                         {"model", model},
                         {"users", config.users},
                         {"streams", config.streams},
                         {"downlink_power", config.downlink_power},
                         {"uplink_power", config.uplink_power},
                         {"seed", seed}};
        table.metadata = resolved;
        emit_outputs("single-trial", common.out_path, table, resolved, seed, elapsed());
      }
      return 0;
    }
  } catch (const fdcell::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const fdcell::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what()
              << " (last value " << e.last_value() << ")\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 4;
  }

  std::cerr << "usage error: no subcommand\n";
  return 2;
}
