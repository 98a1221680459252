// SPDX-License-Identifier: Apache-2.0
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fdcell/errors.hpp"
#include "fdcell/experiments.hpp"

namespace py = pybind11;
using namespace fdcell;

namespace {

EpsilonSchedule make_epsilon(const std::string& mode, double value) {
  if (mode == "decaying") return EpsilonSchedule::decaying(value);
  if (mode == "constant") return EpsilonSchedule::constant(value);
  throw ConfigError("epsilon mode must be 'decaying' or 'constant'");
}

std::vector<const ComplexVector*> column_pointers(const std::vector<ComplexVector>& cols) {
  std::vector<const ComplexVector*> out;
  out.reserve(cols.size());
  for (const auto& c : cols) out.push_back(&c);
  return out;
}

}  // namespace

PYBIND11_MODULE(_fdcell, m) {
  m.doc() = "Full-duplex cellular scheduling and capacity toolkit";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<ConvergenceError>(m, "ConvergenceError");
  py::register_exception<SubsetCapError>(m, "SubsetCapError");

  // ---- sampling -----------------------------------------------------------
  m.def(
      "sample_gaussian_matrix",
      [](int rows, int cols, std::uint64_t seed, std::uint64_t trial,
         const std::string& label) {
        RandomStream rng(seed, trial, label);
        return sample_gaussian_matrix(rows, cols, rng);
      },
      py::arg("rows"), py::arg("cols"), py::arg("seed"), py::arg("trial") = 0,
      py::arg("label") = "gauss",
      "Matrix of i.i.d. circularly symmetric unit-variance complex Gaussians.");

  m.def(
      "sample_haar_unitary",
      [](int dim, std::uint64_t seed, std::uint64_t trial, const std::string& label) {
        RandomStream rng(seed, trial, label);
        return sample_haar_unitary(dim, rng);
      },
      py::arg("dim"), py::arg("seed"), py::arg("trial") = 0, py::arg("label") = "haar",
      "Haar-distributed unitary via phase-corrected QR.");

  m.def("logdet_id_plus_gram", &logdet_id_plus_gram, py::arg("a"), py::arg("c"),
        "log det(I + c A A^H), natural log.");

  // ---- configuration ------------------------------------------------------
  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init([](int users, int streams, double downlink_power,
                       double uplink_power, const std::string& eps_mode,
                       double eps_value, const std::string& model, double cluster_gain,
                       double cluster_interference, std::uint64_t seed) {
             NetworkConfig config;
             config.users = users;
             config.streams = streams;
             config.downlink_power = downlink_power;
             config.uplink_power = uplink_power;
             config.epsilon = make_epsilon(eps_mode, eps_value);
             if (model == "clustered") {
               config.model = ChannelModel::clustered;
             } else if (model != "homogeneous") {
               throw ConfigError("model must be 'homogeneous' or 'clustered'");
             }
             config.cluster_gain = cluster_gain;
             config.cluster_interference = cluster_interference;
             config.seed = seed;
             config.validate();
             return config;
           }),
           py::arg("users"), py::arg("streams"), py::arg("downlink_power"),
           py::arg("uplink_power"), py::arg("eps_mode") = "decaying",
           py::arg("eps_value") = 1.0, py::arg("model") = "homogeneous",
           py::arg("cluster_gain") = 1.0, py::arg("cluster_interference") = 0.0,
           py::arg("seed") = 0)
      .def_readonly("users", &NetworkConfig::users)
      .def_readonly("streams", &NetworkConfig::streams)
      .def_readonly("downlink_power", &NetworkConfig::downlink_power)
      .def_readonly("uplink_power", &NetworkConfig::uplink_power)
      .def_readonly("seed", &NetworkConfig::seed);

  m.def(
      "epsilon_value",
      [](const std::string& mode, double value, int n) {
        return epsilon_value(make_epsilon(mode, value), n);
      },
      py::arg("mode"), py::arg("value"), py::arg("n"));

  // ---- channel ------------------------------------------------------------
  py::class_<ClusteredNetwork>(m, "ClusteredNetwork")
      .def_readonly("clusters", &ClusteredNetwork::clusters)
      .def_readonly("users", &ClusteredNetwork::users)
      .def_readonly("channel_gain", &ClusteredNetwork::channel_gain)
      .def_readonly("interference_gain", &ClusteredNetwork::interference_gain)
      .def_readonly("membership", &ClusteredNetwork::membership);

  m.def("make_clustered", &make_clustered, py::arg("clusters"), py::arg("users"),
        py::arg("channel_gain"), py::arg("interference_gain"));

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def_property_readonly("uplink",
                             [](const ChannelRealization& r) { return r.uplink(); })
      .def_property_readonly("downlink",
                             [](const ChannelRealization& r) { return r.downlink(); })
      .def("interference_column",
           [](const ChannelRealization& r, int j) { return r.interference_column(j); },
           py::arg("j"));

  m.def("sample_homogeneous", &sample_homogeneous, py::arg("config"), py::arg("trial"));
  m.def("clustered_realization", &clustered_realization, py::arg("net"));

  // ---- scheduling ---------------------------------------------------------
  py::class_<StreamAssignment>(m, "StreamAssignment")
      .def_readonly("users", &StreamAssignment::users)
      .def_readonly("fallback", &StreamAssignment::fallback);

  py::class_<Schedule>(m, "Schedule")
      .def_readonly("uplink_users", &Schedule::uplink_users)
      .def_readonly("downlink_users", &Schedule::downlink_users)
      .def_readonly("uplink_fallback", &Schedule::uplink_fallback)
      .def_readonly("downlink_fallback", &Schedule::downlink_fallback)
      .def_readonly("epsilon_used", &Schedule::epsilon_used);

  m.def("schedule_uplink", &schedule_uplink, py::arg("channels"), py::arg("beams"),
        py::arg("threshold"),
        "Candidate-filtered greedy uplink selection; channels is streams x users.");

  m.def(
      "schedule_downlink",
      [](const ComplexMatrix& channels, const ComplexMatrix& beams,
         const std::vector<int>& uplink_users,
         const std::vector<ComplexVector>& interference_columns, double threshold) {
        return schedule_downlink(channels, beams, uplink_users,
                                 column_pointers(interference_columns), threshold);
      },
      py::arg("channels"), py::arg("beams"), py::arg("uplink_users"),
      py::arg("interference_columns"), py::arg("threshold"),
      "Downlink selection; interference_columns[i] is the gain column of "
      "uplink_users[i].");

  // ---- rates --------------------------------------------------------------
  py::class_<RateReport>(m, "RateReport")
      .def_readonly("uplink_stream_rates", &RateReport::uplink_stream_rates)
      .def_readonly("downlink_stream_rates", &RateReport::downlink_stream_rates)
      .def_readonly("uplink_sum", &RateReport::uplink_sum)
      .def_readonly("downlink_sum", &RateReport::downlink_sum)
      .def_readonly("mac_capacity", &RateReport::mac_capacity)
      .def_readonly("bc_capacity", &RateReport::bc_capacity)
      .def_readonly("uplink_gap", &RateReport::uplink_gap)
      .def_readonly("downlink_gap", &RateReport::downlink_gap)
      .def_readonly("mac_benchmark_exact", &RateReport::mac_benchmark_exact);

  m.def("uplink_stream_rates", &uplink_stream_rates, py::arg("channels"),
        py::arg("beams"), py::arg("users"), py::arg("power_per_user"));

  m.def(
      "downlink_stream_rates",
      [](const ComplexMatrix& channels, const ComplexMatrix& beams,
         const std::vector<int>& users, const std::vector<int>& uplink_users,
         const std::vector<ComplexVector>& interference_columns, double total_power,
         double uplink_power) {
        return downlink_stream_rates(channels, beams, users, uplink_users,
                                     column_pointers(interference_columns), total_power,
                                     uplink_power);
      },
      py::arg("channels"), py::arg("beams"), py::arg("users"), py::arg("uplink_users"),
      py::arg("interference_columns"), py::arg("total_power"), py::arg("uplink_power"));

  m.def("downlink_rate_floor", &downlink_rate_floor, py::arg("max_projection"),
        py::arg("total_power"), py::arg("streams"), py::arg("threshold"));

  m.def("sidechannel_clustered_rates", &sidechannel_clustered_rates, py::arg("net"),
        py::arg("total_power"), py::arg("uplink_power"),
        "Returns (uplink_sum, downlink_sum) of the replication scheme.");

  // ---- capacity -----------------------------------------------------------
  m.def("mac_m_sum_capacity_exact", &mac_m_sum_capacity_exact, py::arg("channels"),
        py::arg("per_user_power"), py::arg("streams"),
        py::arg("subset_cap") = std::uint64_t{1000000});
  m.def("mac_m_capacity_bound", &mac_m_capacity_bound, py::arg("channels"),
        py::arg("per_user_power"), py::arg("streams"));

  py::class_<DpcSolution>(m, "DpcSolution")
      .def_readonly("value", &DpcSolution::value)
      .def_readonly("powers", &DpcSolution::powers)
      .def_readonly("iterations", &DpcSolution::iterations)
      .def_readonly("converged", &DpcSolution::converged)
      .def_readonly("objective_trace", &DpcSolution::objective_trace);

  m.def("bc_sum_capacity_dpc", &bc_sum_capacity_dpc, py::arg("channels"),
        py::arg("total_power"), py::arg("tol") = 1e-8, py::arg("max_iters") = 10000);
  m.def("bc_sum_capacity_dpc_solve", &bc_sum_capacity_dpc_solve, py::arg("channels"),
        py::arg("total_power"), py::arg("tol") = 1e-8, py::arg("max_iters") = 10000);
  m.def("bc_capacity_bound", &bc_capacity_bound, py::arg("channels"),
        py::arg("total_power"), py::arg("streams"));

  py::class_<ClusteredBoundInputs>(m, "ClusteredBoundInputs")
      .def(py::init([](int clusters, double channel_gain, double interference_gain,
                       double downlink_power, double uplink_power) {
             return ClusteredBoundInputs{clusters, channel_gain, interference_gain,
                                         downlink_power, uplink_power};
           }),
           py::arg("clusters"), py::arg("channel_gain"), py::arg("interference_gain"),
           py::arg("downlink_power"), py::arg("uplink_power"))
      .def_readonly("clusters", &ClusteredBoundInputs::clusters)
      .def_readonly("channel_gain", &ClusteredBoundInputs::channel_gain)
      .def_readonly("interference_gain", &ClusteredBoundInputs::interference_gain)
      .def_readonly("downlink_power", &ClusteredBoundInputs::downlink_power)
      .def_readonly("uplink_power", &ClusteredBoundInputs::uplink_power);

  m.def("clustered_isolated_capacity", &clustered_isolated_capacity, py::arg("inputs"));
  m.def("clustered_fd_upper_bound", &clustered_fd_upper_bound, py::arg("inputs"));
  m.def(
      "clustered_time_objective",
      [](const std::vector<int>& counts, const std::vector<double>& powers,
         const ClusteredBoundInputs& in) {
        return clustered_time_objective(counts, powers, in);
      },
      py::arg("uplink_counts"), py::arg("stream_powers"), py::arg("inputs"));

  m.def(
      "snr_parameterization",
      [](double snr, double alpha, double beta, int clusters) {
        return snr_parameterization({snr, alpha, beta, clusters});
      },
      py::arg("snr"), py::arg("alpha"), py::arg("beta"), py::arg("clusters"));

  // ---- experiments --------------------------------------------------------
  py::class_<ExperimentTable>(m, "ExperimentTable")
      .def_readonly("columns", &ExperimentTable::columns)
      .def_readonly("rows", &ExperimentTable::rows)
      .def_property_readonly(
          "metadata_json",
          [](const ExperimentTable& t) { return t.metadata.dump(); })
      .def("to_csv", &ExperimentTable::to_csv)
      .def("at", &ExperimentTable::at, py::arg("row"), py::arg("column"));

  py::class_<TrialResult>(m, "TrialResult")
      .def_readonly("schedule", &TrialResult::schedule)
      .def_readonly("report", &TrialResult::report)
      .def_readonly("epsilon", &TrialResult::epsilon)
      .def_readonly("users", &TrialResult::users)
      .def_readonly("streams", &TrialResult::streams);

  m.def("run_single_trial", &run_single_trial, py::arg("config"), py::arg("trial") = 0,
        py::arg("with_benchmarks") = true,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_gap_vs_n", &run_gap_vs_n, py::arg("config"), py::arg("n_list"),
        py::arg("trials"), py::arg("delta"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_antenna_scaling", &run_antenna_scaling, py::arg("config"), py::arg("alpha"),
        py::arg("n_list"), py::arg("trials"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_clustered_snr_sweep", &run_clustered_snr_sweep, py::arg("alpha"),
        py::arg("beta"), py::arg("clusters"), py::arg("snr_list"),
        py::arg("zero_interference") = false);
  m.def("run_sidechannel_check", &run_sidechannel_check, py::arg("cluster_counts"),
        py::arg("channel_gain"), py::arg("downlink_power"), py::arg("uplink_power"));
  m.def("run_candidate_prob_check", &run_candidate_prob_check, py::arg("streams"),
        py::arg("threshold"), py::arg("users"), py::arg("draws"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
}
