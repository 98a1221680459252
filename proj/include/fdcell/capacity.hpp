// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fdcell/linalg.hpp"

namespace fdcell {

/// Requested subset enumeration would exceed the configured cap; callers
/// should switch to mac_m_capacity_bound.
class SubsetCapError : public std::runtime_error {
 public:
  explicit SubsetCapError(const std::string& what) : std::runtime_error(what) {}
};

/// Parameters of the clustered-network capacity formulas.
struct ClusteredBoundInputs {
  int clusters = 1;                // M
  double channel_gain = 1.0;       // per-cluster direction norm
  double interference_gain = 0.0;  // intra-cluster interference magnitude
  double downlink_power = 1.0;     // total base-station power
  double uplink_power = 1.0;       // per-user power
};

/// Exponent parameterization of the clustered sweep: snr = h^2 P / M,
/// snr^alpha = g^2 Pbar, snr^beta = h^2 Pbar.
struct SnrParams {
  double snr = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  int clusters = 1;
};

/// Result of the broadcast-channel sum-capacity solve. `value` is the
/// objective of the last (feasible) iterate; the trace records the objective
/// after every iteration, which is non-decreasing by construction.
struct DpcSolution {
  double value = 0.0;
  std::vector<double> powers;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

/// Exact sum capacity of the uplink MAC restricted to at most `streams`
/// simultaneously active users: the maximum of log det(I + Pbar * H_A H_A^H)
/// over all size-M column subsets A, enumerated in lexicographic order (ties
/// keep the lexicographically smallest subset). Throws SubsetCapError when
/// C(n, M) exceeds subset_cap.
double mac_m_sum_capacity_exact(const ComplexMatrix& channels, double per_user_power,
                                int streams, std::uint64_t subset_cap = 1000000);

/// Trace upper bound M * log(1 + Pbar * max_k ||h_k||^2).
double mac_m_capacity_bound(const ComplexMatrix& channels, double per_user_power,
                            int streams);

/// Dirty-paper-coding sum capacity of the broadcast channel in its dual-MAC
/// sum-power form: max over user powers q >= 0, sum q <= P of
/// log det(I + sum_k q_k h_k h_k^H). Solved by iterative waterfilling with a
/// monotone line search; terminates when the Frank-Wolfe duality gap drops
/// below tol, which certifies the value is within tol of the optimum.
/// channels: users x streams, row k = h_k^H.
DpcSolution bc_sum_capacity_dpc_solve(const ComplexMatrix& channels, double total_power,
                                      double tol = 1e-8, int max_iters = 10000);

/// Value-only wrapper; throws ConvergenceError (carrying the last iterate)
/// if max_iters is hit first.
double bc_sum_capacity_dpc(const ComplexMatrix& channels, double total_power,
                           double tol = 1e-8, int max_iters = 10000);

/// Per-stream bound M * log(1 + (P/M) * max_k ||h_k||^2).
double bc_capacity_bound(const ComplexMatrix& channels, double total_power, int streams);

/// Sum of the isolated uplink and downlink capacities:
/// M log(1 + h^2 P / M) + M log(1 + h^2 Pbar).
double clustered_isolated_capacity(const ClusteredBoundInputs& in);

/// Closed-form upper bound on any achievable full-duplex sum rate:
/// M log(1 + h^2 Pbar / (1 + g^2 Pbar))
///   + M log(1 + h^2 P / M + g^2 Pbar + 2 g h sqrt(Pbar P / M)).
double clustered_fd_upper_bound(const ClusteredBoundInputs& in);

/// The per-slot objective whose Jensen point (one uplink user per cluster,
/// equal power split) equals clustered_fd_upper_bound. uplink_counts[m] is
/// the number of uplink users scheduled from cluster m; stream_powers[m] the
/// downlink power on cluster m. Enforces sum(k) <= M and sum(P_m) <= P.
double clustered_time_objective(std::span<const int> uplink_counts,
                                std::span<const double> stream_powers,
                                const ClusteredBoundInputs& in);

/// Invert the SNR exponents with h normalized to 1:
/// P = M * snr, Pbar = snr^beta, g = sqrt(snr^(alpha-beta)).
/// Throws std::overflow_error if an exponent overflows.
ClusteredBoundInputs snr_parameterization(const SnrParams& sp);

}  // namespace fdcell
