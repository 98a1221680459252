# SPDX-License-Identifier: Apache-2.0
"""Full-duplex cellular scheduling and capacity toolkit.

Thin Python surface over the C++ core: channel sampling, the two-stage
opportunistic scheduler, achievable rates, benchmark capacities, and the
Monte Carlo experiment runners. All randomness is counter-based and keyed by
(seed, trial, label), so results are reproducible bit for bit.
"""

from ._fdcell import (
    ChannelRealization,
    ClusteredBoundInputs,
    ClusteredNetwork,
    ConfigError,
    ConvergenceError,
    DpcSolution,
    ExperimentTable,
    NetworkConfig,
    RateReport,
    Schedule,
    StreamAssignment,
    SubsetCapError,
    TrialResult,
    __version__,
    bc_capacity_bound,
    bc_sum_capacity_dpc,
    bc_sum_capacity_dpc_solve,
    clustered_fd_upper_bound,
    clustered_isolated_capacity,
    clustered_realization,
    clustered_time_objective,
    downlink_rate_floor,
    downlink_stream_rates,
    epsilon_value,
    logdet_id_plus_gram,
    mac_m_capacity_bound,
    mac_m_sum_capacity_exact,
    make_clustered,
    run_antenna_scaling,
    run_candidate_prob_check,
    run_clustered_snr_sweep,
    run_gap_vs_n,
    run_sidechannel_check,
    run_single_trial,
    sample_gaussian_matrix,
    sample_haar_unitary,
    sample_homogeneous,
    schedule_downlink,
    schedule_uplink,
    sidechannel_clustered_rates,
    snr_parameterization,
    uplink_stream_rates,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
