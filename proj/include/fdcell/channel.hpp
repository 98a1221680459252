// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "fdcell/linalg.hpp"

namespace fdcell {

enum class ChannelModel { homogeneous, clustered };

enum class EpsilonMode { decaying, constant };

/// Projection-threshold schedule. decaying(c) evaluates to c / ln(n);
/// constant(eps) is n-independent.
struct EpsilonSchedule {
  EpsilonMode mode = EpsilonMode::decaying;
  double value = 1.0;  // c for decaying, eps for constant

  static EpsilonSchedule decaying(double c);
  static EpsilonSchedule constant(double eps);
};

/// Scenario parameters shared by every experiment.
struct NetworkConfig {
  int users = 0;                // uplink user count == downlink user count
  int streams = 0;              // base-station antennas per direction
  double downlink_power = 0.0;  // total block power at the base station
  double uplink_power = 0.0;    // per-user block power
  EpsilonSchedule epsilon = EpsilonSchedule{};
  ChannelModel model = ChannelModel::homogeneous;
  double cluster_gain = 1.0;          // clustered model only
  double cluster_interference = 0.0;  // clustered model only
  std::uint64_t seed = 0;

  /// Throws ConfigError on violated invariants (users >= streams >= 1,
  /// positive powers, positive epsilon parameter).
  void validate() const;
};

/// Heterogeneous model with orthogonal per-cluster directions of norm
/// `channel_gain` and all-or-none intra-cluster interference of magnitude
/// `interference_gain`.
struct ClusteredNetwork {
  int clusters = 0;
  int users = 0;
  double channel_gain = 0.0;
  double interference_gain = 0.0;
  std::vector<int> membership;  // user -> cluster, 0-based

  int cluster_of(int user) const;
};

/// Users are assigned round-robin (user u -> cluster u mod M) so runs are
/// reproducible without extra randomness.
ClusteredNetwork make_clustered(int clusters, int users, double channel_gain,
                                double interference_gain);

/// One block-fading draw of the link gains. Uplink is streams x users with
/// column k the channel of uplink user k; downlink is users x streams with
/// row k the conjugated channel of downlink user k. Interference columns are
/// generated on first request and cached; each column is a pure function of
/// (seed, trial, column index), so the set and order of requests never
/// perturbs the values.
class ChannelRealization {
 public:
  ChannelRealization(ComplexMatrix uplink, ComplexMatrix downlink,
                     ChannelModel model, std::uint64_t seed, std::uint64_t trial);

  /// Clustered variant: interference columns come from the membership map
  /// instead of fresh Gaussian draws.
  ChannelRealization(ComplexMatrix uplink, ComplexMatrix downlink,
                     ClusteredNetwork net);

  const ComplexMatrix& uplink() const noexcept { return uplink_; }
  const ComplexMatrix& downlink() const noexcept { return downlink_; }
  ChannelModel model() const noexcept { return model_; }
  int users() const noexcept { return static_cast<int>(downlink_.rows()); }
  int streams() const noexcept { return static_cast<int>(uplink_.rows()); }

  /// Column j of the interference matrix: gains from uplink user j into
  /// every downlink user. Throws std::out_of_range for j outside [0, n).
  /// Write-once per key and safe under concurrent readers.
  const ComplexVector& interference_column(int j) const;

 private:
  ComplexVector make_column(int j) const;

  ComplexMatrix uplink_;
  ComplexMatrix downlink_;
  ChannelModel model_;
  std::uint64_t seed_ = 0;
  std::uint64_t trial_ = 0;
  ClusteredNetwork clustered_;  // populated for clustered realizations

  struct ColumnCache {
    mutable std::mutex mutex;
    mutable std::unordered_map<int, ComplexVector> columns;
  };
  std::unique_ptr<ColumnCache> cache_;
};

/// Fresh i.i.d. CN(0,1) draw of the uplink and downlink matrices; a pure
/// function of (config.seed, trial). Interference columns are lazy, which is
/// statistically sound because uplink scheduling never looks at them.
ChannelRealization sample_homogeneous(const NetworkConfig& config, std::uint64_t trial);

/// Deterministic embedding of a clustered network into link-gain matrices:
/// cluster directions are scaled standard basis vectors, interference
/// columns carry `interference_gain` inside the cluster and exact zeros
/// elsewhere.
ChannelRealization clustered_realization(const ClusteredNetwork& net);

/// Dispatch on config.model.
ChannelRealization sample_realization(const NetworkConfig& config, std::uint64_t trial);

}  // namespace fdcell
