// SPDX-License-Identifier: Apache-2.0
#include "fdcell/channel.hpp"

#include <stdexcept>
#include <string>

#include "fdcell/errors.hpp"

namespace fdcell {

EpsilonSchedule EpsilonSchedule::decaying(double c) {
  if (!(c > 0.0)) throw ConfigError("epsilon schedule: decaying constant must be > 0");
  return {EpsilonMode::decaying, c};
}

EpsilonSchedule EpsilonSchedule::constant(double eps) {
  if (!(eps > 0.0)) throw ConfigError("epsilon schedule: constant threshold must be > 0");
  return {EpsilonMode::constant, eps};
}

void NetworkConfig::validate() const {
  if (streams < 1) throw ConfigError("config: streams must be >= 1");
  if (users < streams) throw ConfigError("config: users must be >= streams");
  if (!(downlink_power > 0.0)) throw ConfigError("config: downlink power must be > 0");
  if (!(uplink_power > 0.0)) throw ConfigError("config: uplink power must be > 0");
  if (!(epsilon.value > 0.0)) throw ConfigError("config: epsilon parameter must be > 0");
  if (model == ChannelModel::clustered) {
    if (!(cluster_gain > 0.0)) throw ConfigError("config: cluster gain must be > 0");
    if (cluster_interference < 0.0) {
      throw ConfigError("config: cluster interference must be >= 0");
    }
  }
}

int ClusteredNetwork::cluster_of(int user) const {
  if (user < 0 || user >= users) {
    throw std::out_of_range("cluster_of: user index out of range");
  }
  return membership[static_cast<std::size_t>(user)];
}

ClusteredNetwork make_clustered(int clusters, int users, double channel_gain,
                                double interference_gain) {
  if (clusters < 1) throw ConfigError("make_clustered: clusters must be >= 1");
  if (users < clusters) throw ConfigError("make_clustered: users must be >= clusters");
  if (!(channel_gain > 0.0)) throw ConfigError("make_clustered: channel gain must be > 0");
  if (interference_gain < 0.0) {
    throw ConfigError("make_clustered: interference gain must be >= 0");
  }
  ClusteredNetwork net;
  net.clusters = clusters;
  net.users = users;
  net.channel_gain = channel_gain;
  net.interference_gain = interference_gain;
  net.membership.resize(static_cast<std::size_t>(users));
  for (int u = 0; u < users; ++u) {
    net.membership[static_cast<std::size_t>(u)] = u % clusters;
  }
  return net;
}

ChannelRealization::ChannelRealization(ComplexMatrix uplink, ComplexMatrix downlink,
                                       ChannelModel model, std::uint64_t seed,
                                       std::uint64_t trial)
    : uplink_(std::move(uplink)),
      downlink_(std::move(downlink)),
      model_(model),
      seed_(seed),
      trial_(trial),
      cache_(std::make_unique<ColumnCache>()) {}

ChannelRealization::ChannelRealization(ComplexMatrix uplink, ComplexMatrix downlink,
                                       ClusteredNetwork net)
    : uplink_(std::move(uplink)),
      downlink_(std::move(downlink)),
      model_(ChannelModel::clustered),
      clustered_(std::move(net)),
      cache_(std::make_unique<ColumnCache>()) {}

ComplexVector ChannelRealization::make_column(int j) const {
  const int n = users();
  ComplexVector col(n);
  if (model_ == ChannelModel::clustered) {
    const int cluster = clustered_.cluster_of(j);
    for (int i = 0; i < n; ++i) {
      col(i) = (clustered_.cluster_of(i) == cluster)
                   ? Complex(clustered_.interference_gain, 0.0)
                   : Complex(0.0, 0.0);
    }
  } else {
    RandomStream rng(seed_, trial_, "gcol:" + std::to_string(n) + ":" + std::to_string(j));
    for (int i = 0; i < n; ++i) {
      col(i) = rng.next_cn();
    }
  }
  return col;
}

const ComplexVector& ChannelRealization::interference_column(int j) const {
  if (j < 0 || j >= users()) {
    throw std::out_of_range("interference_column: uplink user index out of range");
  }
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->columns.find(j);
  if (it == cache_->columns.end()) {
    it = cache_->columns.emplace(j, make_column(j)).first;
  }
  return it->second;
}

ChannelRealization sample_homogeneous(const NetworkConfig& config, std::uint64_t trial) {
  config.validate();
  if (config.model != ChannelModel::homogeneous) {
    throw ConfigError("sample_homogeneous: config.model must be homogeneous");
  }
  const std::string tag = std::to_string(config.users) + ":" + std::to_string(config.streams);
  RandomStream ul_rng(config.seed, trial, "H_ul:" + tag);
  RandomStream dl_rng(config.seed, trial, "H_dl:" + tag);
  ComplexMatrix uplink = sample_gaussian_matrix(config.streams, config.users, ul_rng);
  ComplexMatrix downlink = sample_gaussian_matrix(config.users, config.streams, dl_rng);
  return {std::move(uplink), std::move(downlink), ChannelModel::homogeneous,
          config.seed, trial};
}

ChannelRealization clustered_realization(const ClusteredNetwork& net) {
  ComplexMatrix uplink = ComplexMatrix::Zero(net.clusters, net.users);
  ComplexMatrix downlink = ComplexMatrix::Zero(net.users, net.clusters);
  for (int u = 0; u < net.users; ++u) {
    const int c = net.cluster_of(u);
    uplink(c, u) = Complex(net.channel_gain, 0.0);
    downlink(u, c) = Complex(net.channel_gain, 0.0);
  }
  return {std::move(uplink), std::move(downlink), net};
}

ChannelRealization sample_realization(const NetworkConfig& config, std::uint64_t trial) {
  if (config.model == ChannelModel::clustered) {
    config.validate();
    return clustered_realization(make_clustered(config.streams, config.users,
                                                config.cluster_gain,
                                                config.cluster_interference));
  }
  return sample_homogeneous(config, trial);
}

}  // namespace fdcell
