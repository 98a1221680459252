// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <thread>

#include "fdcell/channel.hpp"
#include "fdcell/errors.hpp"

using namespace fdcell;

namespace {

NetworkConfig homogeneous_config(int n, int m, std::uint64_t seed) {
  NetworkConfig config;
  config.users = n;
  config.streams = m;
  config.downlink_power = 10.0;
  config.uplink_power = 10.0;
  config.epsilon = EpsilonSchedule::decaying(1.0);
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("homogeneous realizations are deterministic and trial-separated") {
  const auto config = homogeneous_config(4, 2, 11);
  const auto a = sample_homogeneous(config, 0);
  const auto b = sample_homogeneous(config, 0);
  CHECK(a.uplink() == b.uplink());
  CHECK(a.downlink() == b.downlink());

  const auto c = sample_homogeneous(config, 1);
  CHECK(a.uplink() != c.uplink());
}

TEST_CASE("homogeneous entries have unit mean power") {
  const auto config = homogeneous_config(1000, 2, 3);
  const auto real = sample_homogeneous(config, 0);
  const double mean_power = real.uplink().cwiseAbs2().mean();
  const double sigma = 1.0 / std::sqrt(2000.0);
  CHECK(std::abs(mean_power - 1.0) <= 3.0 * sigma);
}

TEST_CASE("interference columns are cached and deterministic") {
  const auto config = homogeneous_config(16, 2, 17);
  const auto real = sample_homogeneous(config, 0);
  const ComplexVector& first = real.interference_column(3);
  const ComplexVector& again = real.interference_column(3);
  CHECK(&first == &again);

  const auto fresh = sample_homogeneous(config, 0);
  CHECK(fresh.interference_column(3) == first);

  CHECK_THROWS_AS(real.interference_column(16), std::out_of_range);
  CHECK_THROWS_AS(real.interference_column(-1), std::out_of_range);
}

TEST_CASE("interference column cache is safe under concurrent access") {
  const auto config = homogeneous_config(64, 2, 19);
  const auto real = sample_homogeneous(config, 0);
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&real] {
      for (int j = 0; j < 64; ++j) {
        CHECK_NOTHROW(real.interference_column(j));
      }
    });
  }
  for (auto& th : pool) th.join();
  const auto fresh = sample_homogeneous(config, 0);
  for (int j = 0; j < 64; ++j) {
    CHECK(real.interference_column(j) == fresh.interference_column(j));
  }
}

TEST_CASE("distinct interference columns are uncorrelated") {
  const auto config = homogeneous_config(10000, 1, 23);
  const auto real = sample_homogeneous(config, 0);
  const ComplexVector& a = real.interference_column(0);
  const ComplexVector& b = real.interference_column(7);
  const Eigen::VectorXd pa = a.cwiseAbs2();
  const Eigen::VectorXd pb = b.cwiseAbs2();
  const double ma = pa.mean();
  const double mb = pb.mean();
  const double cov = ((pa.array() - ma) * (pb.array() - mb)).mean();
  const double corr = cov / std::sqrt(pa.array().square().mean() - ma * ma) /
                      std::sqrt(pb.array().square().mean() - mb * mb);
  // Correlation of n=1e4 independent pairs: sigma ~ 1/sqrt(n).
  CHECK(std::abs(corr) <= 3.0 / std::sqrt(10000.0));
}

TEST_CASE("round-robin cluster assignment") {
  const auto net = make_clustered(2, 4, 1.0, 0.5);
  CHECK(net.cluster_of(0) == 0);
  CHECK(net.cluster_of(1) == 1);
  CHECK(net.cluster_of(2) == 0);
  CHECK(net.cluster_of(3) == 1);

  const auto single = make_clustered(1, 3, 2.0, 0.0);
  for (int u = 0; u < 3; ++u) CHECK(single.cluster_of(u) == 0);

  const auto pairs = make_clustered(2, 2, 1.0, 1.0);
  CHECK(pairs.cluster_of(0) == 0);
  CHECK(pairs.cluster_of(1) == 1);

  CHECK_THROWS_AS(make_clustered(3, 2, 1.0, 0.0), ConfigError);
}

TEST_CASE("clustered realization embeds orthogonal directions") {
  const auto net = make_clustered(2, 4, 3.0, 0.5);
  const auto real = clustered_realization(net);
  CHECK(real.streams() == 2);
  CHECK(real.users() == 4);

  for (int u = 0; u < 4; ++u) {
    CHECK(real.uplink().col(u).norm() == doctest::Approx(3.0));
    for (int v = 0; v < 4; ++v) {
      const Complex dot = (real.uplink().col(u).adjoint() * real.uplink().col(v))(0, 0);
      if (net.cluster_of(u) == net.cluster_of(v)) {
        CHECK(std::abs(dot) == doctest::Approx(9.0));
      } else {
        CHECK(dot == Complex(0.0, 0.0));  // exactly zero across clusters
      }
    }
  }

  // all-or-none interference
  for (int j = 0; j < 4; ++j) {
    const ComplexVector& col = real.interference_column(j);
    for (int i = 0; i < 4; ++i) {
      const double expected = net.cluster_of(i) == net.cluster_of(j) ? 0.5 : 0.0;
      CHECK(std::abs(col(i)) == doctest::Approx(expected));
    }
  }
}

TEST_CASE("config validation rejects bad ranges") {
  auto config = homogeneous_config(4, 2, 1);
  config.users = 1;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = homogeneous_config(4, 2, 1);
  config.downlink_power = 0.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = homogeneous_config(4, 2, 1);
  config.epsilon.value = -1.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  CHECK_THROWS_AS(EpsilonSchedule::decaying(0.0), ConfigError);
  CHECK_THROWS_AS(EpsilonSchedule::constant(-0.5), ConfigError);
}
