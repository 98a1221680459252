// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fdcell/linalg.hpp"

using namespace fdcell;

namespace {

// Kolmogorov critical value at the two-sided 3-sigma level (alpha = 0.0027):
// solve 2*exp(-2x^2) = alpha.
const double kKs3Sigma = std::sqrt(0.5 * std::log(2.0 / 0.0027));

double ks_distance_uniform(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = samples[i];  // Uniform[0,1]
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  return d;
}

double ks_distance_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

double max_unitarity_error(const ComplexMatrix& u) {
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return (gram - eye).cwiseAbs().maxCoeff();
}

// Independent log-det route for the oracle: eigenvalues of the Hermitian.
double logdet_via_eigenvalues(const ComplexMatrix& a, double c) {
  Eigen::MatrixXcd herm =
      Eigen::MatrixXcd::Identity(a.rows(), a.rows()) + c * (a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  return es.eigenvalues().array().log().sum();
}

}  // namespace

TEST_CASE("gaussian sampling is deterministic per seed") {
  RandomStream r1(42, 0, "t");
  RandomStream r2(42, 0, "t");
  const ComplexMatrix a = sample_gaussian_matrix(1, 1, r1);
  const ComplexMatrix b = sample_gaussian_matrix(1, 1, r2);
  CHECK(a(0, 0) == b(0, 0));

  RandomStream r3(43, 0, "t");
  RandomStream r4(42, 1, "t");
  RandomStream r5(42, 0, "u");
  const ComplexMatrix c = sample_gaussian_matrix(2, 2, r3);
  const ComplexMatrix d = sample_gaussian_matrix(2, 2, r4);
  const ComplexMatrix e = sample_gaussian_matrix(2, 2, r5);
  RandomStream r6(42, 0, "t");
  const ComplexMatrix f = sample_gaussian_matrix(2, 2, r6);
  CHECK(c != f);
  CHECK(d != f);
  CHECK(e != f);
}

TEST_CASE("gaussian entries have unit second moment") {
  RandomStream rng(7, 0, "moments");
  const ComplexMatrix a = sample_gaussian_matrix(4, 1000, rng);
  const double mean_power = a.cwiseAbs2().mean();
  // |entry|^2 is Exponential(1): variance 1, so sigma of the mean is
  // 1/sqrt(4000).
  const double sigma = 1.0 / std::sqrt(4000.0);
  CHECK(std::abs(mean_power - 1.0) <= 3.0 * sigma);
}

TEST_CASE("gaussian sampling validates sizes") {
  RandomStream rng(1, 0, "bad");
  CHECK_THROWS_AS(sample_gaussian_matrix(0, 3, rng), std::invalid_argument);
}

TEST_CASE("haar unitary has unit modulus at dim 1") {
  RandomStream rng(5, 0, "haar1");
  const ComplexMatrix u = sample_haar_unitary(1, rng);
  CHECK(std::abs(std::abs(u(0, 0)) - 1.0) <= 1e-12);
}

TEST_CASE("haar unitaries are unitary up to dim 64") {
  for (int dim : {1, 2, 3, 4, 8, 16, 32, 64}) {
    RandomStream rng(99, static_cast<std::uint64_t>(dim), "haarU");
    const ComplexMatrix u = sample_haar_unitary(dim, rng);
    CHECK(max_unitarity_error(u) <= 1e-10);
  }
}

TEST_CASE("haar projection law at dim 2 is uniform") {
  const int draws = 100000;
  std::vector<double> samples;
  samples.reserve(draws);
  RandomStream rng(123, 0, "haar-ks");
  for (int i = 0; i < draws; ++i) {
    const ComplexMatrix u = sample_haar_unitary(2, rng);
    samples.push_back(std::norm(u(0, 0)));  // |first column . e_1|^2 ~ Beta(1,1)
  }
  const double d = ks_distance_uniform(std::move(samples));
  CHECK(d <= kKs3Sigma / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("haar columns are exchangeable") {
  const int draws = 100000;
  std::vector<double> first_col, third_col;
  first_col.reserve(draws / 2);
  third_col.reserve(draws / 2);
  RandomStream rng(321, 0, "haar-exch");
  for (int i = 0; i < draws; ++i) {
    const ComplexMatrix u = sample_haar_unitary(4, rng);
    if (i % 2 == 0) {
      first_col.push_back(std::norm(u(0, 0)));
    } else {
      third_col.push_back(std::norm(u(0, 2)));
    }
  }
  const double n1 = static_cast<double>(first_col.size());
  const double n2 = static_cast<double>(third_col.size());
  const double d = ks_distance_two_sample(std::move(first_col), std::move(third_col));
  CHECK(d <= kKs3Sigma * std::sqrt((n1 + n2) / (n1 * n2)));
}

TEST_CASE("logdet_id_plus_gram closed forms") {
  const ComplexMatrix zero = ComplexMatrix::Zero(3, 2);
  CHECK(logdet_id_plus_gram(zero, 4.2) == doctest::Approx(0.0).epsilon(1e-15));

  ComplexMatrix scalar(1, 1);
  scalar(0, 0) = Complex(2.0, 0.0);
  CHECK(logdet_id_plus_gram(scalar, 1.0) == doctest::Approx(std::log(5.0)).epsilon(1e-12));

  ComplexMatrix eye2 = ComplexMatrix::Identity(2, 2);
  CHECK(logdet_id_plus_gram(eye2, 3.0) ==
        doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("logdet_id_plus_gram matches the eigenvalue route") {
  RandomStream rng(777, 0, "logdet");
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix a = sample_gaussian_matrix(3, 5, rng);
    const double c = 0.1 + 2.0 * rng.next_unit();
    CHECK(logdet_id_plus_gram(a, c) ==
          doctest::Approx(logdet_via_eigenvalues(a, c)).epsilon(1e-10));
  }
}

TEST_CASE("logdet_id_plus_gram is monotone in the scale") {
  RandomStream rng(778, 0, "logdet-mono");
  for (int i = 0; i < 50; ++i) {
    const ComplexMatrix a = sample_gaussian_matrix(2, 4, rng);
    const double c1 = 3.0 * rng.next_unit();
    const double c2 = c1 + 2.0 * rng.next_unit();
    CHECK(logdet_id_plus_gram(a, c1) <= logdet_id_plus_gram(a, c2) + 1e-12);
  }
  CHECK_THROWS_AS(logdet_id_plus_gram(ComplexMatrix::Identity(2, 2), -1.0),
                  std::invalid_argument);
}
