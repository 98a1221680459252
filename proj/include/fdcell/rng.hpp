// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace fdcell {

/// SplitMix64 output function; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream keyed by (master seed, trial, label).
///
/// The k-th output is a pure function of (key, k), so every consumer owns an
/// independent sequence and parallel trial pipelines produce identical
/// results for any worker count or evaluation order across streams.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t trial, std::string_view label);

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double next_unit() noexcept;

  /// Exponential with unit mean.
  double next_exponential() noexcept;

  /// Circularly symmetric complex Gaussian with unit variance
  /// (real and imaginary parts each have variance 1/2).
  std::complex<double> next_cn() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace fdcell
