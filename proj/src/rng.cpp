// SPDX-License-Identifier: Apache-2.0
#include "fdcell/rng.hpp"

#include <cmath>
#include <numbers>

namespace fdcell {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t trial,
                           std::string_view label) {
  std::uint64_t k = mix64(master_seed + kGolden);
  k = mix64(k ^ (trial + kGolden));
  key_ = mix64(k ^ fnv1a(label));
}

std::uint64_t RandomStream::next_u64() noexcept {
  return mix64(key_ + (++counter_) * kGolden);
}

double RandomStream::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_exponential() noexcept {
  // u in [0,1) keeps the log argument in (0,1].
  return -std::log1p(-next_unit());
}

std::complex<double> RandomStream::next_cn() noexcept {
  const double magnitude = std::sqrt(next_exponential());
  const double angle = 2.0 * std::numbers::pi * next_unit();
  return {magnitude * std::cos(angle), magnitude * std::sin(angle)};
}

}  // namespace fdcell
