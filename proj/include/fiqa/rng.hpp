// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace fiqa::rng {

// Sub-stream derivation. mt19937_64 is bit-stable across platforms, but the
// standard distribution adaptors are not, so all value mapping is done here
// by hand.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept;
std::uint64_t hash_str(std::string_view s) noexcept;  // FNV-1a 64

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller (cosine branch only).
  double normal();

  // Unbiased integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 gen_;
};

// Fisher-Yates permutation of 0..n-1 drawn from a fresh stream.
std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed);

}  // namespace fiqa::rng
