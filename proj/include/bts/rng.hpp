// Copyright 2026 The bts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BTS_RNG_HPP_
#define BTS_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace bts {

/// splitmix64 output finalizer. Used to key lazily generated game trees by
/// their move path and to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Hash of a child node given its parent's hash and the child index.
constexpr std::uint64_t child_key(std::uint64_t parent_key,
                                  std::size_t index) noexcept {
  return mix64(parent_key ^ ((static_cast<std::uint64_t>(index) + 1) *
                             0xD1B54A32D192ED03ULL));
}

inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t p : parts) h = mix64(h ^ mix64(p + 0x632BE59BD9B4E019ULL));
  return h;
}

/// Maps 64 random bits to [0, 1) with 53 bits of resolution.
constexpr double unit_double(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Tiny counter-based stream; cheap enough to instantiate per node access.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr double uniform() noexcept { return unit_double((*this)()); }

 private:
  std::uint64_t state_;
};

/// Engine-level random stream.
using Rng = std::mt19937_64;

/// Uniform index in [0, n). n must be positive.
template <class Gen>
std::size_t uniform_index(Gen& gen, std::size_t n) {
  if (n <= 1) return 0;
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(gen);
}

}  // namespace bts

#endif  // BTS_RNG_HPP_
