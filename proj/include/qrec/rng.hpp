// Copyright 2026 The qrec Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace qrec {

using RngStream = std::mt19937_64;

/// SplitMix64 finalizer. Used to decorrelate raw seeds (small consecutive
/// integers are common) and to derive child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Deterministic child seed for (seed, salt). Distinct salts give
/// statistically independent children, so per-arm / per-trial / per-cell
/// work can be evaluated in any order without changing results.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t salt) noexcept {
  return splitmix64(seed ^ splitmix64(salt + 0x9e3779b97f4a7c15ull));
}

inline RngStream make_stream(std::uint64_t seed) {
  return RngStream(splitmix64(seed));
}

inline RngStream substream(std::uint64_t seed, std::uint64_t salt) {
  return make_stream(derive_seed(seed, salt));
}

/// Uniform double in [0, 1), 53 random bits. Never returns 1.0, so an
/// acceptance test `uniform01(g) < p` fires with probability exactly p for
/// p in {0, 1} and within one ulp otherwise.
inline double uniform01(RngStream& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double gaussian(RngStream& g) {
  std::normal_distribution<double> dist;
  return dist(g);
}

inline void fill_gaussian(RngStream& g, std::span<double> out) {
  std::normal_distribution<double> dist;
  for (double& x : out) x = dist(g);
}

}  // namespace qrec
