// Copyright 2026 The airmhe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Counter-based random numbers (splitmix64 finalizer over seed/stream/
// counter). Order-independent: sample (seed, stream, counter) addresses one
// value, so identical scenario configs reproduce identical streams
// regardless of evaluation order.

#include <cmath>
#include <cstdint>

namespace airmhe::rng {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t mix(uint64_t seed, uint64_t stream, uint64_t counter) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ counter * 0xD1342543DE82EF95ULL);
}

/// Uniform in the open interval (0, 1).
inline double uniform01(uint64_t seed, uint64_t stream, uint64_t counter) {
  const uint64_t bits = mix(seed, stream, counter);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two counter-derived uniforms.
inline double gaussian(uint64_t seed, uint64_t stream, uint64_t counter) {
  const double u1 = uniform01(seed, stream, 2 * counter);
  const double u2 = uniform01(seed, stream, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Stream ids used by the simulator.
namespace stream {
inline constexpr uint64_t kNoiseAlpha0 = 0;  // .. +1, +2
inline constexpr uint64_t kNoiseVc0 = 3;     // .. +1, +2
inline constexpr uint64_t kNoiseVz = 6;
inline constexpr uint64_t kWindX = 7;
inline constexpr uint64_t kWindZ = 8;
inline constexpr uint64_t kMismatch = 9;
inline constexpr uint64_t kNrzBase = 16;     // + channel code
}  // namespace stream

}  // namespace airmhe::rng
