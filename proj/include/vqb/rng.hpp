// Copyright 2026 The vqbsim developers
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

#include <cmath>
#include <cstdint>
#include <numbers>

namespace vqb {

/**
 * SplitMix64 generator (Steele, Lea & Flood; the update used by Java's
 * SplittableRandom). Chosen because the whole algorithm fits in a dozen
 * lines, so seeded streams are reproducible across implementations:
 *
 *   state += 0x9E3779B97F4A7C15
 *   z = state
 *   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
 *   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
 *   return z ^ (z >> 31)
 *
 * Sub-streams for parallel work are derived by finalizing
 * seed + (index + 1) * 0x9E3779B97F4A7C15 with the same mixing function;
 * stream 0 is the default stream.
 */
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGoldenGamma;
    return mix(state_);
  }

  // Seed for derived sub-stream `index` of a master seed.
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + (index + 1) * kGoldenGamma);
  }

  // Uniform double in [0, 1), 53 significant bits.
  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; one spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 1 - u in (0, 1] keeps the log argument away from zero.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace vqb
