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

#include <catch2/catch_amalgamated.hpp>

#include "vqb/matcore.hpp"

namespace vqbtest {

inline double max_diff(const vqb::ComplexMatrix &a, const vqb::ComplexMatrix &b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return vqb::max_abs(a - b);
}

inline vqb::ComplexMatrix random_hermitian(Eigen::Index n, std::uint64_t seed) {
  vqb::SplitMix64 rng(seed);
  vqb::ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = vqb::Complex(rng.normal(), rng.normal());
  return 0.5 * (g + g.adjoint());
}

inline vqb::ComplexMatrix random_matrix(Eigen::Index n, std::uint64_t seed) {
  vqb::SplitMix64 rng(seed);
  vqb::ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = vqb::Complex(rng.normal(), rng.normal());
  return g;
}

// Canonical broadcast output of |0><0| built entirely by hand:
// |00><00| + (|01><10| + |10><01|)/2.
inline vqb::ComplexMatrix broadcast_of_zero() {
  vqb::ComplexMatrix b = vqb::ComplexMatrix::Zero(4, 4);
  b(0, 0) = 1.0;
  b(1, 2) = 0.5;
  b(2, 1) = 0.5;
  return b;
}

inline vqb::DensityMatrix ket_state(std::initializer_list<vqb::Complex> amps) {
  vqb::ComplexVector psi(Eigen::Index(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps) psi(i++) = a;
  psi.normalize();
  return vqb::DensityMatrix(psi * psi.adjoint(), {psi.size()});
}

inline vqb::DensityMatrix zero_state() { return ket_state({1.0, 0.0}); }
inline vqb::DensityMatrix plus_state() { return ket_state({1.0, 1.0}); }

} // namespace vqbtest
