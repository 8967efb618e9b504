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

#include <string>
#include <vector>

#include "vqb/maps.hpp"

namespace vqb {

//=========================================================================
// Two-time pseudo-density matrices
//=========================================================================

/**
 * Hermitian unit-trace operator on the pair (time A, time B) encoding the
 * two-time Pauli statistics of `input_state` evolving through the channel.
 * Tracing out time B recovers the input state, tracing out time A recovers
 * the channel output; negative eigenvalues witness temporal correlations.
 */
struct TwoTimePDM {
  HermitianOperator op;      // dims [d, d] = [time A, time B]
  std::string channel_label;
  DensityMatrix input_state;
};

namespace detail {

inline TwoTimePDM checked_pdm(ComplexMatrix r, const DensityMatrix &rho,
                              const Channel &channel, const char *who) {
  const Eigen::Index d = rho.size();
  r = (0.5 * (r + r.adjoint())).eval();
  HermitianOperator op(std::move(r), {d, d});
  const ComplexMatrix back = partial_trace(op.mat(), op.dims(), {0});
  if (max_abs(back - rho.mat()) > kTol.marginal)
    throw ContractViolation(std::string(who) +
                            ": time-A marginal does not equal the input state");
  const ComplexMatrix forward = partial_trace(op.mat(), op.dims(), {1});
  if (max_abs(forward - apply_channel(channel, rho.mat())) > kTol.marginal)
    throw ContractViolation(std::string(who) +
                            ": time-B marginal does not equal the channel output");
  return {std::move(op), channel.label, rho};
}

} // namespace detail

//=========================================================================
// Constructions
//=========================================================================

// Index-transposed Choi matrix M = sum_ij |i><j| (x) N(|j><i|); equals the
// swap operator for the identity channel.
inline ComplexMatrix cj_variant(const Channel &channel) {
  const Eigen::Index d = channel.d_in;
  if (channel.d_out != d)
    throw DimensionError("cj_variant: channel must map d -> d");
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(j, i) = 1.0;
      m.block(i * d, j * d, d, d) = apply_channel(channel, e);
    }
  return m;
}

// Closed form (1/2){ rho (x) I, M_N }.
inline TwoTimePDM pdm_closed_form(const DensityMatrix &rho,
                                  const Channel &channel) {
  const Eigen::Index d = detail::single_system_dim(rho, "pdm_closed_form");
  if (channel.d_in != d || channel.d_out != d)
    throw DimensionError("pdm_closed_form: channel/state dimensions differ");
  const ComplexMatrix m = cj_variant(channel);
  const ComplexMatrix ri = kron(rho.mat(), identity(d));
  return detail::checked_pdm(0.5 * (ri * m + m * ri), rho, channel,
                             "pdm_closed_form");
}

namespace detail {

inline std::vector<ComplexMatrix> pauli_basis(int n_qubits) {
  const std::array<ComplexMatrix, 4> single = {identity(2), pauli_x(),
                                               pauli_y(), pauli_z()};
  std::vector<ComplexMatrix> basis;
  const int count = 1 << (2 * n_qubits);
  basis.reserve(count);
  for (int a = 0; a < count; ++a) {
    ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
      // most significant base-4 digit first
      const int digit = (a >> (2 * (n_qubits - 1 - q))) & 3;
      m = kron(m, single[digit]);
    }
    basis.push_back(std::move(m));
  }
  return basis;
}

} // namespace detail

/**
 * Measurement-statistics construction: R = 4^{-n} sum_ab E[a,b]
 * sigma_a (x) sigma_b, where E[a,b] is the expectation of the product of
 * the two Pauli outcomes under the projective scheme (project onto the
 * +-1 eigenspaces at time A, evolve through the channel, measure at time
 * B). That scheme gives E[a,b] = (1/2) tr[sigma_b N({sigma_a, rho})], and
 * the result coincides with the closed form.
 */
inline TwoTimePDM pdm_from_definition(const DensityMatrix &rho,
                                      const Channel &channel, int n_qubits) {
  const Eigen::Index d = detail::single_system_dim(rho, "pdm_from_definition");
  if (n_qubits < 1 || n_qubits > 2)
    throw UnsupportedError("pdm_from_definition: n_qubits must be 1 or 2");
  if (d != (Eigen::Index(1) << n_qubits))
    throw UnsupportedError(
        "pdm_from_definition: state dimension is not 2^n_qubits");
  if (channel.d_in != d || channel.d_out != d)
    throw DimensionError("pdm_from_definition: channel/state dimensions differ");

  const auto basis = detail::pauli_basis(n_qubits);
  const double norm = 1.0 / double(Eigen::Index(1) << (2 * n_qubits));
  ComplexMatrix r = ComplexMatrix::Zero(d * d, d * d);
  for (const ComplexMatrix &sa : basis) {
    const ComplexMatrix anticomm = sa * rho.mat() + rho.mat() * sa;
    const ComplexMatrix pushed = apply_channel(channel, anticomm);
    for (const ComplexMatrix &sb : basis) {
      const double corr = 0.5 * (sb * pushed).trace().real();
      r += norm * corr * kron(sa, sb);
    }
  }
  return detail::checked_pdm(std::move(r), rho, channel, "pdm_from_definition");
}

// Sum of the absolute values of the negative eigenvalues; equals
// (||R||_1 - 1)/2 for a unit-trace operator.
inline double pdm_negativity(const TwoTimePDM &p) {
  const EighResult eig = eigh(p.op.mat());
  double total = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) < 0.0) total -= eig.eigenvalues(i);
  return total;
}

} // namespace vqb
