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

#include <optional>
#include <utility>

#include "vqb/maps.hpp"

namespace vqb {

//=========================================================================
// Register
//=========================================================================

/**
 * Full-register density operator for the ancilla-controlled circuits.
 *
 * Subsystem order is fixed as [control, A, B] for the broadcast circuit and
 * [control, A, ref, B] for the Choi circuit, where A starts in I/d and B
 * carries the input state (or half of the ref-B Bell pair). Gates act by
 * conjugation on the full density matrix; every step revalidates the state.
 */
struct Register {
  DensityMatrix state;
  Eigen::Index d = 2;
  bool has_ref = false;

  Dims system_dims() const {
    return has_ref ? Dims{2, d, d, d} : Dims{2, d, d};
  }
  // positions of A and B among the non-control subsystems
  std::vector<int> swap_targets() const {
    return has_ref ? std::vector<int>{0, 2} : std::vector<int>{0, 1};
  }
};

// |0><0|_C (x) I/d (x) rho, dims [2, d, d].
inline Register init_broadcast_register(const DensityMatrix &rho) {
  const Eigen::Index d = detail::single_system_dim(rho, "init_broadcast_register");
  ComplexMatrix full =
      kron(kron(basis_projector(2, 0), identity(d) / double(d)), rho.mat());
  return {DensityMatrix(std::move(full), {2, d, d}), d, false};
}

// |0><0|_C (x) I/d (x) |Phi+><Phi+|_{ref,B}, dims [2, d, d, d].
inline Register init_choi_register(Eigen::Index d) {
  if (d < 2) throw ArgumentError("init_choi_register: d must be >= 2");
  ComplexVector phi = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(double(d));
  const ComplexMatrix bell = phi * phi.adjoint();
  ComplexMatrix full =
      kron(kron(basis_projector(2, 0), identity(d) / double(d)), bell);
  return {DensityMatrix(std::move(full), {2, d, d, d}), d, true};
}

namespace detail {

inline Register conjugated(const Register &r, const ComplexMatrix &u) {
  ComplexMatrix next = u * r.state.mat() * u.adjoint();
  // Unitary conjugation preserves Hermiticity only up to rounding; clean it
  // up before revalidation.
  next = 0.5 * (next + next.adjoint()).eval();
  return {DensityMatrix(std::move(next), r.state.dims()), r.d, r.has_ref};
}

} // namespace detail

// Hadamard on the control qubit.
inline Register apply_hadamard_control(const Register &r) {
  ComplexMatrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  const Eigen::Index rest = r.state.size() / 2;
  return detail::conjugated(r, kron(h, identity(rest)));
}

/**
 * Controlled unitary |0><0| (x) I + |1><1| (x) U with U acting on the A-B
 * pair. U may carry a global phase (the partial swap at theta = 0 is i I);
 * the controlled form keeps it as a physical relative phase.
 */
inline Register apply_controlled_unitary(const Register &r,
                                         const ComplexMatrix &u) {
  if (u.rows() != r.d * r.d)
    throw DimensionError("apply_controlled_unitary: U must act on the d*d pair");
  if (max_abs(u * u.adjoint() - identity(u.rows())) > kTol.unitarity)
    throw ContractViolation("apply_controlled_unitary: U is not unitary");

  Dims rest_dims = r.system_dims();
  rest_dims.erase(rest_dims.begin());
  const Eigen::Index rest = dims_product(rest_dims);
  const ComplexMatrix u_embedded = embed_operator(u, rest_dims, r.swap_targets());
  const ComplexMatrix cu = kron(basis_projector(2, 0), identity(rest)) +
                           kron(basis_projector(2, 1), u_embedded);
  return detail::conjugated(r, cu);
}

// state -> (1 - lambda) state + lambda I/dim. Synthetic stand-in for
// hardware noise; off (lambda = 0) by default.
inline Register apply_depolarizing(const Register &r, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw ArgumentError("apply_depolarizing: lambda must be in [0, 1]");
  const Eigen::Index n = r.state.size();
  ComplexMatrix next =
      (1.0 - lambda) * r.state.mat() + lambda * identity(n) / double(n);
  return {DensityMatrix(std::move(next), r.state.dims()), r.d, r.has_ref};
}

//=========================================================================
// Measurement
//=========================================================================

struct MeasurementOutcome {
  int outcome = 0;                               // 0 or 1
  double probability = 0.0;
  std::optional<DensityMatrix> conditional_state; // empty if unattainable
};

/**
 * Computational-basis measurement of the control qubit. Returns both
 * branches; p0 + p1 = 1. An outcome with probability below
 * kTol.attainable is marked unattainable and carries no conditional state.
 */
inline std::pair<MeasurementOutcome, MeasurementOutcome>
measure_control(const Register &r) {
  const Dims dims = r.system_dims();
  std::vector<int> keep(dims.size() - 1);
  std::iota(keep.begin(), keep.end(), 1);
  Dims rest_dims(dims.begin() + 1, dims.end());
  const Eigen::Index rest = dims_product(rest_dims);

  std::pair<MeasurementOutcome, MeasurementOutcome> out;
  for (int i = 0; i < 2; ++i) {
    const ComplexMatrix proj = kron(basis_projector(2, i), identity(rest));
    const ComplexMatrix projected = proj * r.state.mat() * proj;
    const double p = projected.trace().real();
    MeasurementOutcome &slot = (i == 0) ? out.first : out.second;
    slot.outcome = i;
    slot.probability = p;
    if (p >= kTol.attainable) {
      ComplexMatrix cond = partial_trace(projected, dims, keep) / p;
      cond = 0.5 * (cond + cond.adjoint()).eval();
      slot.conditional_state = DensityMatrix(std::move(cond), rest_dims);
    }
  }
  return out;
}

//=========================================================================
// Full circuit runs
//=========================================================================

struct BroadcastRun {
  double p0 = 0.0;
  DensityMatrix state0;  // on [A, B]; the cloner branch at theta = pi/2
  double p1 = 0.0;
  DensityMatrix state1;  // on [A, B]; the antisymmetrizer branch at pi/2
};

/**
 * Hadamard / controlled-U(theta) / Hadamard on [control, A, B], then a
 * control measurement. Post-selection probabilities are
 * (d +- sin theta)/(2d); at theta = pi/2 the branches are the analytic
 * cloner and antisymmetrizer outputs.
 */
inline BroadcastRun run_broadcast_circuit(const DensityMatrix &rho,
                                          double theta, double noise = 0.0) {
  const Eigen::Index d = detail::single_system_dim(rho, "run_broadcast_circuit");
  Register r = init_broadcast_register(rho);
  r = apply_hadamard_control(r);
  r = apply_controlled_unitary(r, partial_swap({theta, d}));
  r = apply_hadamard_control(r);
  if (noise > 0.0) r = apply_depolarizing(r, noise);
  auto [m0, m1] = measure_control(r);
  if (!m0.conditional_state || !m1.conditional_state)
    throw ContractViolation("run_broadcast_circuit: branch became unattainable");
  return {m0.probability, *std::move(m0.conditional_state), m1.probability,
          *std::move(m1.conditional_state)};
}

// Final pre-measurement register state of the broadcast circuit; used for
// noise-fidelity checks.
inline Register broadcast_premeasure_state(const DensityMatrix &rho,
                                           double theta, double noise = 0.0) {
  const Eigen::Index d = detail::single_system_dim(rho, "broadcast_premeasure_state");
  Register r = init_broadcast_register(rho);
  r = apply_hadamard_control(r);
  r = apply_controlled_unitary(r, partial_swap({theta, d}));
  r = apply_hadamard_control(r);
  if (noise > 0.0) r = apply_depolarizing(r, noise);
  return r;
}

struct ChoiRun {
  double p0 = 0.0;
  DensityMatrix choi_state0;  // on [ref, out_carrier, out_fresh]
  double p1 = 0.0;
  DensityMatrix choi_state1;
};

/**
 * Choi-state circuit: [control, A, ref, B] with a ref-B Bell pair and
 * A = I/d, Hadamard / controlled-U(theta) on (A, B) / Hadamard, control
 * measurement. Conditional states are reordered from [A, ref, B] to
 * [ref, B, A] so they read as Choi states with the reference first and the
 * map output pair in kernel order (carrier slot, then fresh slot); at
 * theta = pi/2 the two branches are the Choi states of the cloner and the
 * antisymmetrizer.
 */
inline ChoiRun run_choi_circuit(double theta, Eigen::Index d,
                                double noise = 0.0) {
  Register r = init_choi_register(d);
  r = apply_hadamard_control(r);
  r = apply_controlled_unitary(r, partial_swap({theta, d}));
  r = apply_hadamard_control(r);
  if (noise > 0.0) r = apply_depolarizing(r, noise);
  auto [m0, m1] = measure_control(r);
  if (!m0.conditional_state || !m1.conditional_state)
    throw ContractViolation("run_choi_circuit: branch became unattainable");

  const auto as_choi = [d](const DensityMatrix &cond) {
    ComplexMatrix reordered =
        permute_subsystems(cond.mat(), {d, d, d}, {1, 2, 0});
    return DensityMatrix(std::move(reordered), {d, d, d});
  };
  return {m0.probability, as_choi(*m0.conditional_state), m1.probability,
          as_choi(*m1.conditional_state)};
}

} // namespace vqb
