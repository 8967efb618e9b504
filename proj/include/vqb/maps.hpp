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
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "vqb/matcore.hpp"

namespace vqb {

//=========================================================================
// Structural operators on a d (x) d pair
//=========================================================================

// Swap operator: S |i,j> = |j,i>. S^2 = I, S Hermitian, tr S = d.
inline ComplexMatrix swap_operator(Eigen::Index d) {
  if (d < 2) throw ArgumentError("swap_operator: d must be >= 2");
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

struct SymProjectors {
  ComplexMatrix plus;   // symmetric subspace, rank d(d+1)/2
  ComplexMatrix minus;  // antisymmetric subspace, rank d(d-1)/2
};

// Projectors (I (x) I +- S)/2 onto the swap eigenspaces.
inline SymProjectors sym_projectors(Eigen::Index d) {
  const ComplexMatrix s = swap_operator(d);
  const ComplexMatrix id = identity(d * d);
  return {0.5 * (id + s), 0.5 * (id - s)};
}

struct PartialSwapParams {
  double theta = 0.0;    // radians, [0, 2pi]
  Eigen::Index d = 2;
};

// Partial swap U(theta) = i e^{-i theta S} = i cos(theta) I + sin(theta) S.
// U(pi/2) = S; U(0) = i I.
inline ComplexMatrix partial_swap(const PartialSwapParams &p) {
  const ComplexMatrix s = swap_operator(p.d);
  return Complex(0, 1) * std::cos(p.theta) * identity(p.d * p.d) +
         std::sin(p.theta) * s;
}

//=========================================================================
// Operator-level map kernels (input X on d, output on the d (x) d pair)
//=========================================================================

// Universal cloner branch: 2/(d+1) P+ (X (x) I) P+. The second tensor slot
// carries the identity; sandwiching by P+- makes the (X (x) I) and
// (I (x) X) orderings identical, which a test asserts.
inline ComplexMatrix b_plus_op(const ComplexMatrix &x, Eigen::Index d) {
  const ComplexMatrix pp = sym_projectors(d).plus;
  return (2.0 / double(d + 1)) * pp * kron(x, identity(d)) * pp;
}

// Universal antisymmetrizer branch: 2/(d-1) P- (X (x) I) P-.
inline ComplexMatrix b_minus_op(const ComplexMatrix &x, Eigen::Index d) {
  const ComplexMatrix pm = sym_projectors(d).minus;
  return (2.0 / double(d - 1)) * pm * kron(x, identity(d)) * pm;
}

// Canonical broadcast kernel: (1/2) { X (x) I, S }.
inline ComplexMatrix b_canonical_op(const ComplexMatrix &x, Eigen::Index d) {
  const ComplexMatrix s = swap_operator(d);
  const ComplexMatrix xi = kron(x, identity(d));
  return 0.5 * (xi * s + s * xi);
}

// Raw partial-swap family kernel:
//   (I + U(theta)) (X (x) I) (I + U(theta)^dag) / (2 (d + 1)).
// Trace-preserving only at theta = pi/2; the trace scales uniformly by
// (d + sin theta)/(d + 1).
inline ComplexMatrix n_theta_raw_op(const ComplexMatrix &x,
                                    const PartialSwapParams &p) {
  const ComplexMatrix u = partial_swap(p);
  const ComplexMatrix a = identity(p.d * p.d) + u;
  return a * kron(x, identity(p.d)) * a.adjoint() / (2.0 * double(p.d + 1));
}

//=========================================================================
// Typed maps
//=========================================================================

namespace detail {

inline Eigen::Index single_system_dim(const DensityMatrix &rho,
                                      const char *who) {
  if (rho.dims().size() != 1)
    throw DimensionError(std::string(who) +
                         ": input must be a single-system state");
  return rho.dims()[0];
}

} // namespace detail

inline DensityMatrix b_plus(const DensityMatrix &rho) {
  const Eigen::Index d = detail::single_system_dim(rho, "b_plus");
  return DensityMatrix(b_plus_op(rho.mat(), d), {d, d});
}

inline DensityMatrix b_minus(const DensityMatrix &rho) {
  const Eigen::Index d = detail::single_system_dim(rho, "b_minus");
  return DensityMatrix(b_minus_op(rho.mat(), d), {d, d});
}

inline HermitianOperator b_canonical(const DensityMatrix &rho) {
  const Eigen::Index d = detail::single_system_dim(rho, "b_canonical");
  return HermitianOperator(b_canonical_op(rho.mat(), d), {d, d});
}

struct NThetaResult {
  ComplexMatrix unnormalized;  // raw kernel output, trace (d+sin theta)/(d+1)
  double prob_weight;          // trace of the raw output
  DensityMatrix normalized;    // raw / trace
};

inline NThetaResult n_theta(const DensityMatrix &rho,
                            const PartialSwapParams &p) {
  if (detail::single_system_dim(rho, "n_theta") != p.d)
    throw DimensionError("n_theta: state dimension does not match params");
  ComplexMatrix raw = n_theta_raw_op(rho.mat(), p);
  const double w = raw.trace().real();
  DensityMatrix normalized(raw / w, {p.d, p.d});
  return {std::move(raw), w, std::move(normalized)};
}

//=========================================================================
// Choi representation
//=========================================================================

/**
 * A linear map stored as its Choi state C = (1/d_in) sum_ij |i><j| (x)
 * map(|i><j|), reference system first, map output second. For
 * trace-preserving maps tr C = 1; complete positivity is equivalent to
 * C >= 0.
 */
struct Channel {
  ComplexMatrix choi;
  Eigen::Index d_in = 0;
  Eigen::Index d_out = 0;
  std::string label;
};

using MatrixMap = std::function<ComplexMatrix(const ComplexMatrix &)>;

inline Channel choi_of(const MatrixMap &map, Eigen::Index d_in,
                       std::string label = {}) {
  if (d_in < 1) throw ArgumentError("choi_of: d_in must be >= 1");
  Eigen::Index d_out = 0;
  ComplexMatrix choi;
  for (Eigen::Index i = 0; i < d_in; ++i)
    for (Eigen::Index j = 0; j < d_in; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d_in, d_in);
      e(i, j) = 1.0;
      const ComplexMatrix out = map(e);
      detail::require_square(out, "choi_of");
      if (choi.size() == 0) {
        d_out = out.rows();
        choi = ComplexMatrix::Zero(d_in * d_out, d_in * d_out);
      } else if (out.rows() != d_out) {
        throw ContractViolation("choi_of: map output size varies with input");
      }
      choi.block(i * d_out, j * d_out, d_out, d_out) = out;
    }
  choi /= double(d_in);
  return {std::move(choi), d_in, d_out, std::move(label)};
}

// Applies a Choi-stored map: N(x) = d_in Tr_ref[(x^T (x) I) C].
inline ComplexMatrix apply_channel(const Channel &c, const ComplexMatrix &x) {
  detail::require_square(x, "apply_channel");
  if (x.rows() != c.d_in)
    throw DimensionError("apply_channel: input size does not match d_in");
  const ComplexMatrix lifted =
      kron(x.transpose(), identity(c.d_out)) * c.choi;
  return double(c.d_in) *
         partial_trace(lifted, {c.d_in, c.d_out}, {1});
}

struct ChannelClass {
  bool is_cp = false;
  bool is_tp = false;
  bool is_hp = false;
  double min_choi_eigenvalue = 0.0;
  double tp_deviation = 0.0;    // max |Tr_out(d_in C) - I|
  double herm_deviation = 0.0;  // max |C - C^dag|
};

inline ChannelClass classify(const Channel &c) {
  ChannelClass r;
  r.herm_deviation = hermiticity_error(c.choi);
  r.is_hp = r.herm_deviation <= kTol.hermiticity;
  if (r.is_hp) {
    r.min_choi_eigenvalue = min_eigenvalue(c.choi);
    r.is_cp = r.min_choi_eigenvalue >= -kTol.cp;
  } else {
    // CP requires a Hermitian Choi state in the first place.
    r.min_choi_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    r.is_cp = false;
  }
  const ComplexMatrix reduced =
      partial_trace(double(c.d_in) * c.choi, {c.d_in, c.d_out}, {0});
  r.tp_deviation = max_abs(reduced - identity(c.d_in));
  r.is_tp = r.tp_deviation <= kTol.tp;
  return r;
}

//=========================================================================
// Stock channels
//=========================================================================

inline Channel identity_channel(Eigen::Index d) {
  return choi_of([](const ComplexMatrix &x) { return x; }, d, "identity");
}

// (1 - lambda) X + lambda tr(X) I/d; lambda = 1 is completely depolarizing.
inline Channel depolarizing_channel(Eigen::Index d, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw ArgumentError("depolarizing_channel: lambda must be in [0, 1]");
  return choi_of(
      [d, lambda](const ComplexMatrix &x) -> ComplexMatrix {
        return (1.0 - lambda) * x +
               lambda * x.trace() * identity(d) / double(d);
      },
      d, "depolarizing");
}

// Kills off-diagonal entries in the computational basis.
inline Channel dephasing_channel(Eigen::Index d) {
  return choi_of(
      [](const ComplexMatrix &x) -> ComplexMatrix {
        return x.diagonal().asDiagonal();
      },
      d, "dephasing");
}

inline Channel unitary_channel(const ComplexMatrix &u, std::string label = {}) {
  detail::require_square(u, "unitary_channel");
  if (max_abs(u * u.adjoint() - identity(u.rows())) > kTol.unitarity)
    throw ContractViolation("unitary_channel: operator is not unitary");
  return choi_of(
      [&u](const ComplexMatrix &x) -> ComplexMatrix { return u * x * u.adjoint(); },
      u.rows(), std::move(label));
}

/**
 * Random CPTP channel: draw a Ginibre-random positive matrix W on the
 * d^2-dimensional Choi space and correct its output marginal,
 * C = (Y (x) I) W (Y (x) I) with Y = (Tr_out W)^{-1/2} / sqrt(d).
 */
inline Channel random_cptp_channel(Eigen::Index d, std::uint64_t seed) {
  if (d < 2) throw ArgumentError("random_cptp_channel: d must be >= 2");
  SplitMix64 rng(seed);
  const Eigen::Index n = d * d;
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = Complex(rng.normal(), rng.normal());
  const ComplexMatrix w = g * g.adjoint();

  const ComplexMatrix marg = partial_trace(w, {d, d}, {0});
  const EighResult eig = eigh(marg);
  if (eig.eigenvalues(0) <= 0.0)
    throw ContractViolation("random_cptp_channel: degenerate marginal");
  const ComplexMatrix inv_root = eig.eigenvectors *
                                 eig.eigenvalues.cwiseSqrt().cwiseInverse()
                                     .cast<Complex>().asDiagonal() *
                                 eig.eigenvectors.adjoint();
  const ComplexMatrix y = kron(inv_root / std::sqrt(double(d)), identity(d));
  return {y * w * y, d, d, "random"};
}

} // namespace vqb
