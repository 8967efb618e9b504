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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "vqb/errors.hpp"
#include "vqb/rng.hpp"

namespace vqb {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<Eigen::Index>;

//=========================================================================
// Tolerances
//=========================================================================

// Every numerical threshold used by the library, in one place. Values are
// ~100x the double-precision eigendecomposition error at sizes <= 16.
struct Tolerances {
  double hermiticity = 1e-10;    // max |M - M^dag| entrywise
  double trace = 1e-10;          // |tr M - 1|
  double psd = 1e-10;            // min eigenvalue >= -psd
  double unitarity = 1e-9;       // max |U U^dag - I| entrywise
  double reconstruction = 1e-9;  // max |M - V L V^dag| entrywise
  double cp = 1e-9;              // Choi min eigenvalue >= -cp
  double tp = 1e-9;              // max |Tr_out(d C) - I| entrywise
  double marginal = 1e-10;       // two-time operator marginal contracts
  double attainable = 1e-12;     // measurement outcomes below this are dropped
};

inline constexpr Tolerances kTol{};

//=========================================================================
// Small helpers
//=========================================================================

inline double max_abs(const ComplexMatrix &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_error(const ComplexMatrix &m) {
  return max_abs(m - m.adjoint());
}

inline Eigen::Index dims_product(const Dims &dims) {
  return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1},
                         std::multiplies<>());
}

inline ComplexMatrix identity(Eigen::Index n) {
  return ComplexMatrix::Identity(n, n);
}

inline ComplexVector basis_ket(Eigen::Index d, Eigen::Index i) {
  ComplexVector v = ComplexVector::Zero(d);
  v(i) = 1.0;
  return v;
}

inline ComplexMatrix basis_projector(Eigen::Index d, Eigen::Index i) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, i) = 1.0;
  return m;
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

namespace detail {

inline void require_square(const ComplexMatrix &m, const char *who) {
  if (m.rows() != m.cols())
    throw DimensionError(std::string(who) + ": matrix is not square (" +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ")");
}

inline void require_finite(const ComplexMatrix &m, const char *who) {
  if (!m.allFinite())
    throw ContractViolation(std::string(who) + ": non-finite entries");
}

// Strides of a row-major multi-index over `dims`.
inline std::vector<Eigen::Index> strides_of(const Dims &dims) {
  std::vector<Eigen::Index> s(dims.size());
  Eigen::Index acc = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    s[k] = acc;
    acc *= dims[k];
  }
  return s;
}

// Linear offsets into the full index space contributed by the subsystems in
// `subset`, one offset per combination of their digits.
inline std::vector<Eigen::Index> subspace_offsets(const Dims &dims,
                                                  const std::vector<int> &subset) {
  const auto stride = strides_of(dims);
  Eigen::Index total = 1;
  for (int s : subset) total *= dims[s];
  std::vector<Eigen::Index> offsets(total, 0);
  for (Eigen::Index lin = 0; lin < total; ++lin) {
    Eigen::Index rem = lin;
    Eigen::Index off = 0;
    for (std::size_t k = subset.size(); k-- > 0;) {
      const Eigen::Index d = dims[subset[k]];
      off += (rem % d) * stride[subset[k]];
      rem /= d;
    }
    offsets[lin] = off;
  }
  return offsets;
}

inline std::vector<int> complement_of(const std::vector<int> &subset,
                                      std::size_t n) {
  std::vector<int> rest;
  for (std::size_t k = 0; k < n; ++k)
    if (std::find(subset.begin(), subset.end(), int(k)) == subset.end())
      rest.push_back(int(k));
  return rest;
}

} // namespace detail

//=========================================================================
// Core operations
//=========================================================================

// Tensor (Kronecker) product: (a (x) b)[(i,k),(j,l)] = a[i,j] b[k,l].
inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/**
 * Partial trace of `m` over the subsystems NOT listed in `keep`.
 *
 * `dims` are the subsystem dimensions (product must equal the matrix size);
 * `keep` is a non-empty set of subsystem indices. Kept subsystems retain
 * their original relative order in the output.
 */
inline ComplexMatrix partial_trace(const ComplexMatrix &m, const Dims &dims,
                                   std::vector<int> keep) {
  detail::require_square(m, "partial_trace");
  if (dims_product(dims) != m.rows())
    throw DimensionError("partial_trace: product of dims (" +
                         std::to_string(dims_product(dims)) +
                         ") != matrix size (" + std::to_string(m.rows()) + ")");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty())
    throw ArgumentError("partial_trace: keep set is empty");
  for (int k : keep)
    if (k < 0 || std::size_t(k) >= dims.size())
      throw ArgumentError("partial_trace: keep index " + std::to_string(k) +
                          " out of range");

  const auto traced = detail::complement_of(keep, dims.size());
  const auto keep_off = detail::subspace_offsets(dims, keep);
  const auto traced_off = detail::subspace_offsets(dims, traced);
  const auto nk = Eigen::Index(keep_off.size());

  ComplexMatrix out = ComplexMatrix::Zero(nk, nk);
  for (Eigen::Index i = 0; i < nk; ++i)
    for (Eigen::Index j = 0; j < nk; ++j) {
      Complex sum = 0.0;
      for (const auto t : traced_off)
        sum += m(keep_off[i] + t, keep_off[j] + t);
      out(i, j) = sum;
    }
  return out;
}

/**
 * Reorders the tensor factors of an operator. `order[k]` is the original
 * subsystem index placed at position k of the result, so the output acts on
 * dims[order[0]] (x) dims[order[1]] (x) ...
 */
inline ComplexMatrix permute_subsystems(const ComplexMatrix &m, const Dims &dims,
                                        const std::vector<int> &order) {
  detail::require_square(m, "permute_subsystems");
  if (dims_product(dims) != m.rows())
    throw DimensionError("permute_subsystems: dims do not match matrix size");
  if (order.size() != dims.size())
    throw ArgumentError("permute_subsystems: order has wrong length");
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k)
      if (sorted[k] != int(k))
        throw ArgumentError("permute_subsystems: order is not a permutation");
  }

  const Eigen::Index n = m.rows();
  const auto stride = detail::strides_of(dims);
  Dims new_dims(dims.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_dims[k] = dims[order[k]];
  const auto new_stride = detail::strides_of(new_dims);

  // map[r] = linear index of row r after reordering the digits
  std::vector<Eigen::Index> map(n, 0);
  for (Eigen::Index r = 0; r < n; ++r) {
    std::vector<Eigen::Index> digit(dims.size());
    Eigen::Index rem = r;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      digit[k] = rem / stride[k];
      rem %= stride[k];
    }
    Eigen::Index rp = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
      rp += digit[order[k]] * new_stride[k];
    map[r] = rp;
  }

  ComplexMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) out(map[r], map[c]) = m(r, c);
  return out;
}

/**
 * Embeds an operator acting on the listed target subsystems (in target
 * order) into the full space described by `dims`, identity elsewhere.
 */
inline ComplexMatrix embed_operator(const ComplexMatrix &op, const Dims &dims,
                                    const std::vector<int> &targets) {
  detail::require_square(op, "embed_operator");
  Eigen::Index target_dim = 1;
  for (int t : targets) {
    if (t < 0 || std::size_t(t) >= dims.size())
      throw ArgumentError("embed_operator: target index out of range");
    target_dim *= dims[t];
  }
  if (op.rows() != target_dim)
    throw DimensionError("embed_operator: operator size does not match targets");

  const auto rest = detail::complement_of(targets, dims.size());
  Dims arranged;
  for (int t : targets) arranged.push_back(dims[t]);
  Eigen::Index rest_dim = 1;
  for (int r : rest) {
    arranged.push_back(dims[r]);
    rest_dim *= dims[r];
  }
  std::vector<int> layout = targets;
  layout.insert(layout.end(), rest.begin(), rest.end());

  // position of subsystem k within [targets..., rest...]
  std::vector<int> order(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k)
    order[k] = int(std::find(layout.begin(), layout.end(), int(k)) -
                   layout.begin());
  return permute_subsystems(kron(op, identity(rest_dim)), arranged, order);
}

struct EighResult {
  RealVector eigenvalues;    // ascending
  ComplexMatrix eigenvectors; // columns, matching eigenvalue order
};

/**
 * Hermitian eigendecomposition. The input must be Hermitian within
 * kTol.hermiticity; it is symmetrized as (M + M^dag)/2 before the solve.
 */
inline EighResult eigh(const ComplexMatrix &m) {
  detail::require_square(m, "eigh");
  detail::require_finite(m, "eigh");
  const double herr = hermiticity_error(m);
  if (herr > kTol.hermiticity)
    throw ContractViolation("eigh: input is not Hermitian (deviation " +
                            std::to_string(herr) + ")");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw ContractViolation("eigh: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double min_eigenvalue(const ComplexMatrix &m) {
  return eigh(m).eigenvalues(0);
}

// Trace norm: sum of singular values.
inline double trace_norm(const ComplexMatrix &m) {
  detail::require_square(m, "trace_norm");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

namespace detail {

// True when every eigenvalue except the largest is negligible.
inline bool nearly_rank_one(const EighResult &eig) {
  for (Eigen::Index i = 0; i + 1 < eig.eigenvalues.size(); ++i)
    if (std::abs(eig.eigenvalues(i)) > kTol.psd) return false;
  return true;
}

} // namespace detail

/**
 * Squared-Uhlmann fidelity F(a, b) = (tr sqrt(sqrt(a) b sqrt(a)))^2 for
 * positive-semidefinite operators. With this convention F(rho, |psi><psi|)
 * reduces to <psi|rho|psi> = tr(rho |psi><psi|), and that reduction is used
 * verbatim whenever an operand is rank one (the general route loses
 * ~sqrt(eps) accuracy around zero eigenvalues). Operands need not have unit
 * trace.
 */
inline double fidelity_psd(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("fidelity: operand sizes differ");
  const EighResult ea = eigh(a);
  const EighResult eb = eigh(b);
  if (ea.eigenvalues(0) < -kTol.psd || eb.eigenvalues(0) < -kTol.psd)
    throw ContractViolation("fidelity: operand is not positive semidefinite");
  if (detail::nearly_rank_one(ea) || detail::nearly_rank_one(eb))
    return std::max(0.0, (a * b).trace().real());

  RealVector roots = ea.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix ra =
      ea.eigenvectors * roots.asDiagonal() * ea.eigenvectors.adjoint();
  const ComplexMatrix inner = ra * b * ra;
  const double root_sum =
      eigh(inner).eigenvalues.cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

//=========================================================================
// Typed states and operators
//=========================================================================

namespace detail {

inline void validate_operator_shape(const ComplexMatrix &m, const Dims &dims,
                                    const char *who) {
  require_square(m, who);
  require_finite(m, who);
  if (dims.empty())
    throw DimensionError(std::string(who) + ": empty dims");
  if (dims_product(dims) != m.rows())
    throw DimensionError(std::string(who) +
                         ": dims product does not match matrix size");
}

} // namespace detail

/**
 * A density matrix with declared subsystem dimensions. Construction
 * validates Hermiticity, unit trace and positive semidefiniteness against
 * kTol; a failed check throws ValidationError.
 */
class DensityMatrix {
public:
  DensityMatrix(ComplexMatrix mat, Dims dims)
      : mat_(std::move(mat)), dims_(std::move(dims)) {
    detail::validate_operator_shape(mat_, dims_, "DensityMatrix");
    const double herr = hermiticity_error(mat_);
    if (herr > kTol.hermiticity)
      throw ValidationError("DensityMatrix: not Hermitian (deviation " +
                            std::to_string(herr) + ")");
    const double terr = std::abs(mat_.trace() - Complex(1.0));
    if (terr > kTol.trace)
      throw ValidationError("DensityMatrix: trace deviates from 1 by " +
                            std::to_string(terr));
    const double mineig = min_eigenvalue(mat_);
    if (mineig < -kTol.psd)
      throw ValidationError("DensityMatrix: min eigenvalue " +
                            std::to_string(mineig));
  }

  const ComplexMatrix &mat() const { return mat_; }
  const Dims &dims() const { return dims_; }
  Eigen::Index size() const { return mat_.rows(); }

private:
  ComplexMatrix mat_;
  Dims dims_;
};

/**
 * A Hermitian operator with declared subsystem dimensions; positivity is
 * NOT required (virtual-broadcast outputs and two-time operators live
 * here). Unit trace is required unless TraceRequirement::Any is passed —
 * the noise knob scales traces to 1 - lambda.
 */
class HermitianOperator {
public:
  enum class TraceRequirement { Unit, Any };

  HermitianOperator(ComplexMatrix mat, Dims dims,
                    TraceRequirement req = TraceRequirement::Unit)
      : mat_(std::move(mat)), dims_(std::move(dims)) {
    detail::validate_operator_shape(mat_, dims_, "HermitianOperator");
    const double herr = hermiticity_error(mat_);
    if (herr > kTol.hermiticity)
      throw ValidationError("HermitianOperator: not Hermitian (deviation " +
                            std::to_string(herr) + ")");
    if (req == TraceRequirement::Unit) {
      const double terr = std::abs(mat_.trace() - Complex(1.0));
      if (terr > kTol.trace)
        throw ValidationError("HermitianOperator: trace deviates from 1 by " +
                              std::to_string(terr));
    }
  }

  const ComplexMatrix &mat() const { return mat_; }
  const Dims &dims() const { return dims_; }
  Eigen::Index size() const { return mat_.rows(); }
  double trace() const { return mat_.trace().real(); }

private:
  ComplexMatrix mat_;
  Dims dims_;
};

inline double fidelity(const DensityMatrix &a, const DensityMatrix &b) {
  return fidelity_psd(a.mat(), b.mat());
}

//=========================================================================
// Random states (Ginibre construction; deterministic in the seed)
//=========================================================================

inline DensityMatrix random_density(Eigen::Index d, std::uint64_t seed) {
  if (d < 2) throw ArgumentError("random_density: d must be >= 2");
  SplitMix64 rng(seed);
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      g(i, j) = Complex(rng.normal(), rng.normal());
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho), {d});
}

inline DensityMatrix random_pure(Eigen::Index d, std::uint64_t seed) {
  if (d < 2) throw ArgumentError("random_pure: d must be >= 2");
  SplitMix64 rng(seed);
  ComplexVector psi(d);
  for (Eigen::Index i = 0; i < d; ++i)
    psi(i) = Complex(rng.normal(), rng.normal());
  psi.normalize();
  return DensityMatrix(psi * psi.adjoint(), {d});
}

} // namespace vqb
