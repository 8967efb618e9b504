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

#include "helpers.hpp"

#include "vqb/matcore.hpp"

using namespace vqb;
using vqbtest::max_diff;
using vqbtest::random_hermitian;
using vqbtest::random_matrix;

TEST_CASE("kron basics") {
  REQUIRE(max_diff(kron(identity(2), identity(2)), identity(4)) == 0.0);

  ComplexMatrix zz = kron(pauli_z(), pauli_z());
  ComplexMatrix zz_expected = ComplexMatrix::Zero(4, 4);
  zz_expected.diagonal() << 1, -1, -1, 1;
  REQUIRE(max_diff(zz, zz_expected) == 0.0);

  ComplexMatrix p0i = kron(basis_projector(2, 0), identity(2));
  ComplexMatrix p0i_expected = ComplexMatrix::Zero(4, 4);
  p0i_expected.diagonal() << 1, 1, 0, 0;
  REQUIRE(max_diff(p0i, p0i_expected) == 0.0);

  // entrywise definition on a random pair
  ComplexMatrix a = random_matrix(2, 11), b = random_matrix(3, 12);
  ComplexMatrix ab = kron(a, b);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j)
      for (Eigen::Index k = 0; k < 3; ++k)
        for (Eigen::Index l = 0; l < 3; ++l)
          REQUIRE(std::abs(ab(i * 3 + k, j * 3 + l) - a(i, j) * b(k, l)) == 0.0);
}

TEST_CASE("partial trace") {
  SECTION("marginals of the hand-built broadcast output are the input") {
    const ComplexMatrix b = vqbtest::broadcast_of_zero();
    const ComplexMatrix zero = basis_projector(2, 0);
    REQUIRE(max_diff(partial_trace(b, {2, 2}, {1}), zero) <= 1e-15);
    REQUIRE(max_diff(partial_trace(b, {2, 2}, {0}), zero) <= 1e-15);
  }

  SECTION("product state") {
    for (Eigen::Index d : {2, 3}) {
      const DensityMatrix rho = random_density(d, 21);
      const DensityMatrix sigma = random_density(d, 22);
      const ComplexMatrix prod = kron(rho.mat(), sigma.mat());
      REQUIRE(max_diff(partial_trace(prod, {d, d}, {0}), rho.mat()) <= 1e-14);
      REQUIRE(max_diff(partial_trace(prod, {d, d}, {1}), sigma.mat()) <= 1e-14);
    }
  }

  SECTION("Bell state marginal is maximally mixed") {
    ComplexVector phi(4);
    phi << 1, 0, 0, 1;
    phi /= std::sqrt(2.0);
    const ComplexMatrix bell = phi * phi.adjoint();
    REQUIRE(max_diff(partial_trace(bell, {2, 2}, {0}), identity(2) / 2.0) <=
            1e-15);
  }

  SECTION("trace is preserved for any keep set") {
    const std::vector<Dims> configs = {{2, 2}, {2, 3}, {2, 2, 2}, {3, 2}};
    std::uint64_t seed = 100;
    for (const Dims &dims : configs) {
      const ComplexMatrix m = random_matrix(dims_product(dims), seed++);
      for (std::size_t k = 0; k < dims.size(); ++k) {
        const ComplexMatrix red = partial_trace(m, dims, {int(k)});
        REQUIRE(std::abs(red.trace() - m.trace()) <= 1e-10);
      }
    }
  }

  SECTION("tracing out A then B equals the full trace") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ComplexMatrix m = random_matrix(8, 200 + seed);
      const ComplexMatrix mid = partial_trace(m, {2, 2, 2}, {1, 2});
      const ComplexMatrix last = partial_trace(mid, {2, 2}, {1});
      REQUIRE(std::abs(last.trace() - m.trace()) <= 1e-10);
    }
  }

  SECTION("dimension mismatch is rejected") {
    REQUIRE_THROWS_AS(partial_trace(identity(4), {2, 3}, {0}), DimensionError);
    REQUIRE_THROWS_AS(partial_trace(identity(4), {2, 2}, {}), ArgumentError);
    REQUIRE_THROWS_AS(partial_trace(identity(4), {2, 2}, {5}), ArgumentError);
  }
}

TEST_CASE("subsystem permutation and embedding") {
  const ComplexMatrix a = random_matrix(2, 31);
  const ComplexMatrix b = random_matrix(3, 32);
  const ComplexMatrix c = random_matrix(2, 33);

  SECTION("swapping two factors") {
    REQUIRE(max_diff(permute_subsystems(kron(a, b), {2, 3}, {1, 0}),
                     kron(b, a)) <= 1e-14);
  }

  SECTION("three-factor cycle") {
    const ComplexMatrix abc = kron(kron(a, b), c);
    const ComplexMatrix cab = kron(kron(c, a), b);
    REQUIRE(max_diff(permute_subsystems(abc, {2, 3, 2}, {2, 0, 1}), cab) <=
            1e-14);
  }

  SECTION("embedding into non-adjacent slots") {
    // Operator on (slot0, slot2) of [2, 3, 2]: compare against a manual
    // permutation construction.
    const ComplexMatrix op = random_matrix(4, 34);
    const ComplexMatrix direct = embed_operator(op, {2, 3, 2}, {0, 2});
    const ComplexMatrix manual = permute_subsystems(
        kron(op, identity(3)), {2, 2, 3}, {0, 2, 1});
    REQUIRE(max_diff(direct, manual) <= 1e-14);

    // identity on targets embeds to identity
    REQUIRE(max_diff(embed_operator(identity(4), {2, 3, 2}, {0, 2}),
                     identity(12)) <= 1e-15);
  }

  SECTION("embedding on adjacent slots is a plain tensor factor") {
    const ComplexMatrix op = random_matrix(6, 35);
    REQUIRE(max_diff(embed_operator(op, {2, 3, 2}, {0, 1}),
                     kron(op, identity(2))) <= 1e-14);
  }
}

TEST_CASE("hermitian eigendecomposition") {
  SECTION("pauli x") {
    const EighResult eig = eigh(pauli_x());
    REQUIRE(std::abs(eig.eigenvalues(0) + 1.0) <= 1e-12);
    REQUIRE(std::abs(eig.eigenvalues(1) - 1.0) <= 1e-12);
  }

  SECTION("hand-built broadcast output of |0><0|") {
    const EighResult eig = eigh(vqbtest::broadcast_of_zero());
    const std::array<double, 4> expected = {-0.5, 0.0, 0.5, 1.0};
    for (int i = 0; i < 4; ++i)
      REQUIRE(std::abs(eig.eigenvalues(i) - expected[i]) <= 1e-12);
  }

  SECTION("reconstruction error stays below 1e-9 up to size 16") {
    for (Eigen::Index n : {2, 4, 9, 16}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ComplexMatrix m = random_hermitian(n, 300 + seed);
        const EighResult eig = eigh(m);
        const ComplexMatrix rebuilt =
            eig.eigenvectors *
            eig.eigenvalues.cast<Complex>().asDiagonal() *
            eig.eigenvectors.adjoint();
        REQUIRE(max_diff(rebuilt, m) <= 1e-9);
      }
    }
  }

  SECTION("eigenvalues come out ascending") {
    const EighResult eig = eigh(random_hermitian(8, 77));
    for (Eigen::Index i = 1; i < 8; ++i)
      REQUIRE(eig.eigenvalues(i - 1) <= eig.eigenvalues(i));
  }

  SECTION("non-Hermitian input is rejected") {
    ComplexMatrix m = random_matrix(3, 40);
    REQUIRE_THROWS_AS(eigh(m), ContractViolation);
  }
}

TEST_CASE("trace norm") {
  REQUIRE(std::abs(trace_norm(random_density(3, 50).mat()) - 1.0) <= 1e-12);
  REQUIRE(std::abs(trace_norm(pauli_z()) - 2.0) <= 1e-12);

  SECTION("bounds |tr| for Hermitian operators") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const ComplexMatrix m = random_hermitian(5, 500 + seed);
      REQUIRE(trace_norm(m) >= std::abs(m.trace()) - 1e-10);
    }
  }

  SECTION("equals the sum of |eigenvalues| for Hermitian input") {
    const ComplexMatrix m = random_hermitian(6, 51);
    const EighResult eig = eigh(m);
    REQUIRE(std::abs(trace_norm(m) - eig.eigenvalues.cwiseAbs().sum()) <=
            1e-10);
  }
}

TEST_CASE("fidelity") {
  SECTION("self-fidelity is 1") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const DensityMatrix rho = random_density(3, 600 + seed);
      REQUIRE(std::abs(fidelity(rho, rho) - 1.0) <= 1e-10);
    }
  }

  SECTION("pure target reduces to <psi|rho|psi>") {
    // The cloner marginal of |0><0| is diag(5/6, 1/6): fidelity 5/6.
    ComplexMatrix marg = ComplexMatrix::Zero(2, 2);
    marg.diagonal() << 5.0 / 6.0, 1.0 / 6.0;
    const DensityMatrix a(marg, {2});
    REQUIRE(std::abs(fidelity(a, vqbtest::zero_state()) - 5.0 / 6.0) <= 1e-12);

    const DensityMatrix mixed(identity(2) / 2.0, {2});
    REQUIRE(std::abs(fidelity(mixed, vqbtest::zero_state()) - 0.5) <= 1e-12);
  }

  SECTION("symmetric in its arguments") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const DensityMatrix a = random_density(3, 700 + seed);
      const DensityMatrix b = random_density(3, 800 + seed);
      REQUIRE(std::abs(fidelity(a, b) - fidelity(b, a)) <= 1e-9);
    }
  }

  SECTION("non-positive operand is rejected") {
    REQUIRE_THROWS_AS(fidelity_psd(pauli_z(), identity(2) / 2.0),
                      ContractViolation);
  }

  SECTION("size mismatch is rejected") {
    REQUIRE_THROWS_AS(fidelity_psd(identity(2), identity(3)), DimensionError);
  }
}

TEST_CASE("random state generation") {
  SECTION("deterministic in the seed") {
    const DensityMatrix a = random_density(2, 42);
    const DensityMatrix b = random_density(2, 42);
    REQUIRE(max_diff(a.mat(), b.mat()) == 0.0);
    const DensityMatrix c = random_density(2, 43);
    REQUIRE(max_diff(a.mat(), c.mat()) > 1e-3);
  }

  SECTION("unit trace") {
    REQUIRE(std::abs(random_density(3, 7).mat().trace() - Complex(1.0)) <=
            1e-12);
  }

  SECTION("pure states have rank 1") {
    const DensityMatrix psi = random_pure(2, 9);
    const EighResult eig = eigh(psi.mat());
    REQUIRE(std::abs(eig.eigenvalues(0)) < 1e-10);
    REQUIRE(std::abs(eig.eigenvalues(1) - 1.0) <= 1e-10);
  }
}

TEST_CASE("typed state validation") {
  SECTION("valid density matrix passes") {
    REQUIRE_NOTHROW(DensityMatrix(identity(4) / 4.0, {2, 2}));
  }

  SECTION("non-Hermitian is rejected") {
    ComplexMatrix m = identity(2) / 2.0;
    m(0, 1) = 0.5;
    REQUIRE_THROWS_AS(DensityMatrix(m, {2}), ValidationError);
  }

  SECTION("trace off by more than tolerance is rejected") {
    REQUIRE_THROWS_AS(DensityMatrix(identity(2), {2}), ValidationError);
  }

  SECTION("negative eigenvalue is rejected") {
    ComplexMatrix m(2, 2);
    m << 1.1, 0, 0, -0.1;
    REQUIRE_THROWS_AS(DensityMatrix(m, {2}), ValidationError);
  }

  SECTION("dims must match the matrix size") {
    REQUIRE_THROWS_AS(DensityMatrix(identity(4) / 4.0, {2, 3}),
                      DimensionError);
  }

  SECTION("hermitian operators may be indefinite but need unit trace") {
    REQUIRE_NOTHROW(HermitianOperator(vqbtest::broadcast_of_zero(), {2, 2}));
    ComplexMatrix half = 0.5 * vqbtest::broadcast_of_zero();
    REQUIRE_THROWS_AS(HermitianOperator(half, {2, 2}), ValidationError);
    REQUIRE_NOTHROW(HermitianOperator(
        half, {2, 2}, HermitianOperator::TraceRequirement::Any));
  }
}
