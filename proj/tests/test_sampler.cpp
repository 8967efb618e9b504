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

#include <cstring>

#include "vqb/sampler.hpp"

using namespace vqb;

TEST_CASE("shot sampling determinism") {
  const SamplerConfig cfg{vqbtest::zero_state(), PauliObs::Z, PauliObs::Z,
                          5000, 12345, 0};
  const auto a = sample_shots(cfg);
  const auto b = sample_shots(cfg);
  REQUIRE(a.size() == b.size());
  REQUIRE(std::memcmp(a.data(), b.data(), a.size() * sizeof(ShotRecord)) == 0);

  // bit-identical estimates as well
  const EstimateResult ra = run_sampler(cfg);
  const EstimateResult rb = run_sampler(cfg);
  REQUIRE(ra.estimate == rb.estimate);
  REQUIRE(ra.std_error == rb.std_error);

  // a different stream gives a different sample path
  SamplerConfig other = cfg;
  other.stream = 1;
  REQUIRE(run_sampler(other).estimate != ra.estimate);
}

TEST_CASE("control outcome frequency") {
  const SamplerConfig cfg{vqbtest::plus_state(), PauliObs::I, PauliObs::I,
                          1000000, 7, 0};
  const auto records = sample_shots(cfg);
  std::uint64_t zeros = 0;
  for (const ShotRecord &r : records) zeros += r.control_outcome == 0;
  const double freq = double(zeros) / double(records.size());
  const double sigma = std::sqrt(0.75 * 0.25 / double(records.size()));
  REQUIRE(std::abs(freq - 0.75) <= 5.0 * sigma);
}

TEST_CASE("identity observables") {
  const SamplerConfig cfg{vqbtest::zero_state(), PauliObs::I, PauliObs::I,
                          20000, 99, 0};
  const auto records = sample_shots(cfg);
  std::uint64_t zeros = 0;
  for (const ShotRecord &r : records) {
    REQUIRE(r.outcome_a == 1);
    REQUIRE(r.outcome_b == 1);
    zeros += r.control_outcome == 0;
  }
  // the estimate is exactly d (f0 - f1) in this case
  const double f0 = double(zeros) / double(records.size());
  const EstimateResult res = estimate(records, 2, 1.0);
  REQUIRE(std::abs(res.estimate - 2.0 * (f0 - (1.0 - f0))) <= 1e-12);
  REQUIRE(std::abs(res.estimate - 1.0) <= 5.0 * res.std_error);
}

TEST_CASE("analytic references") {
  REQUIRE(std::abs(exact_expectation(vqbtest::zero_state(), PauliObs::Z,
                                     PauliObs::Z) -
                   1.0) <= 1e-12);
  REQUIRE(std::abs(exact_expectation(vqbtest::plus_state(), PauliObs::X,
                                     PauliObs::I) -
                   1.0) <= 1e-12);
  const DensityMatrix mixed(identity(2) / 2.0, {2});
  REQUIRE(std::abs(exact_expectation(mixed, PauliObs::Z, PauliObs::Z) - 1.0) <=
          1e-12);
  REQUIRE(std::abs(exact_expectation(mixed, PauliObs::I, PauliObs::I) - 1.0) <=
          1e-12);
}

TEST_CASE("per-shot values are bounded by the overhead") {
  const SamplerConfig cfg{vqbtest::zero_state(), PauliObs::Z, PauliObs::Z,
                          20000, 5, 0};
  const auto records = sample_shots(cfg);
  double mean = 0.0, second_moment = 0.0;
  for (const ShotRecord &r : records) {
    const double v = r.weight * double(r.sign * r.outcome_a * r.outcome_b);
    REQUIRE(std::abs(v) <= 2.0);
    mean += v;
    second_moment += v * v;
  }
  mean /= double(records.size());
  second_moment /= double(records.size());
  // empirical variance cannot exceed gamma^2 = 4
  REQUIRE(second_moment - mean * mean <=
          overhead(2) * overhead(2) + 1e-12);
}

TEST_CASE("estimates are unbiased at the five-sigma level") {
  // A trimmed-down version of the acceptance sweep; one rerun is allowed
  // per configuration before declaring failure.
  const std::array<PauliObs, 4> paulis = {PauliObs::I, PauliObs::X,
                                          PauliObs::Y, PauliObs::Z};
  std::uint64_t seed = 110000;
  for (PauliObs a : paulis)
    for (PauliObs b : {PauliObs::Z, PauliObs::X}) {
      const DensityMatrix rho = random_density(2, seed++);
      bool ok = false;
      for (std::uint64_t attempt = 0; attempt < 2 && !ok; ++attempt) {
        const SamplerConfig cfg{rho, a, b, 20000, seed * 13 + attempt, 0};
        const EstimateResult res = run_sampler(cfg);
        const double tol = 5.0 * std::max(res.std_error, 1e-12);
        ok = std::abs(res.estimate - res.exact_value) <= tol;
      }
      INFO("pair " << pauli_name(a) << pauli_name(b));
      REQUIRE(ok);
    }
}

TEST_CASE("sampler input validation") {
  REQUIRE_THROWS_AS(estimate({}, 2, 0.0), ArgumentError);
  const DensityMatrix qutrit = random_density(3, 6);
  REQUIRE_THROWS_AS(
      sample_shots(SamplerConfig{qutrit, PauliObs::Z, PauliObs::Z, 10, 1, 0}),
      UnsupportedError);
  REQUIRE_THROWS_AS(exact_expectation(qutrit, PauliObs::Z, PauliObs::Z),
                    UnsupportedError);
}

TEST_CASE("overhead") {
  REQUIRE(overhead(2) == 2.0);
  REQUIRE(overhead(3) == 3.0);
  REQUIRE_THROWS_AS(overhead(1), ArgumentError);
}
