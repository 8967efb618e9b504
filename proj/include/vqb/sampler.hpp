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

#include <array>
#include <cstdint>
#include <numbers>
#include <vector>

#include "vqb/circuit.hpp"
#include "vqb/vqb.hpp"

namespace vqb {

//=========================================================================
// Quasi-probability shot sampler (qubit inputs)
//=========================================================================

enum class PauliObs { I, X, Y, Z };

inline ComplexMatrix pauli_matrix(PauliObs p) {
  switch (p) {
    case PauliObs::I: return identity(2);
    case PauliObs::X: return pauli_x();
    case PauliObs::Y: return pauli_y();
    case PauliObs::Z: return pauli_z();
  }
  throw ArgumentError("pauli_matrix: unknown label");
}

inline char pauli_name(PauliObs p) {
  switch (p) {
    case PauliObs::I: return 'I';
    case PauliObs::X: return 'X';
    case PauliObs::Y: return 'Y';
    case PauliObs::Z: return 'Z';
  }
  return '?';
}

struct SamplerConfig {
  DensityMatrix input_state;  // qubit state (d = 2)
  PauliObs obs_a = PauliObs::Z;
  PauliObs obs_b = PauliObs::Z;
  std::uint64_t shots = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;   // SplitMix64 sub-stream index
};

// One Monte-Carlo sample: control outcome, the two Pauli outcomes on the
// output pair, and the quasi-probability sign/weight attached in
// post-processing (+d for control 0, -d for control 1).
struct ShotRecord {
  int control_outcome = 0;
  int outcome_a = 1;    // +-1
  int outcome_b = 1;    // +-1
  int sign = 1;         // +1 for control 0, -1 for control 1
  double weight = 2.0;  // d
};

/**
 * Draws shots from the broadcast circuit at theta = pi/2: the control
 * outcome follows {p0, p1}, then the joint (+-1, +-1) outcome pair of the
 * two chosen Pauli observables follows the exact four-outcome distribution
 * of the selected branch state. Deterministic in (seed, stream).
 */
inline std::vector<ShotRecord> sample_shots(const SamplerConfig &cfg) {
  if (cfg.input_state.dims() != Dims{2})
    throw UnsupportedError("sample_shots: sampling requires a single qubit input");
  if (cfg.shots < 1) throw ArgumentError("sample_shots: shots must be >= 1");

  const BroadcastRun run =
      run_broadcast_circuit(cfg.input_state, std::numbers::pi / 2.0);
  const ComplexMatrix sa = pauli_matrix(cfg.obs_a);
  const ComplexMatrix sb = pauli_matrix(cfg.obs_b);

  // joint[i][2*(a<0) + (b<0)] = P(outcome pair | control branch i)
  std::array<std::array<double, 4>, 2> joint{};
  const std::array<const DensityMatrix *, 2> branch = {&run.state0, &run.state1};
  for (int i = 0; i < 2; ++i) {
    int slot = 0;
    for (double ea : {1.0, -1.0})
      for (double eb : {1.0, -1.0}) {
        const ComplexMatrix proj =
            kron(0.5 * (identity(2) + ea * sa), 0.5 * (identity(2) + eb * sb));
        joint[i][slot++] = (proj * branch[i]->mat()).trace().real();
      }
  }

  SplitMix64 rng(SplitMix64::substream(cfg.seed, cfg.stream));
  std::vector<ShotRecord> records;
  records.reserve(cfg.shots);
  for (std::uint64_t s = 0; s < cfg.shots; ++s) {
    const int i = rng.uniform01() < run.p0 ? 0 : 1;
    const double v = rng.uniform01();
    double acc = 0.0;
    int slot = 3;
    for (int k = 0; k < 4; ++k) {
      acc += joint[i][k];
      if (v < acc) {
        slot = k;
        break;
      }
    }
    records.push_back({i, slot < 2 ? 1 : -1, (slot % 2) == 0 ? 1 : -1,
                       i == 0 ? 1 : -1, 2.0});
  }
  return records;
}

struct EstimateResult {
  double estimate = 0.0;
  double std_error = 0.0;       // sample standard deviation / sqrt(shots)
  std::uint64_t shots_used = 0;
  double exact_value = 0.0;     // analytic reference
};

// Mean and standard error of the per-shot values weight * sign * a * b;
// unbiased for the two-observable expectation of the recombined output.
inline EstimateResult estimate(const std::vector<ShotRecord> &records,
                               Eigen::Index d, double exact_value) {
  if (records.empty()) throw ArgumentError("estimate: no shot records");
  double sum = 0.0;
  for (const ShotRecord &r : records) {
    if (r.weight != double(d))
      throw ContractViolation("estimate: record weight does not match d");
    sum += r.weight * double(r.sign * r.outcome_a * r.outcome_b);
  }
  const double mean = sum / double(records.size());
  double var = 0.0;
  for (const ShotRecord &r : records) {
    const double v = r.weight * double(r.sign * r.outcome_a * r.outcome_b);
    var += (v - mean) * (v - mean);
  }
  const auto n = double(records.size());
  const double sample_sd = records.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return {mean, sample_sd / std::sqrt(n), records.size(), exact_value};
}

// Analytic reference: expectation of sigma_a (x) sigma_b on the canonical
// broadcast output of rho.
inline double exact_expectation(const DensityMatrix &rho, PauliObs a,
                                PauliObs b) {
  if (rho.dims() != Dims{2})
    throw UnsupportedError("exact_expectation: requires a single qubit input");
  const ComplexMatrix target = b_canonical_op(rho.mat(), 2);
  return (kron(pauli_matrix(a), pauli_matrix(b)) * target).trace().real();
}

// Sample, estimate, and attach the analytic reference.
inline EstimateResult run_sampler(const SamplerConfig &cfg) {
  const auto records = sample_shots(cfg);
  return estimate(records, 2,
                  exact_expectation(cfg.input_state, cfg.obs_a, cfg.obs_b));
}

// One-norm of the quasi-probability coefficients, gamma = d(p0 + p1) = d.
// Sampling variance is inflated by up to gamma^2 relative to a direct
// measurement.
inline double overhead(Eigen::Index d) {
  if (d < 2) throw ArgumentError("overhead: d must be >= 2");
  return double(d);
}

} // namespace vqb
