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
#include <numbers>
#include <string>
#include <vector>

#include "vqb/circuit.hpp"

namespace vqb {

//=========================================================================
// Classical post-processing
//=========================================================================

/**
 * Signed recombination of the two measured branches:
 * d (p0 state0 - p1 state1). In a noiseless run this reproduces the
 * canonical broadcast output exactly (unit trace, both marginals equal the
 * input); with depolarizing noise the trace shrinks to 1 - lambda, so the
 * unit-trace requirement is relaxed here.
 */
inline HermitianOperator assemble_virtual(double p0, const DensityMatrix &state0,
                                          double p1, const DensityMatrix &state1,
                                          Eigen::Index d) {
  if (state0.dims() != state1.dims())
    throw DimensionError("assemble_virtual: branch dimensions differ");
  ComplexMatrix mat = double(d) * (p0 * state0.mat() - p1 * state1.mat());
  return HermitianOperator(std::move(mat), state0.dims(),
                           HermitianOperator::TraceRequirement::Any);
}

//=========================================================================
// Optimality scan
//=========================================================================

struct ThetaScanPoint {
  double theta = 0.0;
  double p0 = 0.0;       // post-selection probability (d + sin theta)/(2d)
  double distance = 0.0; // trace norm to the assembled broadcast Choi state
};

// Uniform grid over [0, 2pi]; 97 points puts pi/2 exactly on the grid
// (k/(points-1) is computed first so the quarter point is an exact 0.25).
inline std::vector<double> default_theta_grid(int points = 97) {
  if (points < 2) throw ArgumentError("default_theta_grid: points must be >= 2");
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k)
    grid[k] = 2.0 * std::numbers::pi * (double(k) / double(points - 1));
  return grid;
}

/**
 * For each theta, runs the Choi circuit and records the post-selection
 * probability and the trace distance between the normalized outcome-0 Choi
 * state and the broadcast Choi state assembled from the theta = pi/2 run.
 * The minimum distance d - 1 is attained at theta = pi/2.
 */
inline std::vector<ThetaScanPoint> theta_scan(Eigen::Index d,
                                              const std::vector<double> &thetas) {
  if (thetas.empty()) throw ArgumentError("theta_scan: empty grid");
  for (double t : thetas)
    if (t < -1e-12 || t > 2.0 * std::numbers::pi + 1e-12)
      throw ArgumentError("theta_scan: theta outside [0, 2pi]");

  const ChoiRun pivot = run_choi_circuit(std::numbers::pi / 2.0, d);
  const HermitianOperator c_virtual = assemble_virtual(
      pivot.p0, pivot.choi_state0, pivot.p1, pivot.choi_state1, d);

  std::vector<ThetaScanPoint> points;
  points.reserve(thetas.size());
  for (double t : thetas) {
    const ChoiRun run = run_choi_circuit(t, d);
    points.push_back(
        {t, run.p0, trace_norm(c_virtual.mat() - run.choi_state0.mat())});
  }
  return points;
}

//=========================================================================
// Pauli expectations and the mitigation study
//=========================================================================

// <sigma_x>, <sigma_y>, <sigma_z> of the marginal on one qubit subsystem.
inline std::array<double, 3> pauli_expectations_on(const HermitianOperator &op,
                                                   int subsystem) {
  if (subsystem < 0 || std::size_t(subsystem) >= op.dims().size())
    throw ArgumentError("pauli_expectations_on: subsystem out of range");
  if (op.dims()[subsystem] != 2)
    throw UnsupportedError("pauli_expectations_on: subsystem is not a qubit");
  const ComplexMatrix marg = partial_trace(op.mat(), op.dims(), {subsystem});
  return {(pauli_x() * marg).trace().real(), (pauli_y() * marg).trace().real(),
          (pauli_z() * marg).trace().real()};
}

enum class InputFamily { Polar, Azimuthal, Polarization };

struct MitigationRow {
  std::string input_label;
  double parameter = 0.0;
  std::array<double, 3> pauli_cloner{};     // on A, from the cloner branch
  std::array<double, 3> pauli_mitigated{};  // on A, from the recombined output
  double fidelity_cloner = 0.0;
  double fidelity_mitigated = 0.0;
};

namespace detail {

inline DensityMatrix family_state(InputFamily family, double t) {
  switch (family) {
    case InputFamily::Polar: {
      ComplexVector psi(2);
      psi << std::cos(t / 2.0), std::sin(t / 2.0);
      return DensityMatrix(psi * psi.adjoint(), {2});
    }
    case InputFamily::Azimuthal: {
      ComplexVector psi(2);
      psi << std::cos(std::numbers::pi / 4.0),
          std::exp(Complex(0, t)) * std::sin(std::numbers::pi / 4.0);
      return DensityMatrix(psi * psi.adjoint(), {2});
    }
    case InputFamily::Polarization: {
      ComplexVector plus(2);
      plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
      ComplexMatrix rho =
          t * (plus * plus.adjoint()) + (1.0 - t) * 0.5 * identity(2);
      return DensityMatrix(std::move(rho), {2});
    }
  }
  throw ArgumentError("family_state: unknown family");
}

inline const char *family_name(InputFamily family) {
  switch (family) {
    case InputFamily::Polar: return "polar";
    case InputFamily::Azimuthal: return "azimuthal";
    case InputFamily::Polarization: return "polarization";
  }
  return "?";
}

} // namespace detail

/**
 * Sweeps one input-state family through the broadcast circuit at
 * theta = pi/2 and tabulates, per parameter value, the Pauli expectations
 * and input fidelity of (a) the cloner branch alone and (b) the signed
 * recombination. In noiseless runs the recombined rows reproduce the input
 * exactly; the cloner rows are shrunk by the cloner factor.
 */
inline std::vector<MitigationRow> mitigation_sweep(InputFamily family, int steps,
                                                   double noise = 0.0) {
  if (steps < 2) throw ArgumentError("mitigation_sweep: steps must be >= 2");
  const double span =
      family == InputFamily::Polarization ? 1.0 : 2.0 * std::numbers::pi;

  std::vector<MitigationRow> rows;
  rows.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    const double t = span * double(k) / double(steps - 1);
    const DensityMatrix rho = detail::family_state(family, t);
    const BroadcastRun run =
        run_broadcast_circuit(rho, std::numbers::pi / 2.0, noise);
    const HermitianOperator cloner(run.state0.mat(), run.state0.dims());
    const HermitianOperator mitigated =
        assemble_virtual(run.p0, run.state0, run.p1, run.state1, 2);

    MitigationRow row;
    row.input_label = detail::family_name(family);
    row.parameter = t;
    row.pauli_cloner = pauli_expectations_on(cloner, 0);
    row.pauli_mitigated = pauli_expectations_on(mitigated, 0);
    row.fidelity_cloner = fidelity_psd(
        partial_trace(cloner.mat(), cloner.dims(), {0}), rho.mat());
    row.fidelity_mitigated = fidelity_psd(
        partial_trace(mitigated.mat(), mitigated.dims(), {0}), rho.mat());
    rows.push_back(std::move(row));
  }
  return rows;
}

// Shrink factor s of the cloner marginal, Tr_B of the cloner output
// = s rho + (1 - s) I/d; s = (d+2)/(2(d+1)), giving pure-state fidelity
// (d+3)/(2(d+1)) (2/3 and 5/6 at d = 2).
inline double cloner_shrink_factor(Eigen::Index d) {
  if (d < 2) throw ArgumentError("cloner_shrink_factor: d must be >= 2");
  return double(d + 2) / (2.0 * double(d + 1));
}

} // namespace vqb
