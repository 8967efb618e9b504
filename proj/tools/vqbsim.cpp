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
//
// Command-line experiment runner. Every subcommand writes one dataset file
// (JSON or CSV) plus a <out>.manifest.json run manifest; numeric payloads
// are deterministic, so identical parameters reproduce identical bytes.

#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vqb/circuit.hpp"
#include "vqb/maps.hpp"
#include "vqb/matcore.hpp"
#include "vqb/pdm.hpp"
#include "vqb/sampler.hpp"
#include "vqb/vqb.hpp"

using json = nlohmann::ordered_json;
using namespace vqb;

namespace {

constexpr double kPi = std::numbers::pi;

//-------------------------------------------------------------------------
// Formatting and serialization
//-------------------------------------------------------------------------

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Matrices are serialized as nested rows of [re, im] pairs.
json json_matrix(const ComplexMatrix &m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json json_eigenvalues(const ComplexMatrix &m) {
  const EighResult eig = eigh(m);
  json vals = json::array();
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    vals.push_back(eig.eigenvalues(i));
  return vals;
}

std::uint64_t fnv1a64(const std::string &bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string &path, const std::string &payload) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot open output file: " + path);
  f << payload;
  if (!f) throw ArgumentError("failed to write output file: " + path);
}

// Writes <out> and <out>.manifest.json; the manifest records the resolved
// parameters and a checksum of the payload bytes.
void emit(const std::string &command, const json &params,
          const std::string &out_path, const std::string &payload) {
  write_file(out_path, payload);
  json manifest;
  manifest["command"] = command;
  manifest["parameters"] = params;
  manifest["tool_version"] = VQBSIM_VERSION;
  manifest["timestamp"] = utc_timestamp();
  manifest["outputs"] = json::array(
      {json{{"path", out_path}, {"fnv1a64", hex64(fnv1a64(payload))}}});
  write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

//-------------------------------------------------------------------------
// Argument parsing helpers
//-------------------------------------------------------------------------

// Accepts plain radians ("1.5707") or pi-fraction literals ("pi", "pi/2",
// "3pi/4", "2pi", "-pi/2").
double parse_angle(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(),
                            [](unsigned char c) { return std::isspace(c); }),
             text.end());
  if (text.empty()) throw ArgumentError("empty angle");
  const auto pi_pos = text.find("pi");
  try {
    if (pi_pos == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw ArgumentError("bad angle: " + text);
      return v;
    }
    double coeff = 1.0;
    const std::string pre = text.substr(0, pi_pos);
    if (pre == "-") coeff = -1.0;
    else if (!pre.empty()) coeff = std::stod(pre);
    double denom = 1.0;
    const std::string post = text.substr(pi_pos + 2);
    if (!post.empty()) {
      if (post[0] != '/') throw ArgumentError("bad angle: " + text);
      denom = std::stod(post.substr(1));
      if (denom == 0.0) throw ArgumentError("bad angle: " + text);
    }
    return coeff * kPi / denom;
  } catch (const std::invalid_argument &) {
    throw ArgumentError("bad angle: " + text);
  } catch (const std::out_of_range &) {
    throw ArgumentError("angle out of range: " + text);
  }
}

struct ParsedState {
  DensityMatrix state;
  std::string label;
};

Complex json_complex(const json &pair) {
  if (!pair.is_array() || pair.size() != 2)
    throw ArgumentError("state spec: expected [re, im] pair");
  return {pair[0].get<double>(), pair[1].get<double>()};
}

// Inline specs are JSON: {"kind":"pure","amplitudes":[[re,im],...]} or
// {"kind":"mixed","matrix":[[[re,im],...],...]}.
ParsedState parse_inline_state(const std::string &text, Eigen::Index d) {
  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ArgumentError(std::string("state spec is not valid JSON: ") +
                        e.what());
  }
  const std::string kind = spec.value("kind", "");
  if (kind == "pure") {
    const auto &amps = spec.at("amplitudes");
    if (!amps.is_array() || Eigen::Index(amps.size()) != d)
      throw ArgumentError("state spec: amplitude count does not match --d");
    ComplexVector psi(d);
    for (Eigen::Index i = 0; i < d; ++i) psi(i) = json_complex(amps[i]);
    const double norm = psi.norm();
    if (norm == 0.0) throw ArgumentError("state spec: zero amplitude vector");
    if (std::abs(norm - 1.0) > 1e-6)
      std::cerr << "warning: amplitudes renormalized (norm " << norm << ")\n";
    psi /= norm;
    return {DensityMatrix(psi * psi.adjoint(), {d}), "inline_pure"};
  }
  if (kind == "mixed") {
    const auto &rows = spec.at("matrix");
    if (!rows.is_array() || Eigen::Index(rows.size()) != d)
      throw ArgumentError("state spec: matrix size does not match --d");
    ComplexMatrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      if (Eigen::Index(rows[r].size()) != d)
        throw ArgumentError("state spec: matrix is not square");
      for (Eigen::Index c = 0; c < d; ++c) m(r, c) = json_complex(rows[r][c]);
    }
    return {DensityMatrix(std::move(m), {d}), "inline_mixed"};
  }
  throw ArgumentError("state spec: kind must be \"pure\" or \"mixed\"");
}

ParsedState parse_state(const std::string &text, Eigen::Index d) {
  if (!text.empty() && text.front() == '{') return parse_inline_state(text, d);
  if (text == "zero") {
    return {DensityMatrix(basis_projector(d, 0), {d}), text};
  }
  if (text == "one") {
    return {DensityMatrix(basis_projector(d, 1), {d}), text};
  }
  if (text == "maximally_mixed") {
    return {DensityMatrix(identity(d) / double(d), {d}), text};
  }
  if (text == "plus" || text == "mixed_plus_half") {
    if (d != 2)
      throw ArgumentError("state \"" + text + "\" is defined for d=2 only");
    ComplexVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    if (text == "plus") return {DensityMatrix(plus * plus.adjoint(), {2}), text};
    ComplexMatrix m = identity(2) / 4.0 + 0.5 * (plus * plus.adjoint());
    return {DensityMatrix(std::move(m), {2}), text};
  }
  throw ArgumentError("unknown state \"" + text +
                      "\" (expected zero, one, plus, mixed_plus_half, "
                      "maximally_mixed, or inline JSON)");
}

Channel parse_channel(const std::string &name, Eigen::Index d) {
  if (name == "identity") return identity_channel(d);
  if (name == "depolarizing") return depolarizing_channel(d, 1.0);
  if (name == "dephasing") return dephasing_channel(d);
  if (name == "x") {
    if (d != 2) throw ArgumentError("channel \"x\" is defined for d=2 only");
    return unitary_channel(pauli_x(), "x");
  }
  throw ArgumentError("unknown channel \"" + name +
                      "\" (expected identity, depolarizing, dephasing, x)");
}

PauliObs parse_pauli(const std::string &name) {
  if (name == "I") return PauliObs::I;
  if (name == "X") return PauliObs::X;
  if (name == "Y") return PauliObs::Y;
  if (name == "Z") return PauliObs::Z;
  throw ArgumentError("unknown Pauli label \"" + name + "\"");
}

InputFamily parse_family(const std::string &name) {
  if (name == "polar") return InputFamily::Polar;
  if (name == "azimuthal") return InputFamily::Azimuthal;
  if (name == "polarization") return InputFamily::Polarization;
  throw ArgumentError("unknown family \"" + name +
                      "\" (expected polar, azimuthal, polarization)");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag) {
  if (flag) return *flag;
  if (const char *env = std::getenv("VQB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception &) {
      throw ArgumentError("VQB_SEED is not a valid integer");
    }
  }
  return 0;
}

//-------------------------------------------------------------------------
// Subcommands
//-------------------------------------------------------------------------

struct BroadcastArgs {
  std::string state = "zero";
  Eigen::Index d = 2;
  std::string theta = "pi/2";
  double noise = 0.0;
  std::string out;
  std::string format = "json";
};

void cmd_broadcast(const BroadcastArgs &args) {
  const double theta = parse_angle(args.theta);
  const ParsedState in = parse_state(args.state, args.d);
  const BroadcastRun run = run_broadcast_circuit(in.state, theta, args.noise);
  const HermitianOperator virtual_out =
      assemble_virtual(run.p0, run.state0, run.p1, run.state1, args.d);

  const ComplexMatrix scaled0 = 2.0 * run.p0 * run.state0.mat();
  const ComplexMatrix scaled1 = 2.0 * run.p1 * run.state1.mat();
  const ComplexMatrix marg_a =
      partial_trace(virtual_out.mat(), virtual_out.dims(), {0});
  const ComplexMatrix marg_b =
      partial_trace(virtual_out.mat(), virtual_out.dims(), {1});

  json params{{"state", in.label}, {"d", args.d},       {"theta", theta},
              {"noise", args.noise}, {"out", args.out}, {"format", args.format}};

  std::string payload;
  if (args.format == "json") {
    json j;
    j["command"] = "broadcast";
    j["d"] = args.d;
    j["theta"] = theta;
    j["noise"] = args.noise;
    j["state"] = in.label;
    j["input"] = json_matrix(in.state.mat());
    j["p0"] = run.p0;
    j["p1"] = run.p1;
    j["two_p0_state0"] = json_matrix(scaled0);
    j["two_p1_state1"] = json_matrix(scaled1);
    j["virtual_output"] = json_matrix(virtual_out.mat());
    j["marginal_a"] = json_matrix(marg_a);
    j["marginal_b"] = json_matrix(marg_b);
    j["eigenvalues"] = {{"two_p0_state0", json_eigenvalues(scaled0)},
                        {"two_p1_state1", json_eigenvalues(scaled1)},
                        {"virtual_output", json_eigenvalues(virtual_out.mat())}};
    payload = j.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "matrix,row,col,re,im\n";
    const auto table = [&csv](const char *name, const ComplexMatrix &m) {
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          csv << name << ',' << r << ',' << c << ',' << fmt17(m(r, c).real())
              << ',' << fmt17(m(r, c).imag()) << '\n';
    };
    table("two_p0_state0", scaled0);
    table("two_p1_state1", scaled1);
    table("virtual_output", virtual_out.mat());
    table("marginal_a", marg_a);
    table("marginal_b", marg_b);
    const auto eigs = [&csv](const char *name, const ComplexMatrix &m) {
      const EighResult eig = eigh(m);
      for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
        csv << name << ".eigenvalues," << i << ",0,"
            << fmt17(eig.eigenvalues(i)) << ",0\n";
    };
    eigs("two_p0_state0", scaled0);
    eigs("two_p1_state1", scaled1);
    eigs("virtual_output", virtual_out.mat());
    payload = csv.str();
  }
  emit("broadcast", params, args.out, payload);
}

struct ScanArgs {
  Eigen::Index d = 2;
  int points = 97;
  std::string out;
};

void cmd_scan_theta(const ScanArgs &args) {
  if (args.points < 3) throw ArgumentError("--points must be >= 3");
  const auto grid = default_theta_grid(args.points);
  const auto scan = theta_scan(args.d, grid);

  std::size_t best = 0;
  for (std::size_t i = 1; i < scan.size(); ++i)
    if (scan[i].distance < scan[best].distance) best = i;

  std::ostringstream csv;
  csv << "theta,p0,distance\n";
  for (const ThetaScanPoint &p : scan)
    csv << fmt17(p.theta) << ',' << fmt17(p.p0) << ',' << fmt17(p.distance)
        << '\n';
  csv << "# argmin theta=" << fmt17(scan[best].theta)
      << " distance=" << fmt17(scan[best].distance)
      << " p0=" << fmt17(scan[best].p0) << '\n';

  json params{{"d", args.d}, {"points", args.points}, {"out", args.out}};
  emit("scan-theta", params, args.out, csv.str());
}

struct ChoiArgs {
  Eigen::Index d = 2;
  std::string out;
};

void cmd_choi(const ChoiArgs &args) {
  const Eigen::Index d = args.d;
  const ChoiRun run = run_choi_circuit(kPi / 2.0, d);
  const HermitianOperator assembled = assemble_virtual(
      run.p0, run.choi_state0, run.p1, run.choi_state1, d);

  const auto entry = [d](const std::string &name, const ComplexMatrix &choi) {
    const Channel c{choi, d, d * d, name};
    const ChannelClass k = classify(c);
    json j;
    j["label"] = name;
    j["matrix"] = json_matrix(choi);
    j["eigenvalues"] = json_eigenvalues(choi);
    j["trace"] = choi.trace().real();
    j["is_cp"] = k.is_cp;
    j["is_tp"] = k.is_tp;
    j["is_hp"] = k.is_hp;
    j["min_eigenvalue"] = k.min_choi_eigenvalue;
    return j;
  };

  json j;
  j["command"] = "choi";
  j["d"] = d;
  j["p0"] = run.p0;
  j["p1"] = run.p1;
  j["cloner"] = entry("cloner", run.choi_state0.mat());
  j["antisymmetrizer"] = entry("antisymmetrizer", run.choi_state1.mat());
  j["virtual"] = entry("virtual", assembled.mat());

  json params{{"d", args.d}, {"out", args.out}};
  emit("choi", params, args.out, j.dump(2) + "\n");
}

struct MitigateArgs {
  std::string family = "polar";
  int steps = 25;
  double noise = 0.0;
  std::string out;
};

void cmd_mitigate(const MitigateArgs &args) {
  const auto rows = mitigation_sweep(parse_family(args.family), args.steps,
                                     args.noise);
  std::ostringstream csv;
  csv << "family,parameter,sx_cloner,sy_cloner,sz_cloner,fidelity_cloner,"
         "sx_mitigated,sy_mitigated,sz_mitigated,fidelity_mitigated\n";
  for (const MitigationRow &r : rows) {
    csv << r.input_label << ',' << fmt17(r.parameter);
    for (double v : r.pauli_cloner) csv << ',' << fmt17(v);
    csv << ',' << fmt17(r.fidelity_cloner);
    for (double v : r.pauli_mitigated) csv << ',' << fmt17(v);
    csv << ',' << fmt17(r.fidelity_mitigated) << '\n';
  }

  json params{{"family", args.family},
              {"steps", args.steps},
              {"noise", args.noise},
              {"out", args.out}};
  emit("mitigate", params, args.out, csv.str());
}

struct PdmArgs {
  std::string state = "zero";
  std::string channel = "identity";
  Eigen::Index d = 2;
  std::string out;
};

void cmd_pdm(const PdmArgs &args) {
  const ParsedState in = parse_state(args.state, args.d);
  const Channel channel = parse_channel(args.channel, args.d);
  const TwoTimePDM closed = pdm_closed_form(in.state, channel);

  json j;
  j["command"] = "pdm";
  j["d"] = args.d;
  j["state"] = in.label;
  j["channel"] = args.channel;
  j["closed_form"] = json_matrix(closed.op.mat());
  j["eigenvalues"] = json_eigenvalues(closed.op.mat());
  j["negativity"] = pdm_negativity(closed);
  j["marginal_time_a"] =
      json_matrix(partial_trace(closed.op.mat(), closed.op.dims(), {0}));
  j["marginal_time_b"] =
      json_matrix(partial_trace(closed.op.mat(), closed.op.dims(), {1}));

  // The measurement-statistics construction is defined on qubit registers.
  const int n_qubits = args.d == 2 ? 1 : args.d == 4 ? 2 : 0;
  if (n_qubits > 0) {
    const TwoTimePDM defined = pdm_from_definition(in.state, channel, n_qubits);
    j["definition"] = json_matrix(defined.op.mat());
    j["definition_vs_closed_max_diff"] =
        max_abs(defined.op.mat() - closed.op.mat());
  } else {
    j["definition"] = nullptr;
  }

  json params{{"state", in.label},
              {"channel", args.channel},
              {"d", args.d},
              {"out", args.out}};
  emit("pdm", params, args.out, j.dump(2) + "\n");
}

struct SampleArgs {
  std::string state = "zero";
  std::string obs_a = "Z";
  std::string obs_b = "Z";
  std::uint64_t shots = 100000;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void cmd_sample(const SampleArgs &args) {
  const ParsedState in = parse_state(args.state, 2);
  const std::uint64_t seed = resolve_seed(args.seed);
  const SamplerConfig cfg{in.state,         parse_pauli(args.obs_a),
                          parse_pauli(args.obs_b), args.shots,
                          seed,             0};
  const EstimateResult res = run_sampler(cfg);

  json j;
  j["command"] = "sample";
  j["state"] = in.label;
  j["obs_a"] = args.obs_a;
  j["obs_b"] = args.obs_b;
  j["shots"] = res.shots_used;
  j["seed"] = seed;
  j["stream"] = 0;
  j["estimate"] = res.estimate;
  j["std_error"] = res.std_error;
  j["exact"] = res.exact_value;
  j["overhead"] = overhead(2);

  json params{{"state", in.label}, {"obs_a", args.obs_a},
              {"obs_b", args.obs_b}, {"shots", args.shots},
              {"seed", seed},       {"out", args.out}};
  emit("sample", params, args.out, j.dump(2) + "\n");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"virtual-broadcast circuit simulator"};
  app.require_subcommand(1);

  BroadcastArgs bc;
  CLI::App *broadcast = app.add_subcommand(
      "broadcast", "run the three-system circuit and recombine the branches");
  broadcast->add_option("--state", bc.state, "input state name or inline JSON");
  broadcast->add_option("--d", bc.d, "subsystem dimension")->check(CLI::Range(2, 8));
  broadcast->add_option("--theta", bc.theta, "partial-swap angle (radians or pi fraction)");
  broadcast->add_option("--noise", bc.noise, "depolarizing strength")->check(CLI::Range(0.0, 1.0));
  broadcast->add_option("--out", bc.out, "output file")->required();
  broadcast->add_option("--format", bc.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  ScanArgs sc;
  CLI::App *scan = app.add_subcommand(
      "scan-theta", "trace distance to the broadcast Choi state over a theta grid");
  scan->add_option("--d", sc.d, "subsystem dimension")->check(CLI::Range(2, 8));
  scan->add_option("--points", sc.points, "grid size over [0, 2pi]");
  scan->add_option("--out", sc.out, "output CSV file")->required();

  ChoiArgs ch;
  CLI::App *choi = app.add_subcommand(
      "choi", "Choi states of the two branches and their recombination");
  choi->add_option("--d", ch.d, "subsystem dimension")->check(CLI::Range(2, 8));
  choi->add_option("--out", ch.out, "output JSON file")->required();

  MitigateArgs mi;
  CLI::App *mitigate = app.add_subcommand(
      "mitigate", "cloner-vs-recombined sweep over an input-state family");
  mitigate->add_option("--family", mi.family, "polar, azimuthal or polarization");
  mitigate->add_option("--steps", mi.steps, "number of parameter values");
  mitigate->add_option("--noise", mi.noise, "depolarizing strength")->check(CLI::Range(0.0, 1.0));
  mitigate->add_option("--out", mi.out, "output CSV file")->required();

  PdmArgs pd;
  CLI::App *pdm = app.add_subcommand(
      "pdm", "two-time pseudo-density matrix of a state and channel");
  pdm->add_option("--state", pd.state, "input state name or inline JSON");
  pdm->add_option("--channel", pd.channel, "identity, depolarizing, dephasing or x");
  pdm->add_option("--d", pd.d, "system dimension")->check(CLI::Range(2, 8));
  pdm->add_option("--out", pd.out, "output JSON file")->required();

  SampleArgs sa;
  CLI::App *sample = app.add_subcommand(
      "sample", "Monte-Carlo estimate of a two-Pauli expectation");
  sample->add_option("--state", sa.state, "qubit input state name or inline JSON");
  sample->add_option("--obs-a", sa.obs_a, "Pauli label I, X, Y or Z");
  sample->add_option("--obs-b", sa.obs_b, "Pauli label I, X, Y or Z");
  sample->add_option("--shots", sa.shots, "number of shots")->check(CLI::PositiveNumber);
  sample->add_option("--seed", sa.seed, "RNG seed (fallback: VQB_SEED, then 0)");
  sample->add_option("--out", sa.out, "output JSON file")->required();

  try {
    app.parse(argc, argv);
    if (broadcast->parsed()) cmd_broadcast(bc);
    if (scan->parsed()) cmd_scan_theta(sc);
    if (choi->parsed()) cmd_choi(ch);
    if (mitigate->parsed()) cmd_mitigate(mi);
    if (pdm->parsed()) cmd_pdm(pd);
    if (sample->parsed()) cmd_sample(sa);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ValidationError &e) {
    std::cerr << "state validation error: " << e.what() << "\n";
    return 3;
  } catch (const ContractViolation &e) {
    std::cerr << "internal contract violation: " << e.what() << "\n";
    return 4;
  } catch (const ArgumentError &e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
