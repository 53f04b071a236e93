#include <gtest/gtest.h>

#include <array>
#include <complex>
#include <random>

#include "bridgesynth/errors.hpp"
#include "bridgesynth/verifier.hpp"

using namespace bridgesynth;

namespace {

using cd = std::complex<double>;
using M4 = std::array<std::array<cd, 4>, 4>;
using M2 = std::array<std::array<cd, 2>, 2>;

M2 pauli_matrix(Pauli p) {
  const cd i(0, 1);
  switch (p) {
    case Pauli::I: return {{{1, 0}, {0, 1}}};
    case Pauli::X: return {{{0, 1}, {1, 0}}};
    case Pauli::Y: return {{{0, -i}, {i, 0}}};
    case Pauli::Z: return {{{1, 0}, {0, -1}}};
  }
  return {};
}

M4 kron(const M2& a, const M2& b) {
  M4 out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[r][c] = a[r / 2][c / 2] * b[r % 2][c % 2];
  }
  return out;
}

M4 mul(const M4& a, const M4& b) {
  M4 out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      for (int k = 0; k < 4; ++k) out[r][c] += a[r][k] * b[k][c];
    }
  }
  return out;
}

M4 dagger(const M4& a) {
  M4 out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[r][c] = std::conj(a[c][r]);
  }
  return out;
}

M4 controlled(const M2& u) {
  M4 out{};
  out[0][0] = out[1][1] = 1;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) out[2 + r][2 + c] = u[r][c];
  }
  return out;
}

M4 gate_matrix(GateKind k) {
  const double s = 1 / std::sqrt(2.0);
  const M2 h{{{s, s}, {s, -s}}};
  switch (k) {
    case GateKind::H: return kron(h, pauli_matrix(Pauli::I));
    case GateKind::CX: return controlled(pauli_matrix(Pauli::X));
    case GateKind::CY: return controlled(pauli_matrix(Pauli::Y));
    case GateKind::CZ: return controlled(pauli_matrix(Pauli::Z));
    case GateKind::SWAP: {
      M4 out{};
      out[0][0] = out[3][3] = out[1][2] = out[2][1] = 1;
      return out;
    }
    default: return {};
  }
}

bool close(const M4& a, const M4& b, double sign) {
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (std::abs(a[r][c] - sign * b[r][c]) > 1e-9) return false;
    }
  }
  return true;
}

Gate G(GateKind k, std::vector<int> q, int t, std::string stab = "s0") {
  Gate g;
  g.kind = k;
  g.qubits = std::move(q);
  g.t = t;
  g.stab = std::move(stab);
  return g;
}

Circuit compile_stages(const StabilizerCode& code, const CouplingGraph& arch, MappingSolution& sol,
                       const Stage2Config& s2 = {}) {
  Stage1Config s1;
  s1.deadline = Deadline::in_seconds(8);
  auto m = solve_stage1(code, arch, s1);
  sol = m.solution;
  auto r = minimize_depth(enumerate_operations(sol, code, arch), s2);
  return build_circuit(r.circuit, code, arch);
}

}  // namespace

TEST(Verifier, ConjugationMatchesMatrices) {
  const Pauli all[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  for (GateKind k : {GateKind::H, GateKind::CX, GateKind::CY, GateKind::CZ, GateKind::SWAP}) {
    const M4 u = gate_matrix(k);
    for (Pauli a : all) {
      for (Pauli b : all) {
        PauliFrame f(2);
        f.set(0, a);
        f.set(1, b);
        conjugate_gate(f, G(k, gate_arity(k) == 2 ? std::vector<int>{0, 1} : std::vector<int>{0}, 1));
        const M4 want = mul(mul(u, kron(pauli_matrix(a), pauli_matrix(b))), dagger(u));
        const M4 got = kron(pauli_matrix(f.at(0)), pauli_matrix(f.at(1)));
        EXPECT_TRUE(close(want, got, f.negative ? -1.0 : 1.0))
            << gate_name(k) << " on " << pauli_char(a) << pauli_char(b) << " gave " << f.str();
      }
    }
  }
}

TEST(Verifier, HandExamples) {
  Circuit c;
  c.n = 5;
  c.gates = {G(GateKind::H, {0}, 1)};
  PauliFrame z(5);
  z.set(0, Pauli::Z);
  EXPECT_EQ(conjugate_backward(c, z).frame.at(0), Pauli::X);

  c.gates = {G(GateKind::CX, {0, 1}, 1)};
  auto p = conjugate_backward(c, z);
  EXPECT_EQ(p.frame, z);

  // H, four CX from ancilla 0 to data 1..4, H
  c.gates = {G(GateKind::H, {0}, 1)};
  for (int q = 1; q <= 4; ++q) c.gates.push_back(G(GateKind::CX, {0, q}, q + 1));
  c.gates.push_back(G(GateKind::H, {0}, 6));
  p = conjugate_backward(c, z);
  EXPECT_TRUE(p.violations.empty());
  EXPECT_EQ(p.frame.str(), "+Z0 X1 X2 X3 X4");
}

TEST(Verifier, BoundariesAndUnsupportedGates) {
  Circuit c;
  c.n = 2;
  c.gates = {G(GateKind::R, {0}, 1), G(GateKind::H, {0}, 2)};
  PauliFrame z(2);
  z.set(0, Pauli::Z);
  EXPECT_FALSE(conjugate_backward(c, z).violations.empty());  // X reaches the reset
  c.gates = {G(GateKind::M, {1}, 1)};
  PauliFrame x(2);
  x.set(1, Pauli::Z);
  EXPECT_FALSE(conjugate_backward(c, x).violations.empty());
  c.gates = {G(GateKind::T, {0}, 1)};
  EXPECT_THROW(conjugate_backward(c, z), UnsupportedGateError);
}

TEST(Verifier, BackwardThenForwardIsIdentity) {
  std::mt19937 rng(11);
  const GateKind kinds[] = {GateKind::H, GateKind::CX, GateKind::CZ, GateKind::CY, GateKind::SWAP};
  for (int trial = 0; trial < 200; ++trial) {
    Circuit c;
    c.n = 5;
    for (int t = 1; t <= 12; ++t) {
      const GateKind k = kinds[rng() % 5];
      const int a = static_cast<int>(rng() % 5);
      std::vector<int> q{a};
      if (gate_arity(k) == 2) q.push_back((a + 1 + static_cast<int>(rng() % 4)) % 5);
      c.gates.push_back(G(k, q, t));
    }
    PauliFrame f(5);
    for (int q = 0; q < 5; ++q) f.set(q, static_cast<Pauli>(rng() % 4));
    f.negative = rng() % 2;
    const auto back = conjugate_backward(c, f);
    ASSERT_TRUE(back.violations.empty());
    EXPECT_EQ(conjugate_forward(c, back.frame), f);
  }
}

TEST(Verifier, PipelineOutputsPass) {
  struct Case {
    const char* code;
    const char* arch;
  };
  for (auto [code_spec, arch_spec] : {Case{"surface:3", "square:5x5"}, Case{"repetition:5", "hexagon:3x4"},
                                      Case{"repetition:4", "heavy_hexagon:3x5"}, Case{"steane", "square:4x4"},
                                      Case{"surface:3", "hexagon:5x6"}}) {
    auto code = generate_code(code_spec);
    auto arch = generate_arch(arch_spec);
    MappingSolution sol;
    const Circuit c = compile_stages(code, arch, sol);
    const auto report = verify_syndrome_extraction(c, code, sol);
    EXPECT_TRUE(report.ok()) << code_spec << " on " << arch_spec << "\n" << report.str();
    for (int q = 0; q < code.num_data; ++q) {
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        EXPECT_EQ(verify_error_detection(c, code, sol, q, p), expected_flips(code, q, p)) << code_spec << " q" << q;
      }
    }
  }
}

TEST(Verifier, SteaneSyndromeOfZOnThirdQubit) {
  auto code = codes::steane();
  auto arch = generate_arch("square:4x4");
  MappingSolution sol;
  const Circuit c = compile_stages(code, arch, sol);
  EXPECT_EQ(verify_error_detection(c, code, sol, 2, Pauli::Z), (std::vector<std::string>{"X1", "X3"}));
  EXPECT_TRUE(verify_error_detection(c, code, sol, 2, Pauli::X).size() == 2);
  EXPECT_EQ(verify_error_detection(c, code, sol, 2, Pauli::X), (std::vector<std::string>{"Z1", "Z3"}));
  EXPECT_THROW(verify_error_detection(c, code, sol, 9, Pauli::X), ParameterError);
}

TEST(Verifier, BridgedWeightFourPasses) {
  StabilizerCode code{"w4", 4, {Stabilizer::make({{0, Pauli::X}, {1, Pauli::X}, {2, Pauli::X}, {3, Pauli::X}}, "X")}};
  auto arch = generate_arch("square:2x3");
  MappingSolution sol;
  sol.pi = {0, 2, 3, 5};
  sol.anc = {{1, 4}};
  sol.cp = {{{0, 1}, {1, 1}, {2, 4}, {3, 4}}};
  auto r = minimize_depth(enumerate_operations(sol, code, arch));
  const Circuit c = build_circuit(r.circuit, code, arch);
  EXPECT_TRUE(verify_syndrome_extraction(c, code, sol).ok());
  EXPECT_EQ(compute_metrics(c).extra_cnots, 2);

  // a control gate moved ahead of the encode CNOT that prepares its bridge node
  Circuit broken = c;
  Gate* enc = nullptr;
  for (auto& g : broken.gates) {
    if (g.phase == "enc" && g.kind == GateKind::CX) enc = &g;
  }
  ASSERT_NE(enc, nullptr);
  bool mutated = false;
  for (auto& g : broken.gates) {
    if (g.phase == "ctrl" && g.qubits[0] == enc->qubits[1]) {
      std::swap(g.t, enc->t);
      mutated = true;
      break;
    }
  }
  ASSERT_TRUE(mutated);
  std::stable_sort(broken.gates.begin(), broken.gates.end(), [](const Gate& a, const Gate& b) { return a.t < b.t; });
  EXPECT_FALSE(verify_syndrome_extraction(broken, code, sol).ok());
}

TEST(Verifier, DisabledFamiliesAreCaught) {
  // Each family off: some instance in this suite must yield a circuit the oracle rejects,
  // or the schedule checker must reject it.
  struct Inst {
    StabilizerCode code;
    CouplingGraph arch;
  };
  std::vector<Inst> suite{{codes::surface(3), generate_arch("square:5x5")},
                          {codes::steane(), generate_arch("heavy_square:3x3")},
                          {codes::repetition(4), generate_arch("heavy_hexagon:3x5")},
                          {codes::steane(), generate_arch("hexagon:4x4")}};
  std::vector<MappingSolution> maps;
  Stage1Config s1;
  for (const auto& in : suite) {
    s1.deadline = Deadline::in_seconds(8);
    maps.push_back(solve_stage1(in.code, in.arch, s1).solution);
  }
  const std::vector<std::pair<const char*, bool Stage2Families::*>> families{
      {"single_root", &Stage2Families::single_root},
      {"single_parent", &Stage2Families::single_parent},
      {"prepared_control", &Stage2Families::prepared_control},
      {"anticommute_parity", &Stage2Families::anticommute_parity},
      {"shared_serialization", &Stage2Families::shared_serialization},
      {"phase_order", &Stage2Families::phase_order}};
  for (auto [name, member] : families) {
    Stage2Config cfg;
    cfg.families.*member = false;
    cfg.search = DepthSearch::Linear;
    bool caught = false;
    for (std::size_t i = 0; i < suite.size() && !caught; ++i) {
      cfg.deadline = Deadline::in_seconds(20);
      auto r = minimize_depth(enumerate_operations(maps[i], suite[i].code, suite[i].arch), cfg);
      const Circuit c = build_circuit(r.circuit, suite[i].code, suite[i].arch);
      caught = !verify_syndrome_extraction(c, suite[i].code, maps[i]).ok() || !check_circuit(c).empty();
    }
    EXPECT_TRUE(caught) << name;
  }
}
