#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "bridgesynth/errors.hpp"
#include "bridgesynth/schedule.hpp"
#include "bridgesynth/sat/solver.hpp"
#include "oracles.hpp"

using namespace bridgesynth;

namespace {

Stabilizer S(std::initializer_list<std::pair<int, char>> terms, std::string label = {}) {
  std::vector<std::pair<int, Pauli>> out;
  for (auto [q, c] : terms) out.emplace_back(q, parse_pauli(std::string(1, c)));
  return Stabilizer::make(out, std::move(label));
}

StabilizerCode make_code(int num_data, std::vector<Stabilizer> stabs) {
  for (std::size_t i = 0; i < stabs.size(); ++i) {
    if (stabs[i].label.empty()) stabs[i].label = "s" + std::to_string(i);
  }
  return StabilizerCode{"test", num_data, std::move(stabs)};
}

struct Instance {
  StabilizerCode code;
  CouplingGraph arch;
  MappingSolution sol;
};

// cp defaults to the single bridge node adjacent to each data qubit.
Instance make_instance(StabilizerCode code, CouplingGraph arch, std::vector<int> pi, std::vector<std::vector<int>> anc) {
  MappingSolution sol;
  sol.pi = std::move(pi);
  sol.anc = std::move(anc);
  sol.cp.resize(sol.anc.size());
  for (std::size_t s = 0; s < sol.anc.size(); ++s) {
    std::sort(sol.anc[s].begin(), sol.anc[s].end());
    for (int q : code.stabilizers[s].data_qubits()) {
      for (int p : sol.anc[s]) {
        if (arch.adjacent(p, sol.pi[static_cast<std::size_t>(q)])) {
          sol.cp[s][q] = p;
          break;
        }
      }
    }
  }
  return {std::move(code), std::move(arch), std::move(sol)};
}

std::string key(const ScheduledCircuit& c) { return oracle::schedule_key(c); }

std::set<std::string> brute_schedules(const Instance& in, int T, bool first_only) {
  return oracle::all_schedules(in.sol, in.code, in.arch, T, first_only);
}

int brute_min_depth(const Instance& in, int limit) { return oracle::min_depth(in.sol, in.code, in.arch, limit); }

std::set<std::string> sat_schedules(const Instance& in, int T) {
  const OperationSet set = enumerate_operations(in.sol, in.code, in.arch);
  Stage2Encoding enc = encode_stage2(set, T);
  std::set<std::string> out;
  while (true) {
    auto r = sat::solve_sat(enc.cnf);
    if (r.status != sat::SatStatus::Sat) break;
    auto c = decode_stage2(r.model, enc, set);
    EXPECT_TRUE(check_schedule(c, in.sol, in.code).ok()) << check_schedule(c, in.sol, in.code).str();
    EXPECT_TRUE(out.insert(key(c)).second);
    std::vector<sat::Lit> block;
    for (const auto& row : enc.time) {
      for (sat::Lit x : row) block.push_back(r.model.value(x) ? -x : x);
    }
    enc.cnf.add_clause(block);
  }
  return out;
}

Instance weight2() { return make_instance(make_code(2, {S({{0, 'Z'}, {1, 'Z'}})}), generate_arch("path:3"), {0, 2}, {{1}}); }

Instance weight4_bare() {
  return make_instance(make_code(4, {S({{0, 'X'}, {1, 'X'}, {2, 'X'}, {3, 'X'}})}), generate_arch("square:3x3"),
                       {1, 3, 5, 7}, {{4}});
}

// 0 1 2 / 3 4 5, bridge {1,4}
Instance weight4_bridge2() {
  return make_instance(make_code(4, {S({{0, 'Z'}, {1, 'Z'}, {2, 'Z'}, {3, 'Z'}})}), generate_arch("square:2x3"),
                       {0, 2, 3, 5}, {{1, 4}});
}

Instance shared_ancilla() {
  return make_instance(make_code(2, {S({{0, 'X'}, {1, 'X'}}), S({{0, 'Z'}, {1, 'Z'}})}), generate_arch("path:3"), {0, 2},
                       {{1}, {1}});
}

// 0-1, 0-2, 1-3, 2-3: data on 0 and 3, one ancilla each.
Instance parallel_xx_zz() {
  return make_instance(make_code(2, {S({{0, 'X'}, {1, 'X'}}), S({{0, 'Z'}, {1, 'Z'}})}), generate_arch("square:2x2"),
                       {0, 3}, {{1}, {2}});
}

Instance weight3_bridge2() {
  return make_instance(make_code(3, {S({{0, 'X'}, {1, 'Y'}, {2, 'Z'}})}), generate_arch("square:2x3"), {0, 2, 3}, {{1, 4}});
}

}  // namespace

TEST(Stage2, OperationSetShape) {
  auto in = weight4_bridge2();
  auto set = enumerate_operations(in.sol, in.code, in.arch);
  std::map<OpKind, int> count;
  for (const auto& op : set.ops) ++count[op.kind];
  EXPECT_EQ(count[OpKind::Reset], 2);
  EXPECT_EQ(count[OpKind::Hadamard], 4);
  EXPECT_EQ(count[OpKind::EncCnot], 2);
  EXPECT_EQ(count[OpKind::DecCnot], 2);
  EXPECT_EQ(count[OpKind::CtrlP], 4);
  EXPECT_EQ(count[OpKind::Measure], 2);
}

TEST(Stage2, Weight2Example) {
  auto in = weight2();
  auto set = enumerate_operations(in.sol, in.code, in.arch);
  auto r = minimize_depth(set);
  EXPECT_EQ(r.circuit.depth, 6);
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.sequential_depth, 6);
  std::vector<OpKind> kinds;
  for (const auto& g : r.circuit.gates) kinds.push_back(g.op.kind);
  EXPECT_EQ(kinds, (std::vector<OpKind>{OpKind::Reset, OpKind::Hadamard, OpKind::CtrlP, OpKind::CtrlP, OpKind::Hadamard,
                                        OpKind::Measure}));
  EXPECT_TRUE(check_schedule(r.circuit, in.sol, in.code).ok());
}

TEST(Stage2, Weight4BareNeedsEight) {
  auto in = weight4_bare();
  auto set = enumerate_operations(in.sol, in.code, in.arch);
  EXPECT_EQ(sat::solve_sat(encode_stage2(set, 8).cnf).status, sat::SatStatus::Sat);
  EXPECT_EQ(sat::solve_sat(encode_stage2(set, 7).cnf).status, sat::SatStatus::Unsat);
  auto r = minimize_depth(set);
  EXPECT_EQ(r.circuit.depth, 8);
  EXPECT_TRUE(r.optimal);
}

TEST(Stage2, BridgeOfTwoPipelines) {
  auto in = weight4_bridge2();
  auto r = minimize_depth(enumerate_operations(in.sol, in.code, in.arch));
  EXPECT_EQ(r.circuit.depth, 8);
  EXPECT_TRUE(r.optimal);
  EXPECT_TRUE(check_schedule(r.circuit, in.sol, in.code).ok());
  EXPECT_EQ(brute_min_depth(in, 9), 8);
}

TEST(Stage2, SharedAncillaSerializes) {
  auto in = shared_ancilla();
  auto set = enumerate_operations(in.sol, in.code, in.arch);
  auto r = minimize_depth(set);
  EXPECT_EQ(r.circuit.depth, 12);
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.sequential_depth, 12);
  EXPECT_TRUE(check_schedule(r.circuit, in.sol, in.code).ok());
}

TEST(Stage2, SequentialScheduleIsValid) {
  for (const auto& in : {weight2(), weight4_bare(), weight4_bridge2(), shared_ancilla(), parallel_xx_zz(), weight3_bridge2()}) {
    auto c = sequential_schedule(enumerate_operations(in.sol, in.code, in.arch));
    EXPECT_TRUE(check_schedule(c, in.sol, in.code).ok()) << check_schedule(c, in.sol, in.code).str();
  }
  auto two = make_instance(make_code(4, {S({{0, 'Z'}, {1, 'Z'}}), S({{2, 'Z'}, {3, 'Z'}})}), generate_arch("path:6"),
                           {0, 2, 3, 5}, {{1}, {4}});
  EXPECT_EQ(sequential_schedule(enumerate_operations(two.sol, two.code, two.arch)).depth, 12);
}

TEST(Stage2, EmptyCode) {
  auto code = make_code(1, {});
  MappingSolution sol;
  sol.pi = {-1};
  auto set = enumerate_operations(sol, code, generate_arch("path:2"));
  auto r = minimize_depth(set);
  EXPECT_EQ(r.circuit.depth, 0);
  EXPECT_TRUE(r.optimal);
}

TEST(Stage2, ModelsMatchBruteForce) {
  for (auto [in, T] : std::vector<std::pair<Instance, int>>{{weight2(), 6}, {weight2(), 7}, {weight3_bridge2(), 8}, {weight4_bridge2(), 8}}) {
    auto brute = brute_schedules(in, T, false);
    auto sat = sat_schedules(in, T);
    EXPECT_FALSE(brute.empty());
    EXPECT_EQ(sat, brute) << "T=" << T;
  }
}

TEST(Stage2, MinimalDepthMatchesBruteForce) {
  for (const auto& in : {weight2(), weight3_bridge2(), parallel_xx_zz(), shared_ancilla()}) {
    auto r = minimize_depth(enumerate_operations(in.sol, in.code, in.arch));
    EXPECT_TRUE(r.optimal);
    EXPECT_EQ(r.circuit.depth, brute_min_depth(in, r.circuit.depth));
  }
}

TEST(Stage2, LinearAndBinaryAgree) {
  for (const auto& in : {weight4_bridge2(), parallel_xx_zz()}) {
    auto set = enumerate_operations(in.sol, in.code, in.arch);
    Stage2Config lin;
    lin.search = DepthSearch::Linear;
    auto a = minimize_depth(set);
    auto b = minimize_depth(set, lin);
    EXPECT_EQ(a.circuit.depth, b.circuit.depth);
    EXPECT_TRUE(a.optimal && b.optimal);
    EXPECT_LE(a.circuit.depth, a.sequential_depth);
    EXPECT_GE(a.circuit.depth, a.lower_bound);
  }
}

// XX and ZZ on the same two qubits with separate ancillas: control orders on the two data
// qubits must agree.
TEST(Stage2, AnticommutingParity) {
  auto in = parallel_xx_zz();
  auto set = enumerate_operations(in.sol, in.code, in.arch);
  auto odd_count = [&](const Stage2Config& cfg, int T) {
    auto enc = encode_stage2(set, T, cfg);
    int odd = 0, total = 0;
    while (true) {
      auto r = sat::solve_sat(enc.cnf);
      if (r.status != sat::SatStatus::Sat) break;
      auto c = decode_stage2(r.model, enc, set);
      std::map<std::pair<int, int>, int> t;
      for (const auto& g : c.gates) {
        if (g.op.kind == OpKind::CtrlP) t[{g.op.stab, g.op.data}] = g.t;
      }
      const bool first = t[{0, 0}] < t[{1, 0}], second = t[{0, 1}] < t[{1, 1}];
      odd += first != second;
      ++total;
      std::vector<sat::Lit> block;
      for (const auto& row : enc.time) {
        for (sat::Lit x : row) block.push_back(r.model.value(x) ? -x : x);
      }
      enc.cnf.add_clause(block);
    }
    EXPECT_GT(total, 0);
    return odd;
  };
  EXPECT_EQ(odd_count({}, 7), 0);
  Stage2Config off;
  off.families.anticommute_parity = false;
  EXPECT_GT(odd_count(off, 7), 0);
}

TEST(Stage2, MirroredDecodeReusesTree) {
  auto in = weight3_bridge2();
  auto set = enumerate_operations(in.sol, in.code, in.arch);
  Stage2Config cfg;
  cfg.mirror_decode = true;
  auto r = minimize_depth(set, cfg);
  ASSERT_TRUE(check_schedule(r.circuit, in.sol, in.code).ok());
  int enc_root = -1, dec_root = -1;
  for (const auto& g : r.circuit.gates) {
    if (g.op.kind == OpKind::Hadamard) (g.op.phase == OpPhase::Enc ? enc_root : dec_root) = g.op.a;
  }
  EXPECT_EQ(enc_root, dec_root);
}

TEST(Stage2, CheckerRejectsBrokenSchedules) {
  auto in = weight4_bridge2();
  auto r = minimize_depth(enumerate_operations(in.sol, in.code, in.arch));
  ASSERT_TRUE(check_schedule(r.circuit, in.sol, in.code).ok());
  for (std::size_t i = 0; i < r.circuit.gates.size(); ++i) {
    auto broken = r.circuit;
    broken.gates.erase(broken.gates.begin() + static_cast<long>(i));
    broken.depth = 0;
    for (const auto& g : broken.gates) broken.depth = std::max(broken.depth, g.t);
    EXPECT_FALSE(check_schedule(broken, in.sol, in.code).ok()) << "dropped gate " << i;
  }
  auto swapped = r.circuit;
  std::swap(swapped.gates.front().t, swapped.gates.back().t);
  EXPECT_FALSE(check_schedule(swapped, in.sol, in.code).ok());
  auto wrong = r.circuit;
  for (auto& g : wrong.gates) {
    if (g.op.kind == OpKind::CtrlP) {
      g.op.pauli = Pauli::X;
      break;
    }
  }
  EXPECT_FALSE(check_schedule(wrong, in.sol, in.code).ok());
}

TEST(Stage2, RejectsBadDepth) {
  auto in = weight2();
  EXPECT_THROW(encode_stage2(enumerate_operations(in.sol, in.code, in.arch), 0), ParameterError);
}

TEST(Stage2, SurfaceOnSquareDepthEight) {
  auto code = codes::surface(3);
  auto arch = generate_arch("square:5x5");
  auto m = solve_stage1(code, arch);
  auto set = enumerate_operations(m.solution, code, arch);
  auto r = minimize_depth(set);
  EXPECT_EQ(r.circuit.depth, 8);
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.lower_bound, 8);
  EXPECT_TRUE(check_schedule(r.circuit, m.solution, code).ok()) << check_schedule(r.circuit, m.solution, code).str();
}
