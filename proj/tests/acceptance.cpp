// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as arguments to
// run a subset.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bridgesynth/driver.hpp"
#include "bridgesynth/errors.hpp"
#include "bridgesynth/sat/solver.hpp"
#include "oracles.hpp"

using namespace bridgesynth;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

CompileConfig limits(double s1, double s2, int k = 1) {
  CompileConfig cfg;
  cfg.stage1_seconds = s1;
  cfg.stage2_seconds = s2;
  cfg.k = k;
  return cfg;
}

int enc_dec_cnots(const Circuit& c) {
  int n = 0;
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::CX && (g.phase == "enc" || g.phase == "dec")) ++n;
  }
  return n;
}

// Syndrome check plus every single-qubit Pauli on every placed data qubit.
VerifyReport full_oracle(const CompileOutput& out, const StabilizerCode& code) {
  return verify_artifacts(out.circuit, code, plan_to_json(out));
}

std::string describe(const CompileOutput& out, double secs) {
  std::ostringstream s;
  s << "extra_cnots=" << out.metrics.extra_cnots << " depth=" << out.metrics.depth
    << " optimal=" << (out.stage1_optimal && out.stage2_optimal ? "yes" : "no") << " time=" << fmt(secs) << "s";
  return s.str();
}

Verdict single_compile(const std::string& code_spec, const std::string& arch_spec, const std::vector<int>& defects,
                       const std::function<bool(const CompileOutput&)>& accept, double s1 = 1800, double s2 = 1800) {
  const auto code = load_code_source(code_spec);
  const auto arch = load_arch_source(arch_spec, defects);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const CompileOutput out = compile_partitioned(code, arch, limits(s1, s2));
    const auto report = full_oracle(out, code);
    Verdict v;
    v.detail = code_spec + " on " + arch.name() + " (" + std::to_string(arch.num_nodes()) + " qubits): " +
               describe(out, seconds_since(t0)) + " oracle=" + (report.ok() ? "PASS" : "FAIL");
    v.pass = report.ok() && accept(out);
    return v;
  } catch (const std::exception& e) {
    return {false, code_spec + " on " + arch_spec + ": " + e.what()};
  }
}

// ---- benchmark suite shared by criteria 6 and 7 ----

struct SuiteEntry {
  std::string code_name;
  StabilizerCode code;
  CouplingGraph arch;
  bool compiled = false;
  std::string skipped;  // reason when not compiled
  MappingSolution mapping;
};

StabilizerCode small_hgp() {
  const auto h = BinaryMatrix::from_rows({{1, 1}});
  StabilizerCode c = codes::hypergraph_product(h, h);
  c.name = "hgp_rep2";
  return c;
}

std::vector<SuiteEntry>& suite() {
  static std::vector<SuiteEntry> entries;
  static bool built = false;
  if (built) return entries;
  built = true;
  struct CodeCase {
    std::string name;
    StabilizerCode code;
    std::vector<std::string> archs;
  };
  const std::vector<std::string> small{"square:4x4", "hexagon:4x4", "heavy_square:2x3", "heavy_hexagon:2x4"};
  const std::vector<std::string> medium{"square:5x5", "hexagon:5x6", "heavy_square:3x4", "heavy_hexagon:3x5"};
  const std::vector<CodeCase> cases{{"repetition:3", codes::repetition(3), small},
                                    {"repetition:5", codes::repetition(5), small},
                                    {"steane", codes::steane(), medium},
                                    {"surface:3", codes::surface(3), medium},
                                    {"cube", codes::cube(), medium},
                                    {"hgp_rep2", small_hgp(), small}};
  for (const auto& c : cases) {
    for (const auto& a : c.archs) {
      SuiteEntry e;
      e.code_name = c.name;
      e.code = c.code;
      e.arch = generate_arch(a);
      entries.push_back(std::move(e));
    }
  }
  return entries;
}

Verdict criterion6() {
  int compiled = 0, failures = 0, skipped = 0;
  std::set<std::string> codes_seen, codes_compiled;
  std::ostringstream notes;
  for (auto& e : suite()) {
    codes_seen.insert(e.code_name);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const CompileOutput out = compile_partitioned(e.code, e.arch, limits(60, 60));
      const auto report = full_oracle(out, e.code);
      e.compiled = true;
      e.mapping = out.segments.front().stage1.solution;
      ++compiled;
      codes_compiled.insert(e.code_name);
      if (!report.ok()) {
        ++failures;
        notes << " [FAIL " << e.code_name << "/" << e.arch.name() << "]";
      }
      std::cerr << "  " << e.code_name << " on " << e.arch.name() << ": " << describe(out, seconds_since(t0))
                << " oracle=" << (report.ok() ? "PASS" : "FAIL") << '\n';
    } catch (const InfeasibleError& ex) {
      e.skipped = "infeasible";
      ++skipped;
      std::cerr << "  " << e.code_name << " on " << e.arch.name() << ": infeasible\n";
    } catch (const TimeoutError& ex) {
      e.skipped = "no mapping within the time limit";
      ++skipped;
      std::cerr << "  " << e.code_name << " on " << e.arch.name() << ": no mapping within 60 s\n";
    }
  }
  Verdict v;
  v.pass = failures == 0 && codes_compiled == codes_seen;
  v.detail = std::to_string(compiled) + " compiled, " + std::to_string(skipped) + " skipped, " +
             std::to_string(failures) + " oracle failures; codes compiled " + std::to_string(codes_compiled.size()) +
             "/" + std::to_string(codes_seen.size()) + notes.str();
  return v;
}

Verdict criterion7() {
  if (std::none_of(suite().begin(), suite().end(), [](const SuiteEntry& e) { return e.compiled; })) criterion6();
  const std::vector<std::pair<const char*, bool Stage2Families::*>> families{
      {"single_root", &Stage2Families::single_root},
      {"single_parent", &Stage2Families::single_parent},
      {"prepared_control", &Stage2Families::prepared_control},
      {"anticommute_parity", &Stage2Families::anticommute_parity},
      {"shared_serialization", &Stage2Families::shared_serialization},
      {"phase_order", &Stage2Families::phase_order}};
  Verdict v{true, ""};
  for (auto [name, member] : families) {
    Stage2Config cfg;
    cfg.families.*member = false;
    cfg.search = DepthSearch::Linear;
    std::string caught_on;
    for (const auto& e : suite()) {
      if (!e.compiled) continue;
      cfg.deadline = Deadline::in_seconds(60);
      const auto r = minimize_depth(enumerate_operations(e.mapping, e.code, e.arch), cfg);
      const Circuit c = build_circuit(r.circuit, e.code, e.arch);
      if (!verify_syndrome_extraction(c, e.code, e.mapping).ok()) {
        caught_on = e.code_name + "/" + e.arch.name();
        break;
      }
    }
    v.detail += std::string(v.detail.empty() ? "" : "; ") + name + " off -> " + (caught_on.empty() ? "NOT caught" : caught_on);
    if (caught_on.empty()) v.pass = false;
  }
  return v;
}

// ---- criterion 8 ----

// Every decoded model of the hard clauses at the given L, by blocking clauses over the
// placement variables. Empty optional result when there are more than `cap`.
std::set<std::string> sat_solutions(const StabilizerCode& code, const CouplingGraph& g, const std::vector<int>& L,
                                    std::size_t cap) {
  Stage1Config cfg;
  cfg.L = L;
  const Stage1Encoding enc = encode_stage1(code, g, cfg);
  const auto& vars = enc.wcnf.hard.vars;
  std::vector<int> projection;
  for (int v = 1; v <= vars.num_vars(); ++v) {
    const std::string t = vars.tag(v);
    if (t.rfind("map(", 0) == 0 || t.rfind("anc(", 0) == 0 || t.rfind("cp(", 0) == 0) projection.push_back(v);
  }
  sat::Solver solver;
  solver.add_formula(enc.wcnf.hard);
  std::set<std::string> out;
  while (out.size() <= cap && solver.solve() == sat::SatStatus::Sat) {
    const sat::Model m = solver.model();
    sat::Model trimmed(vars.num_vars());
    for (int v = 1; v <= vars.num_vars(); ++v) trimmed.set(v, m.value(v));
    out.insert(mapping_to_json(decode_stage1(trimmed, vars, code), code).dump());
    std::vector<sat::Lit> block;
    for (int v : projection) block.push_back(m.value(v) ? -v : v);
    solver.add_clause(block);
  }
  return out;
}

Stabilizer stab(std::initializer_list<std::pair<int, char>> terms, std::string label) {
  std::vector<std::pair<int, Pauli>> out;
  for (auto [q, c] : terms) out.emplace_back(q, parse_pauli(std::string(1, c)));
  return Stabilizer::make(out, std::move(label));
}

Verdict criterion8() {
  std::vector<StabilizerCode> codes{
      {"zz", 2, {stab({{0, 'Z'}, {1, 'Z'}}, "a")}},
      {"xyz", 3, {stab({{0, 'X'}, {1, 'Y'}, {2, 'Z'}}, "a")}},
      {"xxxx", 4, {stab({{0, 'X'}, {1, 'X'}, {2, 'X'}, {3, 'X'}}, "a")}},
      {"xx_zz", 2, {stab({{0, 'X'}, {1, 'X'}}, "x"), stab({{0, 'Z'}, {1, 'Z'}}, "z")}},
      {"chain", 3, {stab({{0, 'Z'}, {1, 'Z'}}, "a"), stab({{1, 'Z'}, {2, 'Z'}}, "b")}},
      {"xxx_zz", 3, {stab({{0, 'X'}, {1, 'X'}, {2, 'X'}}, "x"), stab({{1, 'Z'}, {2, 'Z'}}, "z")}},
  };
  std::vector<CouplingGraph> graphs{generate_arch("path:3"),       generate_arch("path:5"),
                                    generate_arch("square:2x2"),   generate_arch("square:2x3"),
                                    generate_arch("square:2x4"),   generate_arch("heavy_square:2x2"),
                                    remove_defects(generate_arch("square:2x4"), {5}),
                                    CouplingGraph("star", {0, 1, 2, 3, 4, 5}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {4, 5}})};
  int instances = 0, feasible = 0, depth_checks = 0, set_checks = 0, mismatches = 0;
  std::ostringstream notes;
  for (const auto& code : codes) {
    for (const auto& g : graphs) {
      if (g.num_nodes() > 8 || code.num_stabilizers() > 2) continue;
      ++instances;
      const std::string where = code.name + "/" + g.name();
      const auto want = oracle::best_mapping(code, g);
      Stage1Result got;
      bool solved = true;
      try {
        got = solve_stage1(code, g);
      } catch (const InfeasibleError&) {
        solved = false;
      }
      if (solved != want.found) {
        ++mismatches;
        notes << " [" << where << ": feasibility differs]";
        continue;
      }
      if (!solved) continue;
      ++feasible;
      const auto obj = oracle::objective(got.solution);
      if (obj != want.best || got.L != want.L || !got.optimal) {
        ++mismatches;
        notes << " [" << where << ": stage-1 objective " << obj.first << "/" << obj.second << " vs " << want.best.first
              << "/" << want.best.second << "]";
        continue;
      }
      const auto all = oracle::all_mappings(code, g, want.L);
      if (all.size() <= 5000) {
        std::set<std::string> brute;
        for (const auto& m : all) brute.insert(mapping_to_json(m, code).dump());
        ++set_checks;
        if (sat_solutions(code, g, want.L, 5000) != brute) {
          ++mismatches;
          notes << " [" << where << ": solution sets differ]";
        }
      }
      // the solver's mapping plus every other optimal mapping, up to a handful
      std::vector<MappingSolution> maps{got.solution};
      for (const auto& m : all) {
        if (maps.size() >= 4) break;
        if (oracle::objective(m) == want.best && !(m == got.solution)) maps.push_back(m);
      }
      for (const auto& m : maps) {
        const auto r = minimize_depth(enumerate_operations(m, code, g));
        const int brute = oracle::min_depth(m, code, g, r.circuit.depth);
        ++depth_checks;
        if (brute != r.circuit.depth || !r.optimal) {
          ++mismatches;
          notes << " [" << where << ": depth " << r.circuit.depth << " vs exhaustive " << brute << "]";
        }
      }
    }
  }
  Verdict v;
  v.pass = mismatches == 0 && feasible > 0;
  v.detail = std::to_string(instances) + " instances (" + std::to_string(feasible) + " feasible), " +
             std::to_string(set_checks) + " solution-set comparisons, " + std::to_string(depth_checks) +
             " depth comparisons, " + std::to_string(mismatches) + " mismatches" +
             notes.str();
  return v;
}

// ---- criterion 9 ----

Verdict criterion9() {
  Verdict v{true, ""};
  for (auto [code_spec, arch_spec] : {std::pair{"surface:3", "square:5x5"}, std::pair{"repetition:5", "heavy_hexagon:2x4"}}) {
    const auto code = load_code_source(code_spec);
    const auto arch = load_arch_source(arch_spec);
    const auto out = compile_partitioned(code, arch, limits(120, 120));
    Stage1Config s1;
    s1.deadline = Deadline::in_seconds(120);
    const auto m = solve_stage1(code, arch, s1);
    Stage2Config s2;
    s2.deadline = Deadline::in_seconds(120);
    const auto r = minimize_depth(enumerate_operations(m.solution, code, arch), s2);
    const bool same = out.circuit == build_circuit(r.circuit, code, arch);
    // only meaningful when both runs finished without a deadline cutting in
    if (!same) v.pass = false;
    v.detail += std::string(code_spec) + " k=1 " + (same ? "identical" : "DIFFERS") + "; ";
  }
  const auto code = codes::surface(9);
  const auto arch = generate_arch("square:17x17");
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto out = compile_partitioned(code, arch, limits(7200, 7200, 8));
    const double secs = seconds_since(t0);
    const auto report = verify_compiled(out);
    const int extra = enc_dec_cnots(out.circuit);
    v.detail += "surface:9 on square:17x17 k=8: enc/dec CNOTs=" + std::to_string(extra) +
                " swaps=" + std::to_string(out.metrics.swap_count) + " depth=" + std::to_string(out.metrics.depth) +
                " segments=" + std::to_string(out.segments.size()) + " oracle=" + (report.ok() ? "PASS" : "FAIL") +
                " time=" + fmt(secs) + "s";
    if (!(report.ok() && extra == 0 && secs <= 7200)) v.pass = false;
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail += std::string("surface:9 k=8 failed: ") + e.what();
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  auto want = [&](int n) { return only.empty() || only.count(n) > 0; };

  const std::vector<std::pair<int, std::function<Verdict()>>> criteria{
      {1, [] {
         return single_compile("surface:3", "square:5x5", {}, [](const CompileOutput& o) {
           return o.metrics.extra_cnots == 0 && o.metrics.depth == 8;
         });
       }},
      {2, [] {
         return single_compile("surface:3", "heavy_square:3x4", {}, [](const CompileOutput& o) {
           return o.metrics.extra_cnots <= 24 && o.metrics.depth <= 20;
         });
       }},
      {3, [] {
         return single_compile("surface:5", "square:9x9", {}, [](const CompileOutput& o) {
           return o.metrics.extra_cnots == 0 && o.metrics.depth == 8;
         });
       }},
      {4, [] {
         // centre of the 5x5 grid removed; feasibility and the oracle decide, 12 extra CNOTs is a soft target
         Verdict v = single_compile("surface:3", "square:5x5", {12}, [](const CompileOutput&) { return true; });
         const auto at = v.detail.find("extra_cnots=");
         if (at != std::string::npos) {
           const int extra = std::atoi(v.detail.c_str() + at + 12);
           v.detail += extra <= 12 ? " (soft target <=12 met)" : " (soft target <=12 missed)";
         }
         return v;
       }},
      {5, [] {
         Verdict v{true, ""};
         const auto code = codes::surface(3);
         const auto arch = generate_arch("square:5x5");
         for (bool faithful : {false, true}) {
           Stage1Config cfg;
           cfg.faithful_bft = faithful;
           const auto enc = encode_stage1(code, arch, cfg);
           const double vars = enc.wcnf.hard.num_vars(), hard = static_cast<double>(enc.wcnf.hard.num_clauses());
           const bool ok = vars >= 6380 / 2.0 && vars <= 6380 * 2.0 && hard >= 15100 / 2.0 && hard <= 15100 * 2.0;
           if (!ok) v.pass = false;
           v.detail += std::string(faithful ? "per-root" : "root-election") + ": vars=" + std::to_string(int(vars)) +
                       " hard=" + std::to_string(int(hard)) + (faithful ? "" : "; ");
         }
         v.detail += " (reference 6380 / 15100)";
         return v;
       }},
      {6, criterion6},
      {7, criterion7},
      {8, criterion8},
      {9, criterion9},
  };

  bool all = true;
  for (const auto& [n, run] : criteria) {
    if (!want(n)) continue;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    all = all && v.pass;
    std::cout << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << " - " << v.detail << std::endl;
  }
  return all ? 0 : 1;
}
