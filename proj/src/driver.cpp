#include "bridgesynth/driver.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bridgesynth/errors.hpp"

namespace bridgesynth {

void RunConfig::validate() const {
  if (!(stage1_seconds > 0) || !(stage2_seconds > 0)) throw ParameterError("time limits must be positive");
  if (partition < 1) throw ParameterError("partition count must be at least 1");
  if (L_cap < 0) throw ParameterError("L cap must not be negative");
  if (code.empty()) throw ParameterError("no code given");
  if (arch.empty()) throw ParameterError("no architecture given");
}

StabilizerCode load_code_source(const std::string& source) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) return load_code(source);
  return generate_code(source);
}

CouplingGraph load_arch_source(const std::string& source, const std::vector<int>& defects) {
  std::error_code ec;
  CouplingGraph g = std::filesystem::is_regular_file(source, ec) ? load_arch(source) : generate_arch(source);
  if (!defects.empty()) g = remove_defects(g, defects);
  return g;
}

CompileConfig make_compile_config(const RunConfig& cfg) {
  CompileConfig c;
  c.stage1.L = cfg.L;
  c.stage1.L_cap = cfg.L_cap;
  c.stage1.lexicographic = cfg.lexicographic;
  c.stage1.w1 = cfg.w1;
  c.stage1.w2 = cfg.w2;
  c.stage1.w3 = cfg.w3;
  c.stage1.faithful_bft = cfg.faithful_bft;
  c.stage1.external_command = cfg.solver;
  c.stage2.search = cfg.search;
  c.stage2.mirror_decode = cfg.mirror_decode;
  c.stage1_seconds = cfg.stage1_seconds;
  c.stage2_seconds = cfg.stage2_seconds;
  c.k = cfg.partition;
  c.seed = cfg.seed;
  return c;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError("cannot parse '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  out << text;
}

namespace {

void check_detection(const Circuit& c, const StabilizerCode& code, const MappingSolution& sol, const std::string& where,
                     VerifyReport& report) {
  std::set<int> active;
  for (const auto& s : code.stabilizers) {
    for (int q : s.data_qubits()) active.insert(q);
  }
  for (int q : active) {
    if (sol.pi[static_cast<std::size_t>(q)] < 0) continue;
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      const auto got = verify_error_detection(c, code, sol, q, p);
      const auto want = expected_flips(code, q, p);
      if (got != want) {
        std::string msg = where + std::string(1, pauli_char(p)) + " error on qubit " + std::to_string(q) + " flips";
        for (const auto& l : got) msg += " " + l;
        msg += " instead of";
        for (const auto& l : want) msg += " " + l;
        report.errors.push_back(msg);
      }
    }
  }
}

void merge(VerifyReport& into, const VerifyReport& from, const std::string& where) {
  for (const auto& e : from.errors) into.errors.push_back(where + e);
  into.checks.insert(into.checks.end(), from.checks.begin(), from.checks.end());
}

}  // namespace

VerifyReport verify_artifacts(const Circuit& circuit, const StabilizerCode& code, const nlohmann::json& mapping) {
  VerifyReport report;
  try {
    if (!mapping.contains("segments")) {
      const MappingSolution sol = mapping_from_json(mapping, code);
      merge(report, verify_syndrome_extraction(circuit, code, sol), "");
      if (report.ok()) check_detection(circuit, code, sol, "", report);
      return report;
    }
    for (const auto& error : check_circuit(circuit)) report.errors.push_back(error);
    std::set<std::string> covered;
    const auto& segs = mapping.at("segments");
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const auto& seg = segs[i];
      const int id = seg.at("segment").get<int>();
      std::vector<int> subset;
      for (const auto& label : seg.at("stabilizers")) {
        const int s = code.find(label.get<std::string>());
        if (s < 0) throw ParameterError("plan names unknown stabilizer " + label.get<std::string>());
        if (!covered.insert(label.get<std::string>()).second) throw ParameterError("stabilizer listed twice in plan");
        subset.push_back(s);
      }
      const StabilizerCode sub = sub_code(code, subset);
      const MappingSolution sol = mapping_from_json(seg.at("mapping"), sub);
      const Circuit part = segment_circuit(circuit, id);
      const std::string where = "segment " + std::to_string(id) + ": ";
      VerifyReport r = verify_syndrome_extraction(part, sub, sol);
      merge(report, r, where);
      if (r.ok()) check_detection(part, sub, sol, where, report);
    }
    if (static_cast<int>(covered.size()) != code.num_stabilizers()) report.errors.push_back("plan does not cover every stabilizer");
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed mapping: ") + e.what());
  }
  return report;
}

RunResult run_compile(const RunConfig& cfg) {
  RunResult res;
  try {
    cfg.validate();
    const StabilizerCode code = load_code_source(cfg.code);
    const auto code_report = validate_code(code);
    if (!code_report.ok()) throw ParameterError("invalid code: " + code_report.str());
    const CouplingGraph arch = load_arch_source(cfg.arch, cfg.defects);

    res.output = compile_partitioned(code, arch, make_compile_config(cfg));
    const nlohmann::json plan = plan_to_json(res.output);
    res.verify = verify_artifacts(res.output.circuit, code, plan);

    res.summary = {{"code", code.name},
                   {"arch", arch.name()},
                   {"partition", cfg.partition},
                   {"metrics", metrics_to_json(res.output.metrics)},
                   {"stage1_optimal", res.output.stage1_optimal},
                   {"stage2_optimal", res.output.stage2_optimal},
                   {"optimal", res.output.stage1_optimal && res.output.stage2_optimal},
                   {"verify", res.verify.ok() ? "PASS" : "FAIL"}};

    if (!cfg.out_dir.empty()) {
      std::filesystem::create_directories(cfg.out_dir);
      const std::string dir = cfg.out_dir + "/";
      const auto& first = res.output.segments.front();
      write_text_file(dir + "mapping.json",
                      (res.output.segments.size() == 1 ? mapping_to_json(first.stage1.solution, first.code) : plan).dump(2) + "\n");
      write_text_file(dir + "plan.json", plan.dump(2) + "\n");
      write_text_file(dir + "circuit.json", circuit_to_json(res.output.circuit).dump(2) + "\n");
      write_text_file(dir + "circuit.stim", emit_stim_text(res.output.circuit));
      write_text_file(dir + "metrics.json", res.summary.dump(2) + "\n");
    }
    if (!res.verify.ok()) {
      res.exit_code = kExitVerifyFail;
      res.message = "verification failed:\n" + res.verify.str();
    }
  } catch (const InfeasibleError& e) {
    res.exit_code = kExitInfeasible;
    res.message = std::string("infeasible: ") + e.what();
  } catch (const NoPathError& e) {
    res.exit_code = kExitInfeasible;
    res.message = std::string("no route: ") + e.what();
  } catch (const TimeoutError& e) {
    res.exit_code = kExitTimeout;
    res.message = std::string("timeout: ") + e.what();
  } catch (const ParameterError& e) {
    res.exit_code = kExitBadInput;
    res.message = std::string("bad input: ") + e.what();
  }
  return res;
}

}  // namespace bridgesynth
