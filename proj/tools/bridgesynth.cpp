#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bridgesynth/driver.hpp"
#include "bridgesynth/errors.hpp"
#include "bridgesynth/sat/formula.hpp"

using namespace bridgesynth;

namespace {

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_text_file(path, text);
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const TimeoutError& e) {
    std::cerr << "timeout: " << e.what() << '\n';
    return kExitTimeout;
  } catch (const ParameterError& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const UnsupportedGateError& e) {
    std::cerr << "unsupported gate: " << e.what() << '\n';
    return kExitBadInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Syndrome-extraction circuit compiler for sparse qubit lattices"};
  app.require_subcommand(1);
  int status = 0;

  RunConfig run;
  std::string search = "binary";
  bool no_lex = false;
  auto* compile = app.add_subcommand("compile", "Map, schedule, verify and write artifacts");
  compile->add_option("--code", run.code, "Code generator spec (surface:3, steane, repetition:5, cube) or JSON file")->required();
  compile->add_option("--arch", run.arch, "Lattice spec (square:5x5, hexagon:3x4, heavy_square:3x3, heavy_hexagon:3x5, path:8) or JSON file")->required();
  compile->add_option("--defects", run.defects, "Node ids to remove");
  compile->add_option("--stage1-time", run.stage1_seconds, "Mapping time limit in seconds");
  compile->add_option("--stage2-time", run.stage2_seconds, "Scheduling time limit in seconds");
  compile->add_option("--w1", run.w1, "Bridge size weight");
  compile->add_option("--w2", run.w2, "Conflict weight");
  compile->add_option("--w3", run.w3, "Retention weight");
  compile->add_flag("--no-lexicographic", no_lex, "Use the weights as given instead of strata");
  compile->add_option("--L", run.L, "Initial bridge size limit per stabilizer");
  compile->add_option("--L-cap", run.L_cap, "Escalation ceiling for bridge size limits");
  compile->add_option("--search", search, "Depth search: binary or linear")->check(CLI::IsMember({"binary", "linear"}));
  compile->add_flag("--mirror-decode", run.mirror_decode, "Decode along the encode tree");
  compile->add_flag("--faithful-bft", run.faithful_bft, "Per-start-vertex connectivity encoding");
  compile->add_option("--partition", run.partition, "Number of stabilizer subsets");
  compile->add_option("--seed", run.seed, "Partition tie-break seed");
  compile->add_option("--solver", run.solver, "MaxSAT command line, or 'internal'");
  compile->add_option("--out", run.out_dir, "Artifact directory");
  compile->callback([&] {
    run.lexicographic = !no_lex;
    run.search = search == "linear" ? DepthSearch::Linear : DepthSearch::Binary;
    const RunResult res = run_compile(run);
    if (!res.message.empty()) std::cerr << res.message << '\n';
    if (!res.summary.is_null()) {
      std::cout << res.summary.dump(2) << '\n';
      if (!res.summary.value("optimal", false)) std::cout << "non-optimal\n";
    }
    status = res.exit_code;
  });

  std::string gen_spec, gen_out;
  std::vector<int> gen_defects;
  auto* gen_code = app.add_subcommand("gen-code", "Write a generated code as JSON");
  gen_code->add_option("spec", gen_spec, "surface:3, steane, repetition:5, cube")->required();
  gen_code->add_option("--out", gen_out, "Output file (stdout when omitted)");
  gen_code->callback([&] {
    status = guarded([&] {
      emit(gen_out, code_to_json(generate_code(gen_spec)).dump(2) + "\n");
      return 0;
    });
  });

  auto* gen_arch = app.add_subcommand("gen-arch", "Write a generated lattice as JSON");
  gen_arch->add_option("spec", gen_spec, "square:5x5, hexagon:3x4, heavy_square:3x3, heavy_hexagon:3x5, path:8")->required();
  gen_arch->add_option("--defects", gen_defects, "Node ids to remove");
  gen_arch->add_option("--out", gen_out, "Output file (stdout when omitted)");
  gen_arch->callback([&] {
    status = guarded([&] {
      emit(gen_out, arch_to_json(load_arch_source(gen_spec, gen_defects)).dump(2) + "\n");
      return 0;
    });
  });

  std::string circuit_path, mapping_path, code_source;
  auto* verify = app.add_subcommand("verify", "Check a compiled circuit against its code and mapping");
  verify->add_option("--circuit", circuit_path, "Circuit JSON")->required();
  verify->add_option("--mapping", mapping_path, "Mapping or plan JSON")->required();
  verify->add_option("--code", code_source, "Code JSON or generator spec")->required();
  verify->callback([&] {
    status = guarded([&] {
      const auto report = verify_artifacts(circuit_from_json(read_json_file(circuit_path)), load_code_source(code_source),
                                           read_json_file(mapping_path));
      std::cout << report.str();
      std::cout << (report.ok() ? "PASS" : "FAIL") << '\n';
      return report.ok() ? kExitOk : kExitVerifyFail;
    });
  });

  auto* metrics = app.add_subcommand("metrics", "Print circuit metrics as JSON");
  metrics->add_option("--circuit", circuit_path, "Circuit JSON")->required();
  metrics->callback([&] {
    status = guarded([&] {
      std::cout << metrics_to_json(compute_metrics(circuit_from_json(read_json_file(circuit_path)))).dump(2) << '\n';
      return 0;
    });
  });

  std::string wcnf_out;
  auto* wcnf = app.add_subcommand("export-wcnf", "Write the mapping formula as WCNF plus a variable legend");
  wcnf->add_option("--code", run.code, "Code generator spec or JSON file")->required();
  wcnf->add_option("--arch", run.arch, "Lattice spec or JSON file")->required();
  wcnf->add_option("--defects", run.defects, "Node ids to remove");
  wcnf->add_option("--L", run.L, "Bridge size limit per stabilizer");
  wcnf->add_flag("--faithful-bft", run.faithful_bft, "Per-start-vertex connectivity encoding");
  wcnf->add_option("--out", wcnf_out, "WCNF path; the legend goes to <path>.vars")->required();
  wcnf->callback([&] {
    status = guarded([&] {
      Stage1Config cfg;
      cfg.L = run.L;
      cfg.faithful_bft = run.faithful_bft;
      const auto enc = encode_stage1(load_code_source(run.code), load_arch_source(run.arch, run.defects), cfg);
      sat::export_wcnf(enc.wcnf, wcnf_out);
      std::cout << nlohmann::json{{"vars", enc.wcnf.hard.num_vars()},
                                  {"hard", enc.wcnf.hard.num_clauses()},
                                  {"soft", enc.wcnf.soft.size()}}
                       .dump()
                << '\n';
      return 0;
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }
  return status;
}
