#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bridgesynth/partition.hpp"
#include "json.hpp"

namespace bridgesynth {

enum ExitCode : int { kExitOk = 0, kExitVerifyFail = 1, kExitInfeasible = 2, kExitTimeout = 3, kExitBadInput = 64 };

struct RunConfig {
  std::string code;  // generator spec ("surface:3") or JSON file
  std::string arch;  // generator spec ("square:5x5") or JSON file
  std::vector<int> defects;
  double stage1_seconds = 7200;
  double stage2_seconds = 7200;
  std::uint64_t w1 = 1;
  std::uint64_t w2 = 1;
  std::uint64_t w3 = 1;
  bool lexicographic = true;
  std::vector<int> L;  // empty: stabilizer weights
  int L_cap = 0;
  DepthSearch search = DepthSearch::Binary;
  bool mirror_decode = false;
  bool faithful_bft = false;
  int partition = 1;
  std::uint64_t seed = 0;
  std::string solver;   // empty: environment or internal; "internal"; or a command line
  std::string out_dir;  // empty: no files

  /// Throws ParameterError on non-positive limits or k < 1.
  void validate() const;
};

/// A path to an existing file is read as JSON, anything else goes to the generator.
StabilizerCode load_code_source(const std::string& source);
CouplingGraph load_arch_source(const std::string& source, const std::vector<int>& defects = {});

CompileConfig make_compile_config(const RunConfig& cfg);

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  CompileOutput output;
  VerifyReport verify;
  nlohmann::json summary;  // metrics, optimality flags, verification verdict
};

/// Loads, compiles, verifies and writes mapping.json, plan.json, circuit.json,
/// circuit.stim and metrics.json into out_dir. Errors become exit codes.
RunResult run_compile(const RunConfig& cfg);

/// Syndrome-extraction check plus single-qubit error injection on every placed data qubit.
/// `mapping` is either one mapping or a plan with per-segment mappings.
VerifyReport verify_artifacts(const Circuit& circuit, const StabilizerCode& code, const nlohmann::json& mapping);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bridgesynth
