#pragma once

#include <cstdint>
#include <string>

#include "bridgesynth/deadline.hpp"
#include "bridgesynth/sat/formula.hpp"

namespace bridgesynth::sat {

/// Environment variable naming an external WCNF solver command. The command receives the
/// WCNF path as its last argument and must print a "v ..." model line.
inline constexpr const char* kExternalSolverEnv = "BRIDGESYNTH_MAXSAT_CMD";

enum class MaxSatStatus {
  Optimal,     // cost proven minimal
  Feasible,    // model found, optimality not proven before the deadline
  Unsat,       // hard clauses unsatisfiable
  Timeout,     // no model before the deadline
};

const char* status_name(MaxSatStatus s);

struct MaxSatOptions {
  Deadline deadline = Deadline::never();
  /// Overrides the environment variable when non-empty; "internal" forces the built-in
  /// engine.
  std::string external_command;
};

struct MaxSatResult {
  MaxSatStatus status = MaxSatStatus::Timeout;
  Model model;
  std::uint64_t cost = 0;
  int sat_calls = 0;
};

/// Stratified SAT-UNSAT search. Soft clauses are grouped by weight into strata,
/// merging adjacent weights whenever a heavier class does not dominate the total weight
/// below it, and each stratum is minimised with a weighted sequential counter before the
/// next one is considered. Per stratum a disjoint-core lower bound is probed first, then the
/// bound is lowered one step at a time from the best model. The returned cost is recomputed from the original soft clauses.
MaxSatResult solve_maxsat(const WcnfFormula& f, const MaxSatOptions& options = {});

/// Runs `command <wcnf>` and parses its model. Throws ParameterError if the command fails
/// or prints no model.
MaxSatResult solve_maxsat_external(const WcnfFormula& f, const std::string& command,
                                   const Deadline& deadline);

}  // namespace bridgesynth::sat
