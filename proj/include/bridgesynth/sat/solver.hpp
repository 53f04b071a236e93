#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bridgesynth/deadline.hpp"
#include "bridgesynth/sat/formula.hpp"

namespace bridgesynth::sat {

enum class SatStatus { Sat, Unsat, Timeout };

const char* status_name(SatStatus s);

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnt_literals = 0;
};

/// Incremental CDCL solver: two watched literals, VSIDS, phase saving, 1UIP learning with
/// clause minimisation, LBD-based clause deletion and Luby restarts. Clauses may be added
/// between solve calls; assumptions hold for a single call.
class Solver {
 public:
  Solver();
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  /// Returns the new variable's DIMACS id.
  int new_var();
  /// Makes sure variables 1..n exist.
  void reserve_vars(int n);
  int num_vars() const;

  /// Returns false once the clause set is known to be unsatisfiable.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) {
    return add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }
  void add_formula(const CnfFormula& f);

  SatStatus solve(std::span<const Lit> assumptions = {}, Deadline deadline = Deadline::never());

  /// Valid after solve() returned Sat.
  bool value(Lit l) const;
  Model model() const;
  /// After an Unsat answer: a subset of the assumptions that cannot hold together. Empty when
  /// the clauses alone are unsatisfiable.
  std::vector<Lit> failed_assumptions() const;

  const SolverStats& stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SatResult {
  SatStatus status = SatStatus::Timeout;
  Model model;
};

/// One-shot solve. A Sat model is re-checked against every clause with an independent
/// evaluator; a mismatch raises InternalError.
SatResult solve_sat(const CnfFormula& f, std::span<const Lit> assumptions = {},
                    Deadline deadline = Deadline::never());

}  // namespace bridgesynth::sat
