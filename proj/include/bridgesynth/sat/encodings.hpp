#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "bridgesynth/sat/formula.hpp"

namespace bridgesynth::sat {

void at_least_one(CnfFormula& f, std::span<const Lit> lits);
/// Pairwise for up to four literals, sequential counter above that.
void at_most_one(CnfFormula& f, std::span<const Lit> lits);
void exactly_one(CnfFormula& f, std::span<const Lit> lits);
/// Sequential counter. Throws ParameterError for k < 0; emits nothing when k >= size.
void at_most_k(CnfFormula& f, std::span<const Lit> lits, int k);
/// Satisfied iff an even number of literals is true. Empty input emits nothing.
void parity_even(CnfFormula& f, std::span<const Lit> lits);

/// Prefix ladder over one-hot time variables: result[t-1] is true iff the owner runs at a
/// step <= t. With `at_most_one` the ladder also forbids two true time variables.
/// Throws ParameterError when `time` is empty.
std::vector<Lit> build_ladder(CnfFormula& f, std::span<const Lit> time, std::string_view name,
                              bool at_most_one = true);

/// g strictly before h: time(h,t) -> u(g,t-1) for every t, and h never runs at step 1.
/// When `condition` is non-zero every clause is guarded by it.
void order_before(CnfFormula& f, std::span<const Lit> ladder_g, std::span<const Lit> time_h,
                  Lit condition = 0);

}  // namespace bridgesynth::sat
