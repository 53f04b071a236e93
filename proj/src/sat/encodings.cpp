#include "bridgesynth/sat/encodings.hpp"

#include <string>

#include "bridgesynth/errors.hpp"

namespace bridgesynth::sat {

void at_least_one(CnfFormula& f, std::span<const Lit> lits) { f.add_clause(lits); }

void at_most_one(CnfFormula& f, std::span<const Lit> lits) {
  const std::size_t n = lits.size();
  if (n <= 1) return;
  if (n <= 4) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) f.add_clause({-lits[i], -lits[j]});
    }
    return;
  }
  // s_i: some literal among 0..i is true.
  Lit prev = f.new_aux("amo");
  f.add_clause({-lits[0], prev});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Lit cur = f.new_aux("amo");
    f.add_clause({-lits[i], cur});
    f.add_clause({-prev, cur});
    f.add_clause({-lits[i], -prev});
    prev = cur;
  }
  f.add_clause({-lits[n - 1], -prev});
}

void exactly_one(CnfFormula& f, std::span<const Lit> lits) {
  if (lits.empty()) throw ParameterError("exactly_one over no literals");
  at_least_one(f, lits);
  at_most_one(f, lits);
}

void at_most_k(CnfFormula& f, std::span<const Lit> lits, int k) {
  if (k < 0) throw ParameterError("at_most_k with negative bound");
  const int n = static_cast<int>(lits.size());
  if (k >= n) return;
  if (k == 0) {
    for (Lit l : lits) f.add_clause({-l});
    return;
  }
  if (k == 1) {
    at_most_one(f, lits);
    return;
  }
  // s[i][j]: at least j+1 of lits[0..i] are true (Sinz).
  std::vector<std::vector<Lit>> s(static_cast<std::size_t>(n - 1), std::vector<Lit>(static_cast<std::size_t>(k)));
  for (auto& row : s) {
    for (auto& v : row) v = f.new_aux("atmostk");
  }
  f.add_clause({-lits[0], s[0][0]});
  for (int j = 1; j < k; ++j) f.add_clause({-s[0][static_cast<std::size_t>(j)]});
  for (int i = 1; i < n - 1; ++i) {
    const auto& cur = s[static_cast<std::size_t>(i)];
    const auto& prev = s[static_cast<std::size_t>(i - 1)];
    f.add_clause({-lits[static_cast<std::size_t>(i)], cur[0]});
    f.add_clause({-prev[0], cur[0]});
    for (int j = 1; j < k; ++j) {
      f.add_clause({-lits[static_cast<std::size_t>(i)], -prev[static_cast<std::size_t>(j - 1)],
                    cur[static_cast<std::size_t>(j)]});
      f.add_clause({-prev[static_cast<std::size_t>(j)], cur[static_cast<std::size_t>(j)]});
    }
    f.add_clause({-lits[static_cast<std::size_t>(i)], -prev[static_cast<std::size_t>(k - 1)]});
  }
  f.add_clause({-lits[static_cast<std::size_t>(n - 1)], -s[static_cast<std::size_t>(n - 2)][static_cast<std::size_t>(k - 1)]});
}

void parity_even(CnfFormula& f, std::span<const Lit> lits) {
  if (lits.empty()) return;
  if (lits.size() == 1) {
    f.add_clause({-lits[0]});
    return;
  }
  // acc_i = lits[0] xor ... xor lits[i]; require the last accumulator false.
  Lit acc = lits[0];
  for (std::size_t i = 1; i < lits.size(); ++i) {
    const Lit a = acc;
    const Lit b = lits[i];
    if (i + 1 == lits.size()) {
      f.add_clause({-a, b});
      f.add_clause({a, -b});
      return;
    }
    const Lit x = f.new_aux("xor");
    f.add_clause({-x, a, b});
    f.add_clause({-x, -a, -b});
    f.add_clause({x, -a, b});
    f.add_clause({x, a, -b});
    acc = x;
  }
}

std::vector<Lit> build_ladder(CnfFormula& f, std::span<const Lit> time, std::string_view name,
                              bool at_most_one) {
  if (time.empty()) throw ParameterError("ladder over an empty horizon");
  const std::size_t T = time.size();
  std::vector<Lit> u(T);
  for (std::size_t t = 0; t < T; ++t) {
    u[t] = f.new_var("u(" + std::string(name) + "," + std::to_string(t + 1) + ")");
    f.add_clause({-time[t], u[t]});
    if (t == 0) {
      f.add_clause({-u[0], time[0]});
    } else {
      f.add_clause({-u[t - 1], u[t]});
      f.add_clause({-u[t], u[t - 1], time[t]});
      if (at_most_one) f.add_clause({-time[t], -u[t - 1]});
    }
  }
  return u;
}

void order_before(CnfFormula& f, std::span<const Lit> ladder_g, std::span<const Lit> time_h,
                  Lit condition) {
  if (ladder_g.empty() || time_h.empty()) throw ParameterError("ordering over an empty horizon");
  if (ladder_g.size() != time_h.size()) throw InternalError("ladder and time horizons differ");
  auto emit = [&](std::initializer_list<Lit> lits) {
    if (condition == 0) {
      f.add_clause(lits);
    } else {
      std::vector<Lit> c(lits);
      c.push_back(-condition);
      f.add_clause(c);
    }
  };
  emit({-time_h[0]});
  for (std::size_t t = 1; t < time_h.size(); ++t) emit({-time_h[t], ladder_g[t - 1]});
}

}  // namespace bridgesynth::sat
