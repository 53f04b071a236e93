#include "bridgesynth/sat/solver.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "bridgesynth/errors.hpp"

namespace bridgesynth::sat {

const char* status_name(SatStatus s) {
  switch (s) {
    case SatStatus::Sat: return "SAT";
    case SatStatus::Unsat: return "UNSAT";
    case SatStatus::Timeout: return "TIMEOUT";
  }
  return "?";
}

namespace {

// Internal literal: 2*var + sign, var 0-based.
using ILit = std::uint32_t;
using CRef = std::uint32_t;
constexpr CRef kNoReason = std::numeric_limits<CRef>::max();
constexpr ILit kNoLit = std::numeric_limits<ILit>::max();
constexpr std::uint8_t kFalse = 0;
constexpr std::uint8_t kTrue = 1;
constexpr std::uint8_t kUndef = 2;

inline ILit neg(ILit p) { return p ^ 1U; }
inline std::uint32_t var(ILit p) { return p >> 1; }
inline ILit to_ilit(Lit l) { return l > 0 ? 2U * static_cast<ILit>(l - 1) : 2U * static_cast<ILit>(-l - 1) + 1U; }

struct Watcher {
  CRef cref;
  ILit blocker;
};

double luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

}  // namespace

struct Solver::Impl {
  // Clause arena: [size][flags: bit0 learnt, bit1 deleted, bit2 moved, bits 3.. lbd][activity][lits...]
  std::vector<std::uint32_t> arena;
  std::vector<CRef> clauses;
  std::vector<CRef> learnts;

  std::vector<std::vector<Watcher>> watches;
  std::vector<std::uint8_t> assigns;
  std::vector<int> level;
  std::vector<CRef> reason;
  std::vector<ILit> trail;
  std::vector<std::size_t> trail_lim;
  std::size_t qhead = 0;

  std::vector<double> activity;
  double var_inc = 1.0;
  float cla_inc = 1.0F;
  std::vector<std::uint8_t> polarity;
  std::vector<std::uint8_t> seen;
  std::vector<int> heap;
  std::vector<int> heap_index;

  std::vector<ILit> analyze_stack;
  std::vector<ILit> analyze_toclear;
  std::vector<std::uint32_t> level_stamp;
  std::uint32_t stamp = 0;

  std::vector<bool> model;
  std::vector<ILit> core;  // assumptions behind the last Unsat answer
  bool ok = true;
  SolverStats stats;
  std::uint64_t next_reduce = 2000;
  std::uint64_t num_reduces = 0;

  // ---- basic accessors ----
  std::uint32_t size(CRef c) const { return arena[c]; }
  bool learnt(CRef c) const { return (arena[c + 1] & 1U) != 0; }
  bool deleted(CRef c) const { return (arena[c + 1] & 2U) != 0; }
  std::uint32_t lbd(CRef c) const { return arena[c + 1] >> 3; }
  float& act(CRef c) { return *reinterpret_cast<float*>(&arena[c + 2]); }
  ILit* lits(CRef c) { return reinterpret_cast<ILit*>(&arena[c + 3]); }

  std::uint8_t value(ILit p) const {
    const std::uint8_t a = assigns[var(p)];
    return a == kUndef ? kUndef : static_cast<std::uint8_t>(a ^ (p & 1U));
  }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }
  int nvars() const { return static_cast<int>(assigns.size()); }

  // ---- variable heap (max-activity) ----
  bool heap_less(int a, int b) const { return activity[static_cast<std::size_t>(a)] > activity[static_cast<std::size_t>(b)]; }
  void heap_up(std::size_t i) {
    const int v = heap[i];
    while (i > 0) {
      const std::size_t parent = (i - 1) >> 1;
      if (!heap_less(v, heap[parent])) break;
      heap[i] = heap[parent];
      heap_index[static_cast<std::size_t>(heap[i])] = static_cast<int>(i);
      i = parent;
    }
    heap[i] = v;
    heap_index[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  void heap_down(std::size_t i) {
    const int v = heap[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap.size()) break;
      if (child + 1 < heap.size() && heap_less(heap[child + 1], heap[child])) ++child;
      if (!heap_less(heap[child], v)) break;
      heap[i] = heap[child];
      heap_index[static_cast<std::size_t>(heap[i])] = static_cast<int>(i);
      i = child;
    }
    heap[i] = v;
    heap_index[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  void heap_insert(int v) {
    if (heap_index[static_cast<std::size_t>(v)] >= 0) return;
    heap.push_back(v);
    heap_up(heap.size() - 1);
  }
  int heap_pop() {
    const int top = heap.front();
    heap_index[static_cast<std::size_t>(top)] = -1;
    const int last = heap.back();
    heap.pop_back();
    if (!heap.empty()) {
      heap[0] = last;
      heap_index[static_cast<std::size_t>(last)] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump_var(std::uint32_t v) {
    if ((activity[v] += var_inc) > 1e100) {
      for (auto& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    const int idx = heap_index[v];
    if (idx >= 0) heap_up(static_cast<std::size_t>(idx));
  }
  void bump_clause(CRef c) {
    if ((act(c) += cla_inc) > 1e20F) {
      for (CRef l : learnts) act(l) *= 1e-20F;
      cla_inc *= 1e-20F;
    }
  }

  int add_var() {
    const int v = nvars();
    assigns.push_back(kUndef);
    level.push_back(0);
    reason.push_back(kNoReason);
    activity.push_back(0.0);
    polarity.push_back(0);
    seen.push_back(0);
    heap_index.push_back(-1);
    watches.emplace_back();
    watches.emplace_back();
    level_stamp.push_back(0);
    heap_insert(v);
    return v;
  }

  CRef alloc(const std::vector<ILit>& ls, bool is_learnt, std::uint32_t lbd_value) {
    const CRef c = static_cast<CRef>(arena.size());
    arena.push_back(static_cast<std::uint32_t>(ls.size()));
    arena.push_back((is_learnt ? 1U : 0U) | (lbd_value << 3));
    arena.push_back(0);
    act(c) = 0.0F;
    for (ILit p : ls) arena.push_back(p);
    return c;
  }

  void attach(CRef c) {
    ILit* ls = lits(c);
    watches[neg(ls[0])].push_back({c, ls[1]});
    watches[neg(ls[1])].push_back({c, ls[0]});
  }

  void enqueue(ILit p, CRef from) {
    const std::uint32_t v = var(p);
    assigns[v] = static_cast<std::uint8_t>((p & 1U) ? kFalse : kTrue);
    level[v] = decision_level();
    reason[v] = from;
    trail.push_back(p);
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail.size(); i-- > trail_lim[static_cast<std::size_t>(lvl)];) {
      const std::uint32_t v = var(trail[i]);
      polarity[v] = assigns[v];
      assigns[v] = kUndef;
      reason[v] = kNoReason;
      heap_insert(static_cast<int>(v));
    }
    trail.resize(trail_lim[static_cast<std::size_t>(lvl)]);
    trail_lim.resize(static_cast<std::size_t>(lvl));
    qhead = trail.size();
  }

  CRef propagate() {
    CRef confl = kNoReason;
    while (qhead < trail.size()) {
      const ILit p = trail[qhead++];
      const ILit false_lit = neg(p);
      auto& ws = watches[p];
      ++stats.propagations;
      std::size_t i = 0;
      std::size_t j = 0;
      const std::size_t n = ws.size();
      while (i < n) {
        const Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        ILit* c = lits(w.cref);
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        const ILit first = c[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        const std::uint32_t sz = size(w.cref);
        bool moved = false;
        for (std::uint32_t k = 2; k < sz; ++k) {
          if (value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches[neg(c[1])].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          confl = w.cref;
          qhead = trail.size();
          while (i < n) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (confl != kNoReason) break;
    }
    return confl;
  }

  std::uint32_t abstract_level(std::uint32_t v) const { return 1U << (static_cast<std::uint32_t>(level[v]) & 31U); }

  bool lit_redundant(ILit p, std::uint32_t abstract_levels) {
    analyze_stack.clear();
    analyze_stack.push_back(p);
    const std::size_t top = analyze_toclear.size();
    while (!analyze_stack.empty()) {
      const CRef c = reason[var(analyze_stack.back())];
      analyze_stack.pop_back();
      ILit* ls = lits(c);
      const std::uint32_t sz = size(c);
      for (std::uint32_t i = 1; i < sz; ++i) {
        const ILit q = ls[i];
        const std::uint32_t v = var(q);
        if (!seen[v] && level[v] > 0) {
          if (reason[v] != kNoReason && (abstract_level(v) & abstract_levels) != 0) {
            seen[v] = 1;
            analyze_stack.push_back(q);
            analyze_toclear.push_back(q);
          } else {
            for (std::size_t k = top; k < analyze_toclear.size(); ++k) seen[var(analyze_toclear[k])] = 0;
            analyze_toclear.resize(top);
            return false;
          }
        }
      }
    }
    return true;
  }

  void analyze(CRef confl, std::vector<ILit>& out, int& bt_level, std::uint32_t& out_lbd) {
    int path = 0;
    ILit p = kNoLit;
    out.clear();
    out.push_back(kNoLit);
    std::size_t index = trail.size();
    do {
      if (learnt(confl)) bump_clause(confl);
      ILit* ls = lits(confl);
      const std::uint32_t sz = size(confl);
      for (std::uint32_t j = (p == kNoLit) ? 0 : 1; j < sz; ++j) {
        const ILit q = ls[j];
        const std::uint32_t v = var(q);
        if (!seen[v] && level[v] > 0) {
          bump_var(v);
          seen[v] = 1;
          if (level[v] >= decision_level()) {
            ++path;
          } else {
            out.push_back(q);
          }
        }
      }
      while (!seen[var(trail[--index])]) {
      }
      p = trail[index];
      confl = reason[var(p)];
      seen[var(p)] = 0;
      --path;
    } while (path > 0);
    out[0] = neg(p);

    analyze_toclear.assign(out.begin(), out.end());
    std::uint32_t abstract_levels = 0;
    for (std::size_t i = 1; i < out.size(); ++i) abstract_levels |= abstract_level(var(out[i]));
    std::size_t keep = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (reason[var(out[i])] == kNoReason || !lit_redundant(out[i], abstract_levels)) out[keep++] = out[i];
    }
    out.resize(keep);
    for (ILit q : analyze_toclear) seen[var(q)] = 0;
    stats.learnt_literals += out.size();

    if (out.size() == 1) {
      bt_level = 0;
    } else {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < out.size(); ++i) {
        if (level[var(out[i])] > level[var(out[max_i])]) max_i = i;
      }
      std::swap(out[1], out[max_i]);
      bt_level = level[var(out[1])];
    }
    ++stamp;
    out_lbd = 0;
    for (ILit q : out) {
      const auto l = static_cast<std::size_t>(level[var(q)]);
      if (l >= level_stamp.size()) level_stamp.resize(l + 1, 0);
      if (level_stamp[l] != stamp) {
        level_stamp[l] = stamp;
        ++out_lbd;
      }
    }
  }

  bool locked(CRef c) {
    const ILit p = lits(c)[0];
    return reason[var(p)] == c && value(p) == kTrue;
  }

  void reduce_db() {
    ++num_reduces;
    std::vector<CRef> candidates;
    std::vector<CRef> kept;
    for (CRef c : learnts) {
      if (lbd(c) <= 2 || locked(c)) {
        kept.push_back(c);
      } else {
        candidates.push_back(c);
      }
    }
    std::sort(candidates.begin(), candidates.end(), [&](CRef a, CRef b) {
      if (lbd(a) != lbd(b)) return lbd(a) > lbd(b);
      return act(a) < act(b);
    });
    const std::size_t remove = candidates.size() / 2;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (i < remove) {
        arena[candidates[i] + 1] |= 2U;
      } else {
        kept.push_back(candidates[i]);
      }
    }
    learnts = std::move(kept);
    compact();
  }

  void compact() {
    std::vector<std::uint32_t> fresh;
    fresh.reserve(arena.size());
    auto move_clause = [&](CRef c) {
      const CRef nc = static_cast<CRef>(fresh.size());
      const std::uint32_t total = 3 + size(c);
      fresh.insert(fresh.end(), arena.begin() + c, arena.begin() + c + total);
      arena[c + 1] |= 4U;
      arena[c + 2] = nc;  // forwarding pointer
      return nc;
    };
    for (auto& c : clauses) c = move_clause(c);
    for (auto& c : learnts) c = move_clause(c);
    for (ILit p : trail) {
      const std::uint32_t v = var(p);
      if (reason[v] != kNoReason) {
        const CRef old = reason[v];
        reason[v] = (arena[old + 1] & 4U) != 0 ? arena[old + 2] : kNoReason;
      }
    }
    arena = std::move(fresh);
    for (auto& ws : watches) ws.clear();
    for (CRef c : clauses) attach(c);
    for (CRef c : learnts) attach(c);
  }

  // Collects the assumptions whose propagation falsified assumption p.
  void analyze_final(ILit p) {
    core.clear();
    core.push_back(p);
    if (decision_level() == 0) return;
    seen[var(p)] = 1;
    for (std::size_t i = trail.size(); i-- > trail_lim[0];) {
      const std::uint32_t v = var(trail[i]);
      if (!seen[v]) continue;
      if (reason[v] == kNoReason) {
        if (level[v] > 0) core.push_back(trail[i]);
      } else {
        const ILit* ls = lits(reason[v]);
        for (std::uint32_t k = 1; k < size(reason[v]); ++k) {
          if (level[var(ls[k])] > 0) seen[var(ls[k])] = 1;
        }
      }
      seen[v] = 0;
    }
    seen[var(p)] = 0;
  }

  enum class Outcome { Sat, Unsat, Restart, Timeout };

  Outcome search(std::uint64_t nof_conflicts, std::span<const ILit> assumptions, const Deadline& deadline) {
    std::uint64_t conflict_count = 0;
    std::vector<ILit> learnt_clause;
    for (;;) {
      const CRef confl = propagate();
      if (confl != kNoReason) {
        ++stats.conflicts;
        ++conflict_count;
        if (decision_level() == 0) {
          ok = false;
          return Outcome::Unsat;
        }
        int bt = 0;
        std::uint32_t clause_lbd = 0;
        analyze(confl, learnt_clause, bt, clause_lbd);
        cancel_until(bt);
        if (learnt_clause.size() == 1) {
          enqueue(learnt_clause[0], kNoReason);
        } else {
          const CRef c = alloc(learnt_clause, true, clause_lbd);
          learnts.push_back(c);
          attach(c);
          bump_clause(c);
          enqueue(learnt_clause[0], c);
        }
        var_inc *= 1.0 / 0.95;
        cla_inc *= 1.0F / 0.999F;
        if ((stats.conflicts & 255U) == 0 && deadline.expired()) return Outcome::Timeout;
        continue;
      }
      if (conflict_count >= nof_conflicts) {
        cancel_until(0);
        return Outcome::Restart;
      }
      if (stats.conflicts >= next_reduce) {
        next_reduce = stats.conflicts + 2000 + 300 * num_reduces;
        reduce_db();
      }
      ILit next = kNoLit;
      while (decision_level() < static_cast<int>(assumptions.size())) {
        const ILit p = assumptions[static_cast<std::size_t>(decision_level())];
        if (value(p) == kTrue) {
          trail_lim.push_back(trail.size());
        } else if (value(p) == kFalse) {
          analyze_final(p);
          return Outcome::Unsat;
        } else {
          next = p;
          break;
        }
      }
      if (next == kNoLit) {
        ++stats.decisions;
        if ((stats.decisions & 1023U) == 0 && deadline.expired()) return Outcome::Timeout;
        while (!heap.empty()) {
          const int v = heap_pop();
          if (assigns[static_cast<std::size_t>(v)] == kUndef) {
            next = 2U * static_cast<ILit>(v) + (polarity[static_cast<std::size_t>(v)] == kTrue ? 0U : 1U);
            break;
          }
        }
        if (next == kNoLit) {
          model.assign(assigns.size(), false);
          for (std::size_t v = 0; v < assigns.size(); ++v) model[v] = assigns[v] == kTrue;
#ifndef NDEBUG
          for (CRef c : clauses) {
            bool sat = false;
            for (std::uint32_t k = 0; k < size(c); ++k) sat = sat || value(lits(c)[k]) == kTrue;
            if (!sat) throw InternalError("model violates an original clause");
          }
          for (ILit a : assumptions) {
            if (value(a) != kTrue) throw InternalError("model violates an assumption");
          }
#endif
          return Outcome::Sat;
        }
      }
      trail_lim.push_back(trail.size());
      enqueue(next, kNoReason);
    }
  }
};

Solver::Solver() : impl_(std::make_unique<Impl>()) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

int Solver::new_var() { return impl_->add_var() + 1; }

void Solver::reserve_vars(int n) {
  while (impl_->nvars() < n) impl_->add_var();
}

int Solver::num_vars() const { return impl_->nvars(); }

bool Solver::add_clause(std::span<const Lit> input) {
  Impl& s = *impl_;
  if (!s.ok) return false;
  s.cancel_until(0);
  std::vector<ILit> ls;
  ls.reserve(input.size());
  for (Lit l : input) {
    if (l == 0) throw InternalError("literal 0 in clause");
    reserve_vars(var_of(l));
    ls.push_back(to_ilit(l));
  }
  std::sort(ls.begin(), ls.end());
  std::size_t keep = 0;
  ILit prev = kNoLit;
  for (ILit p : ls) {
    if (s.value(p) == kTrue || p == neg(prev)) return true;
    if (p != prev && s.value(p) != kFalse) ls[keep++] = p;
    prev = p;
  }
  ls.resize(keep);
  if (ls.empty()) {
    s.ok = false;
    return false;
  }
  if (ls.size() == 1) {
    s.enqueue(ls[0], kNoReason);
    s.ok = s.propagate() == kNoReason;
    return s.ok;
  }
  const CRef c = s.alloc(ls, false, 0);
  s.clauses.push_back(c);
  s.attach(c);
  return true;
}

void Solver::add_formula(const CnfFormula& f) {
  reserve_vars(f.num_vars());
  for (std::size_t i = 0; i < f.num_clauses(); ++i) add_clause(f.clause(i));
}

SatStatus Solver::solve(std::span<const Lit> assumptions, Deadline deadline) {
  Impl& s = *impl_;
  s.model.clear();
  s.core.clear();
  if (!s.ok) return SatStatus::Unsat;
  std::vector<ILit> assume;
  for (Lit l : assumptions) {
    reserve_vars(var_of(l));
    assume.push_back(to_ilit(l));
  }
  s.cancel_until(0);
  SatStatus result = SatStatus::Timeout;
  for (int restart = 0; !deadline.expired(); ++restart) {
    const auto budget = static_cast<std::uint64_t>(luby(2.0, restart) * 100.0);
    const auto outcome = s.search(budget, assume, deadline);
    if (outcome == Impl::Outcome::Sat) {
      result = SatStatus::Sat;
      break;
    }
    if (outcome == Impl::Outcome::Unsat) {
      result = SatStatus::Unsat;
      break;
    }
    if (outcome == Impl::Outcome::Timeout) break;
    ++s.stats.restarts;
  }
  s.cancel_until(0);
  return result;
}

bool Solver::value(Lit l) const {
  const bool v = impl_->model.at(static_cast<std::size_t>(var_of(l) - 1));
  return l > 0 ? v : !v;
}

Model Solver::model() const {
  Model m(num_vars());
  for (int v = 1; v <= num_vars(); ++v) m.set(v, impl_->model.at(static_cast<std::size_t>(v - 1)));
  return m;
}

std::vector<Lit> Solver::failed_assumptions() const {
  std::vector<Lit> out;
  for (ILit p : impl_->core) {
    const Lit l = static_cast<Lit>(var(p)) + 1;
    out.push_back((p & 1U) ? -l : l);
  }
  return out;
}

const SolverStats& Solver::stats() const { return impl_->stats; }

SatResult solve_sat(const CnfFormula& f, std::span<const Lit> assumptions, Deadline deadline) {
  Solver solver;
  solver.add_formula(f);
  SatResult result;
  result.status = solver.solve(assumptions, deadline);
  if (result.status == SatStatus::Sat) {
    result.model = solver.model();
    Model trimmed(f.num_vars());
    for (int v = 1; v <= f.num_vars(); ++v) trimmed.set(v, result.model.value(v));
    result.model = std::move(trimmed);
    const long bad = first_violated_clause(f, result.model);
    if (bad >= 0) throw InternalError("solver model violates clause " + std::to_string(bad));
  }
  return result;
}

}  // namespace bridgesynth::sat
