#pragma once

// Exhaustive reference searches for small instances, shared by the unit tests and the
// acceptance run.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bridgesynth/mapping.hpp"
#include "bridgesynth/schedule.hpp"

namespace bridgesynth::oracle {

inline bool connected(const CouplingGraph& g, const std::vector<int>& set) {
  if (set.empty()) return false;
  std::set<int> members(set.begin(), set.end()), seen{set[0]};
  std::deque<int> queue{set[0]};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int w : g.neighbors(u)) {
      if (members.count(w) && seen.insert(w).second) queue.push_back(w);
    }
  }
  return seen.size() == members.size();
}

// Every valid mapping, enumerated directly from the placement rules. Only qubits touched by
// some stabilizer are placed.
inline std::vector<MappingSolution> all_mappings(const StabilizerCode& code, const CouplingGraph& g,
                                                 const std::vector<int>& L) {
  std::set<int> used_q;
  for (const auto& s : code.stabilizers) {
    for (int q : s.data_qubits()) used_q.insert(q);
  }
  const std::vector<int> qs(used_q.begin(), used_q.end());
  const std::vector<int>& nodes = g.nodes();
  std::vector<MappingSolution> out;
  MappingSolution sol;
  sol.pi.assign(static_cast<std::size_t>(code.num_data), -1);
  sol.anc.resize(static_cast<std::size_t>(code.num_stabilizers()));
  sol.cp.resize(static_cast<std::size_t>(code.num_stabilizers()));
  std::set<int> taken;

  std::function<void(std::size_t)> bridges;
  std::function<void(std::size_t, std::size_t)> couple_one = [&](std::size_t s, std::size_t k) {
    const auto dq = code.stabilizers[s].data_qubits();
    if (k == dq.size()) {
      bridges(s + 1);
      return;
    }
    const int q = dq[k];
    for (int p : sol.anc[s]) {
      if (!g.adjacent(p, sol.pi[static_cast<std::size_t>(q)])) continue;
      sol.cp[s][q] = p;
      couple_one(s, k + 1);
      sol.cp[s].erase(q);
    }
  };
  bridges = [&](std::size_t s) {
    if (s == code.stabilizers.size()) {
      out.push_back(sol);
      return;
    }
    std::vector<int> free;
    for (int p : nodes) {
      if (!taken.count(p)) free.push_back(p);
    }
    const std::size_t n = free.size();
    for (unsigned mask = 1; mask < (1U << n); ++mask) {
      std::vector<int> set;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1U << i)) set.push_back(free[i]);
      }
      if (static_cast<int>(set.size()) > L[s] || !connected(g, set)) continue;
      sol.anc[s] = set;
      couple_one(s, 0);
    }
    sol.anc[s].clear();
  };
  std::function<void(std::size_t)> place = [&](std::size_t k) {
    if (k == qs.size()) {
      bridges(0);
      return;
    }
    for (int p : nodes) {
      if (taken.count(p)) continue;
      taken.insert(p);
      sol.pi[static_cast<std::size_t>(qs[k])] = p;
      place(k + 1);
      sol.pi[static_cast<std::size_t>(qs[k])] = -1;
      taken.erase(p);
    }
  };
  place(0);
  return out;
}

// Lexicographic objective: total bridge size first, then incompatible pairs.
inline std::pair<int, int> objective(const MappingSolution& sol) {
  const int m = static_cast<int>(sol.anc.size());
  return {sol.total_bridge_size(), m * (m - 1) / 2 - sol.compatible_pairs()};
}

struct BestMapping {
  bool found = false;
  std::vector<int> L;
  std::pair<int, int> best{0, 0};
  std::size_t count = 0;  // valid mappings at that L
};

// Raises every L by one until some mapping exists, as the solver does.
inline BestMapping best_mapping(const StabilizerCode& code, const CouplingGraph& g) {
  BestMapping r;
  for (const auto& s : code.stabilizers) r.L.push_back(s.weight());
  const int cap = std::max(g.num_nodes(), 1);
  for (;;) {
    const auto all = all_mappings(code, g, r.L);
    if (!all.empty()) {
      r.found = true;
      r.count = all.size();
      r.best = objective(all.front());
      for (const auto& sol : all) r.best = std::min(r.best, objective(sol));
      return r;
    }
    if (std::all_of(r.L.begin(), r.L.end(), [&](int l) { return l >= cap; })) return r;
    for (int& l : r.L) l = std::min(l + 1, cap);
  }
}

inline std::string schedule_key(const ScheduledCircuit& c) {
  std::vector<std::string> parts;
  for (const auto& g : c.gates) {
    parts.push_back(std::to_string(g.t) + op_kind_name(g.op.kind) + op_phase_name(g.op.phase) + std::to_string(g.op.stab) +
                    ":" + std::to_string(g.op.a) + ">" + std::to_string(g.op.b) + "/" + std::to_string(g.op.data));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + ";";
  return out;
}

// Rooted spanning trees of a bridge, as parent maps (root -> -1).
inline std::vector<std::map<int, int>> trees(const CouplingGraph& g, const std::vector<int>& bridge) {
  std::vector<std::map<int, int>> out;
  for (int root : bridge) {
    std::map<int, int> parent{{root, -1}};
    std::vector<int> rest;
    for (int p : bridge) {
      if (p != root) rest.push_back(p);
    }
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == rest.size()) {
        for (int p : rest) {
          int x = p, steps = 0;
          while (x != root && steps <= static_cast<int>(bridge.size())) {
            x = parent[x];
            ++steps;
          }
          if (x != root) return;
        }
        out.push_back(parent);
        return;
      }
      for (int w : bridge) {
        if (w == rest[i] || !g.adjacent(w, rest[i])) continue;
        parent[rest[i]] = w;
        rec(i + 1);
      }
      parent.erase(rest[i]);
    };
    rec(0);
  }
  return out;
}

// Every schedule of depth <= T accepted by check_schedule, by exhaustive time assignment over
// every encode/decode tree choice. Precedences the checker enforces prune the search.
// With `first_only` stops at the first hit.
inline std::set<std::string> all_schedules(const MappingSolution& sol, const StabilizerCode& code,
                                           const CouplingGraph& arch, int T, bool first_only) {
  const OperationSet set = enumerate_operations(sol, code, arch);
  const int m = code.num_stabilizers();
  std::vector<std::vector<std::map<int, int>>> options(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) options[static_cast<std::size_t>(s)] = trees(arch, sol.anc[static_cast<std::size_t>(s)]);
  std::set<std::string> found;

  auto find = [&](OpKind k, OpPhase ph, int s, int a, int b) {
    for (std::size_t i = 0; i < set.ops.size(); ++i) {
      const auto& op = set.ops[i];
      if (op.kind == k && op.phase == ph && op.stab == s && op.a == a && op.b == b) return static_cast<int>(i);
    }
    throw std::logic_error("missing op");
  };

  std::vector<std::size_t> choice(static_cast<std::size_t>(2 * m), 0);
  std::function<void(int)> over_trees = [&](int level) {
    if (first_only && !found.empty()) return;
    if (level < 2 * m) {
      for (std::size_t i = 0; i < options[static_cast<std::size_t>(level / 2)].size(); ++i) {
        choice[static_cast<std::size_t>(level)] = i;
        over_trees(level + 1);
      }
      return;
    }
    std::vector<int> ops;
    std::vector<std::pair<int, int>> prec;
    for (int s = 0; s < m; ++s) {
      const auto& enc = options[static_cast<std::size_t>(s)][choice[static_cast<std::size_t>(2 * s)]];
      const auto& dec = options[static_cast<std::size_t>(s)][choice[static_cast<std::size_t>(2 * s + 1)]];
      std::map<int, int> prep, unprep, reset;
      std::vector<int> enc_ops, dec_ops, ctrl;
      for (auto [p, par] : enc) {
        reset[p] = find(OpKind::Reset, OpPhase::Init, s, p, -1);
        prep[p] = par < 0 ? find(OpKind::Hadamard, OpPhase::Enc, s, p, -1) : find(OpKind::EncCnot, OpPhase::Enc, s, par, p);
        enc_ops.push_back(prep[p]);
        ops.push_back(reset[p]);
        ops.push_back(prep[p]);
      }
      int meas = -1;
      for (auto [p, par] : dec) {
        unprep[p] = par < 0 ? find(OpKind::Hadamard, OpPhase::Dec, s, p, -1) : find(OpKind::DecCnot, OpPhase::Dec, s, par, p);
        dec_ops.push_back(unprep[p]);
        ops.push_back(unprep[p]);
        if (par < 0) {
          meas = find(OpKind::Measure, OpPhase::Meas, s, p, -1);
          ops.push_back(meas);
          prec.emplace_back(unprep[p], meas);
        }
      }
      for (std::size_t i = 0; i < set.ops.size(); ++i) {
        if (set.ops[i].stab == s && set.ops[i].kind == OpKind::CtrlP) {
          ctrl.push_back(static_cast<int>(i));
          ops.push_back(static_cast<int>(i));
        }
      }
      auto on = [&](int g, int p) { return set.ops[static_cast<std::size_t>(g)].a == p || set.ops[static_cast<std::size_t>(g)].b == p; };
      for (auto [p, r] : reset) {
        prec.emplace_back(r, prep[p]);
        for (int g : enc_ops) {
          if (set.ops[static_cast<std::size_t>(g)].a == p && g != prep[p]) prec.emplace_back(prep[p], g);
          if (on(g, p)) prec.emplace_back(g, unprep[p]);
        }
        for (int g : ctrl) {
          if (set.ops[static_cast<std::size_t>(g)].a != p) continue;
          prec.emplace_back(prep[p], g);
          prec.emplace_back(g, unprep[p]);
        }
        for (int g : dec_ops) {
          if (on(g, p)) prec.emplace_back(prep[p], g);
          if (set.ops[static_cast<std::size_t>(g)].a == p && g != unprep[p] &&
              set.ops[static_cast<std::size_t>(g)].kind == OpKind::DecCnot) {
            prec.emplace_back(g, unprep[p]);
          }
        }
      }
    }
    // head/tail chain lengths over the precedence DAG
    std::map<int, int> head, tail;
    for (int g : ops) head[g] = tail[g] = 0;
    for (std::size_t round = 0; round < ops.size(); ++round) {
      for (auto [a, b] : prec) {
        head[b] = std::max(head[b], head[a] + 1);
        tail[a] = std::max(tail[a], tail[b] + 1);
      }
    }
    std::sort(ops.begin(), ops.end(), [&](int x, int y) { return std::pair(head[x], x) < std::pair(head[y], y); });
    std::map<int, std::vector<int>> preds;
    for (auto [a, b] : prec) preds[b].push_back(a);

    std::map<int, int> when;
    std::set<std::pair<int, int>> busy;
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      if (first_only && !found.empty()) return;
      if (i == ops.size()) {
        ScheduledCircuit c;
        for (auto [g, t] : when) {
          c.gates.push_back({set.ops[static_cast<std::size_t>(g)], t});
          c.depth = std::max(c.depth, t);
        }
        if (check_schedule(c, sol, code).ok()) found.insert(schedule_key(c));
        return;
      }
      const int g = ops[i];
      const GateOp& op = set.ops[static_cast<std::size_t>(g)];
      int lo = head[g] + 1;
      for (int p : preds[g]) lo = std::max(lo, when.at(p) + 1);
      for (int t = lo; t <= T - tail[g]; ++t) {
        if (busy.count({op.a, t}) || (op.b >= 0 && busy.count({op.b, t}))) continue;
        busy.insert({op.a, t});
        if (op.b >= 0) busy.insert({op.b, t});
        when[g] = t;
        assign(i + 1);
        when.erase(g);
        busy.erase({op.a, t});
        if (op.b >= 0) busy.erase({op.b, t});
      }
    };
    assign(0);
  };
  over_trees(0);
  return found;
}

inline int min_depth(const MappingSolution& sol, const StabilizerCode& code, const CouplingGraph& arch, int limit) {
  for (int T = 1; T <= limit; ++T) {
    if (!all_schedules(sol, code, arch, T, true).empty()) return T;
  }
  return -1;
}

}  // namespace bridgesynth::oracle
