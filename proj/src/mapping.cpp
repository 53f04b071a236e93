#include "bridgesynth/mapping.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <set>
#include <sstream>

#include "bridgesynth/errors.hpp"
#include "bridgesynth/sat/encodings.hpp"

namespace bridgesynth {

using sat::Lit;

int MappingSolution::total_bridge_size() const {
  int total = 0;
  for (const auto& a : anc) total += static_cast<int>(a.size());
  return total;
}

int MappingSolution::compatible_pairs() const {
  int count = 0;
  for (std::size_t i = 0; i < anc.size(); ++i) {
    for (std::size_t j = i + 1; j < anc.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(anc[i].begin(), anc[i].end(), anc[j].begin(), anc[j].end(),
                            std::back_inserter(common));
      if (common.empty()) ++count;
    }
  }
  return count;
}

namespace {

std::string tag(const char* kind, std::initializer_list<int> args) {
  std::string out = kind;
  out += '(';
  bool first = true;
  for (int a : args) {
    if (!first) out += ',';
    out += std::to_string(a);
    first = false;
  }
  out += ')';
  return out;
}

std::vector<int> active_data(const StabilizerCode& code, bool all) {
  std::vector<char> used(static_cast<std::size_t>(code.num_data), all ? 1 : 0);
  for (const auto& s : code.stabilizers) {
    for (auto [q, p] : s.support) {
      if (q >= code.num_data) throw ParameterError("stabilizer " + s.label + " exceeds num_data");
      used[static_cast<std::size_t>(q)] = 1;
    }
  }
  std::vector<int> out;
  for (int q = 0; q < code.num_data; ++q) {
    if (used[static_cast<std::size_t>(q)]) out.push_back(q);
  }
  return out;
}

std::vector<int> usable_nodes(const CouplingGraph& arch, const std::vector<int>& region) {
  if (region.empty()) return arch.nodes();
  std::vector<int> nodes = region;
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (int p : nodes) {
    if (!arch.has_node(p)) throw ParameterError("region node " + std::to_string(p) + " not in architecture");
  }
  return nodes;
}

std::vector<int> initial_L(const StabilizerCode& code, const std::vector<int>& L) {
  if (L.empty()) {
    std::vector<int> out;
    for (const auto& s : code.stabilizers) out.push_back(s.weight());
    return out;
  }
  for (int l : L) {
    if (l < 1) throw ParameterError("L[s] must be at least 1");
  }
  // a single value applies to every stabilizer
  if (L.size() == 1) return std::vector<int>(static_cast<std::size_t>(code.num_stabilizers()), L[0]);
  if (static_cast<int>(L.size()) != code.num_stabilizers()) {
    throw ParameterError("L must list one bound per stabilizer");
  }
  return L;
}

struct LocalGraph {
  std::vector<int> nodes;
  std::vector<int> index;  // node id -> column, -1 outside
  std::vector<std::vector<int>> adj;

  LocalGraph(const CouplingGraph& arch, std::vector<int> usable) : nodes(std::move(usable)) {
    index.assign(static_cast<std::size_t>(arch.id_bound()), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) index[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
    adj.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (int m : arch.neighbors(nodes[i])) {
        if (index[static_cast<std::size_t>(m)] >= 0) adj[i].push_back(index[static_cast<std::size_t>(m)]);
      }
    }
  }

  std::vector<int> distances(int from) const {
    std::vector<int> dist(nodes.size(), -1);
    std::deque<int> queue{from};
    dist[static_cast<std::size_t>(from)] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int w : adj[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          queue.push_back(w);
        }
      }
    }
    return dist;
  }
};

// Connectivity through an elected root: v(s,p,1) is root(s,p), later rounds may only add
// bridge nodes adjacent to visited ones, and every bridge node must be visited by round L.
void encode_root_election(sat::CnfFormula& f, const LocalGraph& g, int s, int L,
                          const std::vector<Lit>& anc) {
  const std::size_t n = g.nodes.size();
  std::vector<Lit> root(n);
  for (std::size_t i = 0; i < n; ++i) {
    root[i] = f.new_var(tag("root", {s, g.nodes[i]}));
    f.add_clause({-root[i], anc[i]});
  }
  sat::exactly_one(f, root);
  std::vector<Lit> prev = root;
  for (int t = 2; t <= L; ++t) {
    std::vector<Lit> cur(n);
    for (std::size_t i = 0; i < n; ++i) cur[i] = f.new_var(tag("v", {s, g.nodes[i], t}));
    for (std::size_t i = 0; i < n; ++i) {
      f.add_clause({-cur[i], anc[i]});
      std::vector<Lit> reach{-cur[i], prev[i]};
      for (int j : g.adj[i]) reach.push_back(prev[static_cast<std::size_t>(j)]);
      f.add_clause(reach);
    }
    prev = std::move(cur);
  }
  for (std::size_t i = 0; i < n; ++i) f.add_clause({-anc[i], prev[i]});
}

// One traversal per start vertex r. Round 1 is constant (only r visited) and nodes farther
// than t-1 hops from r cannot be visited in round t, so neither gets a variable.
void encode_faithful(sat::CnfFormula& f, const LocalGraph& g, int s, int L, const std::vector<Lit>& anc) {
  const std::size_t n = g.nodes.size();
  constexpr Lit kFalse = 0;
  constexpr Lit kTrue = -1;
  for (std::size_t r = 0; r < n; ++r) {
    const std::vector<int> dist = g.distances(static_cast<int>(r));
    std::vector<Lit> prev(n, kFalse);
    prev[r] = kTrue;
    for (int t = 2; t <= L; ++t) {
      std::vector<Lit> cur(n, kFalse);
      for (std::size_t i = 0; i < n; ++i) {
        if (dist[i] < 0 || dist[i] > t - 1) continue;
        cur[i] = f.new_var(tag("v", {s, g.nodes[r], g.nodes[i], t}));
        f.add_clause({-cur[i], anc[i]});
        std::vector<Lit> reach{-cur[i]};
        bool satisfied = false;
        auto push = [&](Lit l) {
          if (l == kTrue) satisfied = true;
          else if (l != kFalse) reach.push_back(l);
        };
        push(prev[i]);
        for (int j : g.adj[i]) push(prev[static_cast<std::size_t>(j)]);
        if (!satisfied) f.add_clause(reach);
      }
      prev = std::move(cur);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (prev[i] == kTrue) continue;
      if (prev[i] == kFalse) {
        if (i == r) f.add_clause({-anc[r]});
        else f.add_clause({-anc[r], -anc[i]});
      } else {
        f.add_clause({-anc[r], -anc[i], prev[i]});
      }
    }
  }
}

}  // namespace

Stage1Encoding encode_stage1(const StabilizerCode& code, const CouplingGraph& arch, const Stage1Config& cfg) {
  Stage1Encoding enc;
  const LocalGraph g(arch, usable_nodes(arch, cfg.region));
  enc.nodes = g.nodes;
  enc.L = initial_L(code, cfg.L);
  const std::vector<int> data = active_data(code, cfg.map_all_data);
  const std::size_t n = g.nodes.size();
  if (data.size() > n) {
    throw InfeasibleError(std::to_string(data.size()) + " data qubits but only " + std::to_string(n) +
                          " usable nodes");
  }
  if (!cfg.prior.empty() && static_cast<int>(cfg.prior.size()) != code.num_data) {
    throw ParameterError("prior placement must list one node per data qubit");
  }
  sat::CnfFormula& f = enc.wcnf.hard;

  // Injective placement.
  enc.map.assign(static_cast<std::size_t>(code.num_data), std::vector<Lit>(n, 0));
  for (int q : data) {
    auto& row = enc.map[static_cast<std::size_t>(q)];
    for (std::size_t i = 0; i < n; ++i) row[i] = f.new_var(tag("map", {q, g.nodes[i]}));
  }
  for (int q : data) sat::exactly_one(f, enc.map[static_cast<std::size_t>(q)]);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Lit> column;
    for (int q : data) column.push_back(enc.map[static_cast<std::size_t>(q)][i]);
    sat::at_most_one(f, column);
  }

  const int m = code.num_stabilizers();
  enc.anc.resize(static_cast<std::size_t>(m));
  enc.cp.resize(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) {
    auto& anc = enc.anc[static_cast<std::size_t>(s)];
    anc.resize(n);
    for (std::size_t i = 0; i < n; ++i) anc[i] = f.new_var(tag("anc", {s, g.nodes[i]}));
    const int L = enc.L[static_cast<std::size_t>(s)];
    // Connected bridge of at most L nodes.
    if (cfg.faithful_bft) encode_faithful(f, g, s, L, anc);
    else encode_root_election(f, g, s, L, anc);
    sat::at_most_k(f, anc, L);

    // Each data qubit couples to exactly one bridge node adjacent to it.
    const Stabilizer& stab = code.stabilizers[static_cast<std::size_t>(s)];
    for (int q : stab.data_qubits()) {
      std::vector<Lit> row(n, 0), present;
      for (std::size_t i = 0; i < n; ++i) {
        if (g.adj[i].empty()) continue;
        row[i] = f.new_var(tag("cp", {s, q, g.nodes[i]}));
        present.push_back(row[i]);
        f.add_clause({-row[i], anc[i]});
        std::vector<Lit> near{-row[i]};
        for (int j : g.adj[i]) near.push_back(enc.map[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)]);
        f.add_clause(near);
      }
      if (present.empty()) {
        const Lit x = f.new_aux("nocoupling");
        f.add_clause({x});
        f.add_clause({-x});
      } else {
        sat::exactly_one(f, present);
      }
      enc.cp[static_cast<std::size_t>(s)].push_back(std::move(row));
    }
  }

  // A node holding data is never an ancilla.
  if (cfg.faithful_bft) {
    for (int q : data) {
      for (int s = 0; s < m; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
          f.add_clause({-enc.map[static_cast<std::size_t>(q)][i], -enc.anc[static_cast<std::size_t>(s)][i]});
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const Lit d = f.new_var(tag("data", {g.nodes[i]}));
      for (int q : data) f.add_clause({-enc.map[static_cast<std::size_t>(q)][i], d});
      for (int s = 0; s < m; ++s) f.add_clause({-enc.anc[static_cast<std::size_t>(s)][i], -d});
    }
  }

  std::vector<std::pair<int, int>> retain;  // (q, column)
  if (cfg.w3 > 0 && !cfg.prior.empty()) {
    for (int q : data) {
      const int p = cfg.prior[static_cast<std::size_t>(q)];
      if (p < 0 || p >= static_cast<int>(g.index.size())) continue;
      const int col = g.index[static_cast<std::size_t>(p)];
      if (col >= 0) retain.emplace_back(q, col);
    }
  }
  enc.num_retention = static_cast<int>(retain.size());
  const std::uint64_t pairs = cfg.w2 > 0 ? static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m - 1) / 2 : 0;

  // Lookahead: a bare spot for each later stabilizer whose qubits are all placed.
  std::vector<std::vector<Lit>> bare;  // per lookahead stabilizer, one literal per node
  if (!cfg.lookahead.empty()) {
    std::vector<char> placed(static_cast<std::size_t>(code.num_data), 0);
    for (int q : data) placed[static_cast<std::size_t>(q)] = 1;
    std::vector<Lit> occ(n);
    for (std::size_t i = 0; i < n; ++i) {
      occ[i] = f.new_aux("occ");
      for (int q : data) f.add_clause({-enc.map[static_cast<std::size_t>(q)][i], occ[i]});
    }
    for (const auto& group : cfg.lookahead) {
      std::vector<std::vector<Lit>> at(n);  // node -> claims from this group
      for (const auto& st : group) {
        const auto qs = st.data_qubits();
        if (qs.empty() || !std::all_of(qs.begin(), qs.end(), [&](int q) {
              return q < code.num_data && placed[static_cast<std::size_t>(q)];
            })) {
          continue;
        }
        std::vector<Lit> spots;
        for (std::size_t i = 0; i < n; ++i) {
          if (g.adj[i].size() < qs.size()) continue;
          const Lit b = f.new_aux("bare");
          f.add_clause({-b, -occ[i]});
          for (int q : qs) {
            std::vector<Lit> near{-b};
            for (int j : g.adj[i]) near.push_back(enc.map[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)]);
            f.add_clause(near);
          }
          spots.push_back(b);
          at[i].push_back(b);
        }
        if (!spots.empty()) bare.push_back(std::move(spots));
      }
      for (const auto& claims : at) sat::at_most_one(f, claims);
    }
  }
  enc.num_lookahead = static_cast<int>(bare.size());

  if (cfg.lexicographic) {
    // each stratum outweighs everything below it
    struct Stratum {
      std::uint64_t* weight;
      std::uint64_t count;
      bool on;
    };
    Stratum anc_s{&enc.anc_weight, static_cast<std::uint64_t>(m) * n, cfg.w1 > 0};
    Stratum conf_s{&enc.conflict_weight, pairs, cfg.w2 > 0};
    Stratum ret_s{&enc.retention_weight, retain.size(), !retain.empty()};
    Stratum look_s{&enc.lookahead_weight, bare.size(), !bare.empty()};
    std::vector<Stratum> low_to_high{look_s, ret_s, conf_s, anc_s};
    if (cfg.retention_before_conflicts) std::swap(low_to_high[1], low_to_high[2]);
    std::uint64_t below = 0;
    for (const auto& st : low_to_high) {
      if (!st.on) continue;
      *st.weight = below + 1;
      below += st.count * *st.weight;
    }
  } else {
    enc.anc_weight = cfg.w1;
    enc.conflict_weight = cfg.w2;
    enc.retention_weight = cfg.w3;
    enc.lookahead_weight = bare.empty() ? 0 : 1;
  }

  // Small bridges.
  if (enc.anc_weight > 0) {
    for (const auto& anc : enc.anc) {
      for (Lit a : anc) enc.wcnf.add_soft({-a}, enc.anc_weight);
    }
  }
  // Node-disjoint bridges.
  if (enc.conflict_weight > 0) {
    for (int s = 0; s < m; ++s) {
      for (int t = s + 1; t < m; ++t) {
        const Lit c = f.new_var(tag("conf", {s, t}));
        for (std::size_t i = 0; i < n; ++i) {
          f.add_clause({-enc.anc[static_cast<std::size_t>(s)][i], -enc.anc[static_cast<std::size_t>(t)][i], c});
        }
        enc.wcnf.add_soft({-c}, enc.conflict_weight);
      }
    }
  }
  // Retention: keep qubits where an earlier segment left them.
  if (enc.retention_weight > 0) {
    for (auto [q, col] : retain) {
      enc.wcnf.add_soft({enc.map[static_cast<std::size_t>(q)][static_cast<std::size_t>(col)]}, enc.retention_weight);
    }
  }
  for (const auto& spots : bare) enc.wcnf.add_soft(spots, enc.lookahead_weight);

  if (cfg.extra_hard) cfg.extra_hard(enc);
  return enc;
}

MappingSolution decode_stage1(const sat::Model& model, const sat::VarRegistry& vars, const StabilizerCode& code) {
  MappingSolution sol;
  sol.pi.assign(static_cast<std::size_t>(code.num_data), -1);
  sol.anc.resize(static_cast<std::size_t>(code.num_stabilizers()));
  sol.cp.resize(static_cast<std::size_t>(code.num_stabilizers()));
  auto bad = [](const std::string& what) { throw InternalError("inconsistent stage-1 model: " + what); };
  for (int v = 1; v <= vars.num_vars(); ++v) {
    if (vars.is_aux(v) || !model.value(v)) continue;
    const std::string t = vars.tag(v);
    int a = 0, b = 0, c = 0;
    if (t.rfind("map(", 0) == 0 && std::sscanf(t.c_str(), "map(%d,%d)", &a, &b) == 2) {
      if (a < 0 || a >= code.num_data) bad(t);
      if (sol.pi[static_cast<std::size_t>(a)] >= 0) bad("qubit " + std::to_string(a) + " placed twice");
      sol.pi[static_cast<std::size_t>(a)] = b;
    } else if (t.rfind("anc(", 0) == 0 && std::sscanf(t.c_str(), "anc(%d,%d)", &a, &b) == 2) {
      if (a < 0 || a >= code.num_stabilizers()) bad(t);
      sol.anc[static_cast<std::size_t>(a)].push_back(b);
    } else if (t.rfind("cp(", 0) == 0 && std::sscanf(t.c_str(), "cp(%d,%d,%d)", &a, &b, &c) == 3) {
      if (a < 0 || a >= code.num_stabilizers()) bad(t);
      if (!sol.cp[static_cast<std::size_t>(a)].emplace(b, c).second) bad("two couplings for " + t);
    }
  }
  for (auto& a : sol.anc) std::sort(a.begin(), a.end());
  for (int s = 0; s < code.num_stabilizers(); ++s) {
    for (int q : code.stabilizers[static_cast<std::size_t>(s)].data_qubits()) {
      if (!sol.cp[static_cast<std::size_t>(s)].count(q)) bad("no coupling for stabilizer " + std::to_string(s));
      if (sol.pi[static_cast<std::size_t>(q)] < 0) bad("qubit " + std::to_string(q) + " unplaced");
    }
  }
  return sol;
}

std::string MappingReport::str() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v << '\n';
  return out.str();
}

MappingReport validate_mapping(const MappingSolution& sol, const StabilizerCode& code, const CouplingGraph& arch,
                               const std::vector<int>& L, const std::vector<int>& region) {
  MappingReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
  const int m = code.num_stabilizers();
  if (static_cast<int>(sol.pi.size()) != code.num_data || static_cast<int>(sol.anc.size()) != m ||
      static_cast<int>(sol.cp.size()) != m) {
    fail("solution shape does not match the code");
    return report;
  }
  std::set<int> allowed(region.begin(), region.end());
  auto usable = [&](int p) { return arch.has_node(p) && (allowed.empty() || allowed.count(p) > 0); };

  std::map<int, int> holder;
  for (int q = 0; q < code.num_data; ++q) {
    const int p = sol.pi[static_cast<std::size_t>(q)];
    if (p < 0) continue;
    if (!usable(p)) fail("qubit " + std::to_string(q) + " on unusable node " + std::to_string(p));
    auto [it, fresh] = holder.emplace(p, q);
    if (!fresh) fail("qubits " + std::to_string(it->second) + " and " + std::to_string(q) + " share node " + std::to_string(p));
  }
  for (int s = 0; s < m; ++s) {
    const Stabilizer& stab = code.stabilizers[static_cast<std::size_t>(s)];
    const std::string name = "stabilizer " + stab.label;
    const auto& anc = sol.anc[static_cast<std::size_t>(s)];
    const std::set<int> bridge(anc.begin(), anc.end());
    if (bridge.empty()) fail(name + ": empty bridge");
    if (bridge.size() != anc.size()) fail(name + ": repeated bridge node");
    if (!L.empty() && static_cast<int>(bridge.size()) > L[static_cast<std::size_t>(s)]) {
      fail(name + ": bridge larger than L");
    }
    for (int p : bridge) {
      if (!usable(p)) fail(name + ": bridge node " + std::to_string(p) + " unusable");
      if (holder.count(p)) fail(name + ": bridge node " + std::to_string(p) + " holds data");
    }
    if (!bridge.empty()) {
      std::set<int> seen{*bridge.begin()};
      std::deque<int> queue{*bridge.begin()};
      while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        if (!arch.has_node(u)) continue;
        for (int w : arch.neighbors(u)) {
          if (bridge.count(w) && seen.insert(w).second) queue.push_back(w);
        }
      }
      if (seen.size() != bridge.size()) fail(name + ": bridge not connected");
    }
    const auto& cp = sol.cp[static_cast<std::size_t>(s)];
    const std::vector<int> dq = stab.data_qubits();
    for (auto [q, p] : cp) {
      if (!std::binary_search(dq.begin(), dq.end(), q)) fail(name + ": coupling for foreign qubit " + std::to_string(q));
    }
    for (int q : dq) {
      auto it = cp.find(q);
      if (it == cp.end()) {
        fail(name + ": qubit " + std::to_string(q) + " has no coupling");
        continue;
      }
      const int p = it->second;
      if (!bridge.count(p)) fail(name + ": coupling node " + std::to_string(p) + " not in bridge");
      const int at = sol.pi[static_cast<std::size_t>(q)];
      if (at < 0) {
        fail(name + ": qubit " + std::to_string(q) + " unplaced");
      } else if (!arch.has_node(p) || !arch.has_node(at) || !arch.adjacent(p, at)) {
        fail(name + ": coupling node " + std::to_string(p) + " not adjacent to qubit " + std::to_string(q));
      }
    }
  }
  return report;
}

Stage1Result solve_stage1(const StabilizerCode& code, const CouplingGraph& arch, const Stage1Config& cfg) {
  Stage1Config local = cfg;
  local.L = initial_L(code, cfg.L);
  const int usable = static_cast<int>(usable_nodes(arch, cfg.region).size());
  const int cap = cfg.L_cap > 0 ? cfg.L_cap : std::max(usable, 1);
  Stage1Result result;
  for (;;) {
    Stage1Encoding enc = encode_stage1(code, arch, local);
    sat::MaxSatOptions options;
    options.deadline = cfg.deadline;
    options.external_command = cfg.external_command;
    const sat::MaxSatResult r = sat::solve_maxsat(enc.wcnf, options);
    if (r.status == sat::MaxSatStatus::Unsat) {
      if (std::all_of(local.L.begin(), local.L.end(), [&](int l) { return l >= cap; })) {
        throw InfeasibleError("no mapping of " + code.name + " onto " + arch.name() + " with L up to " +
                              std::to_string(cap));
      }
      for (int& l : local.L) l = std::min(l + 1, cap);
      ++result.escalations;
      continue;
    }
    if (r.status == sat::MaxSatStatus::Timeout) {
      throw TimeoutError("stage 1 found no mapping before the deadline");
    }
    result.solution = decode_stage1(r.model, enc.wcnf.hard.vars, code);
    const MappingReport check = validate_mapping(result.solution, code, arch, local.L, cfg.region);
    if (!check.ok()) throw InternalError("stage-1 model decodes to an invalid mapping:\n" + check.str());
    result.optimal = r.status == sat::MaxSatStatus::Optimal;
    result.L = local.L;
    result.total_bridge = result.solution.total_bridge_size();
    result.compatible_pairs = result.solution.compatible_pairs();
    for (int q = 0; q < code.num_data && !cfg.prior.empty(); ++q) {
      const int p = cfg.prior[static_cast<std::size_t>(q)];
      if (p >= 0 && result.solution.pi[static_cast<std::size_t>(q)] == p) ++result.retained;
    }
    result.cost = r.cost;
    result.num_vars = enc.wcnf.hard.num_vars();
    result.num_hard = enc.wcnf.hard.num_clauses();
    result.num_soft = enc.wcnf.soft.size();
    return result;
  }
}

nlohmann::json mapping_to_json(const MappingSolution& sol, const StabilizerCode& code) {
  nlohmann::json pi = nlohmann::json::object(), anc = nlohmann::json::object(), cp = nlohmann::json::object();
  for (std::size_t q = 0; q < sol.pi.size(); ++q) {
    if (sol.pi[q] >= 0) pi[std::to_string(q)] = sol.pi[q];
  }
  for (std::size_t s = 0; s < sol.anc.size(); ++s) {
    const std::string& label = code.stabilizers.at(s).label;
    anc[label] = sol.anc[s];
    nlohmann::json row = nlohmann::json::object();
    for (auto [q, p] : sol.cp[s]) row[std::to_string(q)] = p;
    cp[label] = row;
  }
  return {{"pi", pi}, {"anc", anc}, {"cp", cp}};
}

MappingSolution mapping_from_json(const nlohmann::json& j, const StabilizerCode& code) {
  MappingSolution sol;
  sol.pi.assign(static_cast<std::size_t>(code.num_data), -1);
  sol.anc.resize(static_cast<std::size_t>(code.num_stabilizers()));
  sol.cp.resize(static_cast<std::size_t>(code.num_stabilizers()));
  try {
    for (const auto& [key, node] : j.at("pi").items()) {
      const int q = std::stoi(key);
      if (q < 0 || q >= code.num_data) throw ParameterError("mapping places unknown qubit " + key);
      sol.pi[static_cast<std::size_t>(q)] = node.get<int>();
    }
    for (const auto& [label, nodes] : j.at("anc").items()) {
      const int s = code.find(label);
      if (s < 0) throw ParameterError("mapping names unknown stabilizer " + label);
      sol.anc[static_cast<std::size_t>(s)] = nodes.get<std::vector<int>>();
      std::sort(sol.anc[static_cast<std::size_t>(s)].begin(), sol.anc[static_cast<std::size_t>(s)].end());
    }
    for (const auto& [label, row] : j.at("cp").items()) {
      const int s = code.find(label);
      if (s < 0) throw ParameterError("mapping names unknown stabilizer " + label);
      for (const auto& [key, node] : row.items()) sol.cp[static_cast<std::size_t>(s)][std::stoi(key)] = node.get<int>();
    }
  } catch (const ParameterError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed mapping JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ParameterError("malformed mapping JSON key");
  }
  return sol;
}

}  // namespace bridgesynth
