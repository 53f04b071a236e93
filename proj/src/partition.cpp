#include "bridgesynth/partition.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "bridgesynth/errors.hpp"

namespace bridgesynth {

namespace {

std::vector<std::vector<int>> weight_matrix(const StabilizerCode& code) {
  const auto m = static_cast<std::size_t>(code.num_stabilizers());
  std::vector<std::vector<int>> w(m, std::vector<int>(m, 0));
  for (const auto& e : interaction_graph(code)) {
    w[static_cast<std::size_t>(e.a)][static_cast<std::size_t>(e.b)] = e.weight;
    w[static_cast<std::size_t>(e.b)][static_cast<std::size_t>(e.a)] = e.weight;
  }
  return w;
}

}  // namespace

std::vector<std::vector<int>> partition_stabilizers(const StabilizerCode& code, int k, std::uint64_t seed) {
  const int m = code.num_stabilizers();
  if (k < 1 || k > m) throw ParameterError("partition count must lie in 1.." + std::to_string(m));
  const auto w = weight_matrix(code);
  std::vector<int> rank(static_cast<std::size_t>(m));
  std::iota(rank.begin(), rank.end(), 0);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(rank.begin(), rank.end(), rng);
  }
  // rank[i] is the i-th vertex in tie-break order
  std::vector<int> part(static_cast<std::size_t>(m), -1);
  for (int i = 0; i < k; ++i) {
    const int size = m / k + (i < m % k ? 1 : 0);
    int count = 0;
    while (count < size) {
      int best = -1, best_gain = -1;
      for (int v : rank) {
        if (part[static_cast<std::size_t>(v)] >= 0) continue;
        int gain = 0;
        for (int u = 0; u < m; ++u) {
          if (part[static_cast<std::size_t>(u)] == i) gain += w[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
        }
        if (count == 0) gain = 0;
        if (gain > best_gain) {
          best = v;
          best_gain = gain;
        }
      }
      part[static_cast<std::size_t>(best)] = i;
      ++count;
    }
  }

  // Pairwise swaps between subsets while the best one lowers the cut.
  auto link = [&](int v, int p) {
    int sum = 0;
    for (int u = 0; u < m; ++u) {
      if (u != v && part[static_cast<std::size_t>(u)] == p) sum += w[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
    }
    return sum;
  };
  while (true) {
    int best_gain = 0, bu = -1, bv = -1;
    for (int u = 0; u < m; ++u) {
      for (int v = u + 1; v < m; ++v) {
        const int pu = part[static_cast<std::size_t>(u)], pv = part[static_cast<std::size_t>(v)];
        if (pu == pv) continue;
        const int gain = link(u, pv) - link(u, pu) + link(v, pu) - link(v, pv) -
                         2 * w[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
        if (gain > best_gain) {
          best_gain = gain;
          bu = u;
          bv = v;
        }
      }
    }
    if (bu < 0) break;
    std::swap(part[static_cast<std::size_t>(bu)], part[static_cast<std::size_t>(bv)]);
  }

  std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
  for (int v = 0; v < m; ++v) out[static_cast<std::size_t>(part[static_cast<std::size_t>(v)])].push_back(v);
  return out;
}

int cut_weight(const StabilizerCode& code, const std::vector<std::vector<int>>& subsets) {
  std::map<int, int> part;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (int s : subsets[i]) part[s] = static_cast<int>(i);
  }
  int cut = 0;
  for (const auto& e : interaction_graph(code)) {
    if (part.at(e.a) != part.at(e.b)) cut += e.weight;
  }
  return cut;
}

std::vector<int> order_subsets(const std::vector<std::vector<int>>& subsets, const StabilizerCode& code) {
  if (subsets.empty()) throw ParameterError("no subsets to order");
  const auto w = weight_matrix(code);
  const int k = static_cast<int>(subsets.size());
  std::vector<std::set<int>> data(static_cast<std::size_t>(k));
  int first = 0, first_weight = -1;
  for (int i = 0; i < k; ++i) {
    const auto& sub = subsets[static_cast<std::size_t>(i)];
    int internal = 0;
    for (std::size_t a = 0; a < sub.size(); ++a) {
      for (int q : code.stabilizers.at(static_cast<std::size_t>(sub[a])).data_qubits()) data[static_cast<std::size_t>(i)].insert(q);
      for (std::size_t b = a + 1; b < sub.size(); ++b) internal += w[static_cast<std::size_t>(sub[a])][static_cast<std::size_t>(sub[b])];
    }
    if (internal > first_weight) {
      first = i;
      first_weight = internal;
    }
  }
  std::vector<int> order{first};
  std::vector<bool> used(static_cast<std::size_t>(k), false);
  used[static_cast<std::size_t>(first)] = true;
  std::set<int> seen = data[static_cast<std::size_t>(first)];
  while (static_cast<int>(order.size()) < k) {
    int best = -1, best_shared = -1;
    for (int i = 0; i < k; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      int shared = 0;
      for (int q : data[static_cast<std::size_t>(i)]) shared += static_cast<int>(seen.count(q));
      if (shared > best_shared) {
        best = i;
        best_shared = shared;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    order.push_back(best);
    seen.insert(data[static_cast<std::size_t>(best)].begin(), data[static_cast<std::size_t>(best)].end());
  }
  return order;
}

StabilizerCode sub_code(const StabilizerCode& code, const std::vector<int>& subset) {
  StabilizerCode out;
  out.name = code.name;
  out.num_data = code.num_data;
  for (int s : subset) {
    if (s < 0 || s >= code.num_stabilizers()) throw ParameterError("stabilizer index out of range");
    out.stabilizers.push_back(code.stabilizers[static_cast<std::size_t>(s)]);
  }
  return out;
}

SubsetResult solve_subset(const StabilizerCode& code, const std::vector<int>& subset, const CouplingGraph& arch,
                          const std::vector<int>& prior, const CompileConfig& cfg) {
  SubsetResult r;
  r.stabs = subset;
  r.code = sub_code(code, subset);
  Stage1Config s1 = cfg.stage1;
  s1.prior = prior;
  s1.deadline = Deadline::in_seconds(cfg.stage1_seconds);
  r.stage1 = solve_stage1(r.code, arch, s1);
  Stage2Config s2 = cfg.stage2;
  s2.deadline = Deadline::in_seconds(cfg.stage2_seconds);
  r.stage2 = minimize_depth(enumerate_operations(r.stage1.solution, r.code, arch), s2);
  for (std::size_t q = 0; q < prior.size(); ++q) {
    if (prior[q] < 0) continue;
    if (r.stage1.solution.pi[q] == prior[q]) ++r.retained;
    else ++r.moved;
  }
  return r;
}

std::vector<int> apply_swaps(std::vector<int> placement, const std::vector<std::pair<int, int>>& swaps) {
  std::map<int, int> at;  // node -> data qubit
  for (std::size_t q = 0; q < placement.size(); ++q) {
    if (placement[q] >= 0) at[placement[q]] = static_cast<int>(q);
  }
  for (auto [a, b] : swaps) {
    auto ia = at.find(a), ib = at.find(b);
    const int qa = ia == at.end() ? -1 : ia->second, qb = ib == at.end() ? -1 : ib->second;
    at.erase(a);
    at.erase(b);
    if (qa >= 0) {
      at[b] = qa;
      placement[static_cast<std::size_t>(qa)] = b;
    }
    if (qb >= 0) {
      at[a] = qb;
      placement[static_cast<std::size_t>(qb)] = a;
    }
  }
  return placement;
}

namespace {

struct Tokens {
  std::vector<int> pos;   // data qubit -> node
  std::map<int, int> at;  // node -> data qubit
  std::vector<std::pair<int, int>> swaps;

  void swap(int a, int b) {
    auto ia = at.find(a), ib = at.find(b);
    const int qa = ia == at.end() ? -1 : ia->second, qb = ib == at.end() ? -1 : ib->second;
    if (qa < 0 && qb < 0) return;
    at.erase(a);
    at.erase(b);
    if (qa >= 0) {
      at[b] = qa;
      pos[static_cast<std::size_t>(qa)] = b;
    }
    if (qb >= 0) {
      at[a] = qb;
      pos[static_cast<std::size_t>(qb)] = a;
    }
    swaps.emplace_back(a, b);
  }
};

bool settled(const Tokens& tk, const std::vector<int>& next) {
  for (std::size_t q = 0; q < next.size(); ++q) {
    if (next[q] >= 0 && tk.pos[q] != next[q]) return false;
  }
  return true;
}

// Leaf-by-leaf routing over a BFS spanning forest; every removed leaf already holds its
// final token.
void tree_route(Tokens& tk, const std::vector<int>& next, const CouplingGraph& arch) {
  std::map<int, int> want;  // node -> data qubit
  for (std::size_t q = 0; q < next.size(); ++q) {
    if (next[q] >= 0) want[next[q]] = static_cast<int>(q);
  }
  std::set<int> done;
  std::set<int> seen;
  for (int start : arch.nodes()) {
    if (seen.count(start)) continue;
    std::vector<int> order{start};
    std::map<int, int> parent{{start, -1}}, depth{{start, 0}};
    seen.insert(start);
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (int w : arch.neighbors(order[i])) {
        if (seen.insert(w).second) {
          parent[w] = order[i];
          depth[w] = depth[order[i]] + 1;
          order.push_back(w);
        }
      }
    }
    auto tree_path = [&](int a, int b) {
      std::vector<int> up, down;
      while (a != b) {
        if (depth[a] >= depth[b]) {
          up.push_back(a);
          a = parent[a];
        } else {
          down.push_back(b);
          b = parent[b];
        }
      }
      up.push_back(a);
      up.insert(up.end(), down.rbegin(), down.rend());
      return up;
    };
    for (std::size_t i = order.size(); i-- > 0;) {
      const int v = order[i];
      int from = -1;
      auto it = want.find(v);
      if (it != want.end()) {
        from = tk.pos[static_cast<std::size_t>(it->second)];
      } else if (tk.at.count(v)) {
        // nearest remaining node without a data qubit
        std::map<int, int> dist{{v, 0}};
        std::deque<int> queue{v};
        while (!queue.empty() && from < 0) {
          const int u = queue.front();
          queue.pop_front();
          for (int w : arch.neighbors(u)) {
            if (done.count(w) || dist.count(w)) continue;
            dist[w] = dist[u] + 1;
            if (!tk.at.count(w)) {
              from = w;
              break;
            }
            queue.push_back(w);
          }
        }
        if (from < 0) throw NoPathError("no free node to clear " + std::to_string(v));
      }
      if (from >= 0 && from != v) {
        const auto path = tree_path(from, v);
        for (std::size_t h = 0; h + 1 < path.size(); ++h) tk.swap(path[h], path[h + 1]);
      }
      done.insert(v);
    }
  }
}

}  // namespace

std::vector<std::pair<int, int>> route_integration(const std::vector<int>& prev, const std::vector<int>& next,
                                                   const CouplingGraph& arch) {
  if (prev.size() != next.size()) throw ParameterError("placements cover different qubit counts");
  Tokens tk;
  tk.pos = prev;
  std::set<int> targets;
  for (std::size_t q = 0; q < prev.size(); ++q) {
    if (prev[q] >= 0) {
      if (!arch.has_node(prev[q]) || !tk.at.emplace(prev[q], static_cast<int>(q)).second) {
        throw ParameterError("previous placement is not injective on the graph");
      }
    }
    if (next[q] >= 0) {
      if (!arch.has_node(next[q]) || !targets.insert(next[q]).second) throw ParameterError("next placement is not injective on the graph");
      if (prev[q] < 0) throw ParameterError("qubit " + std::to_string(q) + " has no previous position");
    }
  }
  for (std::size_t q = 0; q < prev.size(); ++q) {
    if (next[q] >= 0 && prev[q] != next[q] && shortest_path(arch, prev[q], next[q]).empty()) {
      throw NoPathError("qubit " + std::to_string(q) + " cannot reach node " + std::to_string(next[q]));
    }
  }

  for (int pass = 0; pass < 4 && !settled(tk, next); ++pass) {
    for (std::size_t q = 0; q < next.size(); ++q) {
      if (next[q] < 0 || tk.pos[q] == next[q]) continue;
      const auto path = shortest_path(arch, tk.pos[q], next[q]);
      for (std::size_t h = 0; h + 1 < path.size(); ++h) tk.swap(path[h], path[h + 1]);
    }
  }
  if (!settled(tk, next)) {
    Tokens fresh;
    fresh.pos = prev;
    for (std::size_t q = 0; q < prev.size(); ++q) {
      if (prev[q] >= 0) fresh.at[prev[q]] = static_cast<int>(q);
    }
    tree_route(fresh, next, arch);
    tk = std::move(fresh);
  }
  if (!settled(tk, next)) throw InternalError("routing did not reach the requested placement");
  return tk.swaps;
}

Circuit swap_layer(const std::vector<std::pair<int, int>>& swaps, int n, int segment) {
  Circuit c;
  c.n = n;
  std::map<int, int> last;
  for (auto [a, b] : swaps) {
    Gate g;
    g.kind = GateKind::SWAP;
    g.qubits = {a, b};
    g.t = std::max(last[a], last[b]) + 1;
    g.phase = "route";
    g.segment = segment;
    last[a] = last[b] = g.t;
    c.gates.push_back(std::move(g));
  }
  std::stable_sort(c.gates.begin(), c.gates.end(), [](const Gate& x, const Gate& y) { return x.t < y.t; });
  return c;
}

CompileOutput compile_partitioned(const StabilizerCode& code, const CouplingGraph& arch, const CompileConfig& cfg) {
  CompileOutput out;
  if (code.num_stabilizers() == 0) {
    out.circuit.n = arch.id_bound();
    out.subsets = {{}};
    out.order = {0};
    out.layers = {{}};
    SubsetResult empty;
    empty.code = sub_code(code, {});
    empty.stage1.solution.pi.assign(static_cast<std::size_t>(code.num_data), -1);
    empty.stage1.optimal = true;
    empty.stage2.optimal = true;
    out.segments.push_back(std::move(empty));
    return out;
  }
  if (cfg.k == 1) {
    std::vector<int> all(static_cast<std::size_t>(code.num_stabilizers()));
    std::iota(all.begin(), all.end(), 0);
    out.subsets = {all};
    out.order = {0};
  } else {
    out.subsets = partition_stabilizers(code, cfg.k, cfg.seed);
    out.order = order_subsets(out.subsets, code);
  }
  CompileConfig sub_cfg = cfg;
  if (cfg.k > 1) {
    sub_cfg.stage1.map_all_data = true;
    sub_cfg.stage1.retention_before_conflicts = true;
  }

  // one forward pass; seed is the retention prior for the first segment
  auto forward = [&](const std::vector<int>& seed) {
    CompileOutput pass;
    pass.subsets = out.subsets;
    pass.order = out.order;
    pass.circuit.n = arch.id_bound();
    std::vector<int> current;  // data qubit -> node after the last segment
    for (std::size_t i = 0; i < pass.order.size(); ++i) {
      const auto& subset = pass.subsets[static_cast<std::size_t>(pass.order[i])];
      CompileConfig seg_cfg = sub_cfg;
      for (std::size_t j = i + 1; j < pass.order.size(); ++j) {
        if (cfg.lookahead >= 0 && j > i + static_cast<std::size_t>(cfg.lookahead)) break;
        seg_cfg.stage1.lookahead.push_back(sub_code(code, pass.subsets[static_cast<std::size_t>(pass.order[j])]).stabilizers);
      }
      SubsetResult r = solve_subset(code, subset, arch, i == 0 ? seed : current, seg_cfg);
      std::vector<std::pair<int, int>> layer;
      if (!current.empty()) {
        layer = route_integration(current, r.stage1.solution.pi, arch);
        if (!layer.empty()) append_circuit(pass.circuit, expand_swaps(swap_layer(layer, arch.id_bound(), -static_cast<int>(i))));
      }
      pass.layers.push_back(layer);
      append_circuit(pass.circuit, build_circuit(r.stage2.circuit, r.code, arch, static_cast<int>(i)));
      if (current.empty()) current.assign(static_cast<std::size_t>(code.num_data), -1);
      current = apply_swaps(current, layer);
      for (std::size_t q = 0; q < current.size(); ++q) {
        if (r.stage1.solution.pi[q] >= 0) current[q] = r.stage1.solution.pi[q];
      }
      pass.stage1_optimal = pass.stage1_optimal && r.stage1.optimal;
      pass.stage2_optimal = pass.stage2_optimal && r.stage2.optimal;
      pass.segments.push_back(std::move(r));
    }
    pass.metrics = compute_metrics(pass.circuit);
    return std::make_pair(std::move(pass), current);
  };
  auto swaps = [](const CompileOutput& o) {
    std::size_t n = 0;
    for (const auto& l : o.layers) n += l.size();
    return n;
  };

  auto [best, last] = forward({});
  // later segments may not fit the first placement; rerun with the final placement as the first prior
  for (int sweep = 0; sweep < cfg.refine_sweeps && swaps(best) > 0; ++sweep) {
    auto [next, end] = forward(last);
    if (swaps(next) >= swaps(best)) break;
    best = std::move(next);
    last = std::move(end);
  }
  out = std::move(best);
  return out;
}

VerifyReport verify_compiled(const CompileOutput& out) {
  VerifyReport all;
  all.errors = check_circuit(out.circuit);
  for (std::size_t i = 0; i < out.segments.size(); ++i) {
    const auto& seg = out.segments[i];
    const VerifyReport r = verify_syndrome_extraction(segment_circuit(out.circuit, static_cast<int>(i)), seg.code,
                                                      seg.stage1.solution);
    for (const auto& e : r.errors) all.errors.push_back("segment " + std::to_string(i) + ": " + e);
    all.checks.insert(all.checks.end(), r.checks.begin(), r.checks.end());
  }
  return all;
}

nlohmann::json plan_to_json(const CompileOutput& out) {
  nlohmann::json segs = nlohmann::json::array();
  for (std::size_t i = 0; i < out.segments.size(); ++i) {
    const auto& s = out.segments[i];
    std::vector<std::string> labels;
    for (const auto& st : s.code.stabilizers) labels.push_back(st.label);
    nlohmann::json swaps = nlohmann::json::array();
    for (auto [a, b] : out.layers[i]) swaps.push_back({a, b});
    segs.push_back({{"segment", i},
                    {"stabilizers", labels},
                    {"mapping", mapping_to_json(s.stage1.solution, s.code)},
                    {"swaps_before", swaps},
                    {"stage1", {{"optimal", s.stage1.optimal},
                                {"L", s.stage1.L},
                                {"escalations", s.stage1.escalations},
                                {"total_bridge", s.stage1.total_bridge},
                                {"compatible_pairs", s.stage1.compatible_pairs},
                                {"vars", s.stage1.num_vars},
                                {"hard", s.stage1.num_hard},
                                {"soft", s.stage1.num_soft}}},
                    {"stage2", {{"optimal", s.stage2.optimal},
                                {"depth", s.stage2.circuit.depth},
                                {"lower_bound", s.stage2.lower_bound},
                                {"sequential_depth", s.stage2.sequential_depth}}},
                    {"retained", s.retained},
                    {"moved", s.moved}});
  }
  return {{"k", out.subsets.size()}, {"order", out.order}, {"segments", segs}};
}

}  // namespace bridgesynth
