#include "bridgesynth/arch.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <limits>
#include <set>

#include "bridgesynth/errors.hpp"

namespace bridgesynth {

CouplingGraph::CouplingGraph(std::string name, std::vector<int> nodes,
                             std::vector<std::pair<int, int>> edges)
    : name_(std::move(name)) {
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw ParameterError("duplicate node id in architecture '" + name_ + "'");
  }
  if (!nodes.empty() && nodes.front() < 0) throw ParameterError("negative node id");
  nodes_ = std::move(nodes);
  const int bound = nodes_.empty() ? 0 : nodes_.back() + 1;
  present_.assign(static_cast<std::size_t>(bound), false);
  adj_.assign(static_cast<std::size_t>(bound), {});
  for (int n : nodes_) present_[static_cast<std::size_t>(n)] = true;
  for (auto& [a, b] : edges) {
    if (a == b) throw ParameterError("self-loop on node " + std::to_string(a));
    if (!has_node(a) || !has_node(b)) {
      throw ParameterError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                           ") references an unknown node");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw ParameterError("duplicate edge in architecture '" + name_ + "'");
  }
  edges_ = std::move(edges);
  for (const auto& [a, b] : edges_) {
    adj_[static_cast<std::size_t>(a)].push_back(b);
    adj_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& list : adj_) std::sort(list.begin(), list.end());
}

bool CouplingGraph::adjacent(int a, int b) const {
  if (!has_node(a) || !has_node(b)) return false;
  const auto& list = adj_[static_cast<std::size_t>(a)];
  return std::binary_search(list.begin(), list.end(), b);
}

const std::vector<int>& CouplingGraph::neighbors(int id) const {
  if (!has_node(id)) throw ParameterError("unknown node id " + std::to_string(id));
  return adj_[static_cast<std::size_t>(id)];
}

namespace {

CouplingGraph make_heavy(const CouplingGraph& base, const std::string& name) {
  std::vector<int> nodes = base.nodes();
  std::vector<std::pair<int, int>> edges;
  int next = base.id_bound();
  for (const auto& [a, b] : base.edges()) {
    nodes.push_back(next);
    edges.emplace_back(a, next);
    edges.emplace_back(b, next);
    ++next;
  }
  return CouplingGraph(name, std::move(nodes), std::move(edges));
}

CouplingGraph square_grid(int rows, int cols) {
  std::vector<int> nodes(static_cast<std::size_t>(rows * cols));
  for (int i = 0; i < rows * cols; ++i) nodes[static_cast<std::size_t>(i)] = i;
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(r * cols + c, r * cols + c + 1);
      if (r + 1 < rows) edges.emplace_back(r * cols + c, (r + 1) * cols + c);
    }
  }
  return CouplingGraph("", std::move(nodes), std::move(edges));
}

CouplingGraph brick_wall(int rows, int cols) {
  std::vector<int> nodes(static_cast<std::size_t>(rows * cols));
  for (int i = 0; i < rows * cols; ++i) nodes[static_cast<std::size_t>(i)] = i;
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(r * cols + c, r * cols + c + 1);
      if (r + 1 < rows && (r + c) % 2 == 0) edges.emplace_back(r * cols + c, (r + 1) * cols + c);
    }
  }
  return CouplingGraph("", std::move(nodes), std::move(edges));
}

std::string dims(int rows, int cols) { return std::to_string(rows) + "x" + std::to_string(cols); }

int parse_positive(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParameterError("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

CouplingGraph generate_arch(ArchFamily family, int rows, int cols) {
  if (rows < 1 || cols < 1) throw ParameterError("architecture dimensions must be >= 1");
  CouplingGraph g;
  switch (family) {
    case ArchFamily::Square:
      g = square_grid(rows, cols);
      g.set_name("square_" + dims(rows, cols));
      break;
    case ArchFamily::Hexagon:
      g = brick_wall(rows, cols);
      g.set_name("hexagon_" + dims(rows, cols));
      break;
    case ArchFamily::HeavySquare:
      g = make_heavy(square_grid(rows, cols), "heavy_square_" + dims(rows, cols));
      break;
    case ArchFamily::HeavyHexagon:
      g = make_heavy(brick_wall(rows, cols), "heavy_hexagon_" + dims(rows, cols));
      break;
    case ArchFamily::Path:
      g = square_grid(1, rows * cols);
      g.set_name("path_" + std::to_string(rows * cols));
      break;
  }
  return g;
}

CouplingGraph generate_arch(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ParameterError("architecture spec must look like family:RxC, got '" + std::string(spec) + "'");
  }
  std::string family(spec.substr(0, colon));
  std::replace(family.begin(), family.end(), '-', '_');
  const std::string_view arg = spec.substr(colon + 1);
  if (family == "path") return generate_arch(ArchFamily::Path, 1, parse_positive(arg, "path length"));
  const auto x = arg.find('x');
  if (x == std::string_view::npos) throw ParameterError("expected RxC dimensions in '" + std::string(spec) + "'");
  const int rows = parse_positive(arg.substr(0, x), "row count");
  const int cols = parse_positive(arg.substr(x + 1), "column count");
  if (family == "square") return generate_arch(ArchFamily::Square, rows, cols);
  if (family == "hexagon") return generate_arch(ArchFamily::Hexagon, rows, cols);
  if (family == "heavy_square") return generate_arch(ArchFamily::HeavySquare, rows, cols);
  if (family == "heavy_hexagon") return generate_arch(ArchFamily::HeavyHexagon, rows, cols);
  throw ParameterError("unknown architecture family '" + family + "'");
}

CouplingGraph remove_defects(const CouplingGraph& g, const std::vector<int>& bad) {
  std::set<int> removed;
  for (int id : bad) {
    if (!g.has_node(id)) throw ParameterError("defect id " + std::to_string(id) + " is not a node");
    removed.insert(id);
  }
  CouplingGraph out = g;
  if (removed.empty()) return out;
  std::vector<int> nodes;
  for (int n : g.nodes()) {
    if (removed.count(n) == 0) nodes.push_back(n);
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : g.edges()) {
    if (removed.count(e.first) == 0 && removed.count(e.second) == 0) edges.push_back(e);
  }
  out.nodes_ = std::move(nodes);
  out.edges_ = std::move(edges);
  for (int id : removed) {
    out.present_[static_cast<std::size_t>(id)] = false;
    out.adj_[static_cast<std::size_t>(id)].clear();
    out.defects_.push_back(id);
  }
  std::sort(out.defects_.begin(), out.defects_.end());
  for (int n : out.nodes_) {
    auto& list = out.adj_[static_cast<std::size_t>(n)];
    list.erase(std::remove_if(list.begin(), list.end(), [&](int m) { return removed.count(m) != 0; }),
               list.end());
  }
  return out;
}

std::vector<int> bfs_distances(const CouplingGraph& g, int source) {
  std::vector<int> dist(static_cast<std::size_t>(g.id_bound()), -1);
  if (!g.has_node(source)) throw ParameterError("unknown node id " + std::to_string(source));
  std::deque<int> queue{source};
  dist[static_cast<std::size_t>(source)] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int w : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

int center_node(const CouplingGraph& g) {
  if (g.num_nodes() == 0) throw ParameterError("empty architecture has no centre");
  int best = -1;
  int best_ecc = std::numeric_limits<int>::max();
  for (int n : g.nodes()) {
    const auto dist = bfs_distances(g, n);
    int ecc = 0;
    for (int m : g.nodes()) {
      const int d = dist[static_cast<std::size_t>(m)];
      ecc = std::max(ecc, d < 0 ? std::numeric_limits<int>::max() / 2 : d);
    }
    if (ecc < best_ecc) {
      best_ecc = ecc;
      best = n;
    }
  }
  return best;
}

Rational arch_density(const CouplingGraph& g) {
  if (g.num_nodes() == 0) throw ParameterError("density of an empty architecture");
  return Rational::make(2LL * g.num_edges(), g.num_nodes());
}

std::vector<int> shortest_path(const CouplingGraph& g, int u, int v) {
  if (!g.has_node(u)) throw ParameterError("unknown node id " + std::to_string(u));
  const auto dist = bfs_distances(g, v);
  if (dist[static_cast<std::size_t>(u)] < 0) {
    throw NoPathError("no path between " + std::to_string(u) + " and " + std::to_string(v));
  }
  std::vector<int> path{u};
  int cur = u;
  while (cur != v) {
    const int want = dist[static_cast<std::size_t>(cur)] - 1;
    for (int w : g.neighbors(cur)) {
      if (dist[static_cast<std::size_t>(w)] == want) {
        cur = w;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

nlohmann::json arch_to_json(const CouplingGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  return {{"name", g.name()}, {"nodes", g.nodes()}, {"edges", edges}, {"defects", g.defects()}};
}

CouplingGraph arch_from_json(const nlohmann::json& j) {
  try {
    std::vector<int> nodes = j.at("nodes").get<std::vector<int>>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    std::vector<int> defects = j.value("defects", std::vector<int>{});
    // Defects may be listed either still present in nodes/edges or already removed.
    std::vector<int> to_remove;
    std::vector<int> already;
    for (int d : defects) {
      (std::find(nodes.begin(), nodes.end(), d) != nodes.end() ? to_remove : already).push_back(d);
    }
    for (int d : already) nodes.push_back(d);
    CouplingGraph g(j.value("name", std::string("arch")), std::move(nodes), std::move(edges));
    to_remove.insert(to_remove.end(), already.begin(), already.end());
    return remove_defects(g, to_remove);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed architecture JSON: ") + e.what());
  }
}

CouplingGraph load_arch(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open architecture file '" + path + "'");
  try {
    return arch_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError("cannot parse architecture file '" + path + "': " + e.what());
  }
}

void save_arch(const CouplingGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  out << arch_to_json(g).dump(2) << "\n";
}

}  // namespace bridgesynth
