#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bridgesynth/code.hpp"
#include "json.hpp"

namespace bridgesynth {

/// Undirected hardware coupling graph. Node ids are stable integers; removing defects
/// keeps the surviving ids unchanged, so `id_bound()` can exceed `num_nodes()`.
class CouplingGraph {
 public:
  CouplingGraph() = default;
  /// Throws ParameterError on self-loops, duplicate edges, duplicate nodes or edges to
  /// unknown nodes.
  CouplingGraph(std::string name, std::vector<int> nodes, std::vector<std::pair<int, int>> edges);

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  /// Sorted ascending.
  const std::vector<int>& nodes() const { return nodes_; }
  /// Sorted, each pair (a, b) with a < b.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& defects() const { return defects_; }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  /// One past the largest node id ever present.
  int id_bound() const { return static_cast<int>(present_.size()); }
  bool has_node(int id) const {
    return id >= 0 && id < id_bound() && present_[static_cast<std::size_t>(id)];
  }
  bool adjacent(int a, int b) const;
  /// Sorted neighbour ids. Throws ParameterError for unknown ids.
  const std::vector<int>& neighbors(int id) const;
  int degree(int id) const { return static_cast<int>(neighbors(id).size()); }

  bool operator==(const CouplingGraph& other) const {
    return name_ == other.name_ && nodes_ == other.nodes_ && edges_ == other.edges_ &&
           defects_ == other.defects_;
  }

 private:
  friend CouplingGraph remove_defects(const CouplingGraph& g, const std::vector<int>& bad);

  std::string name_;
  std::vector<int> nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> defects_;
  std::vector<bool> present_;
  std::vector<std::vector<int>> adj_;
};

enum class ArchFamily { Square, Hexagon, HeavySquare, HeavyHexagon, Path };

/// Square: rows x cols grid with id r*cols+c. Hexagon: brick-wall lattice (rows of
/// `cols` nodes, vertical rung between (i,j) and (i+1,j) when i+j is even). Heavy
/// variants: base lattice ids first, then one extra node per base edge in edge order.
/// Path: rows*cols nodes in a line.
CouplingGraph generate_arch(ArchFamily family, int rows, int cols);

/// Parses "square:5x5", "hexagon:3x7", "heavy_square:4x3", "heavy_hexagon:3x7" and
/// "path:4". Dashes are accepted in place of underscores.
CouplingGraph generate_arch(std::string_view spec);

/// Returns a copy without the given nodes and their incident edges. Removed ids are
/// appended to the copy's defect list.
CouplingGraph remove_defects(const CouplingGraph& g, const std::vector<int>& bad);

/// Node of minimum eccentricity, smallest id on ties. For an odd square grid this is the
/// middle node.
int center_node(const CouplingGraph& g);

/// 2|E| / |V|. Throws ParameterError on an empty graph.
Rational arch_density(const CouplingGraph& g);

/// Minimum-hop path from u to v, lexicographically smallest among shortest paths.
/// Throws NoPathError when v is unreachable, ParameterError for unknown ids.
std::vector<int> shortest_path(const CouplingGraph& g, int u, int v);

/// Hop distances from `source`; -1 for unreachable or absent ids. Indexed by id.
std::vector<int> bfs_distances(const CouplingGraph& g, int source);

nlohmann::json arch_to_json(const CouplingGraph& g);
CouplingGraph arch_from_json(const nlohmann::json& j);
CouplingGraph load_arch(const std::string& path);
void save_arch(const CouplingGraph& g, const std::string& path);

}  // namespace bridgesynth
