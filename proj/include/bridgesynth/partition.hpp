#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bridgesynth/arch.hpp"
#include "bridgesynth/circuit.hpp"
#include "bridgesynth/code.hpp"
#include "bridgesynth/mapping.hpp"
#include "bridgesynth/schedule.hpp"
#include "bridgesynth/verifier.hpp"

namespace bridgesynth {

/// Balanced k-way split of the stabilizers (sizes differ by at most one) that keeps the
/// interaction-graph cut small: greedy growth from seed-shuffled starts, then pairwise
/// swaps while one lowers the cut. Throws ParameterError unless 1 <= k <= #stabilizers.
std::vector<std::vector<int>> partition_stabilizers(const StabilizerCode& code, int k, std::uint64_t seed = 0);

/// Total weight of interaction edges between different subsets.
int cut_weight(const StabilizerCode& code, const std::vector<std::vector<int>>& subsets);

/// First the subset with the largest internal interaction weight, then repeatedly the one
/// sharing the most data qubits with everything chosen so far. Ties go to the lower index.
std::vector<int> order_subsets(const std::vector<std::vector<int>>& subsets, const StabilizerCode& code);

/// Same data qubits, only the listed stabilizers (labels kept).
StabilizerCode sub_code(const StabilizerCode& code, const std::vector<int>& subset);

struct CompileConfig {
  Stage1Config stage1;  // deadline is replaced per subset
  Stage2Config stage2;  // deadline is replaced per subset
  double stage1_seconds = 7200;
  double stage2_seconds = 7200;
  int k = 1;
  std::uint64_t seed = 0;
  int refine_sweeps = 2;  // extra forward passes seeded with the final placement
  int lookahead = -1;     // later subsets each segment keeps bare spots for; -1 all
};

struct SubsetResult {
  std::vector<int> stabs;  // indices into the full code
  StabilizerCode code;     // sub_code of the subset
  Stage1Result stage1;
  Stage2Result stage2;
  int retained = 0;  // prior positions kept
  int moved = 0;     // prior positions changed
};

/// Both stages on one subset. A non-empty `prior` feeds the retention objective.
SubsetResult solve_subset(const StabilizerCode& code, const std::vector<int>& subset, const CouplingGraph& arch,
                          const std::vector<int>& prior, const CompileConfig& cfg);

/// SWAPs (in execution order) that move every data qubit from `prev` to `next` (both per
/// data qubit, -1 for unplaced). Qubits move one at a time in index order along shortest
/// paths, displacing whatever sits on the way; when that does not settle every qubit
/// within a few passes, a spanning-tree leaf-by-leaf routing takes over. Throws
/// NoPathError when a target is unreachable and ParameterError on non-injective input.
std::vector<std::pair<int, int>> route_integration(const std::vector<int>& prev, const std::vector<int>& next,
                                                   const CouplingGraph& arch);

/// Replays SWAPs on a placement.
std::vector<int> apply_swaps(std::vector<int> placement, const std::vector<std::pair<int, int>>& swaps);

/// SWAP pseudo-gates placed as early as their qubits allow, keeping the given order on
/// shared qubits.
Circuit swap_layer(const std::vector<std::pair<int, int>>& swaps, int n, int segment);

struct CompileOutput {
  std::vector<std::vector<int>> subsets;
  std::vector<int> order;
  std::vector<SubsetResult> segments;  // in solve order; segment id = position
  std::vector<std::vector<std::pair<int, int>>> layers;  // layers[i] runs before segments[i]; layers[0] is empty
  Circuit circuit;  // SWAPs expanded; routing gates use segment id -(i) for layers[i]
  Metrics metrics;
  bool stage1_optimal = true;
  bool stage2_optimal = true;
};

/// Subset circuits in solve order with routing layers between them. k = 1 is the plain
/// two-stage pipeline.
CompileOutput compile_partitioned(const StabilizerCode& code, const CouplingGraph& arch, const CompileConfig& cfg);

/// Verifies every subset segment against its own mapping.
VerifyReport verify_compiled(const CompileOutput& out);

nlohmann::json plan_to_json(const CompileOutput& out);

}  // namespace bridgesynth
