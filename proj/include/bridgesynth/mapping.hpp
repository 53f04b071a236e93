#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bridgesynth/arch.hpp"
#include "bridgesynth/code.hpp"
#include "bridgesynth/deadline.hpp"
#include "bridgesynth/sat/formula.hpp"
#include "bridgesynth/sat/maxsat.hpp"
#include "json.hpp"

namespace bridgesynth {

/// Data placement, ancilla bridges and data-to-bridge couplings. Stabilizer indices refer
/// to the code the mapping was solved for.
struct MappingSolution {
  std::vector<int> pi;                  // data qubit -> node, -1 when unplaced
  std::vector<std::vector<int>> anc;    // per stabilizer, sorted node ids
  std::vector<std::map<int, int>> cp;   // per stabilizer, data qubit -> bridge node

  int total_bridge_size() const;
  int compatible_pairs() const;
  bool operator==(const MappingSolution&) const = default;
};

struct Stage1Encoding;

struct Stage1Config {
  /// Per-stabilizer bridge size limit; empty means the stabilizer weight.
  std::vector<int> L;
  /// Escalation ceiling for every L[s]; 0 means the number of usable nodes.
  int L_cap = 0;

  /// With `lexicographic` the three objectives become strata in the order bridge size,
  /// conflicts, retention; a zero weight drops its objective. Otherwise the weights are
  /// used as given.
  bool lexicographic = true;
  std::uint64_t w1 = 1;
  std::uint64_t w2 = 1;
  std::uint64_t w3 = 1;
  /// Previous node per data qubit (-1 for none); feeds the retention objective.
  std::vector<int> prior;
  /// Lexicographic order bridge size, retention, conflicts instead.
  bool retention_before_conflicts = false;
  /// Stabilizers solved later, one group per later segment. Lowest stratum: each wants a
  /// free node next to all of its (placed) data qubits, distinct within a group.
  std::vector<std::vector<Stabilizer>> lookahead;

  /// Place every data qubit of the code, including ones no stabilizer touches.
  bool map_all_data = false;
  /// Restrict placement and bridges to these nodes; empty means the whole graph.
  std::vector<int> region;
  /// One traversal per start vertex instead of an elected root.
  bool faithful_bft = false;

  Deadline deadline = Deadline::never();
  /// Passed to the MaxSAT engine; see sat::MaxSatOptions.
  std::string external_command;

  /// Called after the built-in constraints; may add hard clauses over registered variables.
  std::function<void(Stage1Encoding&)> extra_hard;
};

/// Formula plus lookup tables; absent variables are 0.
struct Stage1Encoding {
  sat::WcnfFormula wcnf;
  std::vector<int> nodes;                          // usable nodes, index = column below
  std::vector<int> L;
  std::vector<std::vector<sat::Lit>> map;          // [q][node index]
  std::vector<std::vector<sat::Lit>> anc;          // [s][node index]
  std::vector<std::vector<std::vector<sat::Lit>>> cp;  // [s][k-th data qubit of s][node index]
  std::uint64_t anc_weight = 0;
  std::uint64_t conflict_weight = 0;
  std::uint64_t retention_weight = 0;
  std::uint64_t lookahead_weight = 0;
  int num_retention = 0;
  int num_lookahead = 0;
};

/// Throws InfeasibleError when the code has more data qubits to place than usable nodes.
Stage1Encoding encode_stage1(const StabilizerCode& code, const CouplingGraph& arch,
                             const Stage1Config& cfg = {});

/// Reads map/anc/cp variables back from their tags. Throws InternalError when a placed
/// qubit or coupling is not exactly one-hot.
MappingSolution decode_stage1(const sat::Model& model, const sat::VarRegistry& vars,
                              const StabilizerCode& code);

struct MappingReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

/// Graph-search re-check of the placement rules. `L` (optional) bounds bridge sizes and
/// `region` (optional) restricts the nodes used.
MappingReport validate_mapping(const MappingSolution& sol, const StabilizerCode& code,
                               const CouplingGraph& arch, const std::vector<int>& L = {},
                               const std::vector<int>& region = {});

struct Stage1Result {
  MappingSolution solution;
  bool optimal = false;
  std::vector<int> L;
  int escalations = 0;
  int total_bridge = 0;
  int compatible_pairs = 0;
  int retained = 0;
  std::uint64_t cost = 0;
  int num_vars = 0;
  std::size_t num_hard = 0;
  std::size_t num_soft = 0;
};

/// Encode, solve, decode and validate, raising every L[s] by one after each UNSAT answer
/// until the cap. Throws InfeasibleError past the cap and TimeoutError when no model was
/// found in time.
Stage1Result solve_stage1(const StabilizerCode& code, const CouplingGraph& arch,
                          const Stage1Config& cfg = {});

nlohmann::json mapping_to_json(const MappingSolution& sol, const StabilizerCode& code);
MappingSolution mapping_from_json(const nlohmann::json& j, const StabilizerCode& code);

}  // namespace bridgesynth
