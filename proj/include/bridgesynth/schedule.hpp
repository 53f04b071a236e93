#pragma once

#include <string>
#include <vector>

#include "bridgesynth/code.hpp"
#include "bridgesynth/deadline.hpp"
#include "bridgesynth/mapping.hpp"
#include "bridgesynth/sat/formula.hpp"

namespace bridgesynth {

enum class OpKind { Reset, Hadamard, EncCnot, CtrlP, DecCnot, Measure };
enum class OpPhase { Init, Enc, Ctrl, Dec, Meas };

const char* op_kind_name(OpKind k);
const char* op_phase_name(OpPhase p);

/// One candidate operation of a syndrome-extraction circuit. Two-qubit operations act
/// from `a` (control) to `b` (target); single-qubit ones leave `b` at -1.
struct GateOp {
  OpKind kind = OpKind::Reset;
  OpPhase phase = OpPhase::Init;
  int stab = -1;
  int a = -1;
  int b = -1;
  int data = -1;          // data qubit of a CtrlP
  Pauli pauli = Pauli::I;  // operator of a CtrlP

  bool operator==(const GateOp&) const = default;
};

/// Every operation a schedule may use. Reset and CtrlP are mandatory; Hadamards,
/// bridge CNOTs and the Measure exist only when the solver picks the matching tree edge
/// or root.
struct OperationSet {
  std::vector<GateOp> ops;
  std::vector<std::vector<int>> bridges;  // copy of the mapping's anc sets
  int num_stabilizers = 0;
};

/// Bridge CNOT candidates cover both directions of every coupling-graph edge inside a
/// bridge.
OperationSet enumerate_operations(const MappingSolution& sol, const StabilizerCode& code,
                                  const CouplingGraph& arch);

struct ScheduledGate {
  GateOp op;
  int t = 0;
  bool operator==(const ScheduledGate&) const = default;
};

struct ScheduledCircuit {
  std::vector<ScheduledGate> gates;  // sorted by step, then operation order
  int depth = 0;
  bool operator==(const ScheduledCircuit&) const = default;
};

/// Constraint families of the scheduling model. Every flag defaults to on; switching one
/// off is only meant for mutation experiments.
struct Stage2Families {
  bool single_root = true;      // exactly one encode and one decode root
  bool single_parent = true;    // every non-root bridge node has exactly one incoming CNOT
  bool prepared_control = true; // a CNOT's control is prepared first (decode: mirrored)
  bool anticommute_parity = true;
  bool shared_serialization = true;
  bool phase_order = true;      // reset < prepare < control gates < unprepare < measure per node
};

enum class DepthSearch { Binary, Linear };

struct Stage2Config {
  Stage2Families families;
  /// Force the decode tree to reuse the encode tree's edges and root.
  bool mirror_decode = false;
  DepthSearch search = DepthSearch::Binary;
  Deadline deadline = Deadline::never();
};

struct Stage2Encoding {
  sat::CnfFormula cnf;
  int T = 0;
  std::vector<std::vector<sat::Lit>> time;  // [op][t-1]
  std::vector<sat::Lit> present;            // 0 for mandatory operations
};

/// Throws ParameterError for T < 1.
Stage2Encoding encode_stage2(const OperationSet& ops, int T, const Stage2Config& cfg = {});

/// Throws InternalError when a present operation has no unique step.
ScheduledCircuit decode_stage2(const sat::Model& model, const Stage2Encoding& enc, const OperationSet& ops);

struct ScheduleReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

/// Rule-by-rule re-check of a schedule against the mapping, independent of the encoder.
ScheduleReport check_schedule(const ScheduledCircuit& circuit, const MappingSolution& sol,
                              const StabilizerCode& code);

/// Stabilizers one after another, each with a breadth-first tree rooted at the bridge node
/// of smallest eccentricity and list-scheduled as early as its qubits allow.
ScheduledCircuit sequential_schedule(const OperationSet& ops);

/// Depth no schedule can beat: per-node operation counts and the fixed prefix and suffix
/// around control gates.
int depth_lower_bound(const OperationSet& ops);

struct DepthProbe {
  int T = 0;
  std::string status;  // SAT, UNSAT or TIMEOUT
};

struct Stage2Result {
  ScheduledCircuit circuit;
  bool optimal = false;
  int lower_bound = 0;
  int sequential_depth = 0;
  std::vector<DepthProbe> probes;
};

/// Depth search between the lower bound and the sequential schedule. The result is
/// optimal iff depth-1 was proven UNSAT before the deadline.
Stage2Result minimize_depth(const OperationSet& ops, const Stage2Config& cfg = {});

}  // namespace bridgesynth
