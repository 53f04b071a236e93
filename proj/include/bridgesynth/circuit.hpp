#pragma once

#include <string>
#include <vector>

#include "bridgesynth/arch.hpp"
#include "bridgesynth/code.hpp"
#include "bridgesynth/schedule.hpp"
#include "json.hpp"

namespace bridgesynth {

/// T only exists so imported circuits with a non-Clifford gate can be represented and
/// rejected by the verifier.
enum class GateKind { R, H, CX, CZ, CY, M, SWAP, T };

const char* gate_name(GateKind k);
/// Throws ParameterError on an unknown name.
GateKind parse_gate_name(const std::string& name);
int gate_arity(GateKind k);

struct Gate {
  GateKind kind = GateKind::R;
  std::vector<int> qubits;  // physical node ids; control first
  int t = 0;
  std::string stab;   // owning stabilizer label, empty for routing
  std::string phase;  // init, enc, ctrl, dec, meas or route
  int segment = 0;
  bool operator==(const Gate&) const = default;
};

struct Circuit {
  int n = 0;  // node ids are below n
  std::vector<Gate> gates;  // sorted by step
  int depth() const;
  bool operator==(const Circuit&) const = default;
};

/// Turns a schedule into gates. CtrlP becomes CX, CY or CZ from the bridge node to the data
/// node depending on the Pauli. Steps are shifted by `offset`.
Circuit build_circuit(const ScheduledCircuit& sched, const StabilizerCode& code, const CouplingGraph& arch,
                      int segment = 0, int offset = 0);

/// Qubit ids in range, arity, per-qubit exclusivity per step and steps 1..depth all used.
std::vector<std::string> check_circuit(const Circuit& c);

struct Metrics {
  int extra_cnots = 0;
  int depth = 0;
  int two_qubit_total = 0;
  int ancilla_total = 0;  // number of ancilla resets, i.e. total bridge size over segments
  int swap_count = 0;
  bool operator==(const Metrics&) const = default;
};

/// Extra CNOTs are the encode and decode CNOTs plus three per SWAP, whether the SWAPs are
/// still pseudo-gates or already expanded into "route" CNOT triples.
Metrics compute_metrics(const Circuit& c);
nlohmann::json metrics_to_json(const Metrics& m);

/// Each SWAP becomes CX(a,b) CX(b,a) CX(a,b) on three consecutive steps. Every step that
/// holds a SWAP pushes all later steps back by two.
Circuit expand_swaps(const Circuit& c);

/// Gates of one segment, moved so the segment starts at step 1.
Circuit segment_circuit(const Circuit& c, int segment);

/// Appends `tail` after the last step of `head`.
void append_circuit(Circuit& head, const Circuit& tail);

nlohmann::json circuit_to_json(const Circuit& c);
/// Throws ParameterError on malformed input.
Circuit circuit_from_json(const nlohmann::json& j);

/// One line per gate ("CX 1 2"), TICK between steps.
std::string emit_stim_text(const Circuit& c);

}  // namespace bridgesynth
