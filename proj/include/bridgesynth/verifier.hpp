#pragma once

#include <climits>
#include <string>
#include <vector>

#include "bridgesynth/circuit.hpp"
#include "bridgesynth/code.hpp"
#include "bridgesynth/mapping.hpp"

namespace bridgesynth {

/// Hermitian Pauli string over physical nodes with a sign. Y is stored as x=z=1.
struct PauliFrame {
  std::vector<Pauli> ops;
  bool negative = false;

  PauliFrame() = default;
  explicit PauliFrame(int n) : ops(static_cast<std::size_t>(n), Pauli::I) {}

  int n() const { return static_cast<int>(ops.size()); }
  Pauli at(int q) const { return ops.at(static_cast<std::size_t>(q)); }
  void set(int q, Pauli p) { ops.at(static_cast<std::size_t>(q)) = p; }
  bool is_identity() const;
  std::string str() const;  // "+X0 Z4", "+I" for the identity
  bool operator==(const PauliFrame&) const = default;
};

/// P -> G P G^dagger for one Clifford gate. Every supported gate is self-inverse, so the
/// same map serves both directions. Throws UnsupportedGateError on T and on R/M.
void conjugate_gate(PauliFrame& frame, const Gate& g);

struct Propagation {
  PauliFrame frame;
  std::vector<std::string> violations;
};

/// Walks gates with first_step <= t <= last_step in reverse. A reset must see Z or I on its
/// qubit and clears it; a measurement must see I.
Propagation conjugate_backward(const Circuit& c, PauliFrame observable, int last_step = INT_MAX, int first_step = 1);

/// Same window, forward. Resets clear their qubit; measurements are transparent.
PauliFrame conjugate_forward(const Circuit& c, PauliFrame frame, int first_step = 1, int last_step = INT_MAX);

struct StabilizerCheck {
  std::string label;
  bool pass = false;
  std::string detail;
  PauliFrame initial;  // back-propagated measured observable
};

struct VerifyReport {
  std::vector<StabilizerCheck> checks;
  std::vector<std::string> errors;  // circuit-level problems
  bool ok() const;
  std::string str() const;
};

/// For each stabilizer of `code`, Z on its measured node just before the measurement is
/// propagated back to step 1. It must equal the stabilizer on the placed data nodes, be Z
/// or I on the stabilizer's own bridge, I elsewhere, and have sign +1. Partitioned
/// circuits are checked one segment_circuit at a time.
VerifyReport verify_syndrome_extraction(const Circuit& c, const StabilizerCode& code, const MappingSolution& sol);

/// Injects `pauli` on data qubit `q` before step 1 and reports the labels whose
/// measurement flips. Throws ParameterError when q is not placed.
std::vector<std::string> verify_error_detection(const Circuit& c, const StabilizerCode& code, const MappingSolution& sol,
                                                int q, Pauli pauli);

/// Labels of the stabilizers that anticommute with a single-qubit Pauli on q.
std::vector<std::string> expected_flips(const StabilizerCode& code, int q, Pauli pauli);

}  // namespace bridgesynth
