#include "bridgesynth/verifier.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "bridgesynth/errors.hpp"

namespace bridgesynth {

bool PauliFrame::is_identity() const {
  return std::all_of(ops.begin(), ops.end(), [](Pauli p) { return p == Pauli::I; });
}

std::string PauliFrame::str() const {
  std::ostringstream out;
  out << (negative ? '-' : '+');
  bool any = false;
  for (std::size_t q = 0; q < ops.size(); ++q) {
    if (ops[q] == Pauli::I) continue;
    if (any) out << ' ';
    out << pauli_char(ops[q]) << q;
    any = true;
  }
  if (!any) out << 'I';
  return out.str();
}

namespace {

struct Bits {
  bool x, z;
};

Bits bits(const PauliFrame& f, int q) {
  const Pauli p = f.at(q);
  return {has_x(p), has_z(p)};
}

void put(PauliFrame& f, int q, Bits b) { f.set(q, pauli_from_bits(b.x, b.z)); }

void conj_h(PauliFrame& f, int q) {
  Bits b = bits(f, q);
  if (b.x && b.z) f.negative = !f.negative;
  std::swap(b.x, b.z);
  put(f, q, b);
}

// P -> S P S^dagger, or S^dagger P S with `dagger`.
void conj_s(PauliFrame& f, int q, bool dagger) {
  Bits b = bits(f, q);
  if (dagger ? (b.x && !b.z) : (b.x && b.z)) f.negative = !f.negative;
  b.z = b.z != b.x;
  put(f, q, b);
}

void conj_cx(PauliFrame& f, int c, int t) {
  Bits bc = bits(f, c), bt = bits(f, t);
  if (bc.x && bt.z && (bt.x == bc.z)) f.negative = !f.negative;
  bt.x = bt.x != bc.x;
  bc.z = bc.z != bt.z;
  put(f, c, bc);
  put(f, t, bt);
}

}  // namespace

void conjugate_gate(PauliFrame& frame, const Gate& g) {
  for (int q : g.qubits) {
    if (q < 0 || q >= frame.n()) throw ParameterError("gate qubit " + std::to_string(q) + " outside the frame");
  }
  switch (g.kind) {
    case GateKind::H: conj_h(frame, g.qubits[0]); return;
    case GateKind::CX: conj_cx(frame, g.qubits[0], g.qubits[1]); return;
    case GateKind::CZ:
      conj_h(frame, g.qubits[1]);
      conj_cx(frame, g.qubits[0], g.qubits[1]);
      conj_h(frame, g.qubits[1]);
      return;
    case GateKind::CY:
      conj_s(frame, g.qubits[1], true);
      conj_cx(frame, g.qubits[0], g.qubits[1]);
      conj_s(frame, g.qubits[1], false);
      return;
    case GateKind::SWAP: {
      const Pauli a = frame.at(g.qubits[0]);
      frame.set(g.qubits[0], frame.at(g.qubits[1]));
      frame.set(g.qubits[1], a);
      return;
    }
    case GateKind::R:
    case GateKind::M:
    case GateKind::T: break;
  }
  throw UnsupportedGateError(std::string("no conjugation rule for ") + gate_name(g.kind));
}

Propagation conjugate_backward(const Circuit& c, PauliFrame observable, int last_step, int first_step) {
  Propagation out{std::move(observable), {}};
  PauliFrame& f = out.frame;
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    const Gate& g = *it;
    if (g.t > last_step || g.t < first_step) continue;
    if (g.kind == GateKind::R) {
      const int q = g.qubits[0];
      if (has_x(f.at(q))) out.violations.push_back("reset of " + std::to_string(q) + " at step " + std::to_string(g.t) + " sees " + pauli_char(f.at(q)));
      f.set(q, Pauli::I);
    } else if (g.kind == GateKind::M) {
      const int q = g.qubits[0];
      if (f.at(q) != Pauli::I) {
        out.violations.push_back("measurement of " + std::to_string(q) + " (" + g.stab + ") at step " + std::to_string(g.t) + " sees " + pauli_char(f.at(q)));
      }
    } else {
      conjugate_gate(f, g);
    }
  }
  return out;
}

PauliFrame conjugate_forward(const Circuit& c, PauliFrame frame, int first_step, int last_step) {
  for (const Gate& g : c.gates) {
    if (g.t > last_step || g.t < first_step) continue;
    if (g.kind == GateKind::R) frame.set(g.qubits[0], Pauli::I);
    else if (g.kind != GateKind::M) conjugate_gate(frame, g);
  }
  return frame;
}

bool VerifyReport::ok() const {
  return errors.empty() && std::all_of(checks.begin(), checks.end(), [](const StabilizerCheck& c) { return c.pass; });
}

std::string VerifyReport::str() const {
  std::ostringstream out;
  for (const auto& e : errors) out << "error: " << e << '\n';
  for (const auto& c : checks) {
    out << c.label << ": " << (c.pass ? "PASS" : "FAIL");
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << '\n';
  }
  return out.str();
}

VerifyReport verify_syndrome_extraction(const Circuit& c, const StabilizerCode& code, const MappingSolution& sol) {
  VerifyReport report;
  report.errors = check_circuit(c);
  if (static_cast<int>(sol.anc.size()) != code.num_stabilizers() || static_cast<int>(sol.pi.size()) != code.num_data) {
    report.errors.push_back("mapping does not match the code");
    return report;
  }
  std::map<int, int> data_at;  // node -> data qubit
  for (int q = 0; q < code.num_data; ++q) {
    const int node = sol.pi[static_cast<std::size_t>(q)];
    if (node < 0) continue;
    if (node >= c.n) {
      report.errors.push_back("data qubit " + std::to_string(q) + " placed outside the circuit");
      return report;
    }
    data_at[node] = q;
  }
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::T) throw UnsupportedGateError("circuit contains a T gate");
  }

  for (int s = 0; s < code.num_stabilizers(); ++s) {
    const Stabilizer& stab = code.stabilizers[static_cast<std::size_t>(s)];
    StabilizerCheck check;
    check.label = stab.label;
    std::vector<const Gate*> meas;
    for (const Gate& g : c.gates) {
      if (g.kind == GateKind::M && g.stab == stab.label) meas.push_back(&g);
    }
    if (meas.size() != 1) {
      check.detail = std::to_string(meas.size()) + " measurements";
      report.checks.push_back(std::move(check));
      continue;
    }
    PauliFrame obs(c.n);
    obs.set(meas[0]->qubits[0], Pauli::Z);
    Propagation p = conjugate_backward(c, obs, meas[0]->t - 1, 1);
    check.initial = p.frame;
    std::vector<std::string> problems = std::move(p.violations);
    if (p.frame.negative) problems.push_back("sign -1");
    for (int q : stab.data_qubits()) {
      if (sol.pi[static_cast<std::size_t>(q)] < 0) problems.push_back("qubit " + std::to_string(q) + " unplaced");
    }
    const auto& bridge = sol.anc[static_cast<std::size_t>(s)];
    for (int node = 0; node < c.n; ++node) {
      const Pauli got = p.frame.at(node);
      auto d = data_at.find(node);
      if (d != data_at.end()) {
        if (got != stab.at(d->second)) {
          problems.push_back(std::string("data ") + std::to_string(d->second) + " carries " + pauli_char(got) + ", want " +
                             pauli_char(stab.at(d->second)));
        }
      } else if (got != Pauli::I) {
        const bool own = std::binary_search(bridge.begin(), bridge.end(), node);
        if (!own || got != Pauli::Z) problems.push_back(std::string("node ") + std::to_string(node) + " carries " + pauli_char(got));
      }
    }
    check.pass = problems.empty();
    for (std::size_t i = 0; i < problems.size(); ++i) check.detail += (i ? "; " : "") + problems[i];
    if (!check.pass) check.detail += "; frame " + p.frame.str();
    report.checks.push_back(std::move(check));
  }
  return report;
}

std::vector<std::string> verify_error_detection(const Circuit& c, const StabilizerCode& code, const MappingSolution& sol,
                                                int q, Pauli pauli) {
  if (q < 0 || q >= code.num_data || q >= static_cast<int>(sol.pi.size()) || sol.pi[static_cast<std::size_t>(q)] < 0) {
    throw ParameterError("error location " + std::to_string(q) + " is not a placed data qubit");
  }
  PauliFrame f(c.n);
  f.set(sol.pi[static_cast<std::size_t>(q)], pauli);
  std::set<std::string> flipped;
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::M) {
      if (has_x(f.at(g.qubits[0]))) flipped.insert(g.stab);
    } else if (g.kind == GateKind::R) {
      f.set(g.qubits[0], Pauli::I);
    } else {
      conjugate_gate(f, g);
    }
  }
  return {flipped.begin(), flipped.end()};
}

std::vector<std::string> expected_flips(const StabilizerCode& code, int q, Pauli pauli) {
  std::set<std::string> out;
  for (const auto& s : code.stabilizers) {
    if (anticommute(s.at(q), pauli)) out.insert(s.label);
  }
  return {out.begin(), out.end()};
}

}  // namespace bridgesynth
