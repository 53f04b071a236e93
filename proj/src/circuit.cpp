#include "bridgesynth/circuit.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <sstream>

#include "bridgesynth/errors.hpp"

namespace bridgesynth {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::R: return "R";
    case GateKind::H: return "H";
    case GateKind::CX: return "CX";
    case GateKind::CZ: return "CZ";
    case GateKind::CY: return "CY";
    case GateKind::M: return "M";
    case GateKind::SWAP: return "SWAP";
    case GateKind::T: return "T";
  }
  return "?";
}

GateKind parse_gate_name(const std::string& name) {
  for (GateKind k : {GateKind::R, GateKind::H, GateKind::CX, GateKind::CZ, GateKind::CY, GateKind::M, GateKind::SWAP,
                     GateKind::T}) {
    if (name == gate_name(k)) return k;
  }
  throw ParameterError("unknown gate '" + name + "'");
}

int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::CY:
    case GateKind::SWAP: return 2;
    default: return 1;
  }
}

int Circuit::depth() const {
  int d = 0;
  for (const auto& g : gates) d = std::max(d, g.t);
  return d;
}

namespace {

void sort_gates(Circuit& c) {
  std::stable_sort(c.gates.begin(), c.gates.end(), [](const Gate& a, const Gate& b) { return a.t < b.t; });
}

}  // namespace

Circuit build_circuit(const ScheduledCircuit& sched, const StabilizerCode& code, const CouplingGraph& arch, int segment,
                      int offset) {
  Circuit c;
  c.n = arch.id_bound();
  for (const auto& sg : sched.gates) {
    const GateOp& op = sg.op;
    Gate g;
    g.t = sg.t + offset;
    g.segment = segment;
    g.stab = code.stabilizers.at(static_cast<std::size_t>(op.stab)).label;
    g.phase = op_phase_name(op.phase);
    switch (op.kind) {
      case OpKind::Reset: g.kind = GateKind::R; break;
      case OpKind::Hadamard: g.kind = GateKind::H; break;
      case OpKind::Measure: g.kind = GateKind::M; break;
      case OpKind::EncCnot:
      case OpKind::DecCnot: g.kind = GateKind::CX; break;
      case OpKind::CtrlP:
        switch (op.pauli) {
          case Pauli::X: g.kind = GateKind::CX; break;
          case Pauli::Y: g.kind = GateKind::CY; break;
          case Pauli::Z: g.kind = GateKind::CZ; break;
          case Pauli::I: throw InternalError("control gate with identity Pauli");
        }
        break;
    }
    g.qubits = {op.a};
    if (op.b >= 0) g.qubits.push_back(op.b);
    c.gates.push_back(std::move(g));
  }
  sort_gates(c);
  return c;
}

std::vector<std::string> check_circuit(const Circuit& c) {
  std::vector<std::string> out;
  std::set<std::pair<int, int>> busy;
  std::set<int> steps;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    const std::string where = "gate " + std::to_string(i) + " (" + gate_name(g.kind) + ")";
    if (g.t < 1) out.push_back(where + " at step " + std::to_string(g.t));
    if (static_cast<int>(g.qubits.size()) != gate_arity(g.kind)) out.push_back(where + " has wrong arity");
    if (i > 0 && c.gates[i - 1].t > g.t) out.push_back(where + " out of step order");
    steps.insert(g.t);
    for (int q : g.qubits) {
      if (q < 0 || q >= c.n) out.push_back(where + " acts on qubit " + std::to_string(q) + " out of range");
      if (!busy.emplace(q, g.t).second) out.push_back(where + " reuses qubit " + std::to_string(q) + " in its step");
    }
    if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1]) out.push_back(where + " acts twice on one qubit");
  }
  for (int t = 1; t <= c.depth(); ++t) {
    if (!steps.count(t)) out.push_back("step " + std::to_string(t) + " is empty");
  }
  return out;
}

Metrics compute_metrics(const Circuit& c) {
  Metrics m;
  m.depth = c.depth();
  int route_cx = 0;
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::SWAP) {
      ++m.swap_count;
      m.two_qubit_total += 3;
      continue;
    }
    if (gate_arity(g.kind) == 2) ++m.two_qubit_total;
    if (g.kind == GateKind::R && g.phase != "route") ++m.ancilla_total;
    if (g.kind != GateKind::CX) continue;
    if (g.phase == "enc" || g.phase == "dec") ++m.extra_cnots;
    if (g.phase == "route") ++route_cx;
  }
  m.swap_count += route_cx / 3;
  m.extra_cnots += 3 * m.swap_count;
  return m;
}

nlohmann::json metrics_to_json(const Metrics& m) {
  return {{"extra_cnots", m.extra_cnots},
          {"depth", m.depth},
          {"two_qubit_total", m.two_qubit_total},
          {"ancilla_total", m.ancilla_total},
          {"swap_count", m.swap_count}};
}

Circuit expand_swaps(const Circuit& c) {
  std::set<int> swap_steps;
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::SWAP) swap_steps.insert(g.t);
  }
  Circuit out;
  out.n = c.n;
  for (const auto& g : c.gates) {
    int shift = 0;
    for (int t : swap_steps) {
      if (t < g.t) shift += 2;
    }
    if (g.kind != GateKind::SWAP) {
      Gate h = g;
      h.t += shift;
      out.gates.push_back(std::move(h));
      continue;
    }
    const int a = g.qubits.at(0), b = g.qubits.at(1);
    const int pairs[3][2] = {{a, b}, {b, a}, {a, b}};
    for (int k = 0; k < 3; ++k) {
      Gate h = g;
      h.kind = GateKind::CX;
      h.qubits = {pairs[k][0], pairs[k][1]};
      h.t = g.t + shift + k;
      out.gates.push_back(std::move(h));
    }
  }
  sort_gates(out);
  return out;
}

Circuit segment_circuit(const Circuit& c, int segment) {
  Circuit out;
  out.n = c.n;
  int first = INT_MAX;
  for (const auto& g : c.gates) {
    if (g.segment == segment) first = std::min(first, g.t);
  }
  for (const auto& g : c.gates) {
    if (g.segment != segment) continue;
    Gate h = g;
    h.t -= first - 1;
    out.gates.push_back(std::move(h));
  }
  return out;
}

void append_circuit(Circuit& head, const Circuit& tail) {
  const int offset = head.depth();
  head.n = std::max(head.n, tail.n);
  for (Gate g : tail.gates) {
    g.t += offset;
    head.gates.push_back(std::move(g));
  }
  sort_gates(head);
}

nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : c.gates) {
    gates.push_back({{"kind", gate_name(g.kind)},
                     {"qubits", g.qubits},
                     {"t", g.t},
                     {"stab", g.stab},
                     {"phase", g.phase},
                     {"segment", g.segment}});
  }
  return {{"n", c.n}, {"gates", gates}, {"metrics", metrics_to_json(compute_metrics(c))}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
  try {
    Circuit c;
    c.n = j.at("n").get<int>();
    for (const auto& row : j.at("gates")) {
      Gate g;
      g.kind = parse_gate_name(row.at("kind").get<std::string>());
      g.qubits = row.at("qubits").get<std::vector<int>>();
      g.t = row.at("t").get<int>();
      g.stab = row.value("stab", std::string());
      g.phase = row.value("phase", std::string());
      g.segment = row.value("segment", 0);
      if (static_cast<int>(g.qubits.size()) != gate_arity(g.kind)) {
        throw ParameterError(std::string("wrong qubit count for ") + gate_name(g.kind));
      }
      c.gates.push_back(std::move(g));
    }
    sort_gates(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("bad circuit JSON: ") + e.what());
  }
}

std::string emit_stim_text(const Circuit& c) {
  std::ostringstream out;
  int step = 1;
  for (const auto& g : c.gates) {
    for (; step < g.t; ++step) out << "TICK\n";
    out << gate_name(g.kind);
    for (int q : g.qubits) out << ' ' << q;
    out << '\n';
  }
  return out.str();
}

}  // namespace bridgesynth
