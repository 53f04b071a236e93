#include "bridgesynth/schedule.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "bridgesynth/errors.hpp"
#include "bridgesynth/sat/encodings.hpp"
#include "bridgesynth/sat/solver.hpp"

namespace bridgesynth {

using sat::Lit;

const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::Reset: return "Reset";
    case OpKind::Hadamard: return "Hadamard";
    case OpKind::EncCnot: return "EncCnot";
    case OpKind::CtrlP: return "CtrlP";
    case OpKind::DecCnot: return "DecCnot";
    case OpKind::Measure: return "Measure";
  }
  return "?";
}

const char* op_phase_name(OpPhase p) {
  switch (p) {
    case OpPhase::Init: return "init";
    case OpPhase::Enc: return "enc";
    case OpPhase::Ctrl: return "ctrl";
    case OpPhase::Dec: return "dec";
    case OpPhase::Meas: return "meas";
  }
  return "?";
}

OperationSet enumerate_operations(const MappingSolution& sol, const StabilizerCode& code, const CouplingGraph& arch) {
  OperationSet set;
  set.num_stabilizers = code.num_stabilizers();
  set.bridges = sol.anc;
  if (static_cast<int>(sol.anc.size()) != code.num_stabilizers()) {
    throw ParameterError("mapping does not match the code");
  }
  for (int s = 0; s < code.num_stabilizers(); ++s) {
    const auto& bridge = sol.anc[static_cast<std::size_t>(s)];
    auto push = [&](OpKind kind, OpPhase phase, int a, int b) {
      GateOp op;
      op.kind = kind;
      op.phase = phase;
      op.stab = s;
      op.a = a;
      op.b = b;
      set.ops.push_back(op);
    };
    std::vector<std::pair<int, int>> edges;
    for (int a : bridge) {
      for (int b : bridge) {
        if (a != b && arch.adjacent(a, b)) edges.emplace_back(a, b);
      }
    }
    for (int p : bridge) push(OpKind::Reset, OpPhase::Init, p, -1);
    for (int p : bridge) push(OpKind::Hadamard, OpPhase::Enc, p, -1);
    for (auto [a, b] : edges) push(OpKind::EncCnot, OpPhase::Enc, a, b);
    const Stabilizer& stab = code.stabilizers[static_cast<std::size_t>(s)];
    for (auto [q, pauli] : stab.support) {
      const auto it = sol.cp[static_cast<std::size_t>(s)].find(q);
      if (it == sol.cp[static_cast<std::size_t>(s)].end()) throw ParameterError("mapping lacks a coupling for " + stab.label);
      GateOp op;
      op.kind = OpKind::CtrlP;
      op.phase = OpPhase::Ctrl;
      op.stab = s;
      op.a = it->second;
      op.b = sol.pi[static_cast<std::size_t>(q)];
      op.data = q;
      op.pauli = pauli;
      set.ops.push_back(op);
    }
    for (auto [a, b] : edges) push(OpKind::DecCnot, OpPhase::Dec, a, b);
    for (int p : bridge) push(OpKind::Hadamard, OpPhase::Dec, p, -1);
    for (int p : bridge) push(OpKind::Measure, OpPhase::Meas, p, -1);
  }
  return set;
}

namespace {

bool touches(const GateOp& op, int node) { return op.a == node || op.b == node; }

// Operation indices of one stabilizer, grouped by role.
struct StabOps {
  std::vector<int> bridge;
  std::map<int, int> reset, enc_h, dec_h, meas;
  std::vector<int> enc_cx, dec_cx, ctrl;
  std::map<int, std::vector<int>> on_node;  // bridge node -> every op acting on it

  std::vector<int> preps(const std::vector<GateOp>& ops, int p) const {
    std::vector<int> out;
    if (enc_h.count(p)) out.push_back(enc_h.at(p));
    for (int g : enc_cx) {
      if (ops[static_cast<std::size_t>(g)].b == p) out.push_back(g);
    }
    return out;
  }
  std::vector<int> unpreps(const std::vector<GateOp>& ops, int p) const {
    std::vector<int> out;
    if (dec_h.count(p)) out.push_back(dec_h.at(p));
    for (int g : dec_cx) {
      if (ops[static_cast<std::size_t>(g)].b == p) out.push_back(g);
    }
    return out;
  }
};

std::vector<StabOps> group(const OperationSet& set) {
  std::vector<StabOps> out(static_cast<std::size_t>(set.num_stabilizers));
  for (int s = 0; s < set.num_stabilizers; ++s) out[static_cast<std::size_t>(s)].bridge = set.bridges[static_cast<std::size_t>(s)];
  for (std::size_t i = 0; i < set.ops.size(); ++i) {
    const GateOp& op = set.ops[i];
    StabOps& so = out[static_cast<std::size_t>(op.stab)];
    const int g = static_cast<int>(i);
    switch (op.kind) {
      case OpKind::Reset: so.reset[op.a] = g; break;
      case OpKind::Hadamard: (op.phase == OpPhase::Enc ? so.enc_h : so.dec_h)[op.a] = g; break;
      case OpKind::EncCnot: so.enc_cx.push_back(g); break;
      case OpKind::CtrlP: so.ctrl.push_back(g); break;
      case OpKind::DecCnot: so.dec_cx.push_back(g); break;
      case OpKind::Measure: so.meas[op.a] = g; break;
    }
    for (int p : so.bridge) {
      if (touches(op, p)) so.on_node[p].push_back(g);
    }
  }
  return out;
}

bool optional_kind(OpKind k) { return k != OpKind::Reset && k != OpKind::CtrlP; }

// Earliest and latest feasible steps implied by the full constraint set.
std::pair<int, int> window(const GateOp& op, int T) {
  switch (op.kind) {
    case OpKind::Reset: return {1, T - 3};
    case OpKind::Hadamard: return op.phase == OpPhase::Enc ? std::pair{2, T - 2} : std::pair{3, T - 1};
    case OpKind::EncCnot: return {3, T - 2};
    case OpKind::CtrlP: return {3, T - 2};
    case OpKind::DecCnot: return {3, T - 2};
    case OpKind::Measure: return {4, T};
  }
  return {1, T};
}

class Builder {
 public:
  Builder(const OperationSet& set, int T, const Stage2Config& cfg) : set_(set), T_(T), cfg_(cfg) {}

  Stage2Encoding build() {
    enc_.T = T_;
    sat::CnfFormula& f = enc_.cnf;
    const auto& ops = set_.ops;
    const auto grouped = group(set_);
    const std::size_t n = ops.size();
    enc_.present.assign(n, 0);
    enc_.time.resize(n);

    // Tree edge and root selectors; the Measure shares its decode root's selector.
    for (std::size_t g = 0; g < n; ++g) {
      const GateOp& op = ops[g];
      if (!optional_kind(op.kind) || op.kind == OpKind::Measure) continue;
      const bool is_enc = op.phase == OpPhase::Enc;
      const int b = op.b < 0 ? op.a : op.b;
      enc_.present[g] = f.new_var(std::string(is_enc ? "enc(" : "dec(") + std::to_string(op.stab) + "," +
                                  std::to_string(op.a) + "," + std::to_string(b) + ")");
    }
    for (const StabOps& so : grouped) {
      for (auto [p, g] : so.meas) enc_.present[static_cast<std::size_t>(g)] = enc_.present[static_cast<std::size_t>(so.dec_h.at(p))];
    }

    // Exactly-once execution of present operations.
    const bool all_on = all_families();
    ladder_.resize(n);
    for (std::size_t g = 0; g < n; ++g) {
      auto& time = enc_.time[g];
      time.resize(static_cast<std::size_t>(T_));
      for (int t = 1; t <= T_; ++t) {
        time[static_cast<std::size_t>(t - 1)] = f.new_var("time(" + std::to_string(g) + "," + std::to_string(t) + ")");
      }
      const Lit pres = enc_.present[g];
      std::vector<Lit> alo(time.begin(), time.end());
      if (pres != 0) {
        alo.push_back(-pres);
        for (Lit x : time) f.add_clause({-x, pres});
      }
      f.add_clause(alo);
      ladder_[g] = sat::build_ladder(f, time, std::to_string(g), true);
      if (all_on) {
        const auto [lo, hi] = window(ops[g], T_);
        for (int t = 1; t <= T_; ++t) {
          if (t < lo || t > hi) f.add_clause({-time[static_cast<std::size_t>(t - 1)]});
        }
      }
    }

    // One operation per node and step.
    std::map<int, std::vector<int>> by_node;
    for (std::size_t g = 0; g < n; ++g) {
      by_node[ops[g].a].push_back(static_cast<int>(g));
      if (ops[g].b >= 0) by_node[ops[g].b].push_back(static_cast<int>(g));
    }
    for (const auto& [node, list] : by_node) {
      if (list.size() < 2) continue;
      for (int t = 0; t < T_; ++t) {
        std::vector<Lit> lits;
        for (int g : list) lits.push_back(enc_.time[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)]);
        sat::at_most_one(f, lits);
      }
    }

    for (const StabOps& so : grouped) encode_trees(so);
    if (cfg_.families.prepared_control) {
      for (const StabOps& so : grouped) encode_prepared_control(so);
    }
    if (cfg_.families.phase_order) {
      for (const StabOps& so : grouped) encode_phase_order(so);
    }
    if (cfg_.families.anticommute_parity) encode_parity(grouped);
    if (cfg_.families.shared_serialization) encode_shared(grouped);
    return std::move(enc_);
  }

 private:
  bool all_families() const {
    const auto& fam = cfg_.families;
    return fam.single_root && fam.single_parent && fam.prepared_control && fam.anticommute_parity &&
           fam.shared_serialization && fam.phase_order;
  }

  Lit pres(int g) const { return enc_.present[static_cast<std::size_t>(g)]; }

  // g before h whenever both are present.
  void before(int g, int h) {
    sat::order_before(enc_.cnf, ladder_[static_cast<std::size_t>(g)], enc_.time[static_cast<std::size_t>(h)], pres(g));
  }

  void encode_trees(const StabOps& so) {
    sat::CnfFormula& f = enc_.cnf;
    const auto& ops = set_.ops;
    for (bool is_enc : {true, false}) {
      const auto& roots = is_enc ? so.enc_h : so.dec_h;
      if (cfg_.families.single_root) {
        std::vector<Lit> lits;
        for (auto [p, g] : roots) lits.push_back(pres(g));
        sat::exactly_one(f, lits);
      }
      if (cfg_.families.single_parent) {
        for (int p : so.bridge) {
          std::vector<Lit> lits{pres(roots.at(p))};
          for (int g : is_enc ? so.enc_cx : so.dec_cx) {
            if (ops[static_cast<std::size_t>(g)].b == p) lits.push_back(pres(g));
          }
          sat::exactly_one(f, lits);
        }
      }
    }
    if (cfg_.mirror_decode) {
      for (auto [p, g] : so.enc_h) {
        f.add_clause({-pres(g), pres(so.dec_h.at(p))});
        f.add_clause({pres(g), -pres(so.dec_h.at(p))});
      }
      for (std::size_t i = 0; i < so.enc_cx.size(); ++i) {
        const Lit e = pres(so.enc_cx[i]), d = pres(so.dec_cx[i]);
        f.add_clause({-e, d});
        f.add_clause({e, -d});
      }
    }
  }

  void encode_prepared_control(const StabOps& so) {
    const auto& ops = set_.ops;
    for (int g : so.enc_cx) {
      for (int h : so.preps(ops, ops[static_cast<std::size_t>(g)].a)) before(h, g);
    }
    for (int g : so.dec_cx) {
      for (int h : so.unpreps(ops, ops[static_cast<std::size_t>(g)].a)) before(g, h);
    }
  }

  void encode_phase_order(const StabOps& so) {
    const auto& ops = set_.ops;
    for (int p : so.bridge) {
      const std::vector<int> prep = so.preps(ops, p), unprep = so.unpreps(ops, p);
      const int reset = so.reset.at(p);
      for (int x : prep) before(reset, x);
      for (int g : so.on_node.at(p)) {
        const GateOp& op = ops[static_cast<std::size_t>(g)];
        const bool later = op.kind == OpKind::CtrlP || op.phase == OpPhase::Dec || op.phase == OpPhase::Meas;
        const bool earlier = op.kind == OpKind::CtrlP || op.phase == OpPhase::Enc;
        if (later) {
          for (int x : prep) before(x, g);
        }
        if (earlier) {
          for (int y : unprep) {
            if (y != g) before(g, y);
          }
        }
      }
      before(so.dec_h.at(p), so.meas.at(p));
    }
  }

  void encode_parity(const std::vector<StabOps>& grouped) {
    sat::CnfFormula& f = enc_.cnf;
    const auto& ops = set_.ops;
    for (std::size_t s = 0; s < grouped.size(); ++s) {
      for (std::size_t r = s + 1; r < grouped.size(); ++r) {
        std::vector<Lit> flags;
        for (int c : grouped[s].ctrl) {
          for (int d : grouped[r].ctrl) {
            const GateOp& x = ops[static_cast<std::size_t>(c)];
            const GateOp& y = ops[static_cast<std::size_t>(d)];
            if (x.data != y.data || !anticommute(x.pauli, y.pauli)) continue;
            const Lit b = f.new_var("before(" + std::to_string(c) + "," + std::to_string(d) + ")");
            sat::order_before(f, ladder_[static_cast<std::size_t>(c)], enc_.time[static_cast<std::size_t>(d)], b);
            sat::order_before(f, ladder_[static_cast<std::size_t>(d)], enc_.time[static_cast<std::size_t>(c)], -b);
            flags.push_back(b);
          }
        }
        sat::parity_even(f, flags);
      }
    }
  }

  void encode_shared(const std::vector<StabOps>& grouped) {
    sat::CnfFormula& f = enc_.cnf;
    for (std::size_t s = 0; s < grouped.size(); ++s) {
      for (std::size_t r = s + 1; r < grouped.size(); ++r) {
        std::vector<int> shared;
        std::set_intersection(grouped[s].bridge.begin(), grouped[s].bridge.end(), grouped[r].bridge.begin(),
                              grouped[r].bridge.end(), std::back_inserter(shared));
        if (shared.empty()) continue;
        const Lit o = f.new_var("first(" + std::to_string(s) + "," + std::to_string(r) + ")");
        for (int p : shared) {
          serialize(grouped[s], grouped[r], p, o);
          serialize(grouped[r], grouped[s], p, -o);
        }
      }
    }
  }

  // When `selector` holds, every operation of `first` on p precedes `second`'s reset of p.
  void serialize(const StabOps& first, const StabOps& second, int p, Lit selector) {
    sat::CnfFormula& f = enc_.cnf;
    const int reset = second.reset.at(p);
    for (int g : first.on_node.at(p)) {
      Lit cond = selector;
      if (pres(g) != 0) {
        cond = f.new_aux("and");
        f.add_clause({-selector, -pres(g), cond});
      }
      sat::order_before(f, ladder_[static_cast<std::size_t>(g)], enc_.time[static_cast<std::size_t>(reset)], cond);
    }
  }

  const OperationSet& set_;
  int T_;
  const Stage2Config& cfg_;
  Stage2Encoding enc_;
  std::vector<std::vector<Lit>> ladder_;
};

}  // namespace

Stage2Encoding encode_stage2(const OperationSet& ops, int T, const Stage2Config& cfg) {
  if (T < 1) throw ParameterError("depth bound must be at least 1");
  return Builder(ops, T, cfg).build();
}

ScheduledCircuit decode_stage2(const sat::Model& model, const Stage2Encoding& enc, const OperationSet& ops) {
  ScheduledCircuit out;
  std::vector<std::pair<int, int>> order;  // (t, op)
  for (std::size_t g = 0; g < ops.ops.size(); ++g) {
    const Lit pres = enc.present[g];
    const bool present = pres == 0 || model.value(pres);
    int when = 0;
    for (int t = 1; t <= enc.T; ++t) {
      if (!model.value(enc.time[g][static_cast<std::size_t>(t - 1)])) continue;
      if (when != 0) throw InternalError("operation " + std::to_string(g) + " scheduled twice");
      when = t;
    }
    if (present != (when != 0)) throw InternalError("operation " + std::to_string(g) + " presence and time disagree");
    if (present) order.emplace_back(when, static_cast<int>(g));
  }
  std::sort(order.begin(), order.end());
  for (auto [t, g] : order) {
    out.gates.push_back({ops.ops[static_cast<std::size_t>(g)], t});
    out.depth = std::max(out.depth, t);
  }
  return out;
}

std::string ScheduleReport::str() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v << '\n';
  return out.str();
}

ScheduleReport check_schedule(const ScheduledCircuit& circuit, const MappingSolution& sol, const StabilizerCode& code) {
  ScheduleReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
  const int m = code.num_stabilizers();
  if (static_cast<int>(sol.anc.size()) != m) {
    fail("mapping does not match the code");
    return report;
  }

  int depth = 0;
  std::map<std::pair<int, int>, int> busy;  // (node, t) -> gate index
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const auto& g = circuit.gates[i];
    if (g.t < 1) fail("gate " + std::to_string(i) + " at step " + std::to_string(g.t));
    depth = std::max(depth, g.t);
    for (int node : {g.op.a, g.op.b}) {
      if (node < 0) continue;
      if (!busy.emplace(std::make_pair(node, g.t), static_cast<int>(i)).second) {
        fail("node " + std::to_string(node) + " used twice at step " + std::to_string(g.t));
      }
    }
    if (g.op.stab < 0 || g.op.stab >= m) fail("gate " + std::to_string(i) + " has no valid stabilizer");
  }
  if (depth != circuit.depth) fail("recorded depth " + std::to_string(circuit.depth) + " but last step " + std::to_string(depth));
  if (!report.ok()) return report;

  struct Timeline {
    std::map<int, std::vector<int>> reset, enc_h, dec_h, meas;
    std::map<int, std::vector<std::pair<int, int>>> enc_in, dec_in;  // target -> (control, t)
    std::vector<std::pair<std::pair<int, int>, int>> enc_cx, dec_cx;  // ((a,b), t)
    std::map<int, std::vector<int>> ctrl_on;  // bridge node -> t
    std::map<int, int> ctrl_of_data;          // data qubit -> t
    std::map<int, std::vector<int>> on_node;  // node -> every t
  };
  std::vector<Timeline> tl(static_cast<std::size_t>(m));
  for (const auto& g : circuit.gates) {
    Timeline& x = tl[static_cast<std::size_t>(g.op.stab)];
    const GateOp& op = g.op;
    x.on_node[op.a].push_back(g.t);
    if (op.b >= 0 && op.kind != OpKind::CtrlP) x.on_node[op.b].push_back(g.t);
    switch (op.kind) {
      case OpKind::Reset: x.reset[op.a].push_back(g.t); break;
      case OpKind::Hadamard: (op.phase == OpPhase::Dec ? x.dec_h : x.enc_h)[op.a].push_back(g.t); break;
      case OpKind::Measure: x.meas[op.a].push_back(g.t); break;
      case OpKind::EncCnot:
        x.enc_in[op.b].emplace_back(op.a, g.t);
        x.enc_cx.push_back({{op.a, op.b}, g.t});
        break;
      case OpKind::DecCnot:
        x.dec_in[op.b].emplace_back(op.a, g.t);
        x.dec_cx.push_back({{op.a, op.b}, g.t});
        break;
      case OpKind::CtrlP: {
        const Stabilizer& stab = code.stabilizers[static_cast<std::size_t>(op.stab)];
        if (stab.at(op.data) != op.pauli || op.pauli == Pauli::I) fail(stab.label + ": wrong Pauli on control gate");
        const auto it = sol.cp[static_cast<std::size_t>(op.stab)].find(op.data);
        if (it == sol.cp[static_cast<std::size_t>(op.stab)].end() || it->second != op.a ||
            sol.pi[static_cast<std::size_t>(op.data)] != op.b) {
          fail(stab.label + ": control gate endpoints disagree with the mapping");
        }
        if (!x.ctrl_of_data.emplace(op.data, g.t).second) fail(stab.label + ": data qubit controlled twice");
        x.ctrl_on[op.a].push_back(g.t);
        break;
      }
    }
  }

  for (int s = 0; s < m; ++s) {
    const Timeline& x = tl[static_cast<std::size_t>(s)];
    const Stabilizer& stab = code.stabilizers[static_cast<std::size_t>(s)];
    const std::string name = stab.label;
    const auto& bridge = sol.anc[static_cast<std::size_t>(s)];
    const std::set<int> members(bridge.begin(), bridge.end());
    for (int q : stab.data_qubits()) {
      if (!x.ctrl_of_data.count(q)) fail(name + ": qubit " + std::to_string(q) + " never controlled");
    }
    auto single = [&](const std::map<int, std::vector<int>>& what, const char* label) {
      int count = 0, at = -1;
      for (const auto& [p, ts] : what) {
        count += static_cast<int>(ts.size());
        if (!members.count(p)) fail(name + ": " + label + " outside the bridge");
        at = p;
      }
      if (count != 1) fail(name + ": " + std::to_string(count) + " " + label + " gates");
      return count == 1 ? at : -1;
    };
    const int enc_root = single(x.enc_h, "encode root");
    const int dec_root = single(x.dec_h, "decode root");
    const int measured = single(x.meas, "measure");
    if (measured != dec_root) fail(name + ": measured node is not the decode root");
    for (const auto& [p, ts] : x.on_node) {
      if (!members.count(p)) fail(name + ": acts on node " + std::to_string(p) + " outside the bridge");
    }
    if (!report.ok()) continue;

    auto first = [](const std::map<int, std::vector<int>>& m2, int p) {
      auto it = m2.find(p);
      return it == m2.end() || it->second.empty() ? -1 : it->second.front();
    };
    std::map<int, int> prep, unprep;
    for (int p : bridge) {
      const auto& reset = x.reset.count(p) ? x.reset.at(p) : std::vector<int>{};
      if (reset.size() != 1) {
        fail(name + ": node " + std::to_string(p) + " reset " + std::to_string(reset.size()) + " times");
        continue;
      }
      const auto ein = x.enc_in.count(p) ? x.enc_in.at(p) : std::vector<std::pair<int, int>>{};
      const auto din = x.dec_in.count(p) ? x.dec_in.at(p) : std::vector<std::pair<int, int>>{};
      const std::size_t want = p == enc_root ? 0 : 1, want_d = p == dec_root ? 0 : 1;
      if (ein.size() != want) fail(name + ": node " + std::to_string(p) + " has " + std::to_string(ein.size()) + " encode parents");
      if (din.size() != want_d) fail(name + ": node " + std::to_string(p) + " has " + std::to_string(din.size()) + " decode parents");
      prep[p] = p == enc_root ? first(x.enc_h, p) : (ein.empty() ? -1 : ein.front().second);
      unprep[p] = p == dec_root ? first(x.dec_h, p) : (din.empty() ? -1 : din.front().second);
    }
    if (!report.ok()) continue;

    for (const auto& [edge, t] : x.enc_cx) {
      if (!(prep[edge.first] < t)) fail(name + ": encode CNOT from an unprepared node " + std::to_string(edge.first));
    }
    for (const auto& [edge, t] : x.dec_cx) {
      if (!(t < unprep[edge.first])) fail(name + ": decode CNOT after its control was unprepared");
      if (!(prep[edge.first] < t) || !(prep[edge.second] < t)) fail(name + ": decode CNOT touches an unprepared node");
    }
    for (int p : bridge) {
      const int r = x.reset.at(p).front();
      if (!(r < prep[p])) fail(name + ": node " + std::to_string(p) + " prepared before its reset");
      if (!(prep[p] < unprep[p])) fail(name + ": node " + std::to_string(p) + " unprepared before preparation");
      for (int t : x.ctrl_on.count(p) ? x.ctrl_on.at(p) : std::vector<int>{}) {
        if (!(prep[p] < t && t < unprep[p])) fail(name + ": control gate on node " + std::to_string(p) + " outside its window");
      }
      for (const auto& [edge, t] : x.enc_cx) {
        if ((edge.first == p || edge.second == p) && !(t < unprep[p])) fail(name + ": encode CNOT after node unprepared");
      }
    }
    if (measured >= 0 && !(unprep[dec_root] < x.meas.at(measured).front())) fail(name + ": measured before decoding");
  }
  if (!report.ok()) return report;

  for (int s = 0; s < m; ++s) {
    for (int r = s + 1; r < m; ++r) {
      const Timeline& a = tl[static_cast<std::size_t>(s)];
      const Timeline& b = tl[static_cast<std::size_t>(r)];
      int inversions = 0;
      for (const auto& [q, ta] : a.ctrl_of_data) {
        auto it = b.ctrl_of_data.find(q);
        if (it == b.ctrl_of_data.end()) continue;
        const Pauli pa = code.stabilizers[static_cast<std::size_t>(s)].at(q);
        const Pauli pb = code.stabilizers[static_cast<std::size_t>(r)].at(q);
        if (anticommute(pa, pb) && ta < it->second) ++inversions;
      }
      const std::string pair = code.stabilizers[static_cast<std::size_t>(s)].label + "/" +
                               code.stabilizers[static_cast<std::size_t>(r)].label;
      if (inversions % 2 != 0) fail(pair + ": odd anticommuting order");

      std::vector<int> shared;
      const auto& ba = sol.anc[static_cast<std::size_t>(s)];
      const auto& bb = sol.anc[static_cast<std::size_t>(r)];
      std::set_intersection(ba.begin(), ba.end(), bb.begin(), bb.end(), std::back_inserter(shared));
      if (shared.empty()) continue;
      auto ends_before = [&](const Timeline& x, const Timeline& y) {
        for (int p : shared) {
          const auto& ts = x.on_node.at(p);
          if (!(*std::max_element(ts.begin(), ts.end()) < y.reset.at(p).front())) return false;
        }
        return true;
      };
      if (!ends_before(a, b) && !ends_before(b, a)) fail(pair + ": bridges share nodes but overlap in time");
    }
  }
  return report;
}

ScheduledCircuit sequential_schedule(const OperationSet& set) {
  const auto grouped = group(set);
  const auto& ops = set.ops;
  ScheduledCircuit out;
  int offset = 0;
  for (const StabOps& so : grouped) {
    if (so.bridge.empty()) continue;
    std::map<int, std::vector<int>> adj;
    std::map<std::pair<int, int>, int> enc_edge, dec_edge;
    for (int g : so.enc_cx) {
      const auto& op = ops[static_cast<std::size_t>(g)];
      adj[op.a].push_back(op.b);
      enc_edge[{op.a, op.b}] = g;
    }
    for (int g : so.dec_cx) dec_edge[{ops[static_cast<std::size_t>(g)].a, ops[static_cast<std::size_t>(g)].b}] = g;
    for (auto& [p, list] : adj) std::sort(list.begin(), list.end());

    auto bfs = [&](int root, std::vector<int>& order, std::map<int, int>& parent) {
      order = {root};
      parent = {{root, -1}};
      for (std::size_t i = 0; i < order.size(); ++i) {
        for (int w : adj[order[i]]) {
          if (parent.emplace(w, order[i]).second) order.push_back(w);
        }
      }
    };
    int root = so.bridge.front();
    std::size_t best = SIZE_MAX;
    for (int p : so.bridge) {
      std::vector<int> order;
      std::map<int, int> parent;
      bfs(p, order, parent);
      std::map<int, std::size_t> depth{{p, 0}};
      std::size_t ecc = 0;
      for (int v : order) {
        if (v != p) depth[v] = depth[parent[v]] + 1;
        ecc = std::max(ecc, depth[v]);
      }
      if (order.size() != so.bridge.size()) ecc = SIZE_MAX - 1;
      if (ecc < best) {
        best = ecc;
        root = p;
      }
    }
    std::vector<int> order;
    std::map<int, int> parent;
    bfs(root, order, parent);
    if (order.size() != so.bridge.size()) throw ParameterError("bridge is not connected");

    std::vector<int> list;
    for (auto [p, g] : so.reset) list.push_back(g);
    list.push_back(so.enc_h.at(root));
    for (std::size_t i = 1; i < order.size(); ++i) list.push_back(enc_edge.at({parent[order[i]], order[i]}));
    for (int g : so.ctrl) list.push_back(g);
    for (std::size_t i = order.size(); i-- > 1;) list.push_back(dec_edge.at({parent[order[i]], order[i]}));
    list.push_back(so.dec_h.at(root));
    list.push_back(so.meas.at(root));

    std::map<int, int> last;
    int finish = offset;
    for (int g : list) {
      const GateOp& op = ops[static_cast<std::size_t>(g)];
      int t = offset + 1;
      for (int node : {op.a, op.b}) {
        if (node >= 0 && last.count(node)) t = std::max(t, last[node] + 1);
      }
      last[op.a] = t;
      if (op.b >= 0) last[op.b] = t;
      out.gates.push_back({op, t});
      finish = std::max(finish, t);
    }
    offset = finish;
  }
  std::stable_sort(out.gates.begin(), out.gates.end(),
                   [](const ScheduledGate& x, const ScheduledGate& y) { return x.t < y.t; });
  out.depth = offset;
  return out;
}

int depth_lower_bound(const OperationSet& set) {
  int bound = 0;
  std::map<int, int> per_node;  // bridge node -> sum over stabilizers of (3 + control gates)
  std::map<int, int> per_data;
  for (int s = 0; s < set.num_stabilizers; ++s) {
    std::map<int, int> ctrl;
    for (const GateOp& op : set.ops) {
      if (op.stab != s || op.kind != OpKind::CtrlP) continue;
      ++ctrl[op.a];
      ++per_data[op.b];
    }
    for (int p : set.bridges[static_cast<std::size_t>(s)]) per_node[p] += 3 + ctrl[p];
  }
  for (auto [p, c] : per_node) bound = std::max(bound, c + 1);
  for (auto [q, c] : per_data) bound = std::max(bound, c + 4);
  return bound;
}

Stage2Result minimize_depth(const OperationSet& ops, const Stage2Config& cfg) {
  Stage2Result result;
  result.circuit = sequential_schedule(ops);
  result.sequential_depth = result.circuit.depth;
  result.lower_bound = depth_lower_bound(ops);
  if (result.circuit.depth == 0) {
    result.optimal = true;
    return result;
  }

  auto probe = [&](int T) {
    const Stage2Encoding enc = encode_stage2(ops, T, cfg);
    const sat::SatResult r = sat::solve_sat(enc.cnf, {}, cfg.deadline);
    result.probes.push_back({T, sat::status_name(r.status)});
    if (r.status == sat::SatStatus::Sat) {
      result.circuit = decode_stage2(r.model, enc, ops);
      if (result.circuit.depth > T) throw InternalError("decoded schedule exceeds its depth bound");
    }
    return r.status;
  };

  int hi = result.circuit.depth;
  bool proven = false;
  if (cfg.search == DepthSearch::Binary) {
    int lo = std::max(result.lower_bound, 1) - 1;
    bool stalled = false;
    while (hi - lo > 1 && !cfg.deadline.expired()) {
      const int mid = lo + (hi - lo) / 2;
      const sat::SatStatus s = probe(mid);
      if (s == sat::SatStatus::Sat) {
        hi = result.circuit.depth;
      } else {
        if (s == sat::SatStatus::Timeout) stalled = true;
        lo = mid;
        if (s == sat::SatStatus::Unsat && mid == hi - 1) proven = true;
      }
    }
    if (stalled) return result;
  }
  auto refuted = [&](int T) {
    if (T < std::max(result.lower_bound, 1)) return true;
    for (const auto& p : result.probes) {
      if (p.T >= T && p.status == "UNSAT") return true;
    }
    return false;
  };
  proven = proven || refuted(hi - 1);
  while (!proven && !cfg.deadline.expired()) {
    const sat::SatStatus s = probe(hi - 1);
    if (s == sat::SatStatus::Sat) hi = result.circuit.depth;
    else if (s == sat::SatStatus::Unsat) proven = true;
    else break;
    proven = proven || refuted(hi - 1);
  }
  result.optimal = proven;
  return result;
}

}  // namespace bridgesynth
