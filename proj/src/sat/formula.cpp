#include "bridgesynth/sat/formula.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bridgesynth/errors.hpp"

namespace bridgesynth::sat {

int VarRegistry::add(std::string tag) {
  if (tag.empty()) throw InternalError("empty variable tag");
  const int id = num_vars() + 1;
  auto [it, inserted] = by_name_.emplace(tag, id);
  if (!inserted) throw InternalError("duplicate variable tag '" + tag + "'");
  kinds_.push_back(nullptr);
  names_.push_back(std::move(tag));
  return id;
}

int VarRegistry::add_aux(const char* kind) {
  kinds_.push_back(kind);
  names_.emplace_back();
  return num_vars();
}

int VarRegistry::find(std::string_view tag) const {
  auto it = by_name_.find(std::string(tag));
  return it == by_name_.end() ? 0 : it->second;
}

std::string VarRegistry::tag(int var) const {
  if (var < 1 || var > num_vars()) throw InternalError("variable " + std::to_string(var) + " not allocated");
  const auto i = static_cast<std::size_t>(var - 1);
  if (kinds_[i] != nullptr) return std::string(kinds_[i]) + "#" + std::to_string(var);
  return names_[i];
}

bool VarRegistry::is_aux(int var) const {
  return kinds_.at(static_cast<std::size_t>(var - 1)) != nullptr;
}

void CnfFormula::add_clause(std::span<const Lit> lits) {
  if (lits.empty()) throw InternalError("empty hard clause");
  for (Lit l : lits) {
    if (l == 0 || var_of(l) > num_vars()) {
      throw InternalError("literal " + std::to_string(l) + " references an unallocated variable");
    }
  }
  starts_.push_back(lits_.size());
  lits_.insert(lits_.end(), lits.begin(), lits.end());
}

void WcnfFormula::add_soft(std::vector<Lit> lits, std::uint64_t weight) {
  if (weight == 0) throw InternalError("soft clause with zero weight");
  if (lits.empty()) throw InternalError("empty soft clause");
  for (Lit l : lits) {
    if (l == 0 || var_of(l) > hard.num_vars()) {
      throw InternalError("soft literal " + std::to_string(l) + " references an unallocated variable");
    }
  }
  soft.push_back({std::move(lits), weight});
}

std::uint64_t WcnfFormula::total_soft_weight() const {
  std::uint64_t total = 0;
  for (const auto& s : soft) total += s.weight;
  return total;
}

namespace {

bool clause_true(std::span<const Lit> c, const Model& m) {
  for (Lit l : c) {
    if (m.value(l)) return true;
  }
  return false;
}

void write_lits(std::ostream& out, std::span<const Lit> lits) {
  for (Lit l : lits) out << l << ' ';
  out << "0\n";
}

std::vector<Lit> read_clause(std::istringstream& line, int& max_var) {
  std::vector<Lit> lits;
  Lit l = 0;
  while (line >> l && l != 0) {
    lits.push_back(l);
    max_var = std::max(max_var, var_of(l));
  }
  return lits;
}

void allocate(CnfFormula& f, int n) {
  while (f.num_vars() < n) f.new_var("x" + std::to_string(f.num_vars() + 1));
}

}  // namespace

long first_violated_clause(const CnfFormula& f, const Model& m) {
  if (m.num_vars() < f.num_vars()) return 0;
  for (std::size_t i = 0; i < f.num_clauses(); ++i) {
    if (!clause_true(f.clause(i), m)) return static_cast<long>(i);
  }
  return -1;
}

bool satisfies(const CnfFormula& f, const Model& m) { return first_violated_clause(f, m) < 0; }

std::uint64_t soft_cost(const WcnfFormula& f, const Model& m) {
  std::uint64_t cost = 0;
  for (const auto& s : f.soft) {
    if (!clause_true(s.lits, m)) cost += s.weight;
  }
  return cost;
}

void write_dimacs(const CnfFormula& f, std::ostream& out) {
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (std::size_t i = 0; i < f.num_clauses(); ++i) write_lits(out, f.clause(i));
}

CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula f;
  std::string text;
  int declared = -1;
  std::vector<std::vector<Lit>> clauses;
  int max_var = 0;
  while (std::getline(in, text)) {
    if (text.empty() || text[0] == 'c') continue;
    std::istringstream line(text);
    if (text[0] == 'p') {
      std::string p, kind;
      line >> p >> kind >> declared;
      if (kind != "cnf") throw ParameterError("not a DIMACS CNF header: " + text);
      continue;
    }
    auto lits = read_clause(line, max_var);
    if (!lits.empty()) clauses.push_back(std::move(lits));
  }
  allocate(f, std::max(declared, max_var));
  for (const auto& c : clauses) f.add_clause(c);
  return f;
}

void write_wcnf(const WcnfFormula& f, std::ostream& out) {
  const std::uint64_t top = f.total_soft_weight() + 1;
  out << "p wcnf " << f.hard.num_vars() << ' ' << f.hard.num_clauses() + f.soft.size() << ' '
      << top << '\n';
  for (std::size_t i = 0; i < f.hard.num_clauses(); ++i) {
    out << top << ' ';
    write_lits(out, f.hard.clause(i));
  }
  for (const auto& s : f.soft) {
    out << s.weight << ' ';
    write_lits(out, s.lits);
  }
}

WcnfFormula parse_wcnf(std::istream& in) {
  WcnfFormula f;
  std::string text;
  int declared = -1;
  std::uint64_t top = 0;
  bool has_header = false;
  std::vector<std::vector<Lit>> hard;
  std::vector<SoftClause> soft;
  int max_var = 0;
  while (std::getline(in, text)) {
    if (text.empty() || text[0] == 'c') continue;
    std::istringstream line(text);
    if (text[0] == 'p') {
      std::string p, kind;
      std::size_t count = 0;
      line >> p >> kind >> declared >> count >> top;
      if (kind != "wcnf") throw ParameterError("not a WCNF header: " + text);
      has_header = true;
      continue;
    }
    if (text[0] == 'h') {
      line.get();
      auto lits = read_clause(line, max_var);
      if (!lits.empty()) hard.push_back(std::move(lits));
      continue;
    }
    std::uint64_t weight = 0;
    if (!(line >> weight)) continue;
    auto lits = read_clause(line, max_var);
    if (lits.empty()) continue;
    if (has_header && weight >= top) {
      hard.push_back(std::move(lits));
    } else {
      soft.push_back({std::move(lits), weight});
    }
  }
  allocate(f.hard, std::max(declared, max_var));
  for (const auto& c : hard) f.hard.add_clause(c);
  for (auto& s : soft) f.add_soft(std::move(s.lits), s.weight);
  return f;
}

void export_wcnf(const WcnfFormula& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  write_wcnf(f, out);
  std::ofstream legend(path + ".vars");
  if (!legend) throw ParameterError("cannot write '" + path + ".vars'");
  for (int v = 1; v <= f.hard.num_vars(); ++v) legend << v << ' ' << f.hard.vars.tag(v) << '\n';
}

}  // namespace bridgesynth::sat
