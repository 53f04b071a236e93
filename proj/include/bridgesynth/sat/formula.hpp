#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bridgesynth::sat {

/// Literals use DIMACS conventions: variable v >= 1 is `v`, its negation `-v`.
using Lit = int;

inline int var_of(Lit l) { return l < 0 ? -l : l; }

/// Dense variable allocator with a semantic tag per variable. Named variables carry a
/// caller-chosen unique tag such as "map(3,12)"; auxiliary variables get a generated tag
/// "<kind>#<id>".
class VarRegistry {
 public:
  /// Throws InternalError if the tag is already taken or empty.
  int add(std::string tag);
  int add_aux(const char* kind);

  int num_vars() const { return static_cast<int>(kinds_.size()); }
  /// 0 when no variable carries this tag.
  int find(std::string_view tag) const;
  std::string tag(int var) const;
  bool is_aux(int var) const;

 private:
  std::vector<const char*> kinds_;        // nullptr for named variables
  std::vector<std::string> names_;        // empty for auxiliary variables
  std::unordered_map<std::string, int> by_name_;
};

/// Hard clause database with its variable registry.
class CnfFormula {
 public:
  VarRegistry vars;

  int new_var(std::string tag) { return vars.add(std::move(tag)); }
  int new_aux(const char* kind) { return vars.add_aux(kind); }
  int num_vars() const { return vars.num_vars(); }

  /// Throws InternalError on an empty clause or a literal over an unallocated variable.
  void add_clause(std::span<const Lit> lits);
  void add_clause(std::initializer_list<Lit> lits) {
    add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }

  std::size_t num_clauses() const { return starts_.size(); }
  std::span<const Lit> clause(std::size_t i) const {
    const std::size_t end = i + 1 < starts_.size() ? starts_[i + 1] : lits_.size();
    return {lits_.data() + starts_[i], end - starts_[i]};
  }

 private:
  std::vector<Lit> lits_;
  std::vector<std::size_t> starts_;
};

struct SoftClause {
  std::vector<Lit> lits;
  std::uint64_t weight = 1;
  bool operator==(const SoftClause&) const = default;
};

struct WcnfFormula {
  CnfFormula hard;
  std::vector<SoftClause> soft;

  /// Throws InternalError on weight 0, empty clause or unallocated literals.
  void add_soft(std::vector<Lit> lits, std::uint64_t weight);
  std::uint64_t total_soft_weight() const;
};

/// Total assignment over variables 1..n.
class Model {
 public:
  Model() = default;
  explicit Model(int num_vars) : values_(static_cast<std::size_t>(num_vars) + 1, false) {}

  int num_vars() const { return values_.empty() ? 0 : static_cast<int>(values_.size()) - 1; }
  bool value(Lit l) const {
    const bool v = values_[static_cast<std::size_t>(var_of(l))];
    return l > 0 ? v : !v;
  }
  void set(int var, bool value) { values_[static_cast<std::size_t>(var)] = value; }
  bool operator==(const Model&) const = default;

 private:
  std::vector<bool> values_;
};

/// Independent clause evaluator: index of the first falsified clause, or -1.
long first_violated_clause(const CnfFormula& f, const Model& m);
bool satisfies(const CnfFormula& f, const Model& m);
/// Sum of weights of soft clauses the model falsifies.
std::uint64_t soft_cost(const WcnfFormula& f, const Model& m);

void write_dimacs(const CnfFormula& f, std::ostream& out);
/// Variables of the parsed formula are tagged "x<id>".
CnfFormula parse_dimacs(std::istream& in);

/// "p wcnf nvars nclauses top" with top = 1 + total soft weight; hard clauses first.
void write_wcnf(const WcnfFormula& f, std::ostream& out);
WcnfFormula parse_wcnf(std::istream& in);
/// Writes the WCNF file and, next to it, "<path>.vars" with one "id tag" line per variable.
void export_wcnf(const WcnfFormula& f, const std::string& path);

}  // namespace bridgesynth::sat
