#include "bridgesynth/sat/maxsat.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "bridgesynth/errors.hpp"
#include "bridgesynth/sat/solver.hpp"

namespace bridgesynth::sat {

const char* status_name(MaxSatStatus s) {
  switch (s) {
    case MaxSatStatus::Optimal: return "OPTIMAL";
    case MaxSatStatus::Feasible: return "FEASIBLE";
    case MaxSatStatus::Unsat: return "UNSAT";
    case MaxSatStatus::Timeout: return "TIMEOUT";
  }
  return "?";
}

namespace {

struct Stratum {
  std::vector<Lit> indicators;
  std::vector<std::uint64_t> weights;  // divided by the stratum gcd
};

// Splits soft clauses (sorted by decreasing weight) into lexicographic strata. A boundary
// is placed where the gcd of everything heavier exceeds the total weight of everything
// lighter, so optimising strata one at a time is exact.
std::vector<Stratum> build_strata(const WcnfFormula& f, const std::vector<Lit>& indicator) {
  std::vector<std::size_t> order(f.soft.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return f.soft[a].weight > f.soft[b].weight; });
  std::vector<std::uint64_t> suffix(order.size() + 1, 0);
  for (std::size_t i = order.size(); i-- > 0;) suffix[i] = suffix[i + 1] + f.soft[order[i]].weight;

  std::vector<Stratum> strata;
  std::size_t begin = 0;
  std::uint64_t g = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    g = std::gcd(g, f.soft[order[i]].weight);
    const bool last = i + 1 == order.size();
    const bool boundary =
        last || (f.soft[order[i + 1]].weight != f.soft[order[i]].weight && g > suffix[i + 1]);
    if (!boundary) continue;
    Stratum s;
    for (std::size_t k = begin; k <= i; ++k) {
      s.indicators.push_back(indicator[order[k]]);
      s.weights.push_back(f.soft[order[k]].weight / g);
    }
    strata.push_back(std::move(s));
    begin = i + 1;
    g = 0;
  }
  return strata;
}

std::uint64_t stratum_cost(const Stratum& s, const Solver& solver) {
  std::uint64_t cost = 0;
  for (std::size_t i = 0; i < s.indicators.size(); ++i) {
    if (solver.value(s.indicators[i])) cost += s.weights[i];
  }
  return cost;
}

// Weighted sequential counter; returns r with r[j-1] implied by "weighted sum >= j" for
// j = 1..bound (sums beyond the bound saturate at r[bound-1]). Each row is kept monotone
// so a jump by a heavy weight also sets every smaller threshold.
std::vector<Lit> build_counter(Solver& solver, const Stratum& s, std::uint64_t bound) {
  const auto B = static_cast<std::size_t>(bound);
  std::vector<Lit> prev;
  for (std::size_t i = 0; i < s.indicators.size(); ++i) {
    const Lit x = s.indicators[i];
    const auto w = static_cast<std::size_t>(std::min<std::uint64_t>(s.weights[i], bound));
    std::vector<Lit> cur(B);
    for (auto& r : cur) r = solver.new_var();
    for (std::size_t j = 1; j < B; ++j) solver.add_clause({-cur[j], cur[j - 1]});
    for (std::size_t j = 0; j < prev.size(); ++j) solver.add_clause({-prev[j], cur[j]});
    solver.add_clause({-x, cur[w - 1]});
    for (std::size_t j = 0; j < prev.size(); ++j) {
      const std::size_t target = std::min(j + 1 + w, B);
      solver.add_clause({-x, -prev[j], cur[target - 1]});
    }
    prev = std::move(cur);
  }
  return prev;
}

Model trimmed_model(const Solver& solver, int num_vars) {
  Model m(num_vars);
  for (int v = 1; v <= num_vars; ++v) m.set(v, solver.value(v));
  return m;
}

}  // namespace

MaxSatResult solve_maxsat(const WcnfFormula& f, const MaxSatOptions& options) {
  std::string command = options.external_command;
  if (command.empty()) {
    if (const char* env = std::getenv(kExternalSolverEnv)) command = env;
  }
  if (!command.empty() && command != "internal") {
    return solve_maxsat_external(f, command, options.deadline);
  }

  MaxSatResult result;
  Solver solver;
  solver.add_formula(f.hard);
  std::vector<Lit> indicator(f.soft.size());
  for (std::size_t i = 0; i < f.soft.size(); ++i) {
    const auto& lits = f.soft[i].lits;
    if (lits.size() == 1) {
      indicator[i] = -lits[0];
    } else {
      const Lit b = solver.new_var();
      std::vector<Lit> relaxed = lits;
      relaxed.push_back(b);
      solver.add_clause(relaxed);
      indicator[i] = b;
    }
  }

  ++result.sat_calls;
  const SatStatus first = solver.solve({}, options.deadline);
  if (first == SatStatus::Unsat) {
    result.status = MaxSatStatus::Unsat;
    return result;
  }
  if (first == SatStatus::Timeout) {
    result.status = MaxSatStatus::Timeout;
    return result;
  }
  Model best = trimmed_model(solver, f.hard.num_vars());
  bool proven = true;

  for (const Stratum& stratum : build_strata(f, indicator)) {
    std::uint64_t best_cost = stratum_cost(stratum, solver);
    if (best_cost == 0) {
      for (Lit x : stratum.indicators) solver.add_clause({-x});
      continue;
    }
    // Disjoint cores give a lower bound; a model found on the way may also lower the cost.
    std::uint64_t lower = 0;
    {
      std::vector<Lit> assume;
      std::map<Lit, std::uint64_t> weight_of;
      for (std::size_t i = 0; i < stratum.indicators.size(); ++i) {
        assume.push_back(-stratum.indicators[i]);
        weight_of[-stratum.indicators[i]] = stratum.weights[i];
      }
      while (!assume.empty() && lower < best_cost) {
        ++result.sat_calls;
        const SatStatus status = solver.solve(assume, options.deadline);
        if (status == SatStatus::Sat) {
          const std::uint64_t cost = stratum_cost(stratum, solver);
          if (cost < best_cost) {
            best_cost = cost;
            best = trimmed_model(solver, f.hard.num_vars());
          }
          break;
        }
        if (status == SatStatus::Timeout) {
          proven = false;
          break;
        }
        const std::vector<Lit> core = solver.failed_assumptions();
        if (core.empty()) throw InternalError("hard clauses became unsatisfiable during core extraction");
        std::uint64_t w = UINT64_MAX;
        for (Lit l : core) w = std::min(w, weight_of.at(l));
        lower += w;
        const std::set<Lit> drop(core.begin(), core.end());
        std::erase_if(assume, [&](Lit l) { return drop.count(l) > 0; });
      }
    }
    if (!proven) break;

    std::uint64_t reached = lower;  // cost >= reached is proven
    {
      // One register past the current cost so the final bound can also be stated.
      const std::vector<Lit> reg = build_counter(solver, stratum, best_cost + 1);
      auto probe = [&](std::uint64_t limit) {
        const Lit assume = -reg[static_cast<std::size_t>(limit)];
        ++result.sat_calls;
        const SatStatus status = solver.solve(std::span<const Lit>(&assume, 1), options.deadline);
        if (status == SatStatus::Sat) {
          best_cost = stratum_cost(stratum, solver);
          best = trimmed_model(solver, f.hard.num_vars());
        } else if (status == SatStatus::Unsat) {
          reached = limit + 1;
        } else {
          proven = false;
        }
        return status;
      };
      // the lower bound first, then down from the best model
      if (reached > 0 && reached < best_cost) probe(reached);
      while (proven && reached < best_cost) probe(best_cost - 1);
      if (!proven) break;
      solver.add_clause({-reg[static_cast<std::size_t>(best_cost)]});
    }
    if (best_cost == 0) {
      for (Lit x : stratum.indicators) solver.add_clause({-x});
    }
    // Re-solve so later strata start from a model consistent with this stratum's bound.
    ++result.sat_calls;
    const SatStatus again = solver.solve({}, options.deadline);
    if (again != SatStatus::Sat) {
      if (again == SatStatus::Unsat) throw InternalError("stratum bound made the formula unsatisfiable");
      proven = false;
      break;
    }
    best = trimmed_model(solver, f.hard.num_vars());
  }

  const long bad = first_violated_clause(f.hard, best);
  if (bad >= 0) throw InternalError("MaxSAT model violates hard clause " + std::to_string(bad));
  result.model = std::move(best);
  result.cost = soft_cost(f, result.model);
  result.status = proven ? MaxSatStatus::Optimal : MaxSatStatus::Feasible;
  return result;
}

MaxSatResult solve_maxsat_external(const WcnfFormula& f, const std::string& command,
                                   const Deadline& deadline) {
  (void)deadline;
  const auto dir = std::filesystem::temp_directory_path();
  std::string path_template = (dir / "bridgesynth_XXXXXX").string();
  const int fd = mkstemp(path_template.data());
  if (fd < 0) throw ParameterError("cannot create a temporary WCNF file");
  close(fd);
  const std::string path = path_template;
  {
    std::ofstream out(path);
    write_wcnf(f, out);
  }
  const std::string full = command + " '" + path + "' 2>/dev/null";
  FILE* pipe = popen(full.c_str(), "r");
  if (pipe == nullptr) {
    std::filesystem::remove(path);
    throw ParameterError("cannot run external solver '" + command + "'");
  }
  std::string output;
  char buffer[4096];
  while (std::fgets(buffer, sizeof buffer, pipe) != nullptr) output += buffer;
  pclose(pipe);
  std::filesystem::remove(path);

  MaxSatResult result;
  result.sat_calls = 1;
  std::istringstream lines(output);
  std::string line;
  bool have_model = false;
  Model model(f.hard.num_vars());
  bool optimum = false;
  while (std::getline(lines, line)) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos) {
        result.status = MaxSatStatus::Unsat;
        return result;
      }
      optimum = line.find("OPTIMUM") != std::string::npos;
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream tokens(line.substr(2));
      std::string tok;
      while (tokens >> tok) {
        if (tok.find_first_not_of("01") == std::string::npos && tok.size() > 1) {
          for (std::size_t i = 0; i < tok.size() && static_cast<int>(i) < f.hard.num_vars(); ++i) {
            model.set(static_cast<int>(i) + 1, tok[i] == '1');
          }
        } else {
          const int lit = std::stoi(tok);
          if (lit != 0 && var_of(lit) <= f.hard.num_vars()) model.set(var_of(lit), lit > 0);
        }
      }
      have_model = true;
    }
  }
  if (!have_model) throw ParameterError("external solver '" + command + "' printed no model");
  if (!satisfies(f.hard, model)) throw ParameterError("external solver model violates hard clauses");
  result.model = std::move(model);
  result.cost = soft_cost(f, result.model);
  result.status = optimum ? MaxSatStatus::Optimal : MaxSatStatus::Feasible;
  return result;
}

}  // namespace bridgesynth::sat
