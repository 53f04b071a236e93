#include "bridgesynth/code.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "bridgesynth/errors.hpp"

namespace bridgesynth {

Pauli parse_pauli(std::string_view text) {
  if (text == "I") return Pauli::I;
  if (text == "X") return Pauli::X;
  if (text == "Y") return Pauli::Y;
  if (text == "Z") return Pauli::Z;
  throw ParameterError("unknown Pauli operator '" + std::string(text) + "'");
}

Stabilizer Stabilizer::make(std::vector<std::pair<int, Pauli>> terms, std::string label) {
  if (terms.empty()) throw ParameterError("stabilizer '" + label + "' has empty support");
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].first < 0) throw ParameterError("negative qubit index in '" + label + "'");
    if (terms[i].second == Pauli::I) {
      throw ParameterError("identity entry in stabilizer '" + label + "'");
    }
    if (i > 0 && terms[i].first == terms[i - 1].first) {
      throw ParameterError("qubit " + std::to_string(terms[i].first) +
                           " appears twice in stabilizer '" + label + "'");
    }
  }
  return Stabilizer{std::move(terms), std::move(label)};
}

Pauli Stabilizer::at(int qubit) const {
  auto it = std::lower_bound(support.begin(), support.end(), qubit,
                             [](const auto& term, int q) { return term.first < q; });
  if (it == support.end() || it->first != qubit) return Pauli::I;
  return it->second;
}

std::vector<int> Stabilizer::data_qubits() const {
  std::vector<int> out;
  out.reserve(support.size());
  for (const auto& [q, p] : support) out.push_back(q);
  return out;
}

std::string Stabilizer::str() const {
  std::string out;
  for (const auto& [q, p] : support) {
    out += pauli_char(p);
    out += std::to_string(q);
  }
  return out;
}

bool stabilizers_commute(const Stabilizer& a, const Stabilizer& b) {
  int anti = 0;
  auto ia = a.support.begin();
  auto ib = b.support.begin();
  while (ia != a.support.end() && ib != b.support.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      if (anticommute(ia->second, ib->second)) ++anti;
      ++ia;
      ++ib;
    }
  }
  return anti % 2 == 0;
}

int StabilizerCode::find(std::string_view label) const {
  for (int i = 0; i < num_stabilizers(); ++i) {
    if (stabilizers[i].label == label) return i;
  }
  return -1;
}

std::string CodeValidationReport::str() const {
  std::ostringstream out;
  for (const auto& v : index_violations) {
    out << "stabilizer " << v.stabilizer << " references qubit " << v.qubit
        << " outside the data range\n";
  }
  for (const auto& [a, b] : noncommuting_pairs) {
    out << "stabilizers " << a << " and " << b << " anticommute\n";
  }
  for (const auto& s : other) out << s << "\n";
  return out.str();
}

CodeValidationReport validate_code(const StabilizerCode& code) {
  CodeValidationReport report;
  if (code.num_data <= 0) report.other.push_back("code has no data qubits");
  if (code.stabilizers.empty()) report.other.push_back("code has no stabilizers");
  std::set<std::string> labels;
  for (int s = 0; s < code.num_stabilizers(); ++s) {
    const auto& stab = code.stabilizers[s];
    if (stab.support.empty()) report.other.push_back("stabilizer " + std::to_string(s) + " is empty");
    for (const auto& [q, p] : stab.support) {
      if (q < 0 || q >= code.num_data) report.index_violations.push_back({s, q});
      if (p == Pauli::I) {
        report.other.push_back("stabilizer " + std::to_string(s) + " has an identity entry");
      }
    }
    if (!labels.insert(stab.label).second) {
      report.other.push_back("duplicate stabilizer label '" + stab.label + "'");
    }
  }
  for (int a = 0; a < code.num_stabilizers(); ++a) {
    for (int b = a + 1; b < code.num_stabilizers(); ++b) {
      if (!stabilizers_commute(code.stabilizers[a], code.stabilizers[b])) {
        report.noncommuting_pairs.emplace_back(a, b);
      }
    }
  }
  return report;
}

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ParameterError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return Rational{num / g, den / g};
}

Rational code_density(const StabilizerCode& code) {
  std::int64_t total_weight = 0;
  for (const auto& s : code.stabilizers) total_weight += s.weight();
  return Rational::make(2 * total_weight, code.num_stabilizers() + code.num_data);
}

BinaryMatrix BinaryMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  BinaryMatrix m;
  m.rows = static_cast<int>(rows.size());
  m.cols = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != m.cols) throw ParameterError("ragged binary matrix");
    for (int v : row) {
      if (v != 0 && v != 1) throw ParameterError("binary matrix entries must be 0 or 1");
      m.bits.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return m;
}

namespace codes {

StabilizerCode surface(int d) {
  if (d < 3 || d % 2 == 0) throw ParameterError("surface code distance must be odd and >= 3");
  StabilizerCode code;
  code.name = "surface_d" + std::to_string(d);
  code.num_data = d * d;
  int x_count = 0;
  int z_count = 0;
  // Plaquettes sit on the (d+1)x(d+1) corner lattice; corner (i, j) touches the data
  // qubits (i-1, j-1), (i-1, j), (i, j-1), (i, j) that exist.
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      const bool x_type = (i + j) % 2 == 0;
      const bool top_bottom = i == 0 || i == d;
      const bool left_right = j == 0 || j == d;
      if (top_bottom && left_right) continue;
      if (top_bottom && !x_type) continue;
      if (left_right && x_type) continue;
      std::vector<std::pair<int, Pauli>> terms;
      for (int di = -1; di <= 0; ++di) {
        for (int dj = -1; dj <= 0; ++dj) {
          const int r = i + di;
          const int c = j + dj;
          if (r < 0 || r >= d || c < 0 || c >= d) continue;
          terms.emplace_back(r * d + c, x_type ? Pauli::X : Pauli::Z);
        }
      }
      const std::string label =
          x_type ? "X" + std::to_string(x_count++) : "Z" + std::to_string(z_count++);
      code.stabilizers.push_back(Stabilizer::make(std::move(terms), label));
    }
  }
  return code;
}

StabilizerCode steane() {
  const std::vector<std::vector<int>> supports = {{0, 1, 2, 3}, {1, 3, 4, 5}, {2, 3, 5, 6}};
  StabilizerCode code;
  code.name = "steane";
  code.num_data = 7;
  for (Pauli p : {Pauli::X, Pauli::Z}) {
    for (std::size_t i = 0; i < supports.size(); ++i) {
      std::vector<std::pair<int, Pauli>> terms;
      for (int q : supports[i]) terms.emplace_back(q, p);
      code.stabilizers.push_back(
          Stabilizer::make(std::move(terms), std::string(1, pauli_char(p)) + std::to_string(i + 1)));
    }
  }
  return code;
}

StabilizerCode repetition(int n) {
  if (n < 2) throw ParameterError("repetition code needs at least 2 qubits");
  StabilizerCode code;
  code.name = "repetition_" + std::to_string(n);
  code.num_data = n;
  for (int i = 0; i + 1 < n; ++i) {
    code.stabilizers.push_back(Stabilizer::make({{i, Pauli::Z}, {i + 1, Pauli::Z}},
                                                "Z" + std::to_string(i)));
  }
  return code;
}

StabilizerCode cube() {
  StabilizerCode code;
  code.name = "cube_832";
  code.num_data = 8;
  std::vector<std::pair<int, Pauli>> all;
  for (int v = 0; v < 8; ++v) all.emplace_back(v, Pauli::X);
  code.stabilizers.push_back(Stabilizer::make(std::move(all), "X0"));
  // Faces x=0, y=0, z=0 and x=1; the remaining two faces are products of these.
  const std::vector<std::pair<int, int>> faces = {{0, 0}, {1, 0}, {2, 0}, {0, 1}};
  int index = 0;
  for (const auto& [axis, side] : faces) {
    std::vector<std::pair<int, Pauli>> terms;
    for (int v = 0; v < 8; ++v) {
      if (((v >> axis) & 1) == side) terms.emplace_back(v, Pauli::Z);
    }
    code.stabilizers.push_back(Stabilizer::make(std::move(terms), "Z" + std::to_string(index++)));
  }
  return code;
}

StabilizerCode hypergraph_product(const BinaryMatrix& h1, const BinaryMatrix& h2) {
  if (h1.rows < 1 || h1.cols < 1 || h2.rows < 1 || h2.cols < 1) {
    throw ParameterError("hypergraph product needs non-empty parity-check matrices");
  }
  const int n1 = h1.cols, m1 = h1.rows, n2 = h2.cols, m2 = h2.rows;
  // Data qubits: the n1*n2 "bit x bit" block followed by the m1*m2 "check x check" block.
  auto left = [&](int i, int j) { return i * n2 + j; };
  auto right = [&](int a, int b) { return n1 * n2 + a * m2 + b; };
  StabilizerCode code;
  code.name = "hgp";
  code.num_data = n1 * n2 + m1 * m2;
  int x_index = 0;
  for (int a = 0; a < m1; ++a) {
    for (int j = 0; j < n2; ++j) {
      std::vector<std::pair<int, Pauli>> terms;
      for (int i = 0; i < n1; ++i) {
        if (h1.at(a, i)) terms.emplace_back(left(i, j), Pauli::X);
      }
      for (int b = 0; b < m2; ++b) {
        if (h2.at(b, j)) terms.emplace_back(right(a, b), Pauli::X);
      }
      if (terms.empty()) continue;
      code.stabilizers.push_back(Stabilizer::make(std::move(terms), "X" + std::to_string(x_index++)));
    }
  }
  int z_index = 0;
  for (int i = 0; i < n1; ++i) {
    for (int b = 0; b < m2; ++b) {
      std::vector<std::pair<int, Pauli>> terms;
      for (int j = 0; j < n2; ++j) {
        if (h2.at(b, j)) terms.emplace_back(left(i, j), Pauli::Z);
      }
      for (int a = 0; a < m1; ++a) {
        if (h1.at(a, i)) terms.emplace_back(right(a, b), Pauli::Z);
      }
      if (terms.empty()) continue;
      code.stabilizers.push_back(Stabilizer::make(std::move(terms), "Z" + std::to_string(z_index++)));
    }
  }
  if (code.stabilizers.empty()) throw ParameterError("hypergraph product has no stabilizers");
  return code;
}

}  // namespace codes

StabilizerCode generate_code(CodeFamily family, const CodeParams& params) {
  switch (family) {
    case CodeFamily::Surface: return codes::surface(params.size);
    case CodeFamily::Steane: return codes::steane();
    case CodeFamily::Repetition: return codes::repetition(params.size);
    case CodeFamily::Cube: return codes::cube();
    case CodeFamily::HypergraphProduct: return codes::hypergraph_product(params.h1, params.h2);
  }
  throw ParameterError("unknown code family");
}

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParameterError("expected an integer for " + std::string(what) + ", got '" +
                         std::string(text) + "'");
  }
  return value;
}

}  // namespace

StabilizerCode generate_code(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view family = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? "" : spec.substr(colon + 1);
  CodeParams params;
  if (family == "surface") {
    params.size = parse_int(arg, "surface distance");
    return generate_code(CodeFamily::Surface, params);
  }
  if (family == "repetition") {
    params.size = parse_int(arg, "repetition length");
    return generate_code(CodeFamily::Repetition, params);
  }
  if (family == "steane") return generate_code(CodeFamily::Steane, params);
  if (family == "cube" || family == "832") return generate_code(CodeFamily::Cube, params);
  throw ParameterError("unknown code family '" + std::string(spec) + "'");
}

std::vector<InteractionEdge> interaction_graph(const StabilizerCode& code) {
  std::vector<InteractionEdge> edges;
  for (int a = 0; a < code.num_stabilizers(); ++a) {
    const auto qa = code.stabilizers[a].data_qubits();
    for (int b = a + 1; b < code.num_stabilizers(); ++b) {
      const auto qb = code.stabilizers[b].data_qubits();
      std::vector<int> shared;
      std::set_intersection(qa.begin(), qa.end(), qb.begin(), qb.end(), std::back_inserter(shared));
      if (!shared.empty()) edges.push_back({a, b, static_cast<int>(shared.size())});
    }
  }
  return edges;
}

nlohmann::json code_to_json(const StabilizerCode& code) {
  nlohmann::json stabs = nlohmann::json::array();
  for (const auto& s : code.stabilizers) {
    nlohmann::json paulis = nlohmann::json::array();
    for (const auto& [q, p] : s.support) paulis.push_back({q, std::string(1, pauli_char(p))});
    stabs.push_back({{"label", s.label}, {"paulis", paulis}});
  }
  return {{"name", code.name}, {"num_data", code.num_data}, {"stabilizers", stabs}};
}

StabilizerCode code_from_json(const nlohmann::json& j) {
  try {
    StabilizerCode code;
    code.name = j.value("name", std::string("code"));
    code.num_data = j.at("num_data").get<int>();
    std::set<std::string> seen;
    int index = 0;
    for (const auto& s : j.at("stabilizers")) {
      std::vector<std::pair<int, Pauli>> terms;
      for (const auto& term : s.at("paulis")) {
        terms.emplace_back(term.at(0).get<int>(), parse_pauli(term.at(1).get<std::string>()));
      }
      std::string label = s.value("label", std::string());
      if (label.empty() || seen.count(label) != 0) label = "s" + std::to_string(index);
      seen.insert(label);
      code.stabilizers.push_back(Stabilizer::make(std::move(terms), label));
      ++index;
    }
    return code;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed code JSON: ") + e.what());
  }
}

StabilizerCode load_code(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open code file '" + path + "'");
  try {
    return code_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError("cannot parse code file '" + path + "': " + e.what());
  }
}

void save_code(const StabilizerCode& code, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  out << code_to_json(code).dump(2) << "\n";
}

}  // namespace bridgesynth
