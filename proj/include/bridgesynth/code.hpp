#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bridgesynth/pauli.hpp"
#include "json.hpp"

namespace bridgesynth {

/// A sparse Pauli string: sorted (qubit, operator) pairs, no identities, never empty.
struct Stabilizer {
  std::vector<std::pair<int, Pauli>> support;
  std::string label;

  /// Sorts and checks the terms. Throws ParameterError on duplicates, I entries,
  /// negative indices or an empty support.
  static Stabilizer make(std::vector<std::pair<int, Pauli>> terms, std::string label = {});

  int weight() const { return static_cast<int>(support.size()); }
  Pauli at(int qubit) const;
  std::vector<int> data_qubits() const;
  std::string str() const;

  bool operator==(const Stabilizer&) const = default;
};

bool stabilizers_commute(const Stabilizer& a, const Stabilizer& b);

struct StabilizerCode {
  std::string name;
  int num_data = 0;
  std::vector<Stabilizer> stabilizers;

  int num_stabilizers() const { return static_cast<int>(stabilizers.size()); }
  /// Index of the stabilizer with this label, or -1.
  int find(std::string_view label) const;

  bool operator==(const StabilizerCode&) const = default;
};

struct CodeValidationReport {
  struct IndexViolation {
    int stabilizer;
    int qubit;
  };
  std::vector<IndexViolation> index_violations;
  std::vector<std::pair<int, int>> noncommuting_pairs;
  std::vector<std::string> other;

  bool ok() const {
    return index_violations.empty() && noncommuting_pairs.empty() && other.empty();
  }
  std::string str() const;
};

CodeValidationReport validate_code(const StabilizerCode& code);

/// Exact non-negative rational number.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

/// 2 * sum of stabilizer weights / (#stabilizers + #data qubits).
Rational code_density(const StabilizerCode& code);

/// Dense GF(2) matrix, row-major.
struct BinaryMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> bits;

  static BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows);
  bool at(int r, int c) const { return bits[static_cast<std::size_t>(r) * cols + c] != 0; }
};

namespace codes {
/// Rotated surface code with d*d data qubits and d*d-1 stabilizers (d odd, >= 3).
StabilizerCode surface(int d);
StabilizerCode steane();
/// Z_i Z_{i+1} checks, n >= 2.
StabilizerCode repetition(int n);
/// [[8,3,2]] cube code: X on all eight vertices, four independent Z faces.
StabilizerCode cube();
/// Hypergraph product of two classical parity-check matrices.
StabilizerCode hypergraph_product(const BinaryMatrix& h1, const BinaryMatrix& h2);
}  // namespace codes

enum class CodeFamily { Surface, Steane, Repetition, Cube, HypergraphProduct };

struct CodeParams {
  int size = 0;        // surface distance or repetition length
  BinaryMatrix h1;     // hypergraph product inputs
  BinaryMatrix h2;
};

StabilizerCode generate_code(CodeFamily family, const CodeParams& params);

/// Parses "surface:3", "steane", "repetition:5", "cube".
StabilizerCode generate_code(std::string_view spec);

struct InteractionEdge {
  int a;
  int b;
  int weight;  // number of shared data qubits
  bool operator==(const InteractionEdge&) const = default;
};

/// Stabilizer graph weighted by shared data qubits; zero-weight pairs are omitted. Edges
/// are ordered by (a, b) with a < b.
std::vector<InteractionEdge> interaction_graph(const StabilizerCode& code);

nlohmann::json code_to_json(const StabilizerCode& code);
/// Throws ParameterError on malformed input. Missing or duplicate labels are replaced by
/// "s<index>".
StabilizerCode code_from_json(const nlohmann::json& j);
StabilizerCode load_code(const std::string& path);
void save_code(const StabilizerCode& code, const std::string& path);

}  // namespace bridgesynth
