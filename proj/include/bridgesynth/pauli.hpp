#pragma once

#include <cstdint>
#include <string_view>

namespace bridgesynth {

/// Single-qubit Pauli without phase. Bit 0 is the X component, bit 1 the Z component.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

constexpr bool has_x(Pauli p) { return (static_cast<std::uint8_t>(p) & 1U) != 0; }
constexpr bool has_z(Pauli p) { return (static_cast<std::uint8_t>(p) & 2U) != 0; }

constexpr Pauli pauli_from_bits(bool x, bool z) {
  return static_cast<Pauli>((x ? 1U : 0U) | (z ? 2U : 0U));
}

/// Product up to phase.
constexpr Pauli operator*(Pauli a, Pauli b) {
  return static_cast<Pauli>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

constexpr bool anticommute(Pauli a, Pauli b) {
  return a != Pauli::I && b != Pauli::I && a != b;
}

constexpr char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Z: return 'Z';
    case Pauli::Y: return 'Y';
  }
  return '?';
}

/// Parses "I", "X", "Y" or "Z"; throws ParameterError otherwise.
Pauli parse_pauli(std::string_view text);

}  // namespace bridgesynth
