#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eitgate/common.hpp"

namespace eitgate {

// Collective atomic configuration of the M-scheme ensemble. G: every atom in
// |3>. Ek: symmetric single excitation with one atom in level k.
enum class CollectiveAtomLabel { G, E1, E2, E4, E5 };

std::string to_string(CollectiveAtomLabel label);

// Photon-number pair (probe, trigger).
struct FieldState {
  int n_p = 0;
  int n_t = 0;

  friend bool operator==(const FieldState&, const FieldState&) = default;
};

// Atom-label-agnostic view of a product basis state, shared by the M-scheme
// and the ladder so that field reduction and gate analysis can be generic.
struct StateLabel {
  int atom = 0;  // model-specific atom label id, 0 is always the ground label
  FieldState field;
};

struct MBasisState {
  CollectiveAtomLabel atom = CollectiveAtomLabel::G;
  int n_p = 0;
  int n_t = 0;

  friend bool operator==(const MBasisState&, const MBasisState&) = default;
};

inline constexpr std::size_t kMBasisSize = 18;
inline constexpr std::size_t kQubitDim = 4;

using MBasis = std::array<MBasisState, kMBasisSize>;

// Canonical 18-state ordering; indices 0-11 span the four decoherence-free
// sectors, 12-17 are only reachable through cross decay.
const MBasis& enumerate_m_basis();

// Position of a state in the canonical ordering, or nullopt when the state
// lies outside the restricted space (e.g. doubly excited atoms).
std::optional<std::size_t> m_basis_index(const MBasisState& state);

std::vector<StateLabel> m_basis_labels();

// Reachable field states; the first four form the qubit block
// |00>, |01>, |10>, |11>.
const std::vector<FieldState>& field_basis();

// Throws ErrorCode::Domain for pairs outside field_basis().
std::size_t field_index(int n_p, int n_t);

// Field basis with the qubit block first and the remaining pairs with
// n_p, n_t <= n_max in lexicographic order.
std::vector<FieldState> truncated_field_basis(int n_max);

std::optional<std::size_t> find_field(const std::vector<FieldState>& fields,
                                      FieldState state);

}  // namespace eitgate
