#include "eitgate/basis.hpp"

#include <algorithm>
#include <sstream>

namespace eitgate {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain_error";
    case ErrorCode::Dimension: return "dimension_mismatch";
    case ErrorCode::InvalidParameter: return "invalid_parameter";
    case ErrorCode::Integrator: return "integrator_failure";
    case ErrorCode::DegenerateSteadyState: return "degenerate_steady_state";
    case ErrorCode::UndefinedPhase: return "undefined_phase";
    case ErrorCode::GridTooCoarse: return "grid_too_coarse";
    case ErrorCode::SingularParameters: return "singular_parameters";
    case ErrorCode::DegenerateOverlap: return "degenerate_overlap";
    case ErrorCode::TruncationLeakage: return "truncation_leakage";
    case ErrorCode::TooManySkipped: return "too_many_skipped_samples";
    case ErrorCode::MalformedFringe: return "malformed_fringe";
    case ErrorCode::Config: return "config_error";
    case ErrorCode::Io: return "io_error";
  }
  return "unknown_error";
}

std::string to_string(CollectiveAtomLabel label) {
  switch (label) {
    case CollectiveAtomLabel::G: return "G";
    case CollectiveAtomLabel::E1: return "E1";
    case CollectiveAtomLabel::E2: return "E2";
    case CollectiveAtomLabel::E4: return "E4";
    case CollectiveAtomLabel::E5: return "E5";
  }
  return "?";
}

const MBasis& enumerate_m_basis() {
  using L = CollectiveAtomLabel;
  static const MBasis basis{{
      {L::G, 0, 0},  {L::G, 1, 0},  {L::E2, 0, 0}, {L::E1, 0, 0},
      {L::G, 0, 1},  {L::E4, 0, 0}, {L::E5, 0, 0}, {L::G, 1, 1},
      {L::E2, 0, 1}, {L::E1, 0, 1}, {L::E4, 1, 0}, {L::E5, 1, 0},
      {L::E1, 1, 0}, {L::E2, 1, 0}, {L::G, 2, 0},  {L::E5, 0, 1},
      {L::E4, 0, 1}, {L::G, 0, 2},
  }};
  return basis;
}

std::optional<std::size_t> m_basis_index(const MBasisState& state) {
  const auto& basis = enumerate_m_basis();
  auto it = std::find(basis.begin(), basis.end(), state);
  if (it == basis.end()) return std::nullopt;
  return static_cast<std::size_t>(it - basis.begin());
}

std::vector<StateLabel> m_basis_labels() {
  std::vector<StateLabel> labels;
  labels.reserve(kMBasisSize);
  for (const auto& s : enumerate_m_basis()) {
    labels.push_back({static_cast<int>(s.atom), {s.n_p, s.n_t}});
  }
  return labels;
}

const std::vector<FieldState>& field_basis() {
  static const std::vector<FieldState> fields{
      {0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}, {0, 2}};
  return fields;
}

std::size_t field_index(int n_p, int n_t) {
  auto idx = find_field(field_basis(), {n_p, n_t});
  if (!idx) {
    std::ostringstream msg;
    msg << "field state (" << n_p << "," << n_t
        << ") is not reachable in the restricted model";
    throw Error(ErrorCode::Domain, msg.str());
  }
  return *idx;
}

std::vector<FieldState> truncated_field_basis(int n_max) {
  std::vector<FieldState> fields{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (int p = 0; p <= n_max; ++p) {
    for (int t = 0; t <= n_max; ++t) {
      if (p <= 1 && t <= 1) continue;
      fields.push_back({p, t});
    }
  }
  return fields;
}

std::optional<std::size_t> find_field(const std::vector<FieldState>& fields,
                                      FieldState state) {
  auto it = std::find(fields.begin(), fields.end(), state);
  if (it == fields.end()) return std::nullopt;
  return static_cast<std::size_t>(it - fields.begin());
}

}  // namespace eitgate
