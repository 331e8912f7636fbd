#pragma once

#include <span>
#include <vector>

#include "eitgate/basis.hpp"
#include "eitgate/common.hpp"

namespace eitgate {

// Physical parameters of the five-level M-scheme. Every frequency and rate is
// in units of the reference linewidth gamma; time is in units of 1/gamma.
struct MSchemeParams {
  double n_atoms = 1.0;
  double g_p = 0.0;  // single-atom vacuum couplings
  double g_t = 0.0;
  double omega1 = 0.0;  // classical pump Rabi frequencies
  double omega4 = 0.0;
  double delta2 = 0.0;  // one-photon detunings
  double delta3 = 0.0;
  double eps12 = 0.0;  // two-photon mismatches delta1 - delta2, delta3 - delta4
  double eps34 = 0.0;
  double gamma21 = 0.0;
  double gamma23 = 0.0;
  double gamma25 = 0.0;
  double gamma41 = 0.0;
  double gamma43 = 0.0;
  double gamma45 = 0.0;
  double deph1 = 0.0;
  double deph2 = 0.0;
  double deph4 = 0.0;
  double deph5 = 0.0;
  double gamma_si = 2.0 * kPi * 6.0e6;  // rad/s

  double delta1() const { return delta2 + eps12; }
  double delta4() const { return delta3 - eps34; }
  double gp_collective() const;
  double gt_collective() const;

  // Throws ErrorCode::InvalidParameter on negative rates, N_a < 1 or
  // non-finite entries.
  void validate() const;
};

enum class ChannelKind { Decay, Dephasing };

struct JumpChannel {
  double rate = 0.0;
  Matrix op;
  ChannelKind kind = ChannelKind::Decay;
};

Matrix build_hamiltonian(const MSchemeParams& params);

// Six collective decay channels followed by four dephasing projectors, in
// the order 2->1, 2->3, 2->5, 4->1, 4->3, 4->5, deph 1, 2, 4, 5. Zero-rate
// channels are omitted.
std::vector<JumpChannel> build_jump_channels(const MSchemeParams& params);

// Generator L with vec(drho/dt) = L vec(rho), column-major vectorisation.
Matrix build_liouvillian(const Matrix& hamiltonian,
                         std::span<const JumpChannel> channels);

struct ReducedHamiltonians {
  Matrix probe;    // {(G,1,0), (E2,0,0), (E1,0,0)}
  Matrix trigger;  // {(G,0,1), (E4,0,0), (E5,0,0)}
  Matrix both;     // {(E1,0,1), (E2,0,1), (G,1,1), (E4,1,0), (E5,1,0)}
};

inline constexpr std::array<std::size_t, 3> kProbeSector{1, 2, 3};
inline constexpr std::array<std::size_t, 3> kTriggerSector{4, 5, 6};
inline constexpr std::array<std::size_t, 5> kBothSector{9, 8, 7, 10, 11};

ReducedHamiltonians reduced_hamiltonians(const MSchemeParams& params);

// Total excitation number (atomic excitation + n_p + n_t) on the 18 states.
Matrix excitation_number_operator();

Matrix submatrix(const Matrix& m, std::span<const std::size_t> indices);

}  // namespace eitgate
