#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eitgate/basis.hpp"
#include "eitgate/common.hpp"
#include "eitgate/dynamics.hpp"
#include "eitgate/mscheme.hpp"

namespace eitgate {

// Input amplitudes c00, c01, c10, c11.
using Amplitudes = std::array<Complex, 4>;

inline Amplitudes uniform_amplitudes() { return {0.5, 0.5, 0.5, 0.5}; }

struct PhaseTrajectory {
  std::vector<double> times;
  std::vector<double> phi01;
  std::vector<double> phi10;
  std::vector<double> phi11;
  std::vector<double> cps;
};

struct GateMetrics {
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<double> cond_fidelity;
  std::vector<double> p_success;  // Haar mean of the no-jump trace
  std::vector<double> p_uniform;  // no-jump trace for the phase input
  std::array<std::vector<double>, 4> p_basis;
  std::vector<RealVector> populations;  // phase input, one entry per time
};

// Linear map on the qubit block, J(i*4+a, j*4+b) = E(|i><j|)[a,b].
struct QubitChannel {
  Matrix choi = Matrix::Zero(16, 16);

  static QubitChannel identity();
  // blocks[i][j] = E(|i><j|), each 4x4
  static QubitChannel from_blocks(
      const std::array<std::array<Matrix, 4>, 4>& blocks);

  Matrix block(int i, int j) const;
  Matrix apply(const Matrix& rho) const;
  // T(i,j) = Tr E(|i><j|)
  Matrix output_trace() const;
};

// Partial trace over atomic labels onto the given field list.
Matrix reduce_to_fields(const Matrix& rho, std::span<const StateLabel> labels,
                        std::span<const FieldState> fields);
// 18-state model onto the six reachable field states.
Matrix reduce_to_fields(const Matrix& rho);

// Field matrices are indexed with |00>,|01>,|10>,|11> at 0..3.
PhaseTrajectory extract_phases(std::span<const double> times,
                               std::span<const Matrix> field_states,
                               const Amplitudes& amplitudes =
                                   uniform_amplitudes());

// Closed-form Haar average of <psi_id| E(|psi><psi|) |psi_id>.
double haar_average(const QubitChannel& channel,
                    const std::array<double, 3>& phases);

// sqrt of the Haar average.
double average_fidelity(const QubitChannel& channel,
                        const std::array<double, 3>& phases);

// Deterministic Haar-random qubit-block states.
std::vector<Eigen::Vector4cd> haar_states(std::size_t samples,
                                          std::uint64_t seed);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

McEstimate haar_average_mc(const QubitChannel& channel,
                           const std::array<double, 3>& phases,
                           std::size_t samples, std::uint64_t seed);

struct ConditionalResult {
  double cond_fidelity = 0.0;
  double p_success = 0.0;
  std::array<double, 4> p_basis{};
  std::size_t skipped = 0;
};

ConditionalResult conditional_fidelity(const QubitChannel& nojump_channel,
                                       const std::array<double, 3>& phases,
                                       std::span<const Eigen::Vector4cd> states);

ConditionalResult conditional_fidelity(const QubitChannel& nojump_channel,
                                       const std::array<double, 3>& phases,
                                       std::size_t samples,
                                       std::uint64_t seed);

// Any model on a product basis (atom label) x (field state).
struct GateModel {
  Matrix hamiltonian;
  std::vector<JumpChannel> channels;
  std::vector<StateLabel> labels;
  std::vector<std::string> names;
};

GateModel m_scheme_model(const MSchemeParams& params);

struct GateSettings {
  IntegratorSettings integrator;
  DephasingMode dephasing_mode = DephasingMode::Lindblad;
  std::size_t mc_samples = 2000;
  std::uint64_t seed = 42;
  Amplitudes amplitudes = uniform_amplitudes();
};

struct GateResult {
  PhaseTrajectory phases;
  GateMetrics metrics;
  // diagonal of rho(t) for each basis input |G>|ij>
  std::array<std::vector<RealVector>, 4> basis_populations;
  std::vector<QubitChannel> channels;
  std::vector<QubitChannel> nojump_channels;
};

GateResult analyze_gate(const GateModel& model, std::span<const double> times,
                        const GateSettings& settings);

QubitChannel reconstruct_channel(const GateModel& model, double t,
                                 bool conditional,
                                 const IntegratorSettings& settings = {},
                                 DephasingMode mode = DephasingMode::Lindblad);

struct PiCrossing {
  bool found = false;
  double time = 0.0;
  double cps = 0.0;
  double fidelity = 0.0;
  double cond_fidelity = 0.0;
  double p_success = 0.0;
  double p_uniform = 0.0;
};

// First sample pair bracketing |cps| = pi, linearly interpolated.
PiCrossing first_pi_crossing(const PhaseTrajectory& phases,
                             const GateMetrics& metrics);

// Occupations summed per atom label id and per field state.
struct PopulationSummary {
  std::vector<RealVector> by_state;
  std::vector<RealVector> by_atom;
  std::vector<RealVector> by_field;
};

PopulationSummary populations(const EvolutionResult& evolution,
                              std::span<const StateLabel> labels,
                              int n_atom_labels,
                              std::span<const FieldState> fields);
PopulationSummary populations(const EvolutionResult& evolution);

// Phases at sample k of a trajectory.
std::array<double, 3> phases_at(const PhaseTrajectory& phases, std::size_t k);

}  // namespace eitgate
