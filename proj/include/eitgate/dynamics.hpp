#pragma once

#include <span>
#include <vector>

#include "eitgate/common.hpp"
#include "eitgate/mscheme.hpp"

namespace eitgate {

enum class IntegrationMethod { Exponential, AdaptiveRk };
enum class DephasingMode { Lindblad, Excluded };

struct IntegratorSettings {
  IntegrationMethod method = IntegrationMethod::Exponential;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double max_step = 0.01;  // 1/gamma, adaptive engine only

  void validate() const;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<Matrix> states;
  std::vector<double> trace;
};

// Column-major vec / unvec of a square matrix.
Vector vec(const Matrix& m);
Matrix unvec(const Eigen::Ref<const Vector>& v, Eigen::Index n);

// Generator of the conditional (no-jump) evolution. Decay channels keep only
// their anticommutator part; dephasing keeps the full Lindblad form in
// Lindblad mode.
Matrix build_nojump_generator(const Matrix& hamiltonian,
                              std::span<const JumpChannel> channels,
                              DephasingMode mode = DephasingMode::Lindblad);

// Propagates the columns of `initial` (each a vectorised matrix) under L to
// every output time. Result k holds exp(L t_k) * initial.
std::vector<Matrix> propagate(const Matrix& generator, const Matrix& initial,
                              std::span<const double> times,
                              const IntegratorSettings& settings);

EvolutionResult evolve_master(const Matrix& generator, const Matrix& rho0,
                              std::span<const double> times,
                              const IntegratorSettings& settings = {});

EvolutionResult evolve_nojump(const Matrix& hamiltonian,
                              std::span<const JumpChannel> channels,
                              const Matrix& rho0,
                              std::span<const double> times,
                              const IntegratorSettings& settings = {},
                              DephasingMode mode = DephasingMode::Lindblad);

// Trace-one kernel element of L. Throws DegenerateSteadyState when the kernel
// is not one-dimensional.
Matrix steady_state(const Matrix& generator);

// Number of singular values of L below tol * max(1, sigma_max).
Eigen::Index kernel_dimension(const Matrix& generator, double tol = 1e-12);

// States reachable from `seeds` through H, the jump operators and J^dag J.
// Sorted ascending.
std::vector<std::size_t> reachable_states(
    const Matrix& hamiltonian, std::span<const JumpChannel> channels,
    std::span<const std::size_t> seeds);

std::vector<JumpChannel> restrict_channels(
    std::span<const JumpChannel> channels,
    std::span<const std::size_t> indices);

// Uniform grid of n points on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t n);

}  // namespace eitgate
