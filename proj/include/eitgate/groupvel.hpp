#pragma once

#include <vector>

#include "eitgate/common.hpp"
#include "eitgate/dynamics.hpp"
#include "eitgate/mscheme.hpp"

namespace eitgate {

struct PhysicalConstants {
  double c = 299792458.0;
  double hbar = 1.054571817e-34;
  double epsilon0 = 8.8541878128e-12;
  double omega_p = 2.0 * kPi * 377.228e12;  // rad/s
  double omega_t = 2.0 * kPi * 384.225e12;
  double mu_p = 2.5e-29;  // C m
  double mu_t = 2.5e-29;

  void validate() const;
};

struct VgSettings {
  double probe_rabi_classical = 1e-3;  // units of gamma
  double fd_step = 1e-3;               // units of gamma
  std::size_t avg_grid = 200;

  void validate() const;
};

struct CellGeometry {
  double V = 0.0;  // m^3
  double L = 0.0;  // m
  double d = 0.0;  // m
  double density = 0.0;  // m^-3
  double v_g = 0.0;  // m/s
};

// Single atom, levels |1>..|5> at indices 0..4, weak classical probe on
// 3<->2 and trigger on 3<->4. The offset shifts levels 1 and 2 together, so
// offset = -eps12 is exact two-photon resonance.
Matrix semiclassical_hamiltonian(const MSchemeParams& params,
                                 const VgSettings& settings, double offset);
std::vector<JumpChannel> semiclassical_channels(const MSchemeParams& params);
Matrix semiclassical_liouvillian(const MSchemeParams& params,
                                 const VgSettings& settings, double offset);

// Probe susceptibility for a given 2-3 coherence rho(1, 2).
Complex susceptibility_from_coherence(const MSchemeParams& params,
                                      const PhysicalConstants& constants,
                                      const VgSettings& settings,
                                      Complex rho23);

Complex susceptibility(const MSchemeParams& params,
                       const PhysicalConstants& constants,
                       const VgSettings& settings, double offset);

// c / (1 + Re chi / 2 + omega0/2 dRe chi/domega), derivative in s/rad.
double group_velocity(double re_chi, double dre_chi_domega,
                      const PhysicalConstants& constants);

double group_velocity_steady(const MSchemeParams& params,
                             const PhysicalConstants& constants,
                             const VgSettings& settings);

struct TransientVelocity {
  double mean = 0.0;
  std::vector<double> times;  // 1/gamma
  std::vector<double> v_g;    // m/s
};

TransientVelocity group_velocity_transient(const MSchemeParams& params,
                                           const PhysicalConstants& constants,
                                           const VgSettings& settings,
                                           double t_int);

CellGeometry cell_geometry(const MSchemeParams& params,
                           const PhysicalConstants& constants, double v_g,
                           double t_int);

}  // namespace eitgate
