#pragma once

#include <array>
#include <span>

namespace eitgate {

struct FockPhaseSet {
  double Phi = 0.0;  // interferometer path phase
  double phi00 = 0.0;
  double phi01 = 0.0;
  double phi10 = 0.0;
  double phi11 = 0.0;
  double phi_plus0 = 0.0;  // reflection phase of the wrong polarisation
};

struct Coincidences {
  double p1 = 0.0;  // R-B1
  double p2 = 0.0;  // R-B2
};

Coincidences coincidence_fock(const FockPhaseSet& phases);

// Polarisation labels: 0 (vacuum), + and -.
enum class Pol : int { Zero = 0, Plus = 1, Minus = 2 };

struct PolPhaseTable {
  std::array<std::array<double, 3>, 3> phi{};

  double operator()(Pol i, Pol j) const {
    return phi[static_cast<int>(i)][static_cast<int>(j)];
  }
  double& operator()(Pol i, Pol j) {
    return phi[static_cast<int>(i)][static_cast<int>(j)];
  }
};

// phi_ij - phi_i0 - phi_0j + phi_00
double pol_bar_phase(Pol i, Pol j, const PolPhaseTable& table);

// i, j must be Plus or Minus.
Coincidences coincidence_pol(Pol i, Pol j, double Phi,
                             const PolPhaseTable& table);

struct FringeFit {
  double phi = 0.0;  // theta_A - theta_B in (-pi, pi]
  double residual_a = 0.0;  // max |residual| / amplitude
  double residual_b = 0.0;
};

// Fits a + b cos(Phi + theta) to each curve. Throws MalformedFringe when a
// fit residual exceeds 1e-6 of the amplitude or the sampling is too thin.
FringeFit cps_from_fringes(std::span<const double> phi_a,
                           std::span<const double> p_a,
                           std::span<const double> phi_b,
                           std::span<const double> p_b);

double chsh_value(double phi);

}  // namespace eitgate
