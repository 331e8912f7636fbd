#include "eitgate/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "eitgate/common.hpp"

namespace eitgate {

namespace {

double wrap_half_open(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

struct SingleFit {
  double theta = 0.0;
  double amplitude = 0.0;
  double residual = 0.0;
};

SingleFit fit_fringe(std::span<const double> phi, std::span<const double> p,
                     const char* name) {
  const auto n = static_cast<Eigen::Index>(phi.size());
  if (phi.size() != p.size()) {
    throw Error(ErrorCode::MalformedFringe,
                std::string("fringe ") + name + ": length mismatch");
  }
  if (n < 8) {
    throw Error(ErrorCode::MalformedFringe,
                std::string("fringe ") + name + ": fewer than 8 samples");
  }
  const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
  const double span = (*hi - *lo) * static_cast<double>(n) /
                      static_cast<double>(n - 1);
  if (span < 2.0 * kPi * (1.0 - 1e-9)) {
    throw Error(ErrorCode::MalformedFringe,
                std::string("fringe ") + name + ": less than one period");
  }
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    a(k, 0) = 1.0;
    a(k, 1) = std::cos(phi[k]);
    a(k, 2) = std::sin(phi[k]);
    y(k) = p[k];
  }
  const Eigen::Vector3d x = a.colPivHouseholderQr().solve(y);
  SingleFit fit;
  fit.amplitude = std::hypot(x(1), x(2));
  if (!(fit.amplitude > 1e-14)) {
    throw Error(ErrorCode::MalformedFringe,
                std::string("fringe ") + name + ": no modulation");
  }
  // b cos(Phi + theta) = b cos(theta) cos(Phi) - b sin(theta) sin(Phi)
  fit.theta = std::atan2(-x(2), x(1));
  fit.residual = (a * x - y).cwiseAbs().maxCoeff() / fit.amplitude;
  if (fit.residual > 1e-6) {
    std::ostringstream msg;
    msg << "fringe " << name << ": residual " << fit.residual
        << " of the amplitude";
    throw Error(ErrorCode::MalformedFringe, msg.str());
  }
  return fit;
}

}  // namespace

Coincidences coincidence_fock(const FockPhaseSet& s) {
  const double tilde = s.Phi + (s.phi10 - 2.0 * s.phi00 + s.phi_plus0);
  const double phi = s.phi11 - s.phi01 - s.phi10 + s.phi00;
  return {(1.0 + std::cos(tilde + phi)) / 8.0, (1.0 + std::cos(tilde)) / 8.0};
}

double pol_bar_phase(Pol i, Pol j, const PolPhaseTable& t) {
  return t(i, j) - t(i, Pol::Zero) - t(Pol::Zero, j) + t(Pol::Zero, Pol::Zero);
}

Coincidences coincidence_pol(Pol i, Pol j, double Phi,
                             const PolPhaseTable& t) {
  if (i == Pol::Zero || j == Pol::Zero) {
    throw Error(ErrorCode::Domain, "polarisation index must be + or -");
  }
  const Pol other = i == Pol::Plus ? Pol::Minus : Pol::Plus;
  const double bar = Phi + (t(i, Pol::Zero) - 2.0 * t(Pol::Zero, Pol::Zero) +
                            t(other, Pol::Zero));
  const double phi = pol_bar_phase(i, j, t);
  return {(1.0 + std::cos(bar + phi)) / 8.0, (1.0 + std::cos(bar)) / 8.0};
}

FringeFit cps_from_fringes(std::span<const double> phi_a,
                           std::span<const double> p_a,
                           std::span<const double> phi_b,
                           std::span<const double> p_b) {
  const auto fa = fit_fringe(phi_a, p_a, "A");
  const auto fb = fit_fringe(phi_b, p_b, "B");
  return {wrap_half_open(fa.theta - fb.theta), fa.residual, fb.residual};
}

double chsh_value(double phi) {
  const double s = std::sin(phi);
  return 2.0 * std::sqrt(1.0 + s * s);
}

}  // namespace eitgate
