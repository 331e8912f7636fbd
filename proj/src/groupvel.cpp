#include "eitgate/groupvel.hpp"

#include <cmath>

namespace eitgate {

namespace {

double trigger_rabi(const MSchemeParams& params, const VgSettings& settings) {
  if (params.g_p == 0.0) return settings.probe_rabi_classical;
  return settings.probe_rabi_classical * params.g_t / params.g_p;
}

}  // namespace

void PhysicalConstants::validate() const {
  for (double v : {c, hbar, epsilon0, omega_p, omega_t, mu_p, mu_t}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParameter,
                  "physical constants must be positive");
    }
  }
}

void VgSettings::validate() const {
  if (!(probe_rabi_classical > 0.0) || !(fd_step > 0.0) || avg_grid < 2) {
    throw Error(ErrorCode::InvalidParameter,
                "probe_rabi_classical and fd_step must be positive, "
                "avg_grid at least 2");
  }
}

Matrix semiclassical_hamiltonian(const MSchemeParams& params,
                                 const VgSettings& settings, double offset) {
  params.validate();
  settings.validate();
  Matrix h = Matrix::Zero(5, 5);
  h(0, 0) = params.eps12 + offset;
  h(1, 1) = params.delta2 + offset;
  h(3, 3) = params.delta3;
  h(4, 4) = params.eps34;
  auto couple = [&](int i, int j, double v) {
    h(i, j) += v;
    h(j, i) += v;
  };
  couple(0, 1, params.omega1);
  couple(3, 4, params.omega4);
  couple(2, 1, settings.probe_rabi_classical);
  couple(2, 3, trigger_rabi(params, settings));
  return h;
}

std::vector<JumpChannel> semiclassical_channels(const MSchemeParams& params) {
  struct Decay {
    double rate;
    int from;
    int to;
  };
  const Decay decays[] = {
      {params.gamma21, 1, 0}, {params.gamma23, 1, 2}, {params.gamma25, 1, 4},
      {params.gamma41, 3, 0}, {params.gamma43, 3, 2}, {params.gamma45, 3, 4},
  };
  std::vector<JumpChannel> out;
  for (const auto& d : decays) {
    if (d.rate <= 0.0) continue;
    Matrix op = Matrix::Zero(5, 5);
    op(d.to, d.from) = 1.0;
    out.push_back({d.rate, op, ChannelKind::Decay});
  }
  const std::pair<double, int> deph[] = {
      {params.deph1, 0}, {params.deph2, 1}, {params.deph4, 3}, {params.deph5, 4}};
  for (const auto& [rate, level] : deph) {
    if (rate <= 0.0) continue;
    Matrix op = Matrix::Zero(5, 5);
    op(level, level) = 1.0;
    out.push_back({rate, op, ChannelKind::Dephasing});
  }
  return out;
}

Matrix semiclassical_liouvillian(const MSchemeParams& params,
                                 const VgSettings& settings, double offset) {
  return build_liouvillian(semiclassical_hamiltonian(params, settings, offset),
                           semiclassical_channels(params));
}

Complex susceptibility_from_coherence(const MSchemeParams& params,
                                      const PhysicalConstants& constants,
                                      const VgSettings& settings,
                                      Complex rho23) {
  const double g = params.gp_collective() * params.gamma_si;
  const double rabi = settings.probe_rabi_classical * params.gamma_si;
  return -2.0 * g * g / constants.omega_p * rho23 / rabi;
}

Complex susceptibility(const MSchemeParams& params,
                       const PhysicalConstants& constants,
                       const VgSettings& settings, double offset) {
  constants.validate();
  if (params.gp_collective() == 0.0) return Complex(0.0);
  const Matrix rho =
      steady_state(semiclassical_liouvillian(params, settings, offset));
  return susceptibility_from_coherence(params, constants, settings, rho(1, 2));
}

double group_velocity(double re_chi, double dre_chi_domega,
                      const PhysicalConstants& constants) {
  return constants.c /
         (1.0 + 0.5 * re_chi + 0.5 * constants.omega_p * dre_chi_domega);
}

double group_velocity_steady(const MSchemeParams& params,
                             const PhysicalConstants& constants,
                             const VgSettings& settings) {
  const double h = settings.fd_step;
  const double x0 = susceptibility(params, constants, settings, 0.0).real();
  const double xp = susceptibility(params, constants, settings, h).real();
  const double xm = susceptibility(params, constants, settings, -h).real();
  // raising the probe frequency lowers the rotating-frame offset
  const double deriv = -(xp - xm) / (2.0 * h * params.gamma_si);
  return group_velocity(x0, deriv, constants);
}

TransientVelocity group_velocity_transient(const MSchemeParams& params,
                                           const PhysicalConstants& constants,
                                           const VgSettings& settings,
                                           double t_int) {
  constants.validate();
  settings.validate();
  if (!(t_int > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "t_int must be positive");
  }
  const auto times = uniform_grid(t_int, settings.avg_grid);
  Matrix rho0 = Matrix::Zero(5, 5);
  rho0(2, 2) = 1.0;
  const double h = settings.fd_step;
  auto coherences = [&](double offset) {
    const auto ev = evolve_master(
        semiclassical_liouvillian(params, settings, offset), rho0, times);
    std::vector<double> re;
    for (const auto& rho : ev.states) {
      re.push_back(
          susceptibility_from_coherence(params, constants, settings, rho(1, 2))
              .real());
    }
    return re;
  };
  const auto x0 = coherences(0.0);
  const auto xp = coherences(h);
  const auto xm = coherences(-h);
  TransientVelocity out;
  out.times = times;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double deriv = -(xp[k] - xm[k]) / (2.0 * h * params.gamma_si);
    out.v_g.push_back(group_velocity(x0[k], deriv, constants));
  }
  double acc = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    acc += 0.5 * (out.v_g[k] + out.v_g[k - 1]) * (times[k] - times[k - 1]);
  }
  out.mean = acc / t_int;
  return out;
}

CellGeometry cell_geometry(const MSchemeParams& params,
                           const PhysicalConstants& constants, double v_g,
                           double t_int) {
  constants.validate();
  if (!(params.g_p > 0.0) || !(v_g > 0.0) || !(t_int > 0.0)) {
    throw Error(ErrorCode::InvalidParameter,
                "geometry needs g_p, v_g and t_int positive");
  }
  const double g = params.g_p * params.gamma_si;
  CellGeometry out;
  out.v_g = v_g;
  out.V = constants.mu_p * constants.mu_p * constants.omega_p /
          (2.0 * constants.hbar * constants.epsilon0 * g * g);
  out.L = v_g * t_int / params.gamma_si;
  out.d = 2.0 * std::sqrt(out.V / (kPi * out.L));
  out.density = params.n_atoms / out.V;
  return out;
}

}  // namespace eitgate
