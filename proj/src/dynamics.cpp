#include "eitgate/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace eitgate {

namespace {

void check_times(std::span<const double> times) {
  double prev = 0.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < prev) {
      throw Error(ErrorCode::Domain,
                  "output times must be finite, non-negative and sorted");
    }
    prev = t;
  }
}

void check_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::Dimension, std::string(what) + " must be square");
  }
}

std::vector<Matrix> propagate_exponential(const Matrix& l, const Matrix& x0,
                                          std::span<const double> times) {
  std::vector<Matrix> out;
  out.reserve(times.size());
  Matrix x = x0;
  Matrix step;
  double step_dt = -1.0;
  double t = 0.0;
  for (double target : times) {
    const double dt = target - t;
    if (dt > 0.0) {
      if (std::abs(dt - step_dt) > 1e-12 * std::max(1.0, dt)) {
        step = (l * dt).exp();
        step_dt = dt;
      }
      x = step * x;
    }
    t = target;
    out.push_back(x);
  }
  return out;
}

// Dormand-Prince 5(4) with FSAL and a standard I-controller.
class DormandPrince {
 public:
  DormandPrince(const Matrix& l, const IntegratorSettings& s) : l_(l), s_(s) {}

  std::vector<Matrix> run(const Matrix& x0, std::span<const double> times) {
    std::vector<Matrix> out;
    out.reserve(times.size());
    Matrix y = x0;
    Matrix k1 = l_ * y;
    double t = 0.0;
    double h = s_.max_step;
    for (double target : times) {
      while (t < target) {
        const double remaining = target - t;
        if (remaining <= 1e-14 * std::max(1.0, std::abs(target))) {
          t = target;
          break;
        }
        const double h_saved = h;
        bool last = false;
        if (h >= 0.999 * remaining) {
          h = remaining;
          last = true;
        }
        if (h < 1e-13 * std::max(1.0, std::abs(t))) {
          std::ostringstream msg;
          msg << "step size underflow at t=" << t;
          throw Error(ErrorCode::Integrator, msg.str());
        }
        Matrix y_new, k7;
        const double err = attempt(y, k1, h, y_new, k7);
        if (!std::isfinite(err)) {
          std::ostringstream msg;
          msg << "non-finite state at t=" << t;
          throw Error(ErrorCode::Integrator, msg.str());
        }
        if (err <= 1.0) {
          t = last ? target : t + h;
          y = std::move(y_new);
          k1 = std::move(k7);
        }
        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::min(h * factor, s_.max_step);
        if (last && err <= 1.0) h = std::max(h, h_saved);
      }
      out.push_back(y);
    }
    return out;
  }

 private:
  double attempt(const Matrix& y, const Matrix& k1, double h, Matrix& y_new,
                 Matrix& k7) const {
    const Matrix k2 = l_ * (y + h * (1.0 / 5) * k1);
    const Matrix k3 = l_ * (y + h * ((3.0 / 40) * k1 + (9.0 / 40) * k2));
    const Matrix k4 = l_ * (y + h * ((44.0 / 45) * k1 - (56.0 / 15) * k2 +
                                     (32.0 / 9) * k3));
    const Matrix k5 =
        l_ * (y + h * ((19372.0 / 6561) * k1 - (25360.0 / 2187) * k2 +
                       (64448.0 / 6561) * k3 - (212.0 / 729) * k4));
    const Matrix k6 =
        l_ * (y + h * ((9017.0 / 3168) * k1 - (355.0 / 33) * k2 +
                       (46732.0 / 5247) * k3 + (49.0 / 176) * k4 -
                       (5103.0 / 18656) * k5));
    y_new = y + h * ((35.0 / 384) * k1 + (500.0 / 1113) * k3 +
                     (125.0 / 192) * k4 - (2187.0 / 6784) * k5 +
                     (11.0 / 84) * k6);
    k7 = l_ * y_new;
    const Matrix e =
        h * ((71.0 / 57600) * k1 - (71.0 / 16695) * k3 + (71.0 / 1920) * k4 -
             (17253.0 / 339200) * k5 + (22.0 / 525) * k6 - (1.0 / 40) * k7);
    double err = 0.0;
    for (Eigen::Index c = 0; c < e.cols(); ++c) {
      for (Eigen::Index r = 0; r < e.rows(); ++r) {
        const double scale =
            s_.abs_tol +
            s_.rel_tol * std::max(std::abs(y(r, c)), std::abs(y_new(r, c)));
        const double ratio = std::abs(e(r, c)) / scale;
        if (!(ratio <= err)) err = ratio;
      }
    }
    return err;
  }

  const Matrix& l_;
  IntegratorSettings s_;
};

EvolutionResult collect(const std::vector<Matrix>& columns,
                        std::span<const double> times, Eigen::Index n) {
  EvolutionResult result;
  result.times.assign(times.begin(), times.end());
  for (const auto& c : columns) {
    Matrix rho = unvec(c.col(0), n);
    result.trace.push_back(rho.trace().real());
    result.states.push_back(std::move(rho));
  }
  return result;
}

}  // namespace

void IntegratorSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_step > 0.0)) {
    throw Error(ErrorCode::InvalidParameter,
                "integrator tolerances and max_step must be positive");
  }
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Eigen::Ref<const Vector>& v, Eigen::Index n) {
  if (v.size() != n * n) {
    throw Error(ErrorCode::Dimension, "vector length is not n^2");
  }
  Matrix m(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) m(r, c) = v(r + n * c);
  return m;
}

Matrix build_nojump_generator(const Matrix& hamiltonian,
                              std::span<const JumpChannel> channels,
                              DephasingMode mode) {
  Matrix l = build_liouvillian(hamiltonian, channels);
  const Eigen::Index n = hamiltonian.rows();
  for (const auto& ch : channels) {
    if (ch.kind == ChannelKind::Dephasing && mode == DephasingMode::Lindblad) {
      continue;
    }
    // remove the recycling term rate * J rho J^dag
    const Matrix& j = ch.op;
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index k = 0; k < n; ++k) {
          if (j(r, k) == Complex(0.0)) continue;
          for (Eigen::Index m = 0; m < n; ++m) {
            if (j(c, m) == Complex(0.0)) continue;
            l(r + n * c, k + n * m) -= ch.rate * j(r, k) * std::conj(j(c, m));
          }
        }
  }
  return l;
}

std::vector<Matrix> propagate(const Matrix& generator, const Matrix& initial,
                              std::span<const double> times,
                              const IntegratorSettings& settings) {
  settings.validate();
  check_square(generator, "generator");
  if (initial.rows() != generator.rows()) {
    throw Error(ErrorCode::Dimension, "initial state size does not match L");
  }
  check_times(times);
  if (settings.method == IntegrationMethod::Exponential) {
    return propagate_exponential(generator, initial, times);
  }
  return DormandPrince(generator, settings).run(initial, times);
}

EvolutionResult evolve_master(const Matrix& generator, const Matrix& rho0,
                              std::span<const double> times,
                              const IntegratorSettings& settings) {
  check_square(rho0, "rho0");
  if (rho0.rows() * rho0.rows() != generator.rows()) {
    throw Error(ErrorCode::Dimension, "rho0 does not match the generator");
  }
  return collect(propagate(generator, vec(rho0), times, settings), times,
                 rho0.rows());
}

EvolutionResult evolve_nojump(const Matrix& hamiltonian,
                              std::span<const JumpChannel> channels,
                              const Matrix& rho0,
                              std::span<const double> times,
                              const IntegratorSettings& settings,
                              DephasingMode mode) {
  return evolve_master(build_nojump_generator(hamiltonian, channels, mode),
                       rho0, times, settings);
}

Eigen::Index kernel_dimension(const Matrix& generator, double tol) {
  check_square(generator, "generator");
  Eigen::BDCSVD<Matrix> svd(generator);
  const auto& s = svd.singularValues();
  const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) <= cut) ++k;
  return k;
}

Matrix steady_state(const Matrix& generator) {
  check_square(generator, "generator");
  const auto n = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(generator.rows()))));
  if (n * n != generator.rows()) {
    throw Error(ErrorCode::Dimension, "generator size is not a square");
  }
  const Eigen::Index kdim = kernel_dimension(generator);
  if (kdim != 1) {
    std::ostringstream msg;
    msg << "kernel dimension " << kdim << " (expected 1)";
    throw Error(ErrorCode::DegenerateSteadyState, msg.str());
  }
  const Eigen::Index n2 = n * n;
  Matrix a(n2 + 1, n2);
  a.topRows(n2) = generator;
  a.row(n2).setZero();
  for (Eigen::Index i = 0; i < n; ++i) a(n2, i + n * i) = 1.0;
  Vector b = Vector::Zero(n2 + 1);
  b(n2) = 1.0;
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector x = svd.solve(b);
  Matrix rho = unvec(x, n);
  rho = (rho + rho.adjoint()) / 2.0;
  return rho / rho.trace();
}

std::vector<std::size_t> reachable_states(
    const Matrix& hamiltonian, std::span<const JumpChannel> channels,
    std::span<const std::size_t> seeds) {
  check_square(hamiltonian, "Hamiltonian");
  const Eigen::Index n = hamiltonian.rows();
  Eigen::MatrixXd adj = hamiltonian.cwiseAbs();
  for (const auto& ch : channels) {
    if (ch.rate == 0.0) continue;
    adj += ch.op.cwiseAbs();
    adj += (ch.op.adjoint() * ch.op).cwiseAbs();
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<Eigen::Index> queue;
  for (auto s : seeds) {
    if (static_cast<Eigen::Index>(s) >= n) {
      throw Error(ErrorCode::Domain, "seed index out of range");
    }
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(static_cast<Eigen::Index>(s));
    }
  }
  while (!queue.empty()) {
    const Eigen::Index i = queue.front();
    queue.pop_front();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (adj(j, i) != 0.0 && !seen[j]) {
        seen[j] = true;
        queue.push_back(j);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

std::vector<JumpChannel> restrict_channels(
    std::span<const JumpChannel> channels,
    std::span<const std::size_t> indices) {
  std::vector<JumpChannel> out;
  out.reserve(channels.size());
  for (const auto& ch : channels) {
    out.push_back({ch.rate, submatrix(ch.op, indices), ch.kind});
  }
  return out;
}

std::vector<double> uniform_grid(double t_max, std::size_t n) {
  if (n < 2 || !(t_max > 0.0) || !std::isfinite(t_max)) {
    throw Error(ErrorCode::InvalidParameter,
                "time grid needs t_max > 0 and at least two samples");
  }
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = t_max * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return t;
}

}  // namespace eitgate
