#include "eitgate/observables.hpp"

#include <cmath>
#include <sstream>

namespace eitgate {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1], keyed by (seed, counter).
double uniform01(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ counter);
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

Eigen::Vector4cd ideal_phases(const std::array<double, 3>& phases) {
  Eigen::Vector4cd u;
  u << 1.0, std::polar(1.0, phases[0]), std::polar(1.0, phases[1]),
      std::polar(1.0, phases[2]);
  return u;
}

struct Prepared {
  std::vector<std::size_t> keep;  // restricted -> model index
  Eigen::Index n = 0;
  Matrix initial;  // n^2 x 16
  struct Pair {
    Eigen::Index vec_index;
    int fi;
    int fj;
  };
  std::vector<Pair> qubit_pairs;
  std::array<Eigen::Index, 4> qubit_pos{};
  Matrix hamiltonian;
  std::vector<JumpChannel> channels;
};

Prepared prepare(const GateModel& model) {
  const auto n_full = static_cast<std::size_t>(model.hamiltonian.rows());
  if (model.labels.size() != n_full) {
    throw Error(ErrorCode::Dimension, "label count does not match H");
  }
  const FieldState qubit[4] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  std::array<std::size_t, 4> seeds{};
  for (int q = 0; q < 4; ++q) {
    bool found = false;
    for (std::size_t i = 0; i < n_full; ++i) {
      if (model.labels[i].atom == 0 && model.labels[i].field == qubit[q]) {
        seeds[q] = i;
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::Domain, "model lacks a ground qubit-block state");
    }
  }
  Prepared p;
  p.keep = reachable_states(model.hamiltonian, model.channels, seeds);
  p.n = static_cast<Eigen::Index>(p.keep.size());
  p.hamiltonian = submatrix(model.hamiltonian, p.keep);
  p.channels = restrict_channels(model.channels, p.keep);
  std::vector<int> field_of(p.keep.size(), -1);
  for (std::size_t r = 0; r < p.keep.size(); ++r) {
    for (int q = 0; q < 4; ++q) {
      if (model.labels[p.keep[r]].field == qubit[q]) field_of[r] = q;
    }
    for (int q = 0; q < 4; ++q) {
      if (p.keep[r] == seeds[q]) p.qubit_pos[q] = static_cast<Eigen::Index>(r);
    }
  }
  for (Eigen::Index c = 0; c < p.n; ++c) {
    for (Eigen::Index r = 0; r < p.n; ++r) {
      if (field_of[r] < 0 || field_of[c] < 0) continue;
      if (model.labels[p.keep[r]].atom != model.labels[p.keep[c]].atom) continue;
      p.qubit_pairs.push_back({r + p.n * c, field_of[r], field_of[c]});
    }
  }
  p.initial = Matrix::Zero(p.n * p.n, 16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      p.initial(p.qubit_pos[a] + p.n * p.qubit_pos[b], a * 4 + b) = 1.0;
  return p;
}

QubitChannel channel_from_columns(const Prepared& p, const Matrix& x) {
  QubitChannel ch;
  ch.choi.setZero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (const auto& pr : p.qubit_pairs)
        ch.choi(a * 4 + pr.fi, b * 4 + pr.fj) += x(pr.vec_index, a * 4 + b);
  ch.choi = (ch.choi + ch.choi.adjoint()) / 2.0;
  return ch;
}

double wrap_to_pi(double x) { return std::remainder(x, 2.0 * kPi); }

}  // namespace

QubitChannel QubitChannel::identity() {
  QubitChannel ch;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ch.choi(i * 4 + i, j * 4 + j) = 1.0;
  return ch;
}

QubitChannel QubitChannel::from_blocks(
    const std::array<std::array<Matrix, 4>, 4>& blocks) {
  QubitChannel ch;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (blocks[i][j].rows() != 4 || blocks[i][j].cols() != 4) {
        throw Error(ErrorCode::Dimension, "channel blocks must be 4x4");
      }
      ch.choi.block(4 * i, 4 * j, 4, 4) = blocks[i][j];
    }
  ch.choi = (ch.choi + ch.choi.adjoint()) / 2.0;
  return ch;
}

Matrix QubitChannel::block(int i, int j) const {
  return choi.block(4 * i, 4 * j, 4, 4);
}

Matrix QubitChannel::apply(const Matrix& rho) const {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw Error(ErrorCode::Dimension, "qubit-block input must be 4x4");
  }
  Matrix out = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out += rho(i, j) * block(i, j);
  return out;
}

Matrix QubitChannel::output_trace() const {
  Matrix t(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t(i, j) = block(i, j).trace();
  return t;
}

Matrix reduce_to_fields(const Matrix& rho, std::span<const StateLabel> labels,
                        std::span<const FieldState> fields) {
  const auto n = static_cast<std::size_t>(rho.rows());
  if (rho.cols() != rho.rows() || labels.size() != n) {
    throw Error(ErrorCode::Dimension, "state does not match the label set");
  }
  std::vector<int> f(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (auto k = find_field({fields.begin(), fields.end()}, labels[i].field)) {
      f[i] = static_cast<int>(*k);
    }
  }
  const auto m = static_cast<Eigen::Index>(fields.size());
  Matrix out = Matrix::Zero(m, m);
  for (std::size_t c = 0; c < n; ++c) {
    if (f[c] < 0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      if (f[r] < 0 || labels[r].atom != labels[c].atom) continue;
      out(f[r], f[c]) += rho(static_cast<Eigen::Index>(r),
                             static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

Matrix reduce_to_fields(const Matrix& rho) {
  static const auto labels = m_basis_labels();
  return reduce_to_fields(rho, labels, field_basis());
}

PhaseTrajectory extract_phases(std::span<const double> times,
                               std::span<const Matrix> field_states,
                               const Amplitudes& amplitudes) {
  if (times.size() != field_states.size()) {
    throw Error(ErrorCode::Dimension, "times and field states differ in length");
  }
  for (const auto& c : amplitudes) {
    if (std::abs(c) == 0.0) {
      throw Error(ErrorCode::InvalidParameter,
                  "phase extraction needs all input amplitudes nonzero");
    }
  }
  PhaseTrajectory out;
  out.times.assign(times.begin(), times.end());
  std::array<std::vector<double>*, 3> series{&out.phi01, &out.phi10,
                                             &out.phi11};
  for (int s = 0; s < 3; ++s) {
    const double offset = std::arg(amplitudes[s + 1] * std::conj(amplitudes[0]));
    auto& phi = *series[s];
    phi.reserve(times.size());
    double prev_step = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const Matrix& f = field_states[k];
      if (f.rows() < 4 || f.cols() < 4) {
        throw Error(ErrorCode::Dimension, "field state lacks the qubit block");
      }
      const Complex z = f(s + 1, 0);
      if (std::abs(z) < 1e-12) {
        std::ostringstream msg;
        msg << "anchor coherence vanishes at t=" << times[k];
        throw Error(ErrorCode::UndefinedPhase, msg.str());
      }
      const double raw = std::arg(z) - offset;
      if (k == 0) {
        phi.push_back(wrap_to_pi(raw));
        continue;
      }
      const double step = wrap_to_pi(raw - phi.back());
      if (k >= 2 && std::abs(step - prev_step) >= kPi) {
        std::ostringstream msg;
        msg << "phase step changes by more than pi near t=" << times[k];
        throw Error(ErrorCode::GridTooCoarse, msg.str());
      }
      prev_step = step;
      phi.push_back(phi.back() + step);
    }
  }
  out.cps.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    out.cps[k] = out.phi11[k] - out.phi10[k] - out.phi01[k];
  }
  return out;
}

double haar_average(const QubitChannel& channel,
                    const std::array<double, 3>& phases) {
  const Eigen::Vector4cd u = ideal_phases(phases);
  Complex overlap = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      overlap += std::conj(u(i)) * channel.choi(i * 4 + i, j * 4 + j) * u(j);
  const double d = 4.0;
  return (overlap.real() + channel.output_trace().trace().real()) /
         (d * (d + 1.0));
}

double average_fidelity(const QubitChannel& channel,
                        const std::array<double, 3>& phases) {
  return std::sqrt(std::max(0.0, haar_average(channel, phases)));
}

std::vector<Eigen::Vector4cd> haar_states(std::size_t samples,
                                          std::uint64_t seed) {
  std::vector<Eigen::Vector4cd> out(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    Eigen::Vector4cd v;
    for (int k = 0; k < 4; ++k) {
      const std::uint64_t base = 8 * static_cast<std::uint64_t>(s) + 2 * k;
      const double u1 = uniform01(seed, base);
      const double u2 = uniform01(seed, base + 1);
      const double r = std::sqrt(-2.0 * std::log(u1));
      v(k) = Complex(r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2));
    }
    out[s] = v / v.norm();
  }
  return out;
}

McEstimate haar_average_mc(const QubitChannel& channel,
                           const std::array<double, 3>& phases,
                           std::size_t samples, std::uint64_t seed) {
  if (samples < 2) {
    throw Error(ErrorCode::InvalidParameter, "need at least two samples");
  }
  const Eigen::Vector4cd u = ideal_phases(phases);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& psi : haar_states(samples, seed)) {
    Eigen::VectorXcd z(16);
    for (int i = 0; i < 4; ++i)
      for (int a = 0; a < 4; ++a) z(i * 4 + a) = std::conj(psi(i)) * u(a) * psi(a);
    const double f = (z.adjoint() * channel.choi * z)(0, 0).real();
    sum += f;
    sum2 += f * f;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum2 / n - mean * mean) * n / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

ConditionalResult conditional_fidelity(
    const QubitChannel& nojump_channel, const std::array<double, 3>& phases,
    std::span<const Eigen::Vector4cd> states) {
  if (states.empty()) {
    throw Error(ErrorCode::InvalidParameter, "need at least one sample");
  }
  const Eigen::Vector4cd u = ideal_phases(phases);
  const Matrix t = nojump_channel.output_trace();
  ConditionalResult res;
  double sum_f = 0.0, sum_p = 0.0;
  std::size_t used = 0;
  Eigen::VectorXcd z(16);
  for (const auto& psi : states) {
    const Eigen::Vector4cd v = psi.conjugate();
    const double p = (v.adjoint() * t * v)(0, 0).real();
    sum_p += p;
    if (p < 1e-12) {
      ++res.skipped;
      continue;
    }
    for (int i = 0; i < 4; ++i)
      for (int a = 0; a < 4; ++a) z(i * 4 + a) = v(i) * u(a) * psi(a);
    sum_f += (z.adjoint() * nojump_channel.choi * z)(0, 0).real() / p;
    ++used;
  }
  if (static_cast<double>(res.skipped) >
      0.01 * static_cast<double>(states.size())) {
    std::ostringstream msg;
    msg << res.skipped << " of " << states.size()
        << " samples had vanishing success probability";
    throw Error(ErrorCode::TooManySkipped, msg.str());
  }
  res.cond_fidelity =
      used ? std::sqrt(std::max(0.0, sum_f / static_cast<double>(used))) : 0.0;
  res.p_success = sum_p / static_cast<double>(states.size());
  for (int i = 0; i < 4; ++i) res.p_basis[i] = t(i, i).real();
  return res;
}

ConditionalResult conditional_fidelity(const QubitChannel& nojump_channel,
                                       const std::array<double, 3>& phases,
                                       std::size_t samples,
                                       std::uint64_t seed) {
  const auto states = haar_states(samples, seed);
  return conditional_fidelity(nojump_channel, phases, states);
}

GateModel m_scheme_model(const MSchemeParams& params) {
  GateModel m;
  m.hamiltonian = build_hamiltonian(params);
  m.channels = build_jump_channels(params);
  m.labels = m_basis_labels();
  for (const auto& s : enumerate_m_basis()) {
    m.names.push_back(to_string(s.atom) + "_" + std::to_string(s.n_p) +
                      std::to_string(s.n_t));
  }
  return m;
}

GateResult analyze_gate(const GateModel& model, std::span<const double> times,
                        const GateSettings& settings) {
  const Prepared p = prepare(model);
  const Matrix l_full = build_liouvillian(p.hamiltonian, p.channels);
  const Matrix l_nj = build_nojump_generator(p.hamiltonian, p.channels,
                                             settings.dephasing_mode);
  const auto x_full = propagate(l_full, p.initial, times, settings.integrator);
  const auto x_nj = propagate(l_nj, p.initial, times, settings.integrator);
  const auto states = haar_states(settings.mc_samples, settings.seed);
  const Amplitudes& c = settings.amplitudes;
  const auto n_model = static_cast<Eigen::Index>(model.labels.size());

  GateResult res;
  std::vector<Matrix> fields;
  fields.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    res.channels.push_back(channel_from_columns(p, x_full[k]));
    res.nojump_channels.push_back(channel_from_columns(p, x_nj[k]));
    const QubitChannel& ch = res.channels.back();
    Matrix rho_in(4, 4);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) rho_in(a, b) = c[a] * std::conj(c[b]);
    fields.push_back(ch.apply(rho_in));

    RealVector pop = RealVector::Zero(n_model);
    for (Eigen::Index r = 0; r < p.n; ++r) {
      Complex v = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          v += rho_in(a, b) * x_full[k](r + p.n * r, a * 4 + b);
      pop(static_cast<Eigen::Index>(p.keep[r])) = v.real();
    }
    res.metrics.populations.push_back(std::move(pop));
    for (int a = 0; a < 4; ++a) {
      RealVector bp = RealVector::Zero(n_model);
      for (Eigen::Index r = 0; r < p.n; ++r)
        bp(static_cast<Eigen::Index>(p.keep[r])) =
            x_full[k](r + p.n * r, a * 4 + a).real();
      res.basis_populations[a].push_back(std::move(bp));
    }
  }
  res.phases = extract_phases(times, fields, c);

  auto& m = res.metrics;
  m.times.assign(times.begin(), times.end());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto ph = phases_at(res.phases, k);
    m.fidelity.push_back(average_fidelity(res.channels[k], ph));
    const auto cond = conditional_fidelity(res.nojump_channels[k], ph, states);
    m.cond_fidelity.push_back(cond.cond_fidelity);
    m.p_success.push_back(cond.p_success);
    for (int i = 0; i < 4; ++i) m.p_basis[i].push_back(cond.p_basis[i]);
    const Matrix t = res.nojump_channels[k].output_trace();
    Complex pu = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) pu += c[a] * std::conj(c[b]) * t(a, b);
    m.p_uniform.push_back(pu.real());
  }
  return res;
}

QubitChannel reconstruct_channel(const GateModel& model, double t,
                                 bool conditional,
                                 const IntegratorSettings& settings,
                                 DephasingMode mode) {
  const Prepared p = prepare(model);
  const Matrix l =
      conditional ? build_nojump_generator(p.hamiltonian, p.channels, mode)
                  : build_liouvillian(p.hamiltonian, p.channels);
  const double times[] = {t};
  return channel_from_columns(p, propagate(l, p.initial, times, settings)[0]);
}

PiCrossing first_pi_crossing(const PhaseTrajectory& phases,
                             const GateMetrics& metrics) {
  PiCrossing out;
  const auto& cps = phases.cps;
  for (std::size_t k = 1; k < cps.size(); ++k) {
    const double a = std::abs(cps[k - 1]);
    const double b = std::abs(cps[k]);
    if (a < kPi && b >= kPi) {
      const double w = (kPi - a) / (b - a);
      auto lerp = [&](const std::vector<double>& v) {
        return v.empty() ? 0.0 : v[k - 1] + w * (v[k] - v[k - 1]);
      };
      out.found = true;
      out.time = lerp(phases.times);
      out.cps = lerp(cps);
      out.fidelity = lerp(metrics.fidelity);
      out.cond_fidelity = lerp(metrics.cond_fidelity);
      out.p_success = lerp(metrics.p_success);
      out.p_uniform = lerp(metrics.p_uniform);
      return out;
    }
  }
  return out;
}

PopulationSummary populations(const EvolutionResult& evolution,
                              std::span<const StateLabel> labels,
                              int n_atom_labels,
                              std::span<const FieldState> fields) {
  PopulationSummary out;
  const std::vector<FieldState> field_list(fields.begin(), fields.end());
  for (const auto& rho : evolution.states) {
    if (static_cast<std::size_t>(rho.rows()) != labels.size()) {
      throw Error(ErrorCode::Dimension, "state does not match the label set");
    }
    RealVector d = rho.diagonal().real();
    RealVector atom = RealVector::Zero(n_atom_labels);
    RealVector field = RealVector::Zero(static_cast<Eigen::Index>(fields.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (labels[i].atom >= 0 && labels[i].atom < n_atom_labels) {
        atom(labels[i].atom) += d(ii);
      }
      if (auto f = find_field(field_list, labels[i].field)) {
        field(static_cast<Eigen::Index>(*f)) += d(ii);
      }
    }
    out.by_state.push_back(std::move(d));
    out.by_atom.push_back(std::move(atom));
    out.by_field.push_back(std::move(field));
  }
  return out;
}

PopulationSummary populations(const EvolutionResult& evolution) {
  static const auto labels = m_basis_labels();
  return populations(evolution, labels, 5, field_basis());
}

std::array<double, 3> phases_at(const PhaseTrajectory& phases, std::size_t k) {
  return {phases.phi01.at(k), phases.phi10.at(k), phases.phi11.at(k)};
}

}  // namespace eitgate
