#include "eitgate/ladder.hpp"

#include <cmath>
#include <sstream>

namespace eitgate {

void LadderParams::validate() const {
  for (double v : {n_atoms, g_p, g_t, delta_p, delta_t, gamma21, gamma32}) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParameter, "non-finite ladder parameter");
    }
  }
  if (n_atoms < 1.0) {
    throw Error(ErrorCode::InvalidParameter, "n_atoms must be >= 1");
  }
  if (gamma21 < 0.0 || gamma32 < 0.0) {
    throw Error(ErrorCode::InvalidParameter, "rates must be non-negative");
  }
  if (n_max < 2) {
    throw Error(ErrorCode::InvalidParameter, "n_max must be >= 2");
  }
}

std::vector<LadderState> ladder_basis(int n_max) {
  std::vector<LadderState> out;
  for (int a : {kG2, kE1, kE3})
    for (int p = 0; p <= n_max; ++p)
      for (int t = 0; t <= n_max; ++t) out.push_back({a, p, t});
  return out;
}

std::size_t ladder_index(int n_max, const LadderState& s) {
  if (s.atom < 0 || s.atom > 2 || s.n_p < 0 || s.n_p > n_max || s.n_t < 0 ||
      s.n_t > n_max) {
    throw Error(ErrorCode::Domain, "ladder state outside the truncated basis");
  }
  const int m = n_max + 1;
  return static_cast<std::size_t>((s.atom * m + s.n_p) * m + s.n_t);
}

GateModel build_ladder_model(const LadderParams& params) {
  params.validate();
  const int nm = params.n_max;
  const auto basis = ladder_basis(nm);
  const auto n = static_cast<Eigen::Index>(basis.size());
  GateModel model;
  model.hamiltonian = Matrix::Zero(n, n);
  Matrix& h = model.hamiltonian;
  const char* atom_names[] = {"G2", "E1", "E3"};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = basis[i];
    h(i, i) = s.atom == kE1 ? -params.delta_p
              : s.atom == kE3 ? -params.delta_t
                              : 0.0;
    model.labels.push_back({s.atom, {s.n_p, s.n_t}});
    model.names.push_back(std::string(atom_names[s.atom]) + "_" +
                          std::to_string(s.n_p) + std::to_string(s.n_t));
  }
  auto couple = [&](LadderState a, LadderState b, double v) {
    if (a.n_p > nm || a.n_t > nm || b.n_p > nm || b.n_t > nm) return;
    const auto i = static_cast<Eigen::Index>(ladder_index(nm, a));
    const auto j = static_cast<Eigen::Index>(ladder_index(nm, b));
    h(i, j) += v;
    h(j, i) += v;
  };
  const double gp = params.g_p * std::sqrt(params.n_atoms);
  const double gt = params.g_t * std::sqrt(params.n_atoms);
  for (int p = 0; p <= nm; ++p) {
    for (int t = 0; t <= nm; ++t) {
      couple({kG2, p, t}, {kE1, p + 1, t}, gp * std::sqrt(p + 1.0));
      if (params.convention == LadderConvention::AsPrinted) {
        couple({kG2, p, t}, {kE3, p, t + 1}, gt * std::sqrt(t + 1.0));
      } else {
        couple({kG2, p, t + 1}, {kE3, p, t}, gt * std::sqrt(t + 1.0));
      }
    }
  }
  auto unit_map = [&](int from, int to) {
    Matrix op = Matrix::Zero(n, n);
    for (int p = 0; p <= nm; ++p)
      for (int t = 0; t <= nm; ++t)
        op(static_cast<Eigen::Index>(ladder_index(nm, {to, p, t})),
           static_cast<Eigen::Index>(ladder_index(nm, {from, p, t}))) = 1.0;
    return op;
  };
  if (params.gamma21 > 0.0) {
    model.channels.push_back(
        {params.gamma21, unit_map(kG2, kE1), ChannelKind::Decay});
  }
  if (params.gamma32 > 0.0) {
    model.channels.push_back(
        {params.gamma32, unit_map(kE3, kG2), ChannelKind::Decay});
  }
  return model;
}

LadderResult ladder_metrics(const LadderParams& params,
                            std::span<const double> times,
                            const GateSettings& settings) {
  const GateModel model = build_ladder_model(params);
  LadderResult out;
  out.gate = analyze_gate(model, times, settings);
  std::vector<bool> edge(model.labels.size());
  for (std::size_t i = 0; i < edge.size(); ++i) {
    edge[i] = model.labels[i].field.n_p == params.n_max ||
              model.labels[i].field.n_t == params.n_max;
  }
  auto scan = [&](const std::vector<RealVector>& series) {
    for (std::size_t k = 0; k < series.size(); ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < edge.size(); ++i)
        if (edge[i]) sum += series[k](static_cast<Eigen::Index>(i));
      if (sum > out.max_edge_population) out.max_edge_population = sum;
      if (sum > 1e-3) {
        std::ostringstream msg;
        msg << "population " << sum << " at the photon cutoff n_max="
            << params.n_max << " at t=" << times[k];
        throw Error(ErrorCode::TruncationLeakage, msg.str());
      }
    }
  };
  scan(out.gate.metrics.populations);
  for (const auto& b : out.gate.basis_populations) scan(b);
  return out;
}

}  // namespace eitgate
