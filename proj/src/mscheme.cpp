#include "eitgate/mscheme.hpp"

#include <cmath>
#include <sstream>

namespace eitgate {

namespace {

using L = CollectiveAtomLabel;

void couple(Matrix& h, const MBasisState& a, const MBasisState& b,
            double value) {
  auto i = m_basis_index(a);
  auto j = m_basis_index(b);
  // elements into excluded (doubly excited) states are dropped
  if (!i || !j) return;
  h(*i, *j) += value;
  h(*j, *i) += value;
}

Matrix unit_map(L from, L to) {
  Matrix op = Matrix::Zero(kMBasisSize, kMBasisSize);
  const auto& basis = enumerate_m_basis();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].atom != from) continue;
    if (auto dst = m_basis_index({to, basis[k].n_p, basis[k].n_t})) {
      op(*dst, k) = 1.0;
    }
  }
  return op;
}

Matrix projector(L label) {
  Matrix op = Matrix::Zero(kMBasisSize, kMBasisSize);
  const auto& basis = enumerate_m_basis();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].atom == label) op(k, k) = 1.0;
  }
  return op;
}

}  // namespace

double MSchemeParams::gp_collective() const { return g_p * std::sqrt(n_atoms); }
double MSchemeParams::gt_collective() const { return g_t * std::sqrt(n_atoms); }

void MSchemeParams::validate() const {
  const double values[] = {n_atoms, g_p,     g_t,     omega1,  omega4,
                           delta2,  delta3,  eps12,   eps34,   gamma21,
                           gamma23, gamma25, gamma41, gamma43, gamma45,
                           deph1,   deph2,   deph4,   deph5,   gamma_si};
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParameter, "non-finite scheme parameter");
    }
  }
  if (n_atoms < 1.0) {
    throw Error(ErrorCode::InvalidParameter, "n_atoms must be >= 1");
  }
  const double rates[] = {gamma21, gamma23, gamma25, gamma41, gamma43,
                          gamma45, deph1,   deph2,   deph4,   deph5};
  for (double r : rates) {
    if (r < 0.0) {
      throw Error(ErrorCode::InvalidParameter, "rates must be non-negative");
    }
  }
  if (gamma_si <= 0.0) {
    throw Error(ErrorCode::InvalidParameter, "gamma_si must be positive");
  }
}

Matrix build_hamiltonian(const MSchemeParams& params) {
  params.validate();
  Matrix h = Matrix::Zero(kMBasisSize, kMBasisSize);
  const auto& basis = enumerate_m_basis();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    switch (basis[k].atom) {
      case L::G: break;
      case L::E1: h(k, k) = params.eps12; break;
      case L::E2: h(k, k) = params.delta2; break;
      case L::E4: h(k, k) = params.delta3; break;
      case L::E5: h(k, k) = params.eps34; break;
    }
  }
  const double gp = params.gp_collective();
  const double gt = params.gt_collective();
  for (int np = 0; np <= 2; ++np) {
    for (int nt = 0; nt <= 2; ++nt) {
      couple(h, {L::E1, np, nt}, {L::E2, np, nt}, params.omega1);
      couple(h, {L::E4, np, nt}, {L::E5, np, nt}, params.omega4);
      couple(h, {L::G, np + 1, nt}, {L::E2, np, nt}, gp * std::sqrt(np + 1.0));
      couple(h, {L::G, np, nt + 1}, {L::E4, np, nt}, gt * std::sqrt(nt + 1.0));
    }
  }
  return h;
}

std::vector<JumpChannel> build_jump_channels(const MSchemeParams& params) {
  params.validate();
  struct Decay {
    double rate;
    L from;
    L to;
  };
  const Decay decays[] = {
      {params.gamma21, L::E2, L::E1}, {params.gamma23, L::E2, L::G},
      {params.gamma25, L::E2, L::E5}, {params.gamma41, L::E4, L::E1},
      {params.gamma43, L::E4, L::G},  {params.gamma45, L::E4, L::E5},
  };
  std::vector<JumpChannel> channels;
  for (const auto& d : decays) {
    if (d.rate > 0.0) {
      channels.push_back({d.rate, unit_map(d.from, d.to), ChannelKind::Decay});
    }
  }
  const std::pair<double, L> dephasing[] = {
      {params.deph1, L::E1},
      {params.deph2, L::E2},
      {params.deph4, L::E4},
      {params.deph5, L::E5},
  };
  for (const auto& [rate, label] : dephasing) {
    if (rate > 0.0) {
      channels.push_back({rate, projector(label), ChannelKind::Dephasing});
    }
  }
  return channels;
}

Matrix build_liouvillian(const Matrix& hamiltonian,
                         std::span<const JumpChannel> channels) {
  const Eigen::Index n = hamiltonian.rows();
  if (hamiltonian.cols() != n) {
    throw Error(ErrorCode::Dimension, "Hamiltonian must be square");
  }
  for (const auto& ch : channels) {
    if (ch.op.rows() != n || ch.op.cols() != n) {
      std::ostringstream msg;
      msg << "jump operator is " << ch.op.rows() << "x" << ch.op.cols()
          << ", expected " << n << "x" << n;
      throw Error(ErrorCode::Dimension, msg.str());
    }
  }
  const Eigen::Index n2 = n * n;
  Matrix l = Matrix::Zero(n2, n2);
  // vec(A X B) = (B^T kron A) vec(X); index of (r, c) is r + n c.
  auto add_left = [&](const Matrix& a, Complex s) {  // s * A X
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index k = 0; k < n; ++k)
          if (a(r, k) != Complex(0.0)) l(r + n * c, k + n * c) += s * a(r, k);
  };
  auto add_right = [&](const Matrix& b, Complex s) {  // s * X B
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index k = 0; k < n; ++k)
          if (b(k, c) != Complex(0.0)) l(r + n * c, r + n * k) += s * b(k, c);
  };
  add_left(hamiltonian, -kI);
  add_right(hamiltonian, kI);
  for (const auto& ch : channels) {
    if (ch.rate == 0.0) continue;
    const Matrix& j = ch.op;
    const Matrix jdj = j.adjoint() * j;
    // rate * J X J^dagger
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index k = 0; k < n; ++k) {
          if (j(r, k) == Complex(0.0)) continue;
          for (Eigen::Index m = 0; m < n; ++m) {
            if (j(c, m) == Complex(0.0)) continue;
            l(r + n * c, k + n * m) += ch.rate * j(r, k) * std::conj(j(c, m));
          }
        }
    add_left(jdj, -0.5 * ch.rate);
    add_right(jdj, -0.5 * ch.rate);
  }
  return l;
}

Matrix submatrix(const Matrix& m, std::span<const std::size_t> indices) {
  const auto k = static_cast<Eigen::Index>(indices.size());
  Matrix out(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      out(a, b) = m(static_cast<Eigen::Index>(indices[a]),
                    static_cast<Eigen::Index>(indices[b]));
  return out;
}

ReducedHamiltonians reduced_hamiltonians(const MSchemeParams& params) {
  const Matrix h = build_hamiltonian(params);
  return {submatrix(h, kProbeSector), submatrix(h, kTriggerSector),
          submatrix(h, kBothSector)};
}

Matrix excitation_number_operator() {
  Matrix n = Matrix::Zero(kMBasisSize, kMBasisSize);
  const auto& basis = enumerate_m_basis();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const int atom = basis[k].atom == L::G ? 0 : 1;
    n(k, k) = static_cast<double>(atom + basis[k].n_p + basis[k].n_t);
  }
  return n;
}

}  // namespace eitgate
