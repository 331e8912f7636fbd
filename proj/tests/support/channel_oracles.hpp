#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "eitgate/observables.hpp"

namespace eitgate::testing {

// Channel from Kraus operators: J(i*4+a, j*4+b) = sum_K K(a,i) conj(K(b,j)).
inline QubitChannel from_kraus(const std::vector<Matrix>& kraus) {
  QubitChannel ch;
  for (const auto& k : kraus) {
    Vector w(16);
    for (int i = 0; i < 4; ++i)
      for (int a = 0; a < 4; ++a) w(i * 4 + a) = k(a, i);
    ch.choi += w * w.adjoint();
  }
  return ch;
}

// Random trace-non-increasing map with three Kraus operators.
inline QubitChannel random_channel(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Matrix> kraus(3, Matrix(4, 4));
  Matrix sum = Matrix::Zero(4, 4);
  for (auto& k : kraus) {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) k(r, c) = Complex(n(rng), n(rng));
    sum += k.adjoint() * k;
  }
  const double top =
      Eigen::SelfAdjointEigenSolver<Matrix>(sum).eigenvalues().maxCoeff();
  for (auto& k : kraus) k /= std::sqrt(top);
  return from_kraus(kraus);
}

// Independent estimate: apply the channel to sampled pure states.
inline double direct_haar_average(const QubitChannel& ch,
                                  const std::array<double, 3>& phases,
                                  int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Vector u(4);
  u << 1.0, std::polar(1.0, phases[0]), std::polar(1.0, phases[1]),
      std::polar(1.0, phases[2]);
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector psi(4);
    for (int k = 0; k < 4; ++k) psi(k) = Complex(n(rng), n(rng));
    psi.normalize();
    const Vector target = u.cwiseProduct(psi);
    const Matrix out = ch.apply(psi * psi.adjoint());
    sum += (target.adjoint() * out * target)(0, 0).real();
  }
  return sum / samples;
}

}  // namespace eitgate::testing
