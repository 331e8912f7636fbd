#include "eitgate/perturbative.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace eitgate {

CpsEstimate cps_perturbative(const MSchemeParams& params, double t_int) {
  params.validate();
  const double d12 = params.eps12 * params.delta2 - params.omega1 * params.omega1;
  const double d34 = params.eps34 * params.delta3 - params.omega4 * params.omega4;
  if (std::abs(d12) < 1e-12 || std::abs(d34) < 1e-12) {
    throw Error(ErrorCode::SingularParameters,
                "eps*delta - Omega^2 vanishes in a denominator");
  }
  const double gp2 = std::pow(params.gp_collective(), 2);
  const double gt2 = std::pow(params.gt_collective(), 2);
  const double bracket =
      params.eps34 * (params.eps12 * params.eps12 +
                      params.omega1 * params.omega1) / d12 +
      params.eps12 * (params.eps34 * params.eps34 +
                      params.omega4 * params.omega4) / d34;
  return {gp2 * gt2 * t_int / (d34 * d12) * bracket, CpsMethod::Perturbative,
          t_int};
}

double dark_eigenvalue(const Matrix& h, std::size_t bare_index) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorCode::Dimension, "Hamiltonian must be square");
  }
  if (static_cast<Eigen::Index>(bare_index) >= h.rows()) {
    throw Error(ErrorCode::Domain, "bare index out of range");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::DegenerateOverlap, "eigendecomposition failed");
  }
  const auto row = es.eigenvectors().row(static_cast<Eigen::Index>(bare_index));
  Eigen::Index best = 0;
  double best_overlap = -1.0;
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    if (std::abs(row(k)) > best_overlap) {
      best_overlap = std::abs(row(k));
      best = k;
    }
  }
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    if (k != best && std::abs(std::abs(row(k)) - best_overlap) <= 1e-12) {
      std::ostringstream msg;
      msg << "eigenvectors " << best << " and " << k
          << " overlap equally with bare state " << bare_index;
      throw Error(ErrorCode::DegenerateOverlap, msg.str());
    }
  }
  return es.eigenvalues()(best);
}

CpsEstimate cps_eigenvalue(const MSchemeParams& params, double t_int) {
  const auto r = reduced_hamiltonians(params);
  const double lp = dark_eigenvalue(r.probe, 0);
  const double lt = dark_eigenvalue(r.trigger, 0);
  const double lpt = dark_eigenvalue(r.both, 2);
  return {(lpt - lp - lt) * t_int, CpsMethod::Eigenvalue, t_int};
}

}  // namespace eitgate
