#pragma once

#include <cstddef>

#include "eitgate/common.hpp"
#include "eitgate/mscheme.hpp"

namespace eitgate {

enum class CpsMethod { Perturbative, Eigenvalue };

struct CpsEstimate {
  double phi = 0.0;
  CpsMethod method = CpsMethod::Perturbative;
  double t_int = 0.0;
};

// Fourth-order closed form. Throws SingularParameters when either
// eps*delta - Omega^2 denominator is within 1e-12 of zero.
CpsEstimate cps_perturbative(const MSchemeParams& params, double t_int);

// Eigenvalue of Hermitian H whose eigenvector overlaps most with the bare
// basis vector. Throws DegenerateOverlap on ties.
double dark_eigenvalue(const Matrix& h, std::size_t bare_index);

// (lambda_pt - lambda_p - lambda_t) * t_int. This is the energy shift; the
// dynamical phase from exp(-iHt) carries the opposite sign.
CpsEstimate cps_eigenvalue(const MSchemeParams& params, double t_int);

}  // namespace eitgate
