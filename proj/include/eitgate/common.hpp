#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace eitgate {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Machine-parsable failure categories. The CLI prints the code name as the
// first token of its one-line error message.
enum class ErrorCode {
  Domain,
  Dimension,
  InvalidParameter,
  Integrator,
  DegenerateSteadyState,
  UndefinedPhase,
  GridTooCoarse,
  SingularParameters,
  DegenerateOverlap,
  TruncationLeakage,
  TooManySkipped,
  MalformedFringe,
  Config,
  Io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eitgate
