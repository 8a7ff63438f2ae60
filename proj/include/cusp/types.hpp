#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace cusp {

using Scalar = double;

template <typename T, int Rows, int Cols>
using Matrix = Eigen::Matrix<T, Rows, Cols>;

template <typename T>
using DynamicMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
using DynamicVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using MatrixX = DynamicMatrix<Scalar>;
using VectorX = DynamicVector<Scalar>;
using Vector2 = Matrix<Scalar, 2, 1>;

/// Machine-readable failure categories. The CLI maps these onto exit codes.
enum class ErrorCode {
  Domain,            // argument outside the documented range
  Validation,        // malformed configuration or input file
  WidthCondition,    // ||f gamma||_inf >= 1 (or ||f kappa_1||_inf >= 1)
  TwistCondition,    // rho ||f theta'||_inf >= 1
  Singularity,       // metric factor vanishes
  Divergence,        // integrand support does not terminate
  FrameCoverage,     // Tang frame does not cover the requested s
  TableCoverage,     // transverse eigenvalue table too small
  NonConvergence,    // quadrature / ODE / eigensolver failure
  SelfIntersection,  // tube overlaps itself
};

const char* to_string(ErrorCode code) noexcept;

/// Numerical-library exception carrying an ErrorCode.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cusp
