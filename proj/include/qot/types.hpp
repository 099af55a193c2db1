#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qot {

template <typename Scalar>
using HermitianT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using cplx = std::complex<double>;
using CMatrix = HermitianT<double>;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Dense Hermitian operator; every producer in this library symmetrizes.
using HermitianOperator = CMatrix;

inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-9;

enum class ErrorCode {
  NotSquare,
  TraceNotOne,
  NotPSD,
  DimensionMismatch,
  ConvergenceFailure,
  BadRank,
  NonPositiveWeight,
  AlphaOutOfRange,
  SizeOverflow,
  ScalarOperator,
  MaxIterations,
  NumericalBreakdown,
  InfeasibleMarginals,
  NotAMetricCost,
  MarginalMismatch,
  NotCommuting,
  InvalidInput,
  NoClosedForm,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qot
