#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace pathglm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Coefficient vectors have length p+1 with index 0 holding the (unpenalized)
// intercept and index j >= 1 holding the coefficient of predictor column j-1.
using Coefficients = Eigen::VectorXd;

enum class Family { Logistic, Poisson };

// Error taxonomy. Everything the library throws derives from Error so callers
// can map failure classes to diagnostics.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed input file (bad cell, ragged row, missing column).
struct ParseError : Error {
  using Error::Error;
};
// Response value outside the family's domain, or unusable option combination.
struct DomainError : Error {
  using Error::Error;
};
// Response carries no signal the model can start from (constant logistic y,
// all-zero Poisson y); lambda_max is undefined.
struct DegenerateResponseError : Error {
  using Error::Error;
};
// A cross-validation training split hit a degenerate response.
struct FoldDegeneracyError : DegenerateResponseError {
  using DegenerateResponseError::DegenerateResponseError;
};
// Overflow / non-finite intermediate (e.g. exp(theta) for huge theta).
struct NumericalError : Error {
  using Error::Error;
};
// A weight underflowed to zero where a division by it is required.
struct ZeroWeightError : NumericalError {
  using NumericalError::NumericalError;
};
// The MCP coordinate update was asked for with curvature v <= 1/gamma.
struct DegenerateCurvatureError : Error {
  using Error::Error;
};
// A linear system in the predictor or Newton corrector is not solvable.
struct SingularSystemError : Error {
  using Error::Error;
};

struct Dataset {
  Matrix X;  // n x p raw predictors; the intercept column is implicit
  Vector y;  // length n
  Family family = Family::Logistic;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }

  // Enforces the invariants: n >= 1, p >= 1, finite entries, response in the
  // family domain ({0,1} for logistic; non-negative integers for Poisson).
  void validate() const;
};

inline double sgn(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

}  // namespace pathglm
