#include "pathglm/glm.hpp"

#include <cmath>

namespace pathglm {

namespace {

// log(1 + e^t) without overflow: max(t,0) + log1p(e^{-|t|}).
double log1pexp(double t) { return std::fmax(t, 0.0) + std::log1p(std::exp(-std::fabs(t))); }

double logistic_mean(double t) {
  // 1/(1+e^{-t}); stable in both tails.
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

[[noreturn]] void throw_overflow(const char* what) {
  throw NumericalError(std::string("numerical overflow in ") + what);
}

}  // namespace

void Dataset::validate() const {
  if (X.rows() < 1 || X.cols() < 1)
    throw std::invalid_argument("Dataset: need n >= 1 and p >= 1");
  if (y.size() != X.rows())
    throw std::invalid_argument("Dataset: y length must match X rows");
  if (!X.allFinite() || !y.allFinite())
    throw std::invalid_argument("Dataset: entries must be finite");
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (family == Family::Logistic) {
      if (y[i] != 0.0 && y[i] != 1.0)
        throw DomainError("logistic response must be 0 or 1 (observation " +
                          std::to_string(i + 1) + ")");
    } else {
      if (y[i] < 0.0 || std::floor(y[i]) != y[i])
        throw DomainError(
            "Poisson response must be a non-negative integer (observation " +
            std::to_string(i + 1) + ")");
    }
  }
}

double cumulant_value(Family family, double theta) {
  return family == Family::Logistic ? log1pexp(theta) : std::exp(theta);
}

double mean_value(Family family, double theta) {
  return family == Family::Logistic ? logistic_mean(theta) : std::exp(theta);
}

double variance_value(Family family, double theta) {
  if (family == Family::Logistic) {
    double mu = logistic_mean(theta);
    return mu * (1.0 - mu);
  }
  return std::exp(theta);
}

double third_value(Family family, double theta) {
  if (family == Family::Logistic) {
    double mu = logistic_mean(theta);
    return mu * (1.0 - mu) * (1.0 - 2.0 * mu);
  }
  return std::exp(theta);
}

Vector linear_predictor(const Dataset& data, const Coefficients& beta) {
  if (beta.size() != data.p() + 1)
    throw std::invalid_argument("beta length must be p+1");
  Vector theta = data.X * beta.tail(data.p());
  theta.array() += beta[0];
  return theta;
}

double neg_log_likelihood(const Dataset& data, const Coefficients& beta) {
  Vector theta = linear_predictor(data, beta);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    acc += cumulant_value(data.family, theta[i]) - data.y[i] * theta[i];
  double out = acc / static_cast<double>(data.n());
  if (!std::isfinite(out)) throw_overflow("neg_log_likelihood");
  return out;
}

Vector score(const Dataset& data, const Coefficients& beta) {
  Vector theta = linear_predictor(data, beta);
  Vector resid(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    resid[i] = data.y[i] - mean_value(data.family, theta[i]);
  Vector out(data.p() + 1);
  double inv_n = 1.0 / static_cast<double>(data.n());
  out[0] = resid.sum() * inv_n;
  out.tail(data.p()) = (data.X.transpose() * resid) * inv_n;
  if (!out.allFinite()) throw_overflow("score");
  return out;
}

Vector weight_diag(const Dataset& data, const Coefficients& beta) {
  Vector theta = linear_predictor(data, beta);
  Vector out(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    out[i] = variance_value(data.family, theta[i]);
  if (!out.allFinite()) throw_overflow("weight_diag");
  return out;
}

Vector third_diag(const Dataset& data, const Coefficients& beta) {
  Vector theta = linear_predictor(data, beta);
  Vector out(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    out[i] = third_value(data.family, theta[i]);
  if (!out.allFinite()) throw_overflow("third_diag");
  return out;
}

Vector working_response(const Dataset& data, const Coefficients& beta) {
  Vector theta = linear_predictor(data, beta);
  Vector out(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    double v = variance_value(data.family, theta[i]);
    if (v <= 0.0)
      throw ZeroWeightError("working_response: weight underflowed to 0 at observation " +
                            std::to_string(i + 1));
    out[i] = theta[i] + (data.y[i] - mean_value(data.family, theta[i])) / v;
  }
  if (!out.allFinite()) throw_overflow("working_response");
  return out;
}

double null_intercept(const Dataset& data) {
  double ybar = data.y.mean();
  if (data.family == Family::Logistic) {
    if (ybar <= 0.0 || ybar >= 1.0)
      throw DegenerateResponseError("constant logistic response: null model undefined");
    return std::log(ybar / (1.0 - ybar));
  }
  if (ybar <= 0.0)
    throw DegenerateResponseError("all-zero Poisson response: null model undefined");
  return std::log(ybar);
}

}  // namespace pathglm
