#pragma once

#include "pathglm/types.hpp"

namespace pathglm {

// Scalar exponential-family pieces under the canonical link.
// cumulant  b(theta):   logistic log(1+e^t) (stable form), Poisson e^t
// mean      b'(theta):  logistic e^t/(1+e^t),             Poisson e^t
// variance  b''(theta): logistic mu(1-mu),                Poisson e^t
// third     b'''(theta): logistic mu(1-mu)(1-2mu),        Poisson e^t
double cumulant_value(Family family, double theta);
double mean_value(Family family, double theta);
double variance_value(Family family, double theta);
double third_value(Family family, double theta);

// theta = beta_0 + X * beta_{1..p}
Vector linear_predictor(const Dataset& data, const Coefficients& beta);

// Per-observation-averaged negative log-likelihood:
//   (1/n) sum_i [ b(theta_i) - y_i theta_i ].
double neg_log_likelihood(const Dataset& data, const Coefficients& beta);

// Gradient of the (positive) average log-likelihood, length p+1:
//   component j = (1/n) sum_i (y_i - mu_i) xtilde_ij.
Vector score(const Dataset& data, const Coefficients& beta);

// Diagonal of V = diag(b''(theta_i)), length n.
Vector weight_diag(const Dataset& data, const Coefficients& beta);

// Diagonal of T = diag(b'''(theta_i)), length n.
Vector third_diag(const Dataset& data, const Coefficients& beta);

// Working response ytilde_i = theta_i + (y_i - mu_i) / v_i.
// Throws ZeroWeightError if any v_i underflows to 0 (saturated observation).
Vector working_response(const Dataset& data, const Coefficients& beta);

// Closed-form intercept MLE of the null model (all penalized betas zero):
// logistic log(ybar/(1-ybar)), Poisson log(ybar).
// Throws DegenerateResponseError when the null MLE does not exist.
double null_intercept(const Dataset& data);

}  // namespace pathglm
