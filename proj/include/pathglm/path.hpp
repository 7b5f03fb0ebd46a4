#pragma once

#include <limits>
#include <vector>

#include "pathglm/glm.hpp"
#include "pathglm/penalty.hpp"
#include "pathglm/types.hpp"

namespace pathglm {

enum class CorrectorKind { NewtonRaphson, CoordinateDescent };
enum class StopReason { GridExhausted, Saturated, MaxActiveReached };
// Predictor extrapolation order: None = pure corrector (cold start),
// Linear = s term only, Quadratic = s and d terms.
enum class ApproxOrder { None, Linear, Quadratic };

struct PathConfig {
  int K = 100;                 // grid size
  double delta = 0.01;         // lambda_min / lambda_max
  double c = 1.0;              // corrector switch constant of the sqrt(n) rule
  double epsilon = 1e-4;       // logistic saturation threshold
  int max_active = 0;          // maximum model size; 0 = auto min(n,p)+1
  double corr_tol = 1e-7;      // corrector sup-norm convergence tolerance
  int max_corr_iter = 50;
  double theta_cap = 30.0;     // Poisson saturation bound on |theta|
  ApproxOrder approx = ApproxOrder::Quadratic;

  void validate() const;  // throws std::invalid_argument on out-of-range fields
  int resolved_max_active(Eigen::Index n, Eigen::Index p) const;
};

struct PathPoint {
  double lambda = 0.0;
  Coefficients beta;            // length p+1
  std::vector<int> active_set;  // sorted; always contains 0 (the intercept)
  CorrectorKind corrector = CorrectorKind::NewtonRaphson;
  int corr_iters = 0;
  double kkt_residual = 0.0;
  // Smallest eigenvalue of the penalized active Gram block used at this point
  // (MCP only); NaN means absent.
  double u_min = std::numeric_limits<double>::quiet_NaN();
  double neg_loglik = 0.0;
};

struct PathSolution {
  std::vector<PathPoint> points;
  Vector grid;  // the full lambda grid (the path may stop before its end)
  StopReason stop_reason = StopReason::GridExhausted;
  Family family = Family::Logistic;
  PenaltySpec penalty;
  PathConfig config;
};

// Two most recent emitted per-coordinate sign records (length p+1 each),
// feeding the MCP deletion rule; entries are -1/0/+1.
struct SignHistory {
  Vector prev1;  // signs at grid point k-1
  Vector prev2;  // signs at grid point k-2
};

// lambda_k = lambda_max * delta^{(k-1)/(K-1)}, with lambda_max the largest
// |score_j| at the null model (intercept at its MLE, all else zero).
// Throws DegenerateResponseError when lambda_max is 0 or the null MLE fails.
Vector lambda_grid(const Dataset& data, const PathConfig& config);

// {0} union {j >= 1 : |score_j| >= lambda_k}.
std::vector<int> active_set_lasso(const Vector& score_vec, double lambda_k);

// (A_{k-1} union N_k) \ D_k with N_k the fresh threshold entrants and D_k the
// coordinates whose last two recorded signs multiply negative.
std::vector<int> active_set_mcp(const std::vector<int>& prev_active,
                                const SignHistory& history,
                                const Vector& score_vec, double lambda_k);

struct PredictorDerivatives {
  Vector s;  // d beta / d lambda over point.active_set order
  Vector d;  // d^2 beta / d lambda^2 over point.active_set order
};

// Derivatives of the solution in lambda at `point` (whose active_set is the
// set to differentiate over and whose beta solves the point.lambda problem).
// MCP uses point.u_min for the concavity-adapted Hessian.
// Throws SingularSystemError when the system is not solvable; the caller then
// falls back to a zero predictor step.
PredictorDerivatives predictor_derivatives(const Dataset& data,
                                           const PathPoint& point,
                                           const PenaltySpec& penalty);

// Quadratic extrapolation beta_A + s*delta + (1/2) d*delta^2 over the active
// set; coordinates outside it stay zero. Linear order drops the d term; None
// returns beta unchanged.
Coefficients predictor_step(const PathPoint& point,
                            const PredictorDerivatives& derivs, double delta_k,
                            ApproxOrder order);

// NewtonRaphson iff #{j >= 1 : warm_j != 0} <= c sqrt(n).
CorrectorKind choose_corrector(const Coefficients& warm, Eigen::Index n,
                               double c);

struct CorrectorResult {
  Coefficients beta;
  std::vector<int> active_set;  // input set minus any zero-crossing drops
  int iters = 0;
  double kkt_residual = 0.0;
  bool converged = false;
};

// Full Newton steps on the objective restricted to A (Lasso signs frozen at
// the warm start; MCP uses the u_min-adapted concavity). A coordinate whose
// iterate crosses zero is zeroed, dropped from A, and the correction restarts.
// Throws SingularSystemError when a Newton system is unsolvable.
CorrectorResult newton_correct(const Dataset& data, const Coefficients& warm,
                               const std::vector<int>& A, double lambda,
                               const PenaltySpec& penalty, double u_min,
                               const PathConfig& config);

// IRLS coordinate descent: the quadratic approximation (weights, working
// response) is refreshed each outer iteration and swept to convergence inside.
// Lasso sweeps the full coordinate range 0..p; MCP confines the sweep to
// nonzero coordinates plus zero coordinates at or over the activation
// threshold lambda. Never throws on degeneracy; non-convergence is reported
// through iters = max_corr_iter and the achieved residual.
CorrectorResult cd_correct(const Dataset& data, const Coefficients& warm,
                           double lambda, const PenaltySpec& penalty,
                           double u_min, const PathConfig& config);

// Smallest eigenvalue of (1/n) X_{A\{0}}' V X_{A\{0}}.
double compute_u_min(const Dataset& data, const Coefficients& beta,
                     const std::vector<int>& A);

// Logistic: any fitted probability within epsilon of 0 or 1.
// Poisson: any |theta_i| > theta_cap.
bool check_saturation(const Dataset& data, const Coefficients& beta,
                      const PathConfig& config);

// Max over the KKT residuals at (beta, A, lambda): |score_0|, active
// penalized |score_j - penalty_derivative(beta_j)| (with the MCP concavity
// adapted by u_min), inactive (|score_j| - lambda)_+.
double kkt_residual(const Dataset& data, const Coefficients& beta,
                    const std::vector<int>& A, double lambda,
                    const PenaltySpec& penalty, double u_min);

PathSolution solve_path(const Dataset& data, const PenaltySpec& penalty,
                        const PathConfig& config);

// Same algorithm on a caller-supplied decreasing grid (used by CV, where the
// full-data grid is reused on each training split).
PathSolution solve_path_on_grid(const Dataset& data,
                                const PenaltySpec& penalty,
                                const PathConfig& config, const Vector& grid);

}  // namespace pathglm
