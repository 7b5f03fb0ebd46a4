#include "pathglm/path.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pathglm {

namespace {

constexpr double kUminFloor = 1e-10;  // guards gamma_eff against a singular block

// Intercept-augmented design restricted to A (column 0 is the ones column).
Matrix active_design(const Dataset& data, const std::vector<int>& A) {
  Matrix Xa(data.n(), static_cast<Eigen::Index>(A.size()));
  for (std::size_t t = 0; t < A.size(); ++t) {
    if (A[t] == 0)
      Xa.col(static_cast<Eigen::Index>(t)).setOnes();
    else
      Xa.col(static_cast<Eigen::Index>(t)) = data.X.col(A[t] - 1);
  }
  return Xa;
}

// (1/n) Xa' V Xa.
Matrix active_hessian(const Matrix& Xa, const Vector& w) {
  Matrix Xw = w.asDiagonal() * Xa;
  return (Xa.transpose() * Xw) / static_cast<double>(Xa.rows());
}

// neg_log_likelihood that reports overflow as +inf instead of throwing
// (line-search merit evaluation).
double safe_negll(const Dataset& data, const Coefficients& beta) {
  Vector theta = data.X * beta.tail(data.p());
  theta.array() += beta[0];
  double acc = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    acc += cumulant_value(data.family, theta[i]) - data.y[i] * theta[i];
  double out = acc / static_cast<double>(data.n());
  return std::isfinite(out) ? out : std::numeric_limits<double>::infinity();
}

bool is_mcp(const PenaltySpec& p) { return p.kind == PenaltyKind::Mcp; }

// Minimum-eigenvalue rescaling of the MCP penalty. The concavity is always
// rescaled to u/gamma (gamma_eff = gamma/u), which keeps every corrector and
// predictor system positive definite with margin u(1 - 1/gamma) for all
// gamma > 1. The penalty level rescales with it (lambda_eff = u*lambda;
// derivative u*lambda*(1 - |t|/(gamma*lambda))_+, flat past gamma*lambda)
// only while the plain concavity 1/gamma threatens the block curvature
// (u*gamma < 2) — the regime the rescaling exists for, where the invariant
// product lambda_eff*gamma_eff = lambda*gamma keeps the flat edge in place.
// Once the curvature dominates, lambda stays unscaled and the derivative
// lambda*(1 - u|t|/(gamma*lambda))_+ tends to the soft threshold at rate
// |t|/gamma uniformly in u: the coefficient gap against the lasso path stays
// ~|beta|/gamma even on near-saturated tails, where the u-rescaled level
// would be amplified by the degenerate Hessian into a visible gap. Lasso and
// an absent u pass through unchanged.
struct Rescale {
  double lam_factor;  // multiplies the penalty level lambda
  double gamma_div;   // divides gamma (PenaltySpec::effective argument)
};
Rescale rescale(const PenaltySpec& penalty, double u_min) {
  if (penalty.kind != PenaltyKind::Mcp || !std::isfinite(u_min))
    return {1.0, 1.0};
  return {u_min * penalty.gamma < 2.0 ? u_min : 1.0, u_min};
}

// Global minimizer of (v/2) b^2 - z b + p_{lambda,gamma}(|b|) for any v > 0,
// including the degenerate-curvature regime v <= 1/gamma where the middle
// piece is concave and the optimum sits on a piece boundary.
double mcp_univariate_argmin(const PenaltySpec& eff, double lambda, double z,
                             double v) {
  double flat = eff.gamma * lambda;
  auto objective = [&](double b) {
    return 0.5 * v * b * b - z * b + penalty_value(eff, lambda, b);
  };
  double best = 0.0;
  double best_val = 0.0;  // objective(0) = 0
  auto consider = [&](double b) {
    double val = objective(b);
    if (val < best_val - 0.0) {
      best_val = val;
      best = b;
    }
  };
  if (v > 1.0 / eff.gamma) {
    double interior = soft_threshold(z, lambda) / (v - 1.0 / eff.gamma);
    if (std::fabs(interior) < flat) consider(interior);
  }
  double outer = z / v;
  if (std::fabs(outer) >= flat) consider(outer);
  consider(flat);
  consider(-flat);
  return best;
}

std::vector<int> sorted_union(const std::vector<int>& a,
                              const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

Vector sign_vector(const Coefficients& beta) {
  Vector s(beta.size());
  for (Eigen::Index j = 0; j < beta.size(); ++j) s[j] = sgn(beta[j]);
  return s;
}

}  // namespace

void PathConfig::validate() const {
  if (K < 2) throw std::invalid_argument("PathConfig: K must be >= 2");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("PathConfig: delta must lie in (0,1)");
  if (!(c > 0.0)) throw std::invalid_argument("PathConfig: c must be > 0");
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("PathConfig: epsilon must lie in (0, 0.5)");
  if (max_active < 0)
    throw std::invalid_argument("PathConfig: max_active must be >= 1 (or 0 = auto)");
  if (!(corr_tol > 0.0))
    throw std::invalid_argument("PathConfig: corr_tol must be > 0");
  if (max_corr_iter < 1)
    throw std::invalid_argument("PathConfig: max_corr_iter must be >= 1");
  if (!(theta_cap > 0.0))
    throw std::invalid_argument("PathConfig: theta_cap must be > 0");
}

int PathConfig::resolved_max_active(Eigen::Index n, Eigen::Index p) const {
  if (max_active > 0) return max_active;
  return static_cast<int>(std::min(n, p)) + 1;
}

Vector lambda_grid(const Dataset& data, const PathConfig& config) {
  data.validate();
  config.validate();
  Coefficients beta = Coefficients::Zero(data.p() + 1);
  beta[0] = null_intercept(data);
  Vector sc = score(data, beta);
  double lmax = sc.tail(data.p()).cwiseAbs().maxCoeff();
  if (!(lmax > 0.0) || !std::isfinite(lmax))
    throw DegenerateResponseError("lambda_max is zero: response carries no signal");
  Vector grid(config.K);
  for (int k = 0; k < config.K; ++k)
    grid[k] = lmax * std::pow(config.delta,
                              static_cast<double>(k) / (config.K - 1));
  grid[0] = lmax;
  return grid;
}

std::vector<int> active_set_lasso(const Vector& score_vec, double lambda_k) {
  std::vector<int> A{0};
  for (Eigen::Index j = 1; j < score_vec.size(); ++j)
    if (std::fabs(score_vec[j]) >= lambda_k) A.push_back(static_cast<int>(j));
  return A;
}

std::vector<int> active_set_mcp(const std::vector<int>& prev_active,
                                const SignHistory& history,
                                const Vector& score_vec, double lambda_k) {
  std::set<int> A(prev_active.begin(), prev_active.end());
  A.insert(0);
  // N_k: fresh entrants over the threshold.
  for (Eigen::Index j = 1; j < score_vec.size(); ++j)
    if (!A.count(static_cast<int>(j)) && std::fabs(score_vec[j]) >= lambda_k)
      A.insert(static_cast<int>(j));
  // D_k: coordinates whose last two recorded signs flipped.
  for (int j : prev_active) {
    if (j == 0) continue;
    if (history.prev1[j] * history.prev2[j] < 0.0) A.erase(j);
  }
  return {A.begin(), A.end()};
}

PredictorDerivatives predictor_derivatives(const Dataset& data,
                                           const PathPoint& point,
                                           const PenaltySpec& penalty) {
  const std::vector<int>& A = point.active_set;
  const Eigen::Index m = static_cast<Eigen::Index>(A.size());
  Matrix Xa = active_design(data, A);
  Vector w = weight_diag(data, point.beta);
  Matrix H = active_hessian(Xa, w);
  Vector sc = score(data, point.beta);
  const Rescale rs = rescale(penalty, point.u_min);
  PenaltySpec eff = penalty.effective(rs.gamma_div);
  const double lam_eff = rs.lam_factor * point.lambda;

  // Right-hand side: differentiated KKT stationarity (the penalty derivative
  // is lam_factor * lambda * (...), so d/dlambda puts lam_factor on the sign
  // entries). Intercept row is 0; a penalized coordinate contributes its sign
  // (score sign if just activated), masked out in the MCP flat region where
  // the penalty gradient vanishes.
  Vector g = Vector::Zero(m);
  for (Eigen::Index t = 1; t < m; ++t) {
    int j = A[static_cast<std::size_t>(t)];
    double bj = point.beta[j];
    double sign_j = bj != 0.0 ? sgn(bj) : sgn(sc[j]);
    bool flat = is_mcp(penalty) && std::fabs(bj) >= lam_eff * eff.gamma;
    if (flat) continue;
    g[t] = rs.lam_factor * sign_j;
    if (is_mcp(penalty)) H(t, t) -= 1.0 / eff.gamma;
  }

  Eigen::LDLT<Matrix> ldlt(H);
  Vector s = ldlt.solve(-g);
  double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if (!s.allFinite() || (H * s + g).cwiseAbs().maxCoeff() > 1e-6 * scale * std::max(1.0, s.cwiseAbs().maxCoeff()))
    throw SingularSystemError("predictor system is singular");

  Vector Xs = Xa * s;
  Vector third = third_diag(data, point.beta);
  Vector rhs = -(Xa.transpose() * third.cwiseProduct(Xs).cwiseProduct(Xs)) /
               static_cast<double>(data.n());
  Vector d = ldlt.solve(rhs);
  if (!d.allFinite()) throw SingularSystemError("predictor system is singular");
  return {s, d};
}

Coefficients predictor_step(const PathPoint& point,
                            const PredictorDerivatives& derivs, double delta_k,
                            ApproxOrder order) {
  Coefficients warm = Coefficients::Zero(point.beta.size());
  warm[0] = point.beta[0];
  for (std::size_t t = 0; t < point.active_set.size(); ++t) {
    int j = point.active_set[t];
    warm[j] = point.beta[j];
    if (order == ApproxOrder::None) continue;
    warm[j] += derivs.s[static_cast<Eigen::Index>(t)] * delta_k;
    if (order == ApproxOrder::Quadratic)
      warm[j] += 0.5 * derivs.d[static_cast<Eigen::Index>(t)] * delta_k * delta_k;
  }
  return warm;
}

CorrectorKind choose_corrector(const Coefficients& warm, Eigen::Index n,
                               double c) {
  int nonzero = 0;
  for (Eigen::Index j = 1; j < warm.size(); ++j)
    if (warm[j] != 0.0) ++nonzero;
  return nonzero <= c * std::sqrt(static_cast<double>(n))
             ? CorrectorKind::NewtonRaphson
             : CorrectorKind::CoordinateDescent;
}

double kkt_residual(const Dataset& data, const Coefficients& beta,
                    const std::vector<int>& A, double lambda,
                    const PenaltySpec& penalty, double u_min) {
  const Rescale rs = rescale(penalty, u_min);
  PenaltySpec eff = penalty.effective(rs.gamma_div);
  const double lam_eff = rs.lam_factor * lambda;
  Vector sc = score(data, beta);
  std::vector<char> active(static_cast<std::size_t>(beta.size()), 0);
  for (int j : A) active[static_cast<std::size_t>(j)] = 1;
  double res = std::fabs(sc[0]);
  for (Eigen::Index j = 1; j < beta.size(); ++j) {
    if (active[static_cast<std::size_t>(j)] && beta[j] != 0.0)
      res = std::max(res, std::fabs(sc[j] - penalty_derivative(eff, lam_eff, beta[j])));
    else if (!is_mcp(penalty))
      // Zero-coordinate bound enters the certificate for the convex penalty
      // only; MCP zero coordinates are policed by re-activation instead.
      res = std::max(res, std::max(0.0, std::fabs(sc[j]) - lambda));
  }
  return res;
}

CorrectorResult newton_correct(const Dataset& data, const Coefficients& warm,
                               const std::vector<int>& A, double lambda,
                               const PenaltySpec& penalty, double u_min,
                               const PathConfig& config) {
  const Rescale rs = rescale(penalty, u_min);
  PenaltySpec eff = penalty.effective(rs.gamma_div);
  const double lam_eff = rs.lam_factor * lambda;
  std::vector<int> act = A;
  Coefficients beta = warm;
  for (Eigen::Index j = 1; j < beta.size(); ++j) {
    if (!std::binary_search(act.begin(), act.end(), static_cast<int>(j)))
      beta[j] = 0.0;
  }

  // Signs are frozen at the warm start; a just-activated zero coordinate takes
  // the sign of its score component (the direction it is about to move).
  Vector sc0 = score(data, beta);
  Vector frozen = Vector::Zero(beta.size());
  for (int j : act)
    if (j != 0) frozen[j] = beta[j] != 0.0 ? sgn(beta[j]) : sgn(sc0[j]);

  auto merit = [&](const Coefficients& b) {
    double val = safe_negll(data, b);
    for (int j : act)
      if (j != 0) val += penalty_value(eff, lam_eff, b[j]);
    return val;
  };

  int iters = 0;
  int stalled = 0;
  bool converged = false;
  while (iters < config.max_corr_iter) {
    const Eigen::Index m = static_cast<Eigen::Index>(act.size());
    Matrix Xa = active_design(data, act);
    Vector w = weight_diag(data, beta);
    Vector sc = score(data, beta);
    Matrix H = active_hessian(Xa, w);
    Vector grad(m);
    for (Eigen::Index t = 0; t < m; ++t) {
      int j = act[static_cast<std::size_t>(t)];
      if (j == 0) {
        grad[t] = -sc[0];
        continue;
      }
      double pen_grad = 0.0;
      if (std::fabs(beta[j]) < lam_eff * eff.gamma || !is_mcp(penalty)) {
        pen_grad = is_mcp(penalty)
                       ? lam_eff * frozen[j] * (1.0 - std::fabs(beta[j]) / (lam_eff * eff.gamma))
                       : lam_eff * frozen[j];
        if (is_mcp(penalty)) H(t, t) -= 1.0 / eff.gamma;
      }
      grad[t] = -sc[j] + pen_grad;
    }

    Eigen::LDLT<Matrix> ldlt(H);
    Vector step = ldlt.solve(-grad);
    double gscale = std::max(1.0, grad.cwiseAbs().maxCoeff());
    if (!step.allFinite() ||
        (H * step + grad).cwiseAbs().maxCoeff() > 1e-6 * gscale * std::max(1.0, step.cwiseAbs().maxCoeff()))
      throw SingularSystemError("Newton system is singular");

    // Convergence is measured on the undamped Newton step: a small full step
    // means the quadratic model already sits at stationarity.
    const bool small_step = step.cwiseAbs().maxCoeff() < config.corr_tol;

    // Step-halving on the penalized merit keeps iterates in the finite region.
    double merit_old = merit(beta);
    double merit_new = merit_old;
    double t_step = 1.0;
    Coefficients cand = beta;
    bool accepted = false;
    for (int h = 0; h < 40 && !accepted; ++h) {
      cand = beta;
      for (Eigen::Index t = 0; t < m; ++t)
        cand[act[static_cast<std::size_t>(t)]] += t_step * step[t];
      merit_new = merit(cand);
      if (small_step ||
          merit_new <= merit_old + 1e-12 * (1.0 + std::fabs(merit_old)))
        accepted = true;
      else
        t_step *= 0.5;
    }
    ++iters;
    if (!accepted) break;
    // MCP mask flips can cycle between basins while merit creeps; a stalled
    // merit with a non-vanishing step means a fallback will do better.
    if (!small_step &&
        merit_old - merit_new <= 1e-13 * (1.0 + std::fabs(merit_old))) {
      if (++stalled >= 3) {
        beta = cand;
        break;
      }
    } else {
      stalled = 0;
    }

    // Zero-crossing rule: a coordinate whose sign flips is zeroed, dropped
    // from A, and the correction restarts on the reduced set.
    std::vector<int> dropped;
    for (int j : act)
      if (j != 0 && frozen[j] * cand[j] < 0.0) {
        cand[j] = 0.0;
        dropped.push_back(j);
      }
    beta = cand;
    if (!dropped.empty()) {
      std::vector<int> next;
      for (int j : act)
        if (std::find(dropped.begin(), dropped.end(), j) == dropped.end())
          next.push_back(j);
      act = next;
      continue;
    }
    if (small_step) {
      converged = true;
      break;
    }
  }

  CorrectorResult out;
  out.beta = beta;
  out.active_set = act;
  out.iters = iters;
  out.converged = converged;
  out.kkt_residual = kkt_residual(data, beta, act, lambda, penalty, u_min);
  return out;
}

CorrectorResult cd_correct(const Dataset& data, const Coefficients& warm,
                           double lambda, const PenaltySpec& penalty,
                           double u_min, const PathConfig& config) {
  const Rescale rs = rescale(penalty, u_min);
  PenaltySpec eff = penalty.effective(rs.gamma_div);
  const double lam_eff = rs.lam_factor * lambda;
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const double inv_n = 1.0 / static_cast<double>(n);
  Coefficients beta = warm;
  int outer = 0;
  bool converged = false;

  auto merit = [&](const Coefficients& b) {
    double val = safe_negll(data, b);
    for (Eigen::Index j = 1; j <= p; ++j)
      val += penalty_value(eff, lam_eff, b[j]);
    return val;
  };

  // MCP sweeps are confined to the activation rule's domain: nonzero
  // coordinates plus zero coordinates whose score meets the threshold lambda.
  // The rescaled penalty's own zero threshold (lam_eff, which sits below
  // lambda whenever the level is rescaled) must not govern entry, or the
  // sweep would admit coordinates the active-set rule excludes. Lasso sweeps
  // everything (the full convex problem).
  std::vector<char> in_sweep(static_cast<std::size_t>(p) + 1, 1);

  while (outer < config.max_corr_iter) {
    ++outer;
    // Refresh the quadratic approximation. u tracks w .* (ytilde - theta),
    // which equals y - mu at the refresh point and needs no division by w,
    // so saturated (zero-weight) observations stay harmless.
    Vector theta = data.X * beta.tail(p);
    theta.array() += beta[0];
    Vector w(n), u(n);
    bool finite = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      w[i] = variance_value(data.family, theta[i]);
      u[i] = data.y[i] - mean_value(data.family, theta[i]);
      finite = finite && std::isfinite(w[i]) && std::isfinite(u[i]);
    }
    if (!finite) break;  // overflowed fit; return progress, not converged
    Vector v = (data.X.array().square().matrix().transpose() * w) * inv_n;
    double v0 = w.mean();
    if (!(v0 > 0.0)) break;
    if (is_mcp(penalty)) {
      // At the refresh point u = y - mu, so (1/n) x_j'u is the exact score.
      for (Eigen::Index j = 1; j <= p; ++j)
        in_sweep[static_cast<std::size_t>(j)] =
            beta[j] != 0.0 ||
            std::fabs(data.X.col(j - 1).dot(u) * inv_n) >= lambda;
    }
    // The certificate is measured in score units; weights above 1 (Poisson)
    // would otherwise let a coefficient-space tolerance leak through it.
    const double inner_tol =
        config.corr_tol / std::max({1.0, v0, v.maxCoeff()});

    Coefficients outer_start = beta;
    for (int sweep = 0; sweep < 500; ++sweep) {
      double max_change = 0.0;
      // Intercept: unpenalized weighted least squares.
      double delta0 = u.mean() / v0;
      if (delta0 != 0.0) {
        beta[0] += delta0;
        u -= delta0 * w;
        max_change = std::fabs(delta0);
      }
      for (Eigen::Index j = 1; j <= p; ++j) {
        if (!in_sweep[static_cast<std::size_t>(j)]) continue;
        double vj = v[j - 1];
        if (!(vj > 0.0)) continue;  // constant-zero column
        double zj = data.X.col(j - 1).dot(u) * inv_n + vj * beta[j];
        double bj;
        if (is_mcp(penalty) && !(vj > 1.0 / eff.gamma))
          bj = mcp_univariate_argmin(eff, lam_eff, zj, vj);
        else
          bj = cd_update(eff, lam_eff, zj, vj);
        double delta = bj - beta[j];
        if (delta != 0.0) {
          beta[j] = bj;
          u -= delta * w.cwiseProduct(data.X.col(j - 1));
          max_change = std::max(max_change, std::fabs(delta));
        }
      }
      if (max_change < inner_tol) break;
    }

    // Step-halving on the outer refresh: the quadratic model can badly
    // overshoot the exponential-family likelihood, and MCP branch jumps can
    // cycle; monotone merit rules both out.
    Coefficients delta_full = beta - outer_start;
    double merit_old = merit(outer_start);
    double t_step = 1.0;
    bool accepted = false;
    for (int h = 0; h < 30 && !accepted; ++h) {
      beta = outer_start + t_step * delta_full;
      if (merit(beta) <= merit_old + 1e-12 * (1.0 + std::fabs(merit_old)))
        accepted = true;
      else
        t_step *= 0.5;
    }
    if (!accepted) {
      // The sweep can propose a step whose merit gain comes from one
      // coordinate hopping between penalty regions; scaling such a step only
      // traces an ascent segment. A backtracked proximal-gradient step
      // changes the proposal itself as the step size shrinks, so it always
      // finds a descent direction unless the point is already stationary.
      beta = outer_start;
      Vector sc = score(data, outer_start);
      double s_len = 1.0;
      bool prox_ok = false;
      for (int h = 0; h < 60 && !prox_ok; ++h) {
        Coefficients cand = outer_start;
        double vj = 1.0 / s_len;
        cand[0] += s_len * sc[0];
        for (Eigen::Index j = 1; j <= p; ++j) {
          if (!in_sweep[static_cast<std::size_t>(j)]) continue;
          double zj = (outer_start[j] + s_len * sc[j]) * vj;
          cand[j] = (is_mcp(penalty) && !(vj > 1.0 / eff.gamma))
                        ? mcp_univariate_argmin(eff, lam_eff, zj, vj)
                        : cd_update(eff, lam_eff, zj, vj);
        }
        double dist2 = (cand - outer_start).squaredNorm();
        if (merit(cand) <= merit_old - 0.1 * dist2 / (2.0 * s_len) +
                               1e-12 * (1.0 + std::fabs(merit_old))) {
          beta = cand;
          prox_ok = true;
        } else {
          s_len *= 0.5;
        }
      }
      if (!prox_ok) break;
      continue;
    }
    if (t_step == 1.0 &&
        delta_full.cwiseAbs().maxCoeff() < config.corr_tol) {
      converged = true;
      break;
    }
  }

  CorrectorResult out;
  out.beta = beta;
  out.active_set.push_back(0);
  for (Eigen::Index j = 1; j <= p; ++j)
    if (beta[j] != 0.0) out.active_set.push_back(static_cast<int>(j));
  out.iters = outer;
  out.converged = converged;
  out.kkt_residual = kkt_residual(data, beta, out.active_set, lambda, penalty, u_min);
  return out;
}

double compute_u_min(const Dataset& data, const Coefficients& beta,
                     const std::vector<int>& A) {
  std::vector<int> pen;
  for (int j : A)
    if (j != 0) pen.push_back(j);
  if (pen.empty())
    throw std::invalid_argument("compute_u_min: no penalized active coordinates");
  Matrix Xb(data.n(), static_cast<Eigen::Index>(pen.size()));
  for (std::size_t t = 0; t < pen.size(); ++t)
    Xb.col(static_cast<Eigen::Index>(t)) = data.X.col(pen[t] - 1);
  Vector w = weight_diag(data, beta);
  Matrix H = active_hessian(Xb, w);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool check_saturation(const Dataset& data, const Coefficients& beta,
                      const PathConfig& config) {
  Vector theta = data.X * beta.tail(data.p());
  theta.array() += beta[0];
  if (data.family == Family::Logistic) {
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      double mu = mean_value(Family::Logistic, theta[i]);
      if (mu > 1.0 - config.epsilon || mu < config.epsilon) return true;
    }
    return false;
  }
  return theta.cwiseAbs().maxCoeff() > config.theta_cap;
}

namespace {

struct CorrectPointResult {
  CorrectorResult res;
  CorrectorKind kind = CorrectorKind::NewtonRaphson;
};

// One corrector invocation with the Newton -> coordinate-descent fallback.
CorrectPointResult correct_once(const Dataset& data, const Coefficients& warm,
                                const std::vector<int>& A, double lambda,
                                const PenaltySpec& penalty, double u_min,
                                const PathConfig& config, bool force_cd) {
  CorrectPointResult out;
  out.kind = force_cd ? CorrectorKind::CoordinateDescent
                      : choose_corrector(warm, data.n(), config.c);
  if (out.kind == CorrectorKind::NewtonRaphson) {
    try {
      out.res = newton_correct(data, warm, A, lambda, penalty, u_min, config);
      if (out.res.converged) return out;
      // Restart the fallback from the predictor's warm start: a non-converged
      // Newton endpoint may sit in the wrong basin of a nonconvex objective.
      CorrectorResult cd = cd_correct(data, warm, lambda, penalty, u_min, config);
      cd.iters += out.res.iters;
      out.res = cd;
      out.kind = CorrectorKind::CoordinateDescent;
    } catch (const SingularSystemError&) {
      out.res = cd_correct(data, warm, lambda, penalty, u_min, config);
      out.kind = CorrectorKind::CoordinateDescent;
    }
    return out;
  }
  out.res = cd_correct(data, warm, lambda, penalty, u_min, config);
  if (!out.res.converged) {
    // IRLS converges linearly and can exhaust its budget just short of the
    // tolerance near saturation; a Newton polish from the almost-stationary
    // endpoint closes the gap quadratically. Kept only if it certifies better.
    try {
      CorrectorResult polish = newton_correct(data, out.res.beta, out.res.active_set,
                                              lambda, penalty, u_min, config);
      double before = kkt_residual(data, out.res.beta, out.res.active_set, lambda,
                                   penalty, u_min);
      double after = kkt_residual(data, polish.beta, polish.active_set, lambda,
                                  penalty, u_min);
      if (after <= before) {
        polish.iters += out.res.iters;
        out.res = polish;
      }
    } catch (const SingularSystemError&) {
      // keep the coordinate-descent iterate
    }
  }
  return out;
}

PathSolution solve_impl(const Dataset& data, const PenaltySpec& penalty,
                        const PathConfig& config, const Vector& grid,
                        bool natural_grid) {
  data.validate();
  config.validate();
  penalty.validate();
  const Eigen::Index p = data.p();
  const int max_act = config.resolved_max_active(data.n(), p);
  const bool mcp = is_mcp(penalty);

  PathSolution sol;
  sol.grid = grid;
  sol.stop_reason = StopReason::GridExhausted;
  sol.family = data.family;
  sol.penalty = penalty;
  sol.config = config;

  Coefficients beta = Coefficients::Zero(p + 1);
  beta[0] = null_intercept(data);
  std::vector<int> prev_active{0};
  SignHistory hist{Vector::Zero(p + 1), Vector::Zero(p + 1)};
  double prev_lambda = std::numeric_limits<double>::quiet_NaN();

  int k_start = 0;
  if (natural_grid) {
    // Point 0 is the null model and is KKT-exact by construction of the grid.
    PathPoint start;
    start.lambda = grid[0];
    start.beta = beta;
    start.active_set = {0};
    start.corrector = CorrectorKind::NewtonRaphson;
    start.corr_iters = 0;
    start.kkt_residual = kkt_residual(data, beta, start.active_set, grid[0],
                                      penalty, std::numeric_limits<double>::quiet_NaN());
    start.neg_loglik = neg_log_likelihood(data, beta);
    sol.points.push_back(start);
    hist.prev2 = hist.prev1;
    hist.prev1 = sign_vector(beta);
    prev_lambda = grid[0];
    k_start = 1;
  }

  for (int k = k_start; k < static_cast<int>(grid.size()); ++k) {
    const double lam = grid[k];
    try {
      Vector sc = score(data, beta);
      std::vector<int> A = mcp ? active_set_mcp(prev_active, hist, sc, lam)
                               : active_set_lasso(sc, lam);
      // Coordinates that left the active set are zeroed (MCP D_k deletions;
      // for LASSO the warm start keeps only A_k coordinates anyway).
      bool changed = false;
      for (Eigen::Index j = 1; j <= p; ++j) {
        if (beta[j] != 0.0 &&
            !std::binary_search(A.begin(), A.end(), static_cast<int>(j))) {
          beta[j] = 0.0;
          changed = true;
        }
      }
      if (changed) sc = score(data, beta);

      if (static_cast<int>(A.size()) > max_act) {
        sol.stop_reason = StopReason::MaxActiveReached;
        break;
      }

      // Predictor from the previous solution (skipped for the first point of
      // an externally supplied grid, where there is no previous lambda). The
      // MCP system uses u_min evaluated at the base point over A_k.
      Coefficients warm = beta;
      if (std::isfinite(prev_lambda) && config.approx != ApproxOrder::None) {
        PathPoint basept;
        basept.lambda = prev_lambda;
        basept.beta = beta;
        basept.active_set = A;
        if (mcp && A.size() > 1)
          basept.u_min = std::max(compute_u_min(data, beta, A), kUminFloor);
        try {
          PredictorDerivatives derivs = predictor_derivatives(data, basept, penalty);
          warm = predictor_step(basept, derivs, lam - prev_lambda, config.approx);
        } catch (const SingularSystemError&) {
          warm = predictor_step(basept, PredictorDerivatives{}, 0.0, ApproxOrder::None);
        }
      }

      // Corrector u_min: once per grid point, at the warm start, held fixed.
      double u = std::numeric_limits<double>::quiet_NaN();
      if (mcp && A.size() > 1)
        u = std::max(compute_u_min(data, warm, A), kUminFloor);

      CorrectPointResult cp =
          correct_once(data, warm, A, lam, penalty, u, config, false);
      std::vector<int> A_out = sorted_union(cp.res.active_set, {0});
      {
        std::vector<int> support{0};
        for (Eigen::Index j = 1; j <= p; ++j)
          if (cp.res.beta[j] != 0.0) support.push_back(static_cast<int>(j));
        A_out = sorted_union(A_out, support);
      }
      int iters = cp.res.iters;

      // Inactive-KKT enforcement: re-activate violators and re-correct, at
      // most 5 rounds, then emit with the recorded residual. A round may
      // never worsen the certificate: the nonconvex objective can have a
      // second basin that traps the re-correction, in which case the
      // already-certified iterate is kept (the violator stays recorded in
      // the active set, at zero).
      for (int round = 0; round < 5; ++round) {
        Vector sc2 = score(data, cp.res.beta);
        std::vector<int> viol;
        for (Eigen::Index j = 1; j <= p; ++j)
          if (!std::binary_search(A_out.begin(), A_out.end(), static_cast<int>(j)) &&
              std::fabs(sc2[j]) - lam > config.corr_tol)
            viol.push_back(static_cast<int>(j));
        if (viol.empty()) break;
        A_out = sorted_union(A_out, viol);
        double u_new = u;
        if (mcp && A_out.size() > 1)
          u_new = std::max(compute_u_min(data, cp.res.beta, A_out), kUminFloor);
        // Round 0 retries the usual corrector; persistent violators go to
        // coordinate descent, which resolves sign flips without restarts.
        CorrectPointResult again = correct_once(data, cp.res.beta, A_out, lam,
                                                penalty, u_new, config, round >= 1);
        iters += again.res.iters;
        std::vector<int> support{0};
        for (Eigen::Index j = 1; j <= p; ++j)
          if (again.res.beta[j] != 0.0) support.push_back(static_cast<int>(j));
        std::vector<int> A_new =
            sorted_union(sorted_union(A_out, again.res.active_set), support);
        double before = kkt_residual(data, cp.res.beta, A_out, lam, penalty, u);
        double after = kkt_residual(data, again.res.beta, A_new, lam, penalty, u_new);
        if (after > before) break;
        cp.res = again.res;
        cp.kind = again.kind;
        A_out = A_new;
        u = u_new;
      }

      PathPoint pt;
      pt.lambda = lam;
      pt.beta = cp.res.beta;
      pt.active_set = A_out;
      pt.corrector = cp.kind;
      pt.corr_iters = iters;
      pt.kkt_residual = kkt_residual(data, cp.res.beta, A_out, lam, penalty, u);
      pt.u_min = u;
      pt.neg_loglik = neg_log_likelihood(data, cp.res.beta);

      // At the saturation frontier the penalized minimizer can cease to exist:
      // under separation (or exploding Poisson means) the flat-region MCP
      // objective has its infimum at infinity, iterates run away, and the
      // corrector cannot certify at any finite point. The fitted-value test
      // lags behind this, so an uncertified point itself ends the path on the
      // last certified point.
      bool saturated = check_saturation(data, cp.res.beta, config);
      if (pt.kkt_residual >= 10.0 * config.corr_tol) {
        sol.stop_reason = StopReason::Saturated;
        break;
      }
      sol.points.push_back(pt);

      beta = cp.res.beta;
      prev_active = A_out;
      prev_lambda = lam;
      hist.prev2 = hist.prev1;
      hist.prev1 = sign_vector(beta);

      if (saturated) {
        sol.stop_reason = StopReason::Saturated;
        break;
      }
    } catch (const NumericalError&) {
      // A fit ran away numerically (Poisson overflow); treat as saturation.
      sol.stop_reason = StopReason::Saturated;
      break;
    }
  }
  return sol;
}

}  // namespace

PathSolution solve_path(const Dataset& data, const PenaltySpec& penalty,
                        const PathConfig& config) {
  Vector grid = lambda_grid(data, config);
  return solve_impl(data, penalty, config, grid, true);
}

PathSolution solve_path_on_grid(const Dataset& data, const PenaltySpec& penalty,
                                const PathConfig& config, const Vector& grid) {
  if (grid.size() < 1)
    throw std::invalid_argument("solve_path_on_grid: empty grid");
  for (Eigen::Index k = 1; k < grid.size(); ++k)
    if (!(grid[k] < grid[k - 1]))
      throw std::invalid_argument("solve_path_on_grid: grid must be strictly decreasing");
  return solve_impl(data, penalty, config, grid, false);
}

}  // namespace pathglm
