// Acceptance gate: ten end-to-end checks covering certification, oracle
// equivalence, desk-scale recovery statistics, entry order, timing,
// warm-start economy, the MCP-to-LASSO limit, and the property suites.
// Each check prints one PASS/FAIL line with its measured numbers; the
// process exits nonzero if any check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pathglm/io.hpp"
#include "pathglm/sim.hpp"

using namespace pathglm;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

PenaltySpec lasso() { return PenaltySpec{PenaltyKind::Lasso, 0.0}; }
PenaltySpec mcp(double gamma) { return PenaltySpec{PenaltyKind::Mcp, gamma}; }

// A planted-signal instance drawn with the simulation layer's geometry.
// `scale` shrinks the signal; the oracle-equivalence check uses 0.5 to keep
// the likelihood well conditioned for the first-order reference solver.
Dataset sim_instance(Family fam, int n, int p, double rho, std::uint64_t seed,
                     double scale = 1.0) {
  SimSpec spec;
  spec.family = fam;
  spec.n = n;
  spec.p = p;
  spec.d = 3;
  Vector bt = scale * spec.beta_true();
  Rng rng(seed);
  Matrix X = generate_design(n, p, rho, rng);
  Vector y = generate_response(fam, X, bt, rng);
  return Dataset{X, y, fam};
}

int fails = 0;

void report(bool ok, const std::string& line) {
  std::printf("%s  %s\n", ok ? "PASS" : "FAIL", line.c_str());
  std::fflush(stdout);
  if (!ok) ++fails;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return std::string(buf);
}

// --------------------------------------------------------------------------
// 1. Certification: every emitted point on 50 random instances carries a
//    first-order optimality residual below 1e-6.
void check_certification() {
  auto t0 = Clock::now();
  const double bar = 1e-6;
  double worst = 0.0;
  long points = 0;
  int n_choices[] = {50, 100};
  int p_choices[] = {10, 40};
  PathConfig config;
  for (int i = 0; i < 50; ++i) {
    Family fam = (i % 2 == 0) ? Family::Logistic : Family::Poisson;
    int n = n_choices[(i / 2) % 2];
    int p = p_choices[(i / 4) % 2];
    PenaltySpec pen =
        (i % 3 == 0) ? lasso() : (i % 3 == 1 ? mcp(1.3) : mcp(3.0));
    Dataset d = sim_instance(fam, n, p, 0.3, 1000 + i);
    PathSolution sol = solve_path(d, pen, config);
    for (const PathPoint& pt : sol.points) {
      worst = std::max(worst, pt.kkt_residual);
      ++points;
    }
  }
  double secs = seconds_since(t0);
  bool ok = worst < bar && secs < 60.0;
  report(ok, fmt("1. certification: 50 instances, %ld points, worst residual "
                 "%.3e (< 1e-06), %.1f s (< 60 s)",
                 points, worst, secs));
}

// --------------------------------------------------------------------------
// 2. Oracle equivalence: every LASSO path point on 20 instances agrees with
//    an independent proximal-gradient solve to sup-norm 1e-4.
void check_oracle_equivalence() {
  auto t0 = Clock::now();
  const double bar = 1e-4;
  double worst = 0.0;
  long points = 0;
  PathConfig config;
  for (int i = 0; i < 20; ++i) {
    Family fam = (i % 2 == 0) ? Family::Logistic : Family::Poisson;
    auto ofam = fam == Family::Logistic ? oracles::OracleFamily::Logistic
                                        : oracles::OracleFamily::Poisson;
    Dataset d = sim_instance(fam, 60, 10, 0.0, 2000 + i, 0.5);
    PathSolution sol = solve_path(d, lasso(), config);
    Coefficients warm = Coefficients::Zero(11);
    warm[0] = null_intercept(d);
    for (const PathPoint& pt : sol.points) {
      warm = oracles::prox_grad_lasso(ofam, d.X, d.y, pt.lambda, warm, 1e-10);
      worst = std::max(worst, (pt.beta - warm).cwiseAbs().maxCoeff());
      ++points;
    }
  }
  double secs = seconds_since(t0);
  bool ok = worst < bar && secs < 60.0;
  report(ok, fmt("2. oracle equivalence: 20 instances, %ld points, worst "
                 "sup-diff %.3e (< 1e-04), %.1f s (< 60 s)",
                 points, worst, secs));
}

// --------------------------------------------------------------------------
// 3-5. Desk-scale recovery experiments (p=1000, n=500, d=3, rho=0, 20 reps).
void check_recovery(int number, Family fam, const PenaltySpec& pen,
                    double fp_bar, bool use_l1, double loss_lo, double loss_hi,
                    std::uint64_t seed) {
  auto t0 = Clock::now();
  SimSpec spec;
  spec.family = fam;
  spec.penalty = pen;
  spec.seed = seed;
  ExperimentReport rep = run_experiment(spec);
  double loss = use_l1 ? rep.l1.median : rep.l2.median;
  double secs = seconds_since(t0);
  bool ok = rep.tp.median == 3.0 && rep.fp.median <= fp_bar &&
            loss >= loss_lo && loss <= loss_hi && secs < 300.0;
  report(ok, fmt("%d. recovery %s/%s: median TP %.1f (= 3), FP %.1f (<= %.0f), "
                 "%s %.3f (in [%.2f, %.2f]), %.0f s (< 300 s)",
                 number, to_string(fam), to_string(pen.kind), rep.tp.median,
                 rep.fp.median, fp_bar, use_l1 ? "l1" : "l2", loss, loss_lo,
                 loss_hi, secs));
}

// --------------------------------------------------------------------------
// 6. Entry order: on the p=1000 logistic design the first three variables to
//    enter the LASSO path are 1, 5, 2 in that order on >= 16 of 20 seeds.
void check_entry_order() {
  auto t0 = Clock::now();
  int hits = 0;
  PathConfig config;
  config.max_active = 7;  // intercept + first several entrants suffice
  for (int s = 0; s < 20; ++s) {
    Dataset d = sim_instance(Family::Logistic, 500, 1000, 0.0, 3000 + s);
    PathSolution sol = solve_path(d, lasso(), config);
    std::vector<int> order;
    for (const PathPoint& pt : sol.points) {
      for (int j = 1; j <= 1000; ++j) {
        if (pt.beta[j] != 0.0 &&
            std::find(order.begin(), order.end(), j) == order.end())
          order.push_back(j);
      }
      if (order.size() >= 3) break;
    }
    if (order.size() >= 3 && order[0] == 1 && order[1] == 5 && order[2] == 2)
      ++hits;
  }
  double secs = seconds_since(t0);
  bool ok = hits >= 16;
  report(ok, fmt("6. entry order 1,5,2: %d of 20 seeds (>= 16), %.0f s", hits,
                 secs));
}

// --------------------------------------------------------------------------
// 7. Timing: a full MCP path at p=128, n=50 finishes in < 1 s median.
void check_timing() {
  std::vector<double> times;
  PathConfig config;
  for (int r = 0; r < 10; ++r) {
    Dataset d = sim_instance(Family::Logistic, 50, 128, 0.0, 4000 + r);
    auto t0 = Clock::now();
    PathSolution sol = solve_path(d, mcp(3.0), config);
    times.push_back(seconds_since(t0));
    if (sol.points.empty()) times.back() = 1e9;
  }
  std::sort(times.begin(), times.end());
  double med = 0.5 * (times[4] + times[5]);
  bool ok = med < 1.0;
  report(ok, fmt("7. timing: full mcp path p=128 n=50, median %.3f s (< 1 s), "
                 "worst %.3f s",
                 med, times.back()));
}

// --------------------------------------------------------------------------
// 8. Warm-start economy: quadratic warm starts need no more corrector
//    iterations than linear ones on >= 15 of 20 instances, with paths
//    agreeing to sup-norm 1e-5.
void check_warm_start_orders() {
  auto t0 = Clock::now();
  int wins = 0;
  double worst = 0.0;
  PathConfig quad;
  PathConfig lin;
  lin.approx = ApproxOrder::Linear;
  for (int i = 0; i < 20; ++i) {
    Dataset d = sim_instance(Family::Logistic, 200, 100, 0.0, 5000 + i);
    PathSolution sq = solve_path(d, lasso(), quad);
    PathSolution sl = solve_path(d, lasso(), lin);
    long iq = 0, il = 0;
    for (const PathPoint& pt : sq.points) iq += pt.corr_iters;
    for (const PathPoint& pt : sl.points) il += pt.corr_iters;
    if (iq <= il) ++wins;
    std::size_t common = std::min(sq.points.size(), sl.points.size());
    for (std::size_t k = 0; k < common; ++k)
      worst = std::max(
          worst, (sq.points[k].beta - sl.points[k].beta).cwiseAbs().maxCoeff());
  }
  double secs = seconds_since(t0);
  bool ok = wins >= 15 && worst < 1e-5;
  report(ok, fmt("8. warm starts: quadratic <= linear iterations on %d of 20 "
                 "(>= 15), path sup-diff %.3e (< 1e-05), %.0f s",
                 wins, worst, secs));
}

// --------------------------------------------------------------------------
// 9. The MCP path with gamma = 1e4 coincides with the LASSO path.
void check_mcp_lasso_limit() {
  double worst = 0.0;
  PathConfig config;
  for (int i = 0; i < 4; ++i) {
    Family fam = (i % 2 == 0) ? Family::Logistic : Family::Poisson;
    Dataset d = sim_instance(fam, 60, 10, 0.0, 6000 + i);
    PathSolution sl = solve_path(d, lasso(), config);
    PathSolution sm = solve_path(d, mcp(1e4), config);
    std::size_t common = std::min(sl.points.size(), sm.points.size());
    for (std::size_t k = 0; k < common; ++k)
      worst = std::max(
          worst, (sl.points[k].beta - sm.points[k].beta).cwiseAbs().maxCoeff());
  }
  bool ok = worst < 1e-2;
  report(ok,
         fmt("9. mcp gamma=1e4 vs lasso: worst sup-diff %.3e (< 1e-02)", worst));
}

// --------------------------------------------------------------------------
// 10. Property suites, re-run inline: finite-difference gradient/curvature,
//     coordinate-update minimality, EBIC = BIC at gamma_e = 0, and the AR(1)
//     design correlation.
void check_properties() {
  // (a) score and weight match finite differences of the likelihood.
  double worst_grad = 0.0, worst_curv = 0.0;
  for (int i = 0; i < 10; ++i) {
    Family fam = (i % 2 == 0) ? Family::Logistic : Family::Poisson;
    Dataset d = sim_instance(fam, 40, 8, 0.3, 7000 + i);
    Rng rng(7100 + i);
    const int m = static_cast<int>(d.p()) + 1;
    Coefficients b(m);
    for (int j = 0; j < m; ++j) b[j] = 0.3 * rng.normal();
    Vector sc = score(d, b);
    auto nll = [&](const Vector& x) { return neg_log_likelihood(d, x); };
    Vector g = oracles::fd_gradient(nll, b, 1e-6);
    worst_grad = std::max(worst_grad, (g + sc).cwiseAbs().maxCoeff() /
                                          std::max(1.0, g.cwiseAbs().maxCoeff()));
    // Curvature: directional second difference vs the weighted quadratic form.
    Vector v(m);
    for (int j = 0; j < m; ++j) v[j] = rng.normal();
    v /= v.norm();
    double h = 1e-4;
    double second =
        (nll(b + h * v) - 2.0 * nll(b) + nll(b - h * v)) / (h * h);
    Vector w = weight_diag(d, b);
    Vector xv = Vector::Constant(d.n(), v[0]);
    for (int j = 1; j < m; ++j) xv += v[j] * d.X.col(j - 1);
    double quad = (w.array() * xv.array().square()).mean();
    worst_curv = std::max(worst_curv,
                          std::fabs(second - quad) / std::max(1.0, quad));
  }
  bool ok_fd = worst_grad < 1e-5 && worst_curv < 1e-4;

  // (b) the penalized coordinate update minimizes its 1-d objective.
  double worst_gap = 0.0;
  Rng rng(7200);
  for (int i = 0; i < 400; ++i) {
    double v = 0.2 + 2.0 * rng.uniform();
    double z = 3.0 * rng.normal();
    double lam = 0.5 * rng.uniform();
    bool use_mcp = i % 2 == 1;
    double gamma = 1.3 + 3.0 * rng.uniform();
    PenaltySpec pen = use_mcp ? mcp(gamma) : lasso();
    if (use_mcp && v <= 1.0 / gamma) continue;  // outside the update's domain
    double b = cd_update(pen, lam, z, v);
    auto obj = [&](double t) {
      return 0.5 * v * t * t - z * t + penalty_value(pen, lam, t);
    };
    double lim = std::fabs(z) / v + 1.0;
    if (use_mcp) lim = std::max(lim, std::fabs(z) / (v - 1.0 / gamma) + 1.0);
    double best = oracles::grid_min_value(obj, -lim, lim, 4001);
    worst_gap = std::max(worst_gap, obj(b) - best);
  }
  bool ok_cd = worst_gap < 1e-6;

  // (c) the information criterion reduces to BIC at gamma_e = 0.
  Dataset d = sim_instance(Family::Logistic, 80, 12, 0.0, 7300);
  PathConfig config;
  config.K = 40;
  PathSolution sol = solve_path(d, lasso(), config);
  double worst_ebic = 0.0;
  for (const PathPoint& pt : sol.points) {
    int nu = 0;
    for (int j = 1; j <= 12; ++j) nu += pt.beta[j] != 0.0;
    double bic = 2.0 * 80.0 * neg_log_likelihood(d, pt.beta) +
                 nu * std::log(80.0);
    worst_ebic =
        std::max(worst_ebic, std::fabs(ebic_score(d, pt, 0.0, 12) - bic));
  }
  bool ok_ebic = worst_ebic < 1e-9;

  // (d) the simulated design carries the autoregressive correlation.
  Rng drng(7400);
  Matrix X = generate_design(20000, 6, 0.5, drng);
  double worst_corr = 0.0;
  for (int j = 0; j < 5; ++j)
    for (int l = j + 1; l < 6; ++l) {
      double expect = std::pow(0.5, l - j);
      worst_corr = std::max(
          worst_corr,
          std::fabs(oracles::correlation(X.col(j), X.col(l)) - expect));
    }
  bool ok_ar = worst_corr < 0.05;

  bool ok = ok_fd && ok_cd && ok_ebic && ok_ar;
  report(ok, fmt("10. properties: fd grad %.2e curv %.2e (< 1e-05/1e-04), "
                 "cd-update gap %.2e (< 1e-06), ebic-bic %.2e (< 1e-09), "
                 "ar1 corr err %.3f (< 0.05)",
                 worst_grad, worst_curv, worst_gap, worst_ebic, worst_corr));
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  check_certification();
  check_oracle_equivalence();
  check_recovery(3, Family::Logistic, mcp(3.0), 1.0, false, 0.0, 0.6, 101);
  check_recovery(4, Family::Logistic, lasso(), 2.0, true, 2.5, 5.0, 102);
  check_recovery(5, Family::Poisson, lasso(), 3.0, true, 0.0, 0.8, 103);
  check_entry_order();
  check_timing();
  check_warm_start_orders();
  check_mcp_lasso_limit();
  check_properties();
  std::printf("%s: %d of 10 checks passed in %.0f s\n",
              fails == 0 ? "ACCEPTED" : "REJECTED", 10 - fails,
              seconds_since(t0));
  return fails == 0 ? 0 : 1;
}
