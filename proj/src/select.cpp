#include "pathglm/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pathglm/sim.hpp"

namespace pathglm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int nonzero_penalized(const Coefficients& beta) {
  int nu = 0;
  for (Eigen::Index j = 1; j < beta.size(); ++j)
    if (beta[j] != 0.0) ++nu;
  return nu;
}

Dataset subset_rows(const Dataset& data, const std::vector<int>& rows) {
  Dataset out;
  out.family = data.family;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), data.p());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    out.X.row(static_cast<Eigen::Index>(t)) = data.X.row(rows[t]);
    out.y[static_cast<Eigen::Index>(t)] = data.y[rows[t]];
  }
  return out;
}

}  // namespace

double log_choose(int p, int nu) {
  if (nu < 0 || nu > p)
    throw std::invalid_argument("log_choose: need 0 <= nu <= p");
  return std::lgamma(p + 1.0) - std::lgamma(nu + 1.0) - std::lgamma(p - nu + 1.0);
}

double ebic_score(const Dataset& data, const PathPoint& point, double gamma_e,
                  int p) {
  if (gamma_e < 0.0)
    throw std::invalid_argument("ebic_score: gamma_e must be >= 0");
  int nu = nonzero_penalized(point.beta);
  double n = static_cast<double>(data.n());
  return 2.0 * n * neg_log_likelihood(data, point.beta) +
         nu * std::log(n) + 2.0 * gamma_e * log_choose(p, nu);
}

SelectionReport select_ebic(const PathSolution& path, const Dataset& data,
                            double gamma_e) {
  if (path.points.empty())
    throw std::invalid_argument("select_ebic: empty path");
  SelectionReport rep;
  rep.criterion = "ebic";
  int best = 0;
  double best_score = kInf;
  for (std::size_t k = 0; k < path.points.size(); ++k) {
    double s = ebic_score(data, path.points[k], gamma_e,
                          static_cast<int>(data.p()));
    rep.lambdas.push_back(path.points[k].lambda);
    rep.scores.push_back(s);
    if (s < best_score) {  // strict: ties stay with the larger lambda
      best_score = s;
      best = static_cast<int>(k);
    }
  }
  rep.chosen_index = best;
  rep.chosen_beta = path.points[static_cast<std::size_t>(best)].beta;
  return rep;
}

std::vector<int> make_folds(Eigen::Index n, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("make_folds: need folds >= 2");
  if (folds > n) throw std::invalid_argument("make_folds: folds exceed n");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < perm.size(); ++i)
    fold_of[static_cast<std::size_t>(perm[i])] = static_cast<int>(i) % folds;
  return fold_of;
}

double held_out_deviance(const Dataset& data, const Coefficients& beta) {
  Vector theta = data.X * beta.tail(data.p());
  theta.array() += beta[0];
  double acc = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    double y = data.y[i];
    double dev = cumulant_value(data.family, theta[i]) - y * theta[i];
    if (data.family == Family::Poisson && y > 0.0)
      dev += y * std::log(y) - y;  // saturated term; 0 log 0 := 0
    acc += 2.0 * dev;
  }
  double out = acc / static_cast<double>(data.n());
  return std::isfinite(out) ? out : kInf;  // overflowed fit never wins
}

SelectionReport select_cv_on_path(const Dataset& data,
                                  const PathSolution& full,
                                  const PenaltySpec& penalty,
                                  const PathConfig& config,
                                  const std::vector<int>& fold_of) {
  if (full.points.empty())
    throw std::invalid_argument("select_cv_on_path: empty path");
  if (static_cast<Eigen::Index>(fold_of.size()) != data.n())
    throw std::invalid_argument("select_cv_on_path: fold_of length must be n");
  int folds = 0;
  for (int f : fold_of) {
    if (f < 0) throw std::invalid_argument("select_cv_on_path: negative fold id");
    folds = std::max(folds, f + 1);
  }
  if (folds < 2)
    throw std::invalid_argument("select_cv_on_path: need at least 2 folds");

  const std::size_t m = full.points.size();
  // dev(f, k): held-out deviance of fold f at grid point k; +inf where the
  // fold's path stopped before reaching k.
  std::vector<std::vector<double>> dev(static_cast<std::size_t>(folds),
                                       std::vector<double>(m, kInf));
  for (int f = 0; f < folds; ++f) {
    std::vector<int> train_rows, test_rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
      (fold_of[i] == f ? test_rows : train_rows).push_back(static_cast<int>(i));
    if (test_rows.empty())
      throw std::invalid_argument("select_cv_on_path: empty fold " + std::to_string(f));
    Dataset train = subset_rows(data, train_rows);
    Dataset test = subset_rows(data, test_rows);
    PathSolution fold_path;
    try {
      Vector grid(static_cast<Eigen::Index>(m));
      for (std::size_t k = 0; k < m; ++k)
        grid[static_cast<Eigen::Index>(k)] = full.points[k].lambda;
      fold_path = solve_path_on_grid(train, penalty, config, grid);
    } catch (const DegenerateResponseError& e) {
      throw FoldDegeneracyError("fold " + std::to_string(f) +
                                " training response is degenerate: " + e.what());
    }
    for (std::size_t k = 0; k < fold_path.points.size() && k < m; ++k)
      dev[static_cast<std::size_t>(f)][k] =
          held_out_deviance(test, fold_path.points[k].beta);
  }

  SelectionReport rep;
  rep.criterion = "cv";
  int best = 0;
  double best_score = kInf;
  for (std::size_t k = 0; k < m; ++k) {
    double mean = 0.0;
    for (int f = 0; f < folds; ++f) mean += dev[static_cast<std::size_t>(f)][k];
    mean /= folds;
    double sd = 0.0;
    if (std::isfinite(mean) && folds > 1) {
      for (int f = 0; f < folds; ++f) {
        double r = dev[static_cast<std::size_t>(f)][k] - mean;
        sd += r * r;
      }
      sd = std::sqrt(sd / (folds - 1));
    } else if (!std::isfinite(mean)) {
      sd = kInf;
    }
    rep.lambdas.push_back(full.points[k].lambda);
    rep.scores.push_back(mean);
    rep.score_sd.push_back(sd);
    if (mean < best_score) {
      best_score = mean;
      best = static_cast<int>(k);
    }
  }
  rep.chosen_index = best;
  rep.chosen_beta = full.points[static_cast<std::size_t>(best)].beta;
  return rep;
}

SelectionReport select_cv_with_folds(const Dataset& data,
                                     const PenaltySpec& penalty,
                                     const PathConfig& config,
                                     const std::vector<int>& fold_of) {
  PathSolution full = solve_path(data, penalty, config);
  return select_cv_on_path(data, full, penalty, config, fold_of);
}

SelectionReport select_cv(const Dataset& data, const PenaltySpec& penalty,
                          const PathConfig& config, int folds,
                          std::uint64_t seed) {
  return select_cv_with_folds(data, penalty, config,
                              make_folds(data.n(), folds, seed));
}

}  // namespace pathglm
