#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathglm/path.hpp"

namespace pathglm {

struct SelectionReport {
  std::string criterion;        // "ebic" or "cv"
  std::vector<double> lambdas;  // aligned with the emitted path points
  std::vector<double> scores;   // EBIC value or mean held-out deviance
  std::vector<double> score_sd; // across folds; empty for EBIC
  int chosen_index = 0;
  Coefficients chosen_beta;
};

// log C(p, nu) via log-gamma.
double log_choose(int p, int nu);

// 2n * neg_log_likelihood(beta) + nu log n + 2 gamma_e log C(p, nu), with nu
// the number of nonzero penalized coordinates (intercept excluded).
double ebic_score(const Dataset& data, const PathPoint& point, double gamma_e,
                  int p);

// Scores every path point; ties broken toward larger lambda (sparser model).
SelectionReport select_ebic(const PathSolution& path, const Dataset& data,
                            double gamma_e);

// Deterministic fold assignment: a seeded shuffle of 0..n-1 dealt round-robin,
// so fold sizes differ by at most one and folds = n gives leave-one-out.
std::vector<int> make_folds(Eigen::Index n, int folds, std::uint64_t seed);

// K-fold CV: fit the full-data path once to fix the grid, refit on each
// training split over that same grid, and pick the lambda minimizing the mean
// held-out deviance (ties toward larger lambda). Grid points not reached by
// every fold path score +infinity. Throws FoldDegeneracyError when a training
// split has a degenerate response.
SelectionReport select_cv(const Dataset& data, const PenaltySpec& penalty,
                          const PathConfig& config, int folds,
                          std::uint64_t seed);

// Same with an explicit fold assignment (fold_of[i] in 0..folds-1).
SelectionReport select_cv_with_folds(const Dataset& data,
                                     const PenaltySpec& penalty,
                                     const PathConfig& config,
                                     const std::vector<int>& fold_of);

// Same, reusing an already-computed full-data path.
SelectionReport select_cv_on_path(const Dataset& data,
                                  const PathSolution& full,
                                  const PenaltySpec& penalty,
                                  const PathConfig& config,
                                  const std::vector<int>& fold_of);

// Mean per-observation deviance of beta on (held-out) data:
// logistic 2[log(1+e^theta) - y theta]; Poisson 2[e^theta - y theta + y log y - y].
double held_out_deviance(const Dataset& data, const Coefficients& beta);

}  // namespace pathglm
