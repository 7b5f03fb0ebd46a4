#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pathglm/select.hpp"
#include "pathglm/sim.hpp"

using namespace pathglm;

namespace {

PenaltySpec lasso() { return PenaltySpec{PenaltyKind::Lasso, 0.0}; }

Dataset planted_instance(Family fam, int n, int p, double rho,
                         std::uint64_t seed) {
  Rng rng(seed);
  Matrix X = generate_design(n, p, rho, rng);
  Vector beta_true = Vector::Zero(p);
  beta_true[0] = fam == Family::Logistic ? 1.2 : 0.7;
  if (p > 3) beta_true[3] = fam == Family::Logistic ? -1.0 : -0.5;
  Vector y = generate_response(fam, X, beta_true, rng);
  return Dataset{X, y, fam};
}

int support_size(const Coefficients& b) {
  int nu = 0;
  for (Eigen::Index j = 1; j < b.size(); ++j)
    if (b[j] != 0.0) ++nu;
  return nu;
}

}  // namespace

TEST_CASE("log binomial coefficients match exact integers") {
  for (int p = 1; p <= 30; ++p) {
    for (int k = 0; k <= p; ++k) {
      double expect = std::log(static_cast<double>(oracles::exact_binomial(p, k)));
      CHECK(log_choose(p, k) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  CHECK(log_choose(10, 0) == 0.0);
  CHECK(log_choose(10, 10) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("information criterion score") {
  Dataset d = planted_instance(Family::Logistic, 50, 10, 0.0, 3);
  const double n = 50.0;

  PathPoint pt;
  pt.beta = Coefficients::Zero(11);
  pt.beta[0] = null_intercept(d);
  pt.lambda = 0.1;

  SUBCASE("null model: no support and no complexity terms") {
    double expect = 2.0 * n * neg_log_likelihood(d, pt.beta);
    CHECK(ebic_score(d, pt, 0.0, 10) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(ebic_score(d, pt, 1.0, 10) == doctest::Approx(expect).epsilon(1e-13));
  }
  SUBCASE("three active coordinates at gamma_e = 1 add 2 log C(10,3)") {
    pt.beta[2] = 0.5;
    pt.beta[5] = -0.3;
    pt.beta[7] = 0.1;
    double base = 2.0 * n * neg_log_likelihood(d, pt.beta) + 3.0 * std::log(n);
    CHECK(ebic_score(d, pt, 0.0, 10) == doctest::Approx(base).epsilon(1e-13));
    double extra = 2.0 * std::log(120.0);  // C(10,3) = 120
    CHECK(ebic_score(d, pt, 1.0, 10) ==
          doctest::Approx(base + extra).epsilon(1e-13));
  }
  SUBCASE("score is nondecreasing in the correction weight") {
    pt.beta[2] = 0.5;
    double prev = -std::numeric_limits<double>::infinity();
    for (double g : {0.0, 0.25, 0.5, 1.0}) {
      double s = ebic_score(d, pt, g, 10);
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("criterion-based selection over a path") {
  Dataset d = planted_instance(Family::Logistic, 80, 12, 0.0, 7);
  PathConfig config;
  PathSolution sol = solve_path(d, lasso(), config);
  REQUIRE(sol.points.size() > 10);

  SUBCASE("report structure and minimality") {
    SelectionReport rep = select_ebic(sol, d, 1.0);
    CHECK(rep.criterion == "ebic");
    CHECK(rep.lambdas.size() == sol.points.size());
    CHECK(rep.scores.size() == sol.points.size());
    CHECK(rep.score_sd.empty());
    REQUIRE(rep.chosen_index >= 0);
    REQUIRE(rep.chosen_index < static_cast<int>(sol.points.size()));
    double chosen = rep.scores[rep.chosen_index];
    for (double s : rep.scores) CHECK(chosen <= s + 1e-12);
    CHECK(rep.chosen_beta ==
          sol.points[static_cast<std::size_t>(rep.chosen_index)].beta);
    // Scores recompute from the public pieces.
    for (std::size_t k = 0; k < sol.points.size(); ++k)
      CHECK(rep.scores[k] ==
            doctest::Approx(ebic_score(d, sol.points[k], 1.0, 12)));
  }
  SUBCASE("single-point path chooses index 0") {
    PathSolution one = sol;
    one.points.resize(1);
    SelectionReport rep = select_ebic(one, d, 1.0);
    CHECK(rep.chosen_index == 0);
  }
  SUBCASE("ties break toward the sparser (larger lambda) model") {
    // Force an exact tie by duplicating the first point at two lambdas.
    PathSolution two = sol;
    two.points.resize(2);
    two.points[1] = two.points[0];
    two.points[1].lambda = two.points[0].lambda * 0.9;
    SelectionReport rep = select_ebic(two, d, 1.0);
    CHECK(rep.chosen_index == 0);
  }
}

TEST_CASE("fold assignment") {
  SUBCASE("deterministic for a fixed seed, different across seeds") {
    auto a = make_folds(40, 5, 11);
    auto b = make_folds(40, 5, 11);
    auto c = make_folds(40, 5, 12);
    CHECK(a == b);
    CHECK(a != c);
  }
  SUBCASE("sizes differ by at most one and cover every fold") {
    auto f = make_folds(43, 5, 3);
    REQUIRE(f.size() == 43);
    std::vector<int> count(5, 0);
    for (int fi : f) {
      REQUIRE(fi >= 0);
      REQUIRE(fi < 5);
      ++count[fi];
    }
    int lo = *std::min_element(count.begin(), count.end());
    int hi = *std::max_element(count.begin(), count.end());
    CHECK(hi - lo <= 1);
    CHECK(lo + hi >= 17);  // 43 = 3*9 + 2*8
  }
  SUBCASE("folds equal to n is leave-one-out") {
    auto f = make_folds(12, 12, 5);
    std::set<int> seen(f.begin(), f.end());
    CHECK(seen.size() == 12);
  }
  SUBCASE("invalid fold counts throw") {
    CHECK_THROWS_AS(make_folds(10, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_folds(10, 11, 0), std::invalid_argument);
  }
}

TEST_CASE("held-out deviance closed forms") {
  SUBCASE("logistic null model on balanced data") {
    Matrix X(4, 1);
    X << 1, 2, 3, 4;
    Vector y(4);
    y << 1, 0, 1, 0;
    Dataset d{X, y, Family::Logistic};
    Coefficients b = Coefficients::Zero(2);
    CHECK(held_out_deviance(d, b) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-13));
  }
  SUBCASE("poisson with y = 1 and theta = 0 is a perfect fit") {
    Matrix X(3, 1);
    X << -1, 0, 1;
    Vector y = Vector::Ones(3);
    Dataset d{X, y, Family::Poisson};
    Coefficients b = Coefficients::Zero(2);
    // 2[e^0 - 1*0 + 1*log 1 - 1] = 0 per observation: the saturated part
    // y log y - y contributes -1 and e^theta contributes +1.
    CHECK(held_out_deviance(d, b) == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("deviance is nonnegative and zero only near saturation") {
    Dataset d = planted_instance(Family::Poisson, 30, 4, 0.0, 17);
    Coefficients b = Coefficients::Zero(5);
    b[0] = null_intercept(d);
    CHECK(held_out_deviance(d, b) >= 0.0);
  }
}

TEST_CASE("poisson deviance hand value") {
  Matrix X(2, 1);
  X << 0.0, 0.0;
  Vector y(2);
  y << 1.0, 1.0;
  Dataset d{X, y, Family::Poisson};
  Coefficients b = Coefficients::Zero(2);
  // theta = 0, mu = 1, y = 1: 2[1 - 0 + 0 - 1] = 0 per observation.
  CHECK(held_out_deviance(d, b) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("cross-validation") {
  Dataset d = planted_instance(Family::Logistic, 90, 8, 0.0, 23);
  PathConfig config;
  config.K = 40;

  SUBCASE("deterministic given the seed") {
    SelectionReport a = select_cv(d, lasso(), config, 5, 7);
    SelectionReport b = select_cv(d, lasso(), config, 5, 7);
    CHECK(a.chosen_index == b.chosen_index);
    REQUIRE(a.scores.size() == b.scores.size());
    for (std::size_t k = 0; k < a.scores.size(); ++k)
      CHECK(a.scores[k] == b.scores[k]);
  }
  SUBCASE("report structure") {
    SelectionReport rep = select_cv(d, lasso(), config, 5, 7);
    CHECK(rep.criterion == "cv");
    CHECK(rep.lambdas.size() == rep.scores.size());
    CHECK(rep.score_sd.size() == rep.scores.size());
    double chosen = rep.scores[rep.chosen_index];
    for (double s : rep.scores) CHECK(chosen <= s + 1e-12);
    for (double sd : rep.score_sd) CHECK(sd >= 0.0);
  }
  SUBCASE("a constant-response training split is a reported failure") {
    // Put every y = 1 row in folds 1..4 and all the y = 0 rows in fold 0:
    // training for fold 1 then contains fold 0 plus constant-1 rows... so
    // instead isolate the zeros: training split for fold 0 sees only ones.
    std::vector<int> fold_of(static_cast<std::size_t>(d.y.size()), 0);
    for (Eigen::Index i = 0; i < d.y.size(); ++i)
      fold_of[static_cast<std::size_t>(i)] = d.y[i] == 0.0 ? 0 : 1 + (i % 4);
    CHECK_THROWS_AS(select_cv_with_folds(d, lasso(), config, fold_of),
                    FoldDegeneracyError);
  }
}

TEST_CASE("cross-validation recovers a planted signal") {
  // Strong three-variable signal; CV should pick a model containing it.
  PathConfig config;
  config.K = 50;
  int hits = 0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) {
    Rng rng(900 + static_cast<std::uint64_t>(r));
    Matrix X = generate_design(200, 20, 0.0, rng);
    Vector bt = Vector::Zero(20);
    bt[0] = 3.0;
    bt[1] = 1.5;
    bt[4] = 2.0;
    Vector y = generate_response(Family::Logistic, X, bt, rng);
    Dataset d{X, y, Family::Logistic};
    SelectionReport rep = select_cv(d, lasso(), config, 5, 100 + r);
    bool all = rep.chosen_beta[1] != 0.0 && rep.chosen_beta[2] != 0.0 &&
               rep.chosen_beta[5] != 0.0;
    if (all) ++hits;
  }
  CHECK(hits >= 9);
}

TEST_CASE("cv scores do not depend on row order") {
  Dataset d = planted_instance(Family::Poisson, 60, 6, 0.0, 31);
  PathConfig config;
  config.K = 30;
  std::vector<int> fold_of = make_folds(60, 4, 9);
  SelectionReport base = select_cv_with_folds(d, lasso(), config, fold_of);

  // Permute the rows and compensate in the fold assignment.
  std::vector<int> perm(60);
  for (int i = 0; i < 60; ++i) perm[i] = i;
  Rng rng(77);
  rng.shuffle(perm);
  Matrix Xp(60, 6);
  Vector yp(60);
  std::vector<int> fold_p(60);
  for (int i = 0; i < 60; ++i) {
    Xp.row(i) = d.X.row(perm[i]);
    yp[i] = d.y[perm[i]];
    fold_p[static_cast<std::size_t>(i)] =
        fold_of[static_cast<std::size_t>(perm[i])];
  }
  Dataset dp{Xp, yp, Family::Poisson};
  SelectionReport permuted = select_cv_with_folds(dp, lasso(), config, fold_p);

  CHECK(base.chosen_index == permuted.chosen_index);
  REQUIRE(base.scores.size() == permuted.scores.size());
  for (std::size_t k = 0; k < base.scores.size(); ++k)
    CHECK(base.scores[k] == doctest::Approx(permuted.scores[k]).epsilon(1e-9));
}

TEST_CASE("criterion selection prefers sparse truth over dense overfit") {
  // With a strong sparse signal and the complexity weight at 1, the chosen
  // support should be small rather than the densest end of the path.
  Rng rng(55);
  Matrix X = generate_design(150, 30, 0.0, rng);
  Vector bt = Vector::Zero(30);
  bt[0] = 3.0;
  bt[1] = 1.5;
  bt[4] = 2.0;
  Vector y = generate_response(Family::Logistic, X, bt, rng);
  Dataset d{X, y, Family::Logistic};
  PathConfig config;
  PathSolution sol = solve_path(d, lasso(), config);
  SelectionReport rep = select_ebic(sol, d, 1.0);
  int nu = support_size(rep.chosen_beta);
  CHECK(nu >= 2);
  CHECK(nu <= 12);
  int tail = support_size(sol.points.back().beta);
  CHECK(nu <= tail);
}
