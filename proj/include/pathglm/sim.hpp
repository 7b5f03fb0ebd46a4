#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pathglm/select.hpp"

namespace pathglm {

// Deterministic random layer. The standard library's distributions are
// implementation-defined, so draws are derived from raw mt19937_64 output to
// make (seed -> stream) stable across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }
  double uniform();           // (0, 1]
  double normal();            // Box-Muller, cached pair
  int bernoulli(double prob); // 1 with probability prob
  long poisson(double mean);  // exact (Knuth product, additive splitting)
  void shuffle(std::vector<int>& v);  // Fisher-Yates

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Derived per-repetition seed (SplitMix64 mix), order-independent.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t rep);

struct SimSpec {
  Family family = Family::Logistic;
  int n = 500;
  int p = 1000;
  int d = 3;        // nonzero count of beta_true
  double rho = 0.0; // AR(1) design correlation
  int reps = 20;
  std::uint64_t seed = 1;
  PenaltySpec penalty;
  PathConfig config;
  std::string selection = "ebic";  // "ebic" | "cv"
  double ebic_gamma = 1.0;
  int cv_folds = 5;

  void validate() const;
  // The planted coefficient vector: d/3 repetitions of the leading 7-block
  // (3, 1.5, 0, 0, 2, 0, 0) for logistic, (1.2, 0.6, 0, 0, 0.8, 0, 0) for
  // Poisson; d = 3 uses the single leading block. No intercept (beta_0 = 0).
  Vector beta_true() const;
};

// Rows i.i.d. N(0, Sigma), Sigma_jl = rho^|j-l|, by the AR(1) recursion
// x_1 = z_1, x_j = rho x_{j-1} + sqrt(1-rho^2) z_j.
Matrix generate_design(int n, int p, double rho, Rng& rng);

// theta_i = x_i' beta_true (no intercept); Bernoulli / Poisson sampling.
Vector generate_response(Family family, const Matrix& X,
                         const Vector& beta_true, Rng& rng);

struct Metrics {
  int fp = 0;
  int tp = 0;
  double l1_loss = 0.0;
  double l2_loss = 0.0;
};

// Exact-zero support comparison over penalized coordinates; intercept excluded.
Metrics compute_metrics(const Coefficients& beta_hat, const Vector& beta_true);

struct SummaryStat {
  double median = 0.0;
  double sd = 0.0;  // standard deviation across repetitions; 0 for reps = 1
};

struct ExperimentReport {
  SimSpec spec;
  int reps_done = 0;
  int reps_excluded = 0;  // degenerate-response draws
  SummaryStat fp, tp, l1, l2, time_s;
  std::vector<Metrics> per_rep;
  std::vector<double> per_rep_time;
};

ExperimentReport run_experiment(const SimSpec& spec);

// Tab-delimited table: Model | Method | FP | TP | l1 | l2 | time, cells
// median(sd); the header comments document the (sd) convention and exclusions.
std::string format_report(const ExperimentReport& report);

}  // namespace pathglm
