#include "pathglm/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "pathglm/io.hpp"

namespace pathglm {

namespace {

// Unbiased draw from {0, .., k-1} (rejects the incomplete top band).
std::uint64_t bounded_u64(Rng& rng, std::uint64_t k) {
  std::uint64_t x, r;
  do {
    x = rng.next_u64();
    r = x % k;
  } while (x - r > std::numeric_limits<std::uint64_t>::max() - (k - 1));
  return r;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

SummaryStat summarize(const std::vector<double>& v) {
  return {median_of(v), sd_of(v)};
}

std::string cell(const char* fmt, const SummaryStat& s) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, s.median, s.sd);
  return buf;
}

}  // namespace

double Rng::uniform() {
  // 53-bit mantissa shifted into (0, 1]: log(uniform()) is always finite.
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

int Rng::bernoulli(double prob) { return uniform() <= prob ? 1 : 0; }

long Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw NumericalError("poisson draw: mean must be finite and >= 0");
  long total = 0;
  // Po(a + b) = Po(a) + Po(b): split large means into chunks the Knuth
  // product method handles without underflow.
  while (mean > 30.0) {
    total += poisson(30.0);
    mean -= 30.0;
  }
  if (mean == 0.0) return total;
  double limit = std::exp(-mean);
  double prod = 1.0;
  long k = -1;
  do {
    ++k;
    prod *= uniform();
  } while (prod > limit);
  return total + k;
}

void Rng::shuffle(std::vector<int>& v) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[bounded_u64(*this, i)]);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t rep) {
  // SplitMix64 finalizer over the stream index.
  std::uint64_t z = seed + (rep + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void SimSpec::validate() const {
  if (n < 2) throw std::invalid_argument("SimSpec: n must be >= 2");
  if (p < 1) throw std::invalid_argument("SimSpec: p must be >= 1");
  if (d < 3 || d % 3 != 0)
    throw std::invalid_argument("SimSpec: d must be a positive multiple of 3");
  if (p < 7 * (d / 3))
    throw std::invalid_argument("SimSpec: p too small for d/3 blocks of 7");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("SimSpec: rho must lie in [0, 1)");
  if (reps < 1) throw std::invalid_argument("SimSpec: reps must be >= 1");
  if (selection != "ebic" && selection != "cv")
    throw std::invalid_argument("SimSpec: selection must be 'ebic' or 'cv'");
  if (ebic_gamma < 0.0)
    throw std::invalid_argument("SimSpec: ebic_gamma must be >= 0");
  if (cv_folds < 2) throw std::invalid_argument("SimSpec: cv_folds must be >= 2");
  config.validate();
  penalty.validate();
}

Vector SimSpec::beta_true() const {
  validate();
  const double logi[7] = {3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0};
  const double pois[7] = {1.2, 0.6, 0.0, 0.0, 0.8, 0.0, 0.0};
  const double* block = family == Family::Logistic ? logi : pois;
  Vector beta = Vector::Zero(p);
  for (int b = 0; b < d / 3; ++b)
    for (int t = 0; t < 7; ++t) beta[7 * b + t] = block[t];
  return beta;
}

Matrix generate_design(int n, int p, double rho, Rng& rng) {
  Matrix X(n, p);
  double carry = std::sqrt(1.0 - rho * rho);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = rng.normal();
    for (int j = 1; j < p; ++j) X(i, j) = rho * X(i, j - 1) + carry * rng.normal();
  }
  return X;
}

Vector generate_response(Family family, const Matrix& X,
                         const Vector& beta_true, Rng& rng) {
  Vector theta = X * beta_true;
  Vector y(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (family == Family::Logistic)
      y[i] = rng.bernoulli(mean_value(Family::Logistic, theta[i]));
    else
      y[i] = static_cast<double>(rng.poisson(std::exp(theta[i])));
  }
  return y;
}

Metrics compute_metrics(const Coefficients& beta_hat, const Vector& beta_true) {
  if (beta_hat.size() != beta_true.size() + 1)
    throw std::invalid_argument("compute_metrics: beta_hat must include intercept");
  Metrics m;
  double l1 = 0.0, l2 = 0.0;
  for (Eigen::Index j = 0; j < beta_true.size(); ++j) {
    double hat = beta_hat[j + 1];
    double tru = beta_true[j];
    if (tru != 0.0 && hat != 0.0) ++m.tp;
    if (tru == 0.0 && hat != 0.0) ++m.fp;
    l1 += std::fabs(hat - tru);
    l2 += (hat - tru) * (hat - tru);
  }
  m.l1_loss = l1;
  m.l2_loss = std::sqrt(l2);
  return m;
}

ExperimentReport run_experiment(const SimSpec& spec) {
  spec.validate();
  ExperimentReport rep;
  rep.spec = spec;
  Vector beta_true = spec.beta_true();

  std::uint64_t attempt = 0;
  const std::uint64_t max_attempts = static_cast<std::uint64_t>(spec.reps) * 10;
  while (rep.reps_done < spec.reps && attempt < max_attempts) {
    Rng rng(mix_seed(spec.seed, attempt));
    ++attempt;
    Matrix X = generate_design(spec.n, spec.p, spec.rho, rng);
    Vector y = generate_response(spec.family, X, beta_true, rng);
    Dataset data{std::move(X), std::move(y), spec.family};
    try {
      auto t0 = std::chrono::steady_clock::now();
      PathSolution path = solve_path(data, spec.penalty, spec.config);
      auto t1 = std::chrono::steady_clock::now();
      SelectionReport sel =
          spec.selection == "ebic"
              ? select_ebic(path, data, spec.ebic_gamma)
              : select_cv_on_path(data, path, spec.penalty, spec.config,
                                  make_folds(data.n(), spec.cv_folds,
                                             mix_seed(spec.seed, attempt - 1) ^ 0x5DEECE66DULL));
      rep.per_rep.push_back(compute_metrics(sel.chosen_beta, beta_true));
      rep.per_rep_time.push_back(std::chrono::duration<double>(t1 - t0).count());
      ++rep.reps_done;
    } catch (const DegenerateResponseError&) {
      ++rep.reps_excluded;  // redraw with the next derived seed
    }
  }

  std::vector<double> fp, tp, l1, l2;
  for (const Metrics& m : rep.per_rep) {
    fp.push_back(m.fp);
    tp.push_back(m.tp);
    l1.push_back(m.l1_loss);
    l2.push_back(m.l2_loss);
  }
  rep.fp = summarize(fp);
  rep.tp = summarize(tp);
  rep.l1 = summarize(l1);
  rep.l2 = summarize(l2);
  rep.time_s = summarize(rep.per_rep_time);
  return rep;
}

std::string format_report(const ExperimentReport& report) {
  const SimSpec& s = report.spec;
  std::string method = std::string(to_string(s.penalty.kind)) + "-" + s.selection;
  std::string out;
  out += "# simulation report: cells are median(sd) across repetitions";
  out += " (sd uses the n-1 denominator)\n";
  char line[256];
  std::snprintf(line, sizeof(line),
                "# n=%d p=%d d=%d rho=%g reps_done=%d reps_excluded=%d "
                "(degenerate-response draws, redrawn)\n",
                s.n, s.p, s.d, s.rho, report.reps_done, report.reps_excluded);
  out += line;
  out += "Model\tMethod\tFP\tTP\tl1 loss\tl2 loss\ttime(s)\n";
  out += std::string(to_string(s.family)) + "\t" + method + "\t" +
         cell("%.2f(%.2f)", report.fp) + "\t" + cell("%.2f(%.2f)", report.tp) +
         "\t" + cell("%.2f(%.2f)", report.l1) + "\t" +
         cell("%.2f(%.2f)", report.l2) + "\t" +
         cell("%.3f(%.3f)", report.time_s) + "\n";
  return out;
}

}  // namespace pathglm
