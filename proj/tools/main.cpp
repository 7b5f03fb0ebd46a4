#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pathglm/io.hpp"
#include "pathglm/sim.hpp"

namespace {

using namespace pathglm;

struct CommonOpts {
  std::string input;
  std::string response = "y";
  std::string family = "logistic";
  std::string penalty = "lasso";
  double gamma = 3.0;
  int nlambda = 100;
  double lambda_min_ratio = 0.01;
  double switch_c = 1.0;
  double saturation_eps = 1e-4;
  int max_active = 0;
  double tol = 1e-7;
  std::uint64_t seed = 1;
  bool standardize = false;
  bool plot = false;
  std::string approx = "quadratic";
  std::string out = ".";
};

void add_model_flags(CLI::App* cmd, CommonOpts& o, bool with_input) {
  if (with_input) {
    cmd->add_option("--input", o.input, "input CSV (header row required)")
        ->required();
    cmd->add_option("--response", o.response,
                    "response column name or 0-based index (default y)");
    cmd->add_flag("--standardize", o.standardize,
                  "center/scale predictors; outputs are back-transformed");
  }
  cmd->add_option("--family", o.family, "logistic | poisson")
      ->check(CLI::IsMember({"logistic", "poisson"}));
  cmd->add_option("--penalty", o.penalty, "lasso | mcp")
      ->check(CLI::IsMember({"lasso", "mcp"}));
  cmd->add_option("--gamma", o.gamma, "MCP concavity (> 1; mcp only)");
  cmd->add_option("--nlambda", o.nlambda, "grid size K (default 100)");
  cmd->add_option("--lambda-min-ratio", o.lambda_min_ratio,
                  "grid floor delta (default 0.01)");
  cmd->add_option("--switch-c", o.switch_c,
                  "corrector switch: Newton while nonzeros <= c*sqrt(n)");
  cmd->add_option("--saturation-eps", o.saturation_eps,
                  "logistic saturation threshold (default 1e-4)");
  cmd->add_option("--max-active", o.max_active,
                  "active-set cap (0 = min(n,p)+1)");
  cmd->add_option("--tol", o.tol, "corrector tolerance (default 1e-7)");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_flag("--plot", o.plot, "also write path.svg");
  cmd->add_option("--approx", o.approx, "warm-start order: linear | quadratic")
      ->check(CLI::IsMember({"linear", "quadratic"}));
  cmd->add_option("--out", o.out, "output directory (default .)");
}

PenaltySpec make_penalty(const CommonOpts& o, bool gamma_given) {
  if (gamma_given && o.penalty != "mcp")
    throw CLI::ValidationError("--gamma requires --penalty mcp");
  PenaltySpec p;
  p.kind = o.penalty == "mcp" ? PenaltyKind::Mcp : PenaltyKind::Lasso;
  p.gamma = o.gamma;
  p.validate();
  return p;
}

PathConfig make_config(const CommonOpts& o) {
  PathConfig c;
  c.K = o.nlambda;
  c.delta = o.lambda_min_ratio;
  c.c = o.switch_c;
  c.epsilon = o.saturation_eps;
  c.max_active = o.max_active;
  c.corr_tol = o.tol;
  c.approx = o.approx == "linear" ? ApproxOrder::Linear : ApproxOrder::Quadratic;
  c.validate();
  return c;
}

Family make_family(const CommonOpts& o) {
  return o.family == "poisson" ? Family::Poisson : Family::Logistic;
}

std::string join(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

// Shared fit/cv body; `folds` == 0 means EBIC selection.
int run_fit(const CommonOpts& o, bool gamma_given, int folds, double ebic_gamma) {
  Dataset data = load_csv(o.input, o.response, make_family(o));
  PenaltySpec penalty = make_penalty(o, gamma_given);
  PathConfig config = make_config(o);
  std::filesystem::create_directories(o.out);

  Standardizer std_fit;
  if (o.standardize) {
    std_fit = Standardizer::fit(data.X);
    data.X = std_fit.apply(data.X);
  }

  PathSolution path = solve_path(data, penalty, config);
  SelectionReport sel =
      folds > 0 ? select_cv_on_path(data, path, penalty, config,
                                    make_folds(data.n(), folds, o.seed))
                : select_ebic(path, data, ebic_gamma);

  Coefficients chosen = sel.chosen_beta;
  if (o.standardize) {
    std::vector<Coefficients> orig;
    orig.reserve(path.points.size());
    for (const PathPoint& pt : path.points)
      orig.push_back(std_fit.unstandardize(pt.beta));
    write_path_csv(join(o.out, "path.csv"), path, &orig);
    chosen = std_fit.unstandardize(chosen);
  } else {
    write_path_csv(join(o.out, "path.csv"), path);
  }
  if (folds > 0) write_cv_csv(join(o.out, "cv.csv"), sel);
  write_summary_json(join(o.out, "summary.json"), data, path, sel, chosen);
  if (o.plot) {
    PathSolution shown = path;
    if (o.standardize)
      for (PathPoint& pt : shown.points) pt.beta = std_fit.unstandardize(pt.beta);
    write_path_svg(join(o.out, "path.svg"), shown);
  }
  return 0;
}

int run_simulate(const CommonOpts& o, bool gamma_given, const SimSpec& partial) {
  SimSpec spec = partial;
  spec.family = make_family(o);
  spec.penalty = make_penalty(o, gamma_given);
  spec.config = make_config(o);
  spec.seed = o.seed;
  std::filesystem::create_directories(o.out);
  ExperimentReport report = run_experiment(spec);
  std::string table = format_report(report);
  std::cout << table;
  std::ofstream out(join(o.out, "report.txt"));
  if (!out) throw Error("cannot open for writing: " + join(o.out, "report.txt"));
  out << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regularization-path solver for penalized GLMs"};
  app.require_subcommand(1);

  CommonOpts fit_o, cv_o, sim_o;
  double ebic_gamma = 1.0;
  int folds = 5;
  SimSpec sim_spec;
  std::string sim_select = "ebic";
  double sim_ebic_gamma = 1.0;
  int sim_folds = 5;

  CLI::App* fit = app.add_subcommand("fit", "fit a path, select by EBIC");
  add_model_flags(fit, fit_o, true);
  fit->add_option("--ebic-gamma", ebic_gamma, "EBIC gamma_e (default 1)");

  CLI::App* cv = app.add_subcommand("cv", "fit a path, select by K-fold CV");
  add_model_flags(cv, cv_o, true);
  cv->add_option("--folds", folds, "number of folds (default 5)");

  CLI::App* sim = app.add_subcommand("simulate", "run a simulation experiment");
  add_model_flags(sim, sim_o, false);
  sim->add_option("-n,--n", sim_spec.n, "observations per repetition");
  sim->add_option("-p,--p", sim_spec.p, "predictors");
  sim->add_option("-d,--d", sim_spec.d, "nonzero count (multiple of 3)");
  sim->add_option("--rho", sim_spec.rho, "AR(1) design correlation");
  sim->add_option("--reps", sim_spec.reps, "repetitions");
  sim->add_option("--select", sim_select, "ebic | cv")
      ->check(CLI::IsMember({"ebic", "cv"}));
  sim->add_option("--ebic-gamma", sim_ebic_gamma, "EBIC gamma_e (default 1)");
  sim->add_option("--folds", sim_folds, "CV folds (with --select cv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed())
      return run_fit(fit_o, fit->count("--gamma") > 0, 0, ebic_gamma);
    if (cv->parsed())
      return run_fit(cv_o, cv->count("--gamma") > 0, folds, 1.0);
    if (sim->count("--folds") > 0 && sim_select != "cv")
      throw CLI::ValidationError("--folds requires --select cv");
    sim_spec.selection = sim_select;
    sim_spec.ebic_gamma = sim_ebic_gamma;
    sim_spec.cv_folds = sim_folds;
    return run_simulate(sim_o, sim->count("--gamma") > 0, sim_spec);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "pathglm: usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "pathglm: parse error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "pathglm: domain error: " << e.what() << "\n";
    return 1;
  } catch (const DegenerateResponseError& e) {
    std::cerr << "pathglm: degenerate response: " << e.what() << "\n";
    return 1;
  } catch (const SingularSystemError& e) {
    std::cerr << "pathglm: singular system: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "pathglm: numerical error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pathglm: error: " << e.what() << "\n";
    return 1;
  }
}
