#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pathglm/io.hpp"
#include "pathglm/sim.hpp"

namespace py = pybind11;
using namespace pathglm;

PYBIND11_MODULE(_core, m) {
  m.doc() = "regularization-path solver for penalized GLMs";

  py::enum_<Family>(m, "Family")
      .value("Logistic", Family::Logistic)
      .value("Poisson", Family::Poisson);

  py::enum_<PenaltyKind>(m, "PenaltyKind")
      .value("Lasso", PenaltyKind::Lasso)
      .value("Mcp", PenaltyKind::Mcp);

  py::enum_<CorrectorKind>(m, "CorrectorKind")
      .value("NewtonRaphson", CorrectorKind::NewtonRaphson)
      .value("CoordinateDescent", CorrectorKind::CoordinateDescent);

  py::enum_<StopReason>(m, "StopReason")
      .value("GridExhausted", StopReason::GridExhausted)
      .value("Saturated", StopReason::Saturated)
      .value("MaxActiveReached", StopReason::MaxActiveReached);

  py::enum_<ApproxOrder>(m, "ApproxOrder")
      .value("NoneOrder", ApproxOrder::None)
      .value("Linear", ApproxOrder::Linear)
      .value("Quadratic", ApproxOrder::Quadratic);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](Matrix X, Vector y, Family family) {
             Dataset d{std::move(X), std::move(y), family};
             d.validate();
             return d;
           }),
           py::arg("X"), py::arg("y"), py::arg("family"))
      .def_readwrite("X", &Dataset::X)
      .def_readwrite("y", &Dataset::y)
      .def_readwrite("family", &Dataset::family)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("p", &Dataset::p)
      .def("validate", &Dataset::validate);

  py::class_<PenaltySpec>(m, "PenaltySpec")
      .def(py::init<>())
      .def(py::init([](PenaltyKind kind, double gamma) {
             PenaltySpec s;
             s.kind = kind;
             s.gamma = gamma;
             s.validate();
             return s;
           }),
           py::arg("kind"), py::arg("gamma") = 3.0)
      .def_readwrite("kind", &PenaltySpec::kind)
      .def_readwrite("gamma", &PenaltySpec::gamma)
      .def("effective", &PenaltySpec::effective, py::arg("u_min"))
      .def("validate", &PenaltySpec::validate);

  py::class_<PathConfig>(m, "PathConfig")
      .def(py::init<>())
      .def_readwrite("K", &PathConfig::K)
      .def_readwrite("delta", &PathConfig::delta)
      .def_readwrite("c", &PathConfig::c)
      .def_readwrite("epsilon", &PathConfig::epsilon)
      .def_readwrite("max_active", &PathConfig::max_active)
      .def_readwrite("corr_tol", &PathConfig::corr_tol)
      .def_readwrite("max_corr_iter", &PathConfig::max_corr_iter)
      .def_readwrite("theta_cap", &PathConfig::theta_cap)
      .def_readwrite("approx", &PathConfig::approx)
      .def("validate", &PathConfig::validate);

  py::class_<PathPoint>(m, "PathPoint")
      .def(py::init<>())
      .def_readwrite("lambda_", &PathPoint::lambda)
      .def_readwrite("beta", &PathPoint::beta)
      .def_readwrite("active_set", &PathPoint::active_set)
      .def_readwrite("corrector", &PathPoint::corrector)
      .def_readwrite("corr_iters", &PathPoint::corr_iters)
      .def_readwrite("kkt_residual", &PathPoint::kkt_residual)
      .def_readwrite("u_min", &PathPoint::u_min)
      .def_readwrite("neg_loglik", &PathPoint::neg_loglik);

  py::class_<CorrectorResult>(m, "CorrectorResult")
      .def_readonly("beta", &CorrectorResult::beta)
      .def_readonly("active_set", &CorrectorResult::active_set)
      .def_readonly("iters", &CorrectorResult::iters)
      .def_readonly("kkt_residual", &CorrectorResult::kkt_residual)
      .def_readonly("converged", &CorrectorResult::converged);

  py::class_<PredictorDerivatives>(m, "PredictorDerivatives")
      .def_readonly("s", &PredictorDerivatives::s)
      .def_readonly("d", &PredictorDerivatives::d);

  py::class_<PathSolution>(m, "PathSolution")
      .def_readonly("points", &PathSolution::points)
      .def_readonly("grid", &PathSolution::grid)
      .def_readonly("stop_reason", &PathSolution::stop_reason)
      .def_readonly("family", &PathSolution::family)
      .def_readonly("penalty", &PathSolution::penalty)
      .def_readonly("config", &PathSolution::config);

  py::class_<SelectionReport>(m, "SelectionReport")
      .def_readonly("criterion", &SelectionReport::criterion)
      .def_readonly("lambdas", &SelectionReport::lambdas)
      .def_readonly("scores", &SelectionReport::scores)
      .def_readonly("score_sd", &SelectionReport::score_sd)
      .def_readonly("chosen_index", &SelectionReport::chosen_index)
      .def_readonly("chosen_beta", &SelectionReport::chosen_beta);

  py::class_<SimSpec>(m, "SimSpec")
      .def(py::init<>())
      .def_readwrite("family", &SimSpec::family)
      .def_readwrite("n", &SimSpec::n)
      .def_readwrite("p", &SimSpec::p)
      .def_readwrite("d", &SimSpec::d)
      .def_readwrite("rho", &SimSpec::rho)
      .def_readwrite("reps", &SimSpec::reps)
      .def_readwrite("seed", &SimSpec::seed)
      .def_readwrite("penalty", &SimSpec::penalty)
      .def_readwrite("config", &SimSpec::config)
      .def_readwrite("selection", &SimSpec::selection)
      .def_readwrite("ebic_gamma", &SimSpec::ebic_gamma)
      .def_readwrite("cv_folds", &SimSpec::cv_folds)
      .def("beta_true", &SimSpec::beta_true)
      .def("validate", &SimSpec::validate);

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("fp", &Metrics::fp)
      .def_readonly("tp", &Metrics::tp)
      .def_readonly("l1_loss", &Metrics::l1_loss)
      .def_readonly("l2_loss", &Metrics::l2_loss);

  py::class_<SummaryStat>(m, "SummaryStat")
      .def_readonly("median", &SummaryStat::median)
      .def_readonly("sd", &SummaryStat::sd);

  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_readonly("spec", &ExperimentReport::spec)
      .def_readonly("reps_done", &ExperimentReport::reps_done)
      .def_readonly("reps_excluded", &ExperimentReport::reps_excluded)
      .def_readonly("fp", &ExperimentReport::fp)
      .def_readonly("tp", &ExperimentReport::tp)
      .def_readonly("l1", &ExperimentReport::l1)
      .def_readonly("l2", &ExperimentReport::l2)
      .def_readonly("time_s", &ExperimentReport::time_s)
      .def_readonly("per_rep", &ExperimentReport::per_rep)
      .def_readonly("per_rep_time", &ExperimentReport::per_rep_time);

  m.def("neg_log_likelihood", &neg_log_likelihood, py::arg("data"), py::arg("beta"));
  m.def("score", &score, py::arg("data"), py::arg("beta"));
  m.def("weight_diag", &weight_diag, py::arg("data"), py::arg("beta"));
  m.def("third_diag", &third_diag, py::arg("data"), py::arg("beta"));
  m.def("working_response", &working_response, py::arg("data"), py::arg("beta"));
  m.def("null_intercept", &null_intercept, py::arg("data"));

  m.def("penalty_value", &penalty_value, py::arg("penalty"), py::arg("lam"), py::arg("t"));
  m.def("penalty_derivative", &penalty_derivative, py::arg("penalty"), py::arg("lam"), py::arg("t"));
  m.def("cd_update", &cd_update, py::arg("penalty"), py::arg("lam"), py::arg("z"), py::arg("v"));

  m.def("lambda_grid", &lambda_grid, py::arg("data"), py::arg("config"));
  m.def("solve_path", &solve_path, py::arg("data"), py::arg("penalty"), py::arg("config"));
  m.def("solve_path_on_grid", &solve_path_on_grid, py::arg("data"),
        py::arg("penalty"), py::arg("config"), py::arg("grid"));
  m.def("newton_correct", &newton_correct, py::arg("data"), py::arg("warm"),
        py::arg("active_set"), py::arg("lam"), py::arg("penalty"),
        py::arg("u_min"), py::arg("config"));
  m.def("cd_correct", &cd_correct, py::arg("data"), py::arg("warm"),
        py::arg("lam"), py::arg("penalty"), py::arg("u_min"), py::arg("config"));
  m.def("choose_corrector", &choose_corrector, py::arg("warm"), py::arg("n"), py::arg("c"));
  m.def("kkt_residual", &kkt_residual, py::arg("data"), py::arg("beta"),
        py::arg("active_set"), py::arg("lam"), py::arg("penalty"), py::arg("u_min"));
  m.def("predictor_derivatives", &predictor_derivatives, py::arg("data"),
        py::arg("point"), py::arg("penalty"));
  m.def("predictor_step", &predictor_step, py::arg("point"), py::arg("derivs"),
        py::arg("delta_k"), py::arg("order"));
  m.def("active_set_lasso", &active_set_lasso, py::arg("score_vec"), py::arg("lambda_k"));
  m.def("check_saturation", &check_saturation, py::arg("data"), py::arg("beta"), py::arg("config"));
  m.def("compute_u_min", &compute_u_min, py::arg("data"), py::arg("beta"), py::arg("active_set"));

  m.def("ebic_score", &ebic_score, py::arg("data"), py::arg("point"),
        py::arg("gamma_e"), py::arg("p"));
  m.def("select_ebic", &select_ebic, py::arg("path"), py::arg("data"), py::arg("gamma_e") = 1.0);
  m.def("select_cv", &select_cv, py::arg("data"), py::arg("penalty"),
        py::arg("config"), py::arg("folds") = 5, py::arg("seed") = 1);
  m.def("select_cv_on_path", &select_cv_on_path, py::arg("data"), py::arg("path"),
        py::arg("penalty"), py::arg("config"), py::arg("fold_of"));
  m.def("make_folds", &make_folds, py::arg("n"), py::arg("folds"), py::arg("seed") = 1);
  m.def("held_out_deviance", &held_out_deviance, py::arg("data"), py::arg("beta"));
  m.def("log_choose", &log_choose, py::arg("p"), py::arg("nu"));

  m.def(
      "generate_design",
      [](int n, int p, double rho, std::uint64_t seed) {
        Rng rng(seed);
        return generate_design(n, p, rho, rng);
      },
      py::arg("n"), py::arg("p"), py::arg("rho") = 0.0, py::arg("seed") = 1);
  m.def(
      "generate_response",
      [](Family family, const Matrix& X, const Vector& beta_true, std::uint64_t seed) {
        Rng rng(seed);
        return generate_response(family, X, beta_true, rng);
      },
      py::arg("family"), py::arg("X"), py::arg("beta_true"), py::arg("seed") = 1);
  m.def("compute_metrics", &compute_metrics, py::arg("beta_hat"), py::arg("beta_true"));
  m.def("run_experiment", &run_experiment, py::arg("spec"));
  m.def("format_report", &format_report, py::arg("report"));

  m.def("load_csv", &load_csv, py::arg("path"), py::arg("response_column"), py::arg("family"));
}
