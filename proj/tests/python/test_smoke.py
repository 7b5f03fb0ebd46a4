"""End-to-end smoke tests for the python module."""

import math

import numpy as np
import pytest

import pathglm


def make_instance(family, n=80, p=10, seed=3):
    X = pathglm.generate_design(n, p, rho=0.0, seed=seed)
    beta_true = np.zeros(p)
    beta_true[0] = 1.5
    beta_true[1] = -1.0
    y = pathglm.generate_response(family, X, beta_true, seed=seed + 1)
    return pathglm.Dataset(X, y, family)


def test_module_surface():
    for name in (
        "Dataset",
        "PathConfig",
        "PenaltySpec",
        "solve_path",
        "select_ebic",
        "select_cv",
        "run_experiment",
    ):
        assert hasattr(pathglm, name)


def test_path_end_to_end_logistic():
    data = make_instance(pathglm.Family.Logistic)
    config = pathglm.PathConfig()
    penalty = pathglm.PenaltySpec(pathglm.PenaltyKind.Lasso)
    sol = pathglm.solve_path(data, penalty, config)

    assert len(sol.points) > 10
    first = sol.points[0]
    assert np.allclose(np.asarray(first.beta)[1:], 0.0)
    lambdas = [pt.lambda_ for pt in sol.points]
    assert all(a > b for a, b in zip(lambdas, lambdas[1:]))
    # Every emitted point is certified against the optimality conditions.
    assert max(pt.kkt_residual for pt in sol.points) < 10.0 * config.corr_tol

    report = pathglm.select_ebic(sol, data, gamma_e=1.0)
    assert report.criterion == "ebic"
    assert 0 <= report.chosen_index < len(sol.points)
    chosen = np.asarray(report.chosen_beta)
    point = np.asarray(sol.points[report.chosen_index].beta)
    assert np.array_equal(chosen, point)


def test_path_end_to_end_poisson_mcp():
    data = make_instance(pathglm.Family.Poisson, seed=11)
    config = pathglm.PathConfig()
    penalty = pathglm.PenaltySpec(pathglm.PenaltyKind.Mcp, gamma=3.0)
    sol = pathglm.solve_path(data, penalty, config)
    assert len(sol.points) > 5
    assert max(pt.kkt_residual for pt in sol.points) < 10.0 * config.corr_tol
    assert sol.penalty.kind == pathglm.PenaltyKind.Mcp


def test_grid_shape_matches_config():
    data = make_instance(pathglm.Family.Logistic, seed=5)
    config = pathglm.PathConfig()
    config.K = 25
    grid = pathglm.lambda_grid(data, config)
    assert len(grid) == 25
    ratio = grid[1] / grid[0]
    for a, b in zip(grid, grid[1:]):
        assert b / a == pytest.approx(ratio, rel=1e-10)
    assert grid[-1] == pytest.approx(config.delta * grid[0], rel=1e-10)


def test_constant_response_raises():
    X = pathglm.generate_design(30, 4, rho=0.0, seed=9)
    y = np.ones(30)
    data = pathglm.Dataset(X, y, pathglm.Family.Logistic)
    config = pathglm.PathConfig()
    penalty = pathglm.PenaltySpec(pathglm.PenaltyKind.Lasso)
    with pytest.raises(RuntimeError):
        pathglm.solve_path(data, penalty, config)


def test_domain_validation_raises():
    X = pathglm.generate_design(20, 3, rho=0.0, seed=13)
    y = np.full(20, 2.0)  # outside {0, 1}
    with pytest.raises(RuntimeError):
        pathglm.Dataset(X, y, pathglm.Family.Logistic)


def test_cv_selection_runs():
    data = make_instance(pathglm.Family.Logistic, n=90, seed=17)
    config = pathglm.PathConfig()
    config.K = 30
    penalty = pathglm.PenaltySpec(pathglm.PenaltyKind.Lasso)
    report = pathglm.select_cv(data, penalty, config, folds=4, seed=2)
    assert report.criterion == "cv"
    assert len(report.scores) == len(report.lambdas)
    assert len(report.score_sd) == len(report.scores)
    best = report.scores[report.chosen_index]
    assert best == min(report.scores)


def test_small_experiment_runs():
    spec = pathglm.SimSpec()
    spec.family = pathglm.Family.Logistic
    spec.n = 80
    spec.p = 14
    spec.d = 3
    spec.reps = 2
    spec.seed = 7
    spec.penalty = pathglm.PenaltySpec(pathglm.PenaltyKind.Lasso)
    spec.config.K = 30
    report = pathglm.run_experiment(spec)
    assert report.reps_done == 2
    table = pathglm.format_report(report)
    assert "TP" in table and "logistic" in table


def test_ebic_score_matches_closed_form():
    data = make_instance(pathglm.Family.Logistic, seed=23)
    config = pathglm.PathConfig()
    config.K = 20
    penalty = pathglm.PenaltySpec(pathglm.PenaltyKind.Lasso)
    sol = pathglm.solve_path(data, penalty, config)
    pt = sol.points[-1]
    nu = int(np.count_nonzero(np.asarray(pt.beta)[1:]))
    n, p = 80, 10
    expected = (
        2.0 * n * pathglm.neg_log_likelihood(data, pt.beta)
        + nu * math.log(n)
        + 2.0 * 1.0 * pathglm.log_choose(p, nu)
    )
    assert pathglm.ebic_score(data, pt, 1.0, p) == pytest.approx(expected, rel=1e-12)
