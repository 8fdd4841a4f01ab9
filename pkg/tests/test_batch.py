"""The full-batch reference solver is itself checked against optimality conditions."""
import numpy as np
import pytest

from aisgd.batch import objective, proximal_gradient, soft_threshold
from aisgd.data import simulate_lasso
from aisgd.errors import UnsupportedOperationError
from aisgd.models import ObjectiveSpec


def _loss_gradient(kind, X, y, theta, delta=3.0):
    eta = X @ theta
    if kind == "gaussian":
        d = eta - y
    elif kind == "binomial":
        d = 1 / (1 + np.exp(-eta)) - y
    elif kind == "poisson":
        d = np.exp(eta) - y
    else:
        d = -np.clip(y - eta, -delta, delta)
    return X.T @ d / len(y)


def _kkt_violation(kind, X, y, theta, lam, alpha):
    g = _loss_gradient(kind, X, y, theta) + lam * (1 - alpha) * theta
    l1 = lam * alpha
    active = theta != 0
    v_active = np.abs(g[active] + l1 * np.sign(theta[active]))
    v_zero = np.maximum(np.abs(g[~active]) - l1, 0.0)
    return float(np.max(np.concatenate([v_active, v_zero, [0.0]])))


def test_soft_threshold():
    np.testing.assert_array_equal(soft_threshold(np.array([3.0, -0.5, -2.0]), 1.0),
                                  [2.0, 0.0, -1.0])


@pytest.mark.parametrize("rho", [0.0, 0.9])
@pytest.mark.parametrize("alpha", [1.0, 0.5])
def test_lasso_kkt(rho, alpha):
    ds = simulate_lasso(300, 20, rho=rho, seed=2)
    lam = 0.3 * np.max(np.abs(ds.X.T @ ds.y)) / 300
    res = proximal_gradient(ObjectiveSpec.gaussian(), ds.X, ds.y, lam, alpha)
    assert res.converged
    assert _kkt_violation("gaussian", ds.X, ds.y, res.theta, lam, alpha) < 1e-6
    assert np.sum(res.theta == 0.0) > 0


def test_ridge_closed_form():
    ds = simulate_lasso(200, 6, rho=0.5, seed=0)
    lam = 0.3
    res = proximal_gradient(ObjectiveSpec.gaussian(), ds.X, ds.y, lam, 0.0, tol=1e-12)
    A = ds.X.T @ ds.X / 200 + lam * np.eye(6)
    exact = np.linalg.solve(A, ds.X.T @ ds.y / 200)
    np.testing.assert_allclose(res.theta, exact, atol=1e-9)


@pytest.mark.parametrize("kind", ["binomial", "poisson", "huber"])
def test_glm_stationarity(kind):
    rng = np.random.default_rng(4)
    X = rng.standard_normal((400, 4)) * 0.5
    theta = np.array([0.5, -0.3, 0.2, 0.0])
    eta = X @ theta
    if kind == "binomial":
        y = (rng.random(400) < 1 / (1 + np.exp(-eta))).astype(float)
    elif kind == "poisson":
        y = rng.poisson(np.exp(eta)).astype(float)
    else:
        y = eta + rng.standard_t(2, 400)
    spec = ObjectiveSpec(kind)
    res = proximal_gradient(spec, X, y, lam=0.01, alpha=1.0, tol=1e-10)
    assert _kkt_violation(kind, X, y, res.theta, 0.01, 1.0) < 1e-6
    # a small perturbation never lowers the objective
    base = objective(spec, X, y, res.theta, 0.01, 1.0)
    for j in range(4):
        e = np.zeros(4)
        e[j] = 1e-4
        assert objective(spec, X, y, res.theta + e, 0.01, 1.0) >= base - 1e-12
        assert objective(spec, X, y, res.theta - e, 0.01, 1.0) >= base - 1e-12


def test_custom_has_no_batch_loss():
    with pytest.raises(UnsupportedOperationError):
        proximal_gradient(ObjectiveSpec.custom(lambda r: r), np.ones((2, 1)), np.ones(2))
