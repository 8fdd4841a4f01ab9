"""Full-batch proximal gradient (FISTA with restarts) for elastic-net GLMs.

Independent reference solver for the stochastic methods.  Minimises

    -(1/N) sum_n l(x_n' theta; y_n) + lam * P_alpha(theta)

with the smooth ridge part folded into the gradient and the L1 part handled
by soft thresholding.
"""
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOperationError


def _neg_loglik(kind, eta, y, delta):
    if kind == "gaussian":
        r = y - eta
        return 0.5 * r * r, -r
    if kind == "binomial":
        # log(1 + e^eta) - y*eta, stable form
        return np.logaddexp(0.0, eta) - y * eta, 0.5 * (1.0 + np.tanh(0.5 * eta)) - y
    if kind == "poisson":
        mu = np.exp(eta)
        return mu - y * eta, mu - y
    if kind == "huber":
        r = y - eta
        a = np.abs(r)
        loss = np.where(a <= delta, 0.5 * r * r, delta * a - 0.5 * delta * delta)
        return loss, -np.clip(r, -delta, delta)
    raise UnsupportedOperationError(f"no batch loss for {kind!r}")


def objective(spec, X, y, theta, lam=0.0, alpha=0.0):
    loss, _ = _neg_loglik(spec.kind, X @ theta, y, spec.delta)
    pen = lam * ((1 - alpha) * 0.5 * theta @ theta + alpha * np.abs(theta).sum())
    return float(loss.mean() + pen)


def _smooth(spec, X, y, theta, lam, alpha):
    loss, dloss = _neg_loglik(spec.kind, X @ theta, y, spec.delta)
    ridge = lam * (1 - alpha)
    val = loss.mean() + 0.5 * ridge * (theta @ theta)
    grad = X.T @ dloss / len(y) + ridge * theta
    return float(val), grad


def soft_threshold(v, t):
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


@dataclass
class BatchResult:
    theta: np.ndarray
    iterations: int
    converged: bool


def proximal_gradient(spec, X, y, lam=0.0, alpha=0.0, tol=1e-8, max_iter=200_000,
                      theta0=None):
    """Accelerated proximal gradient with backtracking and adaptive restart.

    Stops when a proximal step moves theta by at most
    ``tol * max(1, ||theta||)``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    theta = np.zeros(p) if theta0 is None else np.array(theta0, dtype=float)
    # Gaussian curvature bound as the starting Lipschitz guess
    L = np.linalg.norm(X, 2) ** 2 / n + lam * (1 - alpha)
    L = max(L, 1e-12)
    l1 = lam * alpha
    z = theta.copy()
    t = 1.0
    for it in range(1, max_iter + 1):
        fz, gz = _smooth(spec, X, y, z, lam, alpha)
        while True:
            cand = soft_threshold(z - gz / L, l1 / L)
            diff = cand - z
            fc, _ = _smooth(spec, X, y, cand, lam, alpha)
            if fc <= fz + gz @ diff + 0.5 * L * (diff @ diff) + 1e-15 * abs(fz):
                break
            L *= 2.0
        step = cand - theta
        if np.linalg.norm(step) <= tol * max(1.0, np.linalg.norm(cand)):
            return BatchResult(cand, it, True)
        if (z - cand) @ step > 0:
            # momentum points uphill: restart
            t = 1.0
            z = cand.copy()
        else:
            t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
            z = cand + ((t - 1.0) / t_next) * step
            t = t_next
        theta = cand
    return BatchResult(theta, max_iter, False)
