"""Independent reference computations used by the tests.

Nothing here imports the solver: derivatives are re-derived from the model
definitions and roots are found by exhaustive grid scan plus plain bisection.
"""
import math

import numpy as np


def ref_lprime(kind, eta, y, delta=3.0):
    if kind == "gaussian":
        return y - eta
    if kind == "binomial":
        return y - 1.0 / (1.0 + math.exp(-eta)) if eta > -700 else y
    if kind == "poisson":
        return y - math.exp(min(eta, 700.0))
    if kind == "huber":
        return max(-delta, min(delta, y - eta))
    raise ValueError(kind)


def bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def brute_force_xi(kind, y, gamma, base, q, delta=3.0, grid=2001):
    """Root of gamma*l'(base + xi*q; y) - xi by scanning a grid over the bracket."""
    def f(xi):
        return gamma * ref_lprime(kind, base + xi * q, y, delta) - xi

    r = gamma * ref_lprime(kind, base, y, delta)
    if r == 0.0:
        return 0.0
    lo, hi = min(0.0, r), max(0.0, r)
    pts = np.linspace(lo, hi, grid)
    vals = [f(t) for t in pts]
    for a, b, fa, fb in zip(pts, pts[1:], vals, vals[1:]):
        if fa == 0.0:
            return float(a)
        if (fa > 0) != (fb > 0) or fb == 0.0:
            return bisect(f, float(a), float(b))
    raise AssertionError("no sign change on the grid")


def random_instance(rng, kind, p_max=20, penalized=False):
    """(x, y, theta, gamma, cond_diag, alpha, lam) for a random solve."""
    p = int(rng.integers(1, p_max + 1))
    x = rng.standard_normal(p) * rng.choice([0.3, 1.0, 2.0])
    theta = rng.standard_normal(p) * 0.5
    gamma = float(10 ** rng.uniform(-3, 1))
    cond = 10 ** rng.uniform(-1, 1, size=p)
    eta = float(x @ theta)
    if kind == "binomial":
        y = float(rng.random() < 1.0 / (1.0 + math.exp(-eta)))
    elif kind == "poisson":
        y = float(rng.poisson(math.exp(min(eta, 5.0))))
    elif kind == "huber":
        y = eta + float(rng.standard_t(2)) * 2.0
    else:
        y = eta + float(rng.standard_normal())
    alpha = float(rng.uniform(0, 1)) if penalized else 0.0
    lam = float(10 ** rng.uniform(-3, 0)) if penalized else 0.0
    return x, y, theta, gamma, cond, alpha, lam


def ref_penalty_gradient(theta, alpha, lam):
    return lam * ((1 - alpha) * theta + alpha * np.sign(theta))
