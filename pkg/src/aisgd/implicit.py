"""Exact implicit (proximal) update for models that depend on theta via x @ theta.

The multidimensional implicit equation collapses to a scalar one.  Writing
``xi`` for the step length along ``C x``::

    xi = gamma * l'(eta0 + d + xi * q; y),   q = x' C x,
    d = -gamma * lam * x' C grad P(theta_prev)

and the new iterate is ``theta_prev + xi * C x - gamma * lam * C grad P``.
Because l' is nonincreasing in eta the right-hand side is a nonincreasing
function of ``xi``, so ``f(xi) = rhs(xi) - xi`` is strictly decreasing and
its unique root lies between 0 and ``f(0) = gamma * l'(eta0 + d; y)``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import (ConfigError, ConvergenceFailureError, InvalidInputError,
                     NumericOverflowError, SolverFailureError)
from .models import NO_PENALTY, penalty_gradient

_MAX_WIDENINGS = 60


@dataclass(frozen=True)
class ImplicitConfig:
    root_tolerance: float = 1e-10
    max_root_iterations: int = 200

    def __post_init__(self):
        if not self.root_tolerance > 0:
            raise ConfigError("root_tolerance must be positive")
        if self.max_root_iterations < 1:
            raise ConfigError("max_root_iterations must be >= 1")


DEFAULT_IMPLICIT = ImplicitConfig()


@dataclass(frozen=True)
class ScaledGradientResult:
    """Solution of the scalar equation.

    ``scale`` is the factor multiplying the explicit gradient at the previous
    iterate; it is 0 by convention when that gradient (``kappa_prev``) is 0.
    """
    xi: float
    scale: float
    eta_prev: float
    kappa_prev: float
    bracket: tuple = (0.0, 0.0)
    iterations: int = 0


def search_bracket(r_shifted):
    """Interval between 0 and ``r_shifted`` that holds the fixed point."""
    r = float(r_shifted)
    if not math.isfinite(r):
        raise InvalidInputError("search bracket endpoint must be finite")
    if r >= 0.0:
        return (0.0, r)
    return (r, 0.0)


def solve_fixed_point(lp, y, gamma, base, q, tol, max_iter):
    """Root of ``gamma * lp(base + xi*q, y) - xi``; returns (xi, bracket, iters).

    Bracketed false position with the Illinois modification, plus a bisection
    step whenever an interpolation step fails to halve the bracket, so the
    bracket shrinks at least geometrically.  Linear objectives (Gaussian, the
    quadratic zone of Huber) are solved by the first interpolation step.
    Evaluations whose exp() would overflow count as -inf, which is the correct
    sign because l' -> -inf there; such points are then bisected away.
    """
    r = gamma * lp(base, y)
    if not math.isfinite(r):
        raise InvalidInputError("non-finite gradient at the shifted natural parameter")
    if r == 0.0:
        return 0.0, (0.0, 0.0), 0

    def f(xi):
        try:
            return gamma * lp(base + xi * q, y) - xi
        except NumericOverflowError:
            return -math.inf

    # f(0) = r; the other end must have the opposite sign or be a root.
    a, fa = 0.0, r
    b = r
    fb = f(b)
    widenings = 0
    while (fb > 0.0) == (r > 0.0) and fb != 0.0:
        # only reachable with a non-monotone user derivative
        widenings += 1
        if widenings > _MAX_WIDENINGS:
            raise SolverFailureError(
                "fixed-point map does not change sign; is the derivative nonincreasing?")
        b *= 2.0
        fb = f(b)
    bracket = (min(a, b), max(a, b))
    if fb == 0.0:
        return b, bracket, 0

    best, fbest = (a, fa) if abs(fa) <= abs(fb) else (b, fb)
    side = 0
    force_bisect = False
    for it in range(1, max_iter + 1):
        width = abs(b - a)
        c = None
        if not force_bisect and math.isfinite(fa) and math.isfinite(fb):
            c = (a * fb - b * fa) / (fb - fa)
            if not (min(a, b) < c < max(a, b)):
                c = None
        if c is None:
            c = 0.5 * (a + b)
        fc = f(c)
        if abs(fc) < abs(fbest):
            best, fbest = c, fc
        if abs(fc) <= tol:
            return c, bracket, it
        if (fc > 0.0) == (fb > 0.0):
            b, fb = c, fc
            if side == -1:
                fa *= 0.5
            side = -1
        else:
            a, fa = c, fc
            if side == 1:
                fb *= 0.5
            side = 1
        # interpolation that fails to halve the bracket earns a bisection
        force_bisect = abs(b - a) > 0.5 * width
        if abs(b - a) <= 4.0 * np.finfo(float).eps * max(abs(a), abs(b)):
            # bracket exhausted at double precision
            return best, bracket, it
    raise ConvergenceFailureError(
        f"implicit solve did not reach tolerance in {max_iter} iterations", best)


def _conditioned(cond_diag, x):
    return x if cond_diag is None else cond_diag * x


def _step_parts(spec, gamma, theta_prev, obs, cond_diag, pen, cfg):
    """Shared core: returns (result, C x, C grad P or None)."""
    if not gamma > 0:
        raise InvalidInputError("gamma must be positive")
    lp = spec.derivative()
    x = obs.x
    y = float(obs.y)
    cx = _conditioned(cond_diag, x)
    eta0 = float(x @ theta_prev)
    q = float(x @ cx)
    kappa = lp(eta0, y)
    cgp = None
    d = 0.0
    if pen.active:
        # penalty_gradient already carries the lam factor
        cgp = _conditioned(cond_diag, penalty_gradient(pen, theta_prev))
        d = -gamma * float(x @ cgp)
    if kappa == 0.0:
        res = ScaledGradientResult(0.0, 0.0, eta0, 0.0)
        return res, cx, cgp
    tol = cfg.root_tolerance * min(1.0, gamma)
    xi, bracket, iters = solve_fixed_point(
        lp, y, gamma, eta0 + d, q, tol, cfg.max_root_iterations)
    res = ScaledGradientResult(xi, xi / (gamma * kappa), eta0, kappa, bracket, iters)
    return res, cx, cgp


def solve_scale(spec, gamma, theta_prev, obs, cond_diag=None, pen=NO_PENALTY,
                cfg=DEFAULT_IMPLICIT):
    """Solve for the scale of the implicit gradient.

    ``cond_diag`` is the diagonal of the conditioning matrix; ``None`` means
    the identity.
    """
    res, _, _ = _step_parts(spec, gamma, np.asarray(theta_prev, dtype=float),
                            obs, cond_diag, pen, cfg)
    return res


def implicit_step_vector(spec, gamma, theta_prev, obs, cond_diag=None,
                         pen=NO_PENALTY, cfg=DEFAULT_IMPLICIT):
    """The displacement ``xi * C x - gamma * C grad(lam P)`` of one implicit step.

    Without a penalty this is an exact multiple of ``C x``; adding it to the
    previous iterate is what :func:`implicit_update` does.
    """
    theta_prev = np.asarray(theta_prev, dtype=float)
    res, cx, cgp = _step_parts(spec, gamma, theta_prev, obs, cond_diag, pen, cfg)
    step = res.xi * cx
    if cgp is not None:
        step = step - gamma * cgp
    return step


def implicit_update(spec, gamma, theta_prev, obs, cond_diag=None, pen=NO_PENALTY,
                    cfg=DEFAULT_IMPLICIT):
    """One implicit step; the penalty is evaluated at the previous iterate."""
    theta_prev = np.asarray(theta_prev, dtype=float)
    return theta_prev + implicit_step_vector(spec, gamma, theta_prev, obs, cond_diag,
                                             pen, cfg)
