"""Objectives and the elastic-net penalty.

Every model is reduced to the derivative of its per-observation
log-likelihood with respect to the natural parameter ``eta = x @ theta``.
For GLMs that derivative is ``y - h(eta)`` with ``h`` the transfer function;
for M-estimators it is ``rho'(y - eta)``.  The dispersion of a GLM is fixed
to one: with a canonical link it only rescales the step size, so the
estimate of ``theta`` does not depend on it.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import (ConfigError, InvalidInputError, NumericOverflowError,
                     UnsupportedOperationError)

GLM_KINDS = ("gaussian", "binomial", "poisson")
MEST_KINDS = ("huber", "custom")

# exp(700) ~ 1e304: largest argument we evaluate before calling it overflow.
EXP_ETA_CAP = 700.0


class Observation(NamedTuple):
    x: np.ndarray
    y: float


def check_observation(obs, spec=None):
    """Raise InvalidInputError unless ``obs`` is finite (and 0/1 for binomial)."""
    x = np.asarray(obs.x, dtype=float)
    if x.ndim != 1 or not np.all(np.isfinite(x)) or not math.isfinite(obs.y):
        raise InvalidInputError("observation contains non-finite values")
    if spec is not None and spec.kind == "binomial" and obs.y not in (0.0, 1.0):
        raise InvalidInputError(f"binomial outcome must be 0 or 1, got {obs.y!r}")


@dataclass(frozen=True)
class ObjectiveSpec:
    """Which model is being fit.

    ``psi`` is only used by the ``custom`` kind: a user-supplied derivative of
    the loss with respect to the residual ``y - eta``.  It has to be
    nondecreasing in the residual (equivalently the log-likelihood derivative
    is nonincreasing in eta); use :func:`sample_monotonicity` to spot-check.
    """
    kind: str
    delta: float = 3.0
    psi: Optional[Callable[[float], float]] = field(default=None, compare=False)
    dispersion: float = 1.0

    def __post_init__(self):
        if self.kind not in GLM_KINDS + MEST_KINDS:
            raise ConfigError(f"unknown model kind {self.kind!r}")
        if self.kind == "huber" and not self.delta > 0:
            raise ConfigError("huber delta must be positive")
        if self.kind == "custom" and self.psi is None:
            raise ConfigError("custom objective needs a psi callable")
        if self.dispersion != 1.0:
            raise ConfigError("dispersion is fixed to 1")

    @classmethod
    def gaussian(cls):
        return cls("gaussian")

    @classmethod
    def binomial(cls):
        return cls("binomial")

    @classmethod
    def poisson(cls):
        return cls("poisson")

    @classmethod
    def huber(cls, delta=3.0):
        return cls("huber", delta=float(delta))

    @classmethod
    def custom(cls, psi):
        return cls("custom", psi=psi)

    @property
    def is_glm(self):
        return self.kind in GLM_KINDS

    def derivative(self):
        """Return a fast scalar function ``(eta, y) -> l'(eta; y)``.

        No input validation; the caller guarantees finite floats.
        """
        kind = self.kind
        if kind == "gaussian":
            return _gaussian_lprime
        if kind == "binomial":
            return _binomial_lprime
        if kind == "poisson":
            return _poisson_lprime
        if kind == "huber":
            delta = self.delta

            def huber_lprime(eta, y):
                r = y - eta
                if r > delta:
                    return delta
                if r < -delta:
                    return -delta
                return r
            return huber_lprime
        psi = self.psi
        return lambda eta, y: float(psi(y - eta))


def _sigmoid(eta):
    if eta >= 0.0:
        return 1.0 / (1.0 + math.exp(-eta))
    e = math.exp(eta)
    return e / (1.0 + e)


def _safe_exp(eta):
    if eta > EXP_ETA_CAP:
        raise NumericOverflowError(eta)
    return math.exp(eta)


def _gaussian_lprime(eta, y):
    return y - eta


def _binomial_lprime(eta, y):
    return y - _sigmoid(eta)


def _poisson_lprime(eta, y):
    return y - _safe_exp(eta)


def lprime(spec, eta, y):
    """Derivative of the log-likelihood with respect to the natural parameter."""
    eta = float(eta)
    y = float(y)
    if not (math.isfinite(eta) and math.isfinite(y)):
        raise InvalidInputError("lprime needs finite eta and y")
    return spec.derivative()(eta, y)


def transfer(spec, eta):
    """Mean function h(eta) of a GLM."""
    if not spec.is_glm:
        raise UnsupportedOperationError(
            f"transfer is undefined for M-estimation kind {spec.kind!r}")
    eta = float(eta)
    if not math.isfinite(eta):
        raise InvalidInputError("transfer needs a finite eta")
    if spec.kind == "gaussian":
        return eta
    if spec.kind == "binomial":
        return _sigmoid(eta)
    return _safe_exp(eta)


def transfer_array(spec, eta):
    """Vectorised :func:`transfer` used by prediction and the batch solver."""
    eta = np.asarray(eta, dtype=float)
    if spec.kind == "gaussian":
        return eta
    if spec.kind == "binomial":
        return 0.5 * (1.0 + np.tanh(0.5 * eta))
    if spec.kind == "poisson":
        if np.any(eta > EXP_ETA_CAP):
            raise NumericOverflowError(float(eta.max()))
        return np.exp(eta)
    raise UnsupportedOperationError(
        f"transfer is undefined for M-estimation kind {spec.kind!r}")


def sample_monotonicity(spec, etas, ys):
    """True if l'(eta; y) is nonincreasing along the sorted ``etas`` for each y."""
    lp = spec.derivative()
    etas = np.sort(np.asarray(etas, dtype=float))
    for y in ys:
        vals = [lp(float(e), float(y)) for e in etas]
        if any(b > a for a, b in zip(vals, vals[1:])):
            return False
    return True


@dataclass(frozen=True)
class Penalty:
    """Elastic net ``lam * [(1 - alpha)/2 ||theta||^2 + alpha ||theta||_1]``."""
    alpha: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not (self.lam >= 0.0 and math.isfinite(self.lam)):
            raise ConfigError(f"lambda must be finite and >= 0, got {self.lam!r}")

    @property
    def active(self):
        return self.lam > 0.0


NO_PENALTY = Penalty()


def _finite_vector(theta):
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise InvalidInputError("theta contains non-finite values")
    return theta


def penalty_value(pen, theta):
    theta = _finite_vector(theta)
    if not pen.active:
        return 0.0
    ridge = 0.5 * float(theta @ theta)
    lasso = float(np.abs(theta).sum())
    return pen.lam * ((1.0 - pen.alpha) * ridge + pen.alpha * lasso)


def penalty_gradient(pen, theta):
    """Gradient of :func:`penalty_value`, taking sign(0) = 0 for the L1 part."""
    theta = _finite_vector(theta)
    if not pen.active:
        return np.zeros_like(theta)
    return pen.lam * ((1.0 - pen.alpha) * theta + pen.alpha * np.sign(theta))
