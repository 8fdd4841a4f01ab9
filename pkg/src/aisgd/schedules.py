"""Learning rates and diagonal conditioners.

The one-dimensional schedule returns a decaying scalar rate and the identity
conditioner.  The adaptive schedules (AdaGrad, RMSProp, Fisher) report a rate
of 1 and put all magnitude into the diagonal conditioner, built from squared
log-likelihood gradients at the previous iterate.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, InvalidInputError

ADAPTIVE_KINDS = ("adagrad", "rmsprop", "fisher")
SCHEDULE_KINDS = ("onedim",) + ADAPTIVE_KINDS


@dataclass(frozen=True)
class OneDimSchedule:
    gamma0: float = 1.0
    a: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not (self.gamma0 > 0 and self.a > 0):
            raise ConfigError("gamma0 and a must be positive")
        if not 0 < self.c <= 1:
            raise ConfigError("c must lie in (0, 1]")


def onedim_rate(s, n):
    """gamma0 * (1 + a*gamma0*n)^(-c); n = 0 gives gamma0."""
    return s.gamma0 * (1.0 + s.a * s.gamma0 * n) ** (-s.c)


@dataclass
class AdaptiveState:
    kind: str
    eta: float = 1.0
    epsilon: float = 1e-6
    beta: float = 0.9
    accumulator: Optional[np.ndarray] = None
    n: int = 0

    def __post_init__(self):
        if self.kind not in ADAPTIVE_KINDS:
            raise ConfigError(f"unknown adaptive schedule {self.kind!r}")
        if not (self.eta > 0 and self.epsilon >= 0):
            raise ConfigError("eta must be positive and epsilon nonnegative")
        if not 0 <= self.beta <= 1:
            raise ConfigError("beta must lie in [0, 1]")

    @classmethod
    def zeros(cls, kind, p, **kw):
        return cls(kind, accumulator=np.zeros(p), **kw)


def _squared_gradient(state, gradient, kind):
    if state.kind != kind:
        raise ConfigError(f"{kind} step called on a {state.kind} state")
    g = np.asarray(gradient, dtype=float)
    if not np.all(np.isfinite(g)):
        raise InvalidInputError("non-finite gradient")
    if state.accumulator is None:
        state.accumulator = np.zeros_like(g)
    return g * g


def adagrad_step(state, gradient):
    g2 = _squared_gradient(state, gradient, "adagrad")
    state.accumulator = state.accumulator + g2
    state.n += 1
    return 1.0, state.eta / np.sqrt(state.accumulator + state.epsilon)


def rmsprop_step(state, gradient):
    g2 = _squared_gradient(state, gradient, "rmsprop")
    b = state.beta
    state.accumulator = b * state.accumulator + (1.0 - b) * g2
    state.n += 1
    return 1.0, state.eta / np.sqrt(state.accumulator + state.epsilon)


def fisher_step(state, gradient):
    """Running mean of squared gradients; conditioner is its inverse."""
    g2 = _squared_gradient(state, gradient, "fisher")
    state.n += 1
    w = 1.0 / state.n
    state.accumulator = (1.0 - w) * state.accumulator + w * g2
    return 1.0, 1.0 / (state.accumulator + state.epsilon)


_ADAPTIVE_STEPS = {"adagrad": adagrad_step, "rmsprop": rmsprop_step,
                   "fisher": fisher_step}


@dataclass(frozen=True)
class ScheduleConfig:
    """User-facing schedule settings.

    ``c=None`` picks 2/3 for averaged methods and 1 otherwise.
    """
    kind: str = "onedim"
    gamma0: float = 1.0
    a: float = 1.0
    c: Optional[float] = None
    eta: float = 1.0
    epsilon: float = 1e-6
    beta: float = 0.9

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ConfigError(f"unknown learning rate {self.kind!r}")

    @property
    def adaptive(self):
        return self.kind in ADAPTIVE_KINDS

    def start(self, p, averaged=False):
        return Scheduler(self, p, averaged)


@dataclass
class Scheduler:
    """Per-fit schedule state; ``step`` yields ``(gamma, cond_diag)``.

    ``cond_diag`` is None for the identity conditioner.
    """
    config: ScheduleConfig
    p: int
    averaged: bool = False
    onedim: Optional[OneDimSchedule] = field(init=False, default=None)
    state: Optional[AdaptiveState] = field(init=False, default=None)

    def __post_init__(self):
        cfg = self.config
        if cfg.adaptive:
            self.state = AdaptiveState.zeros(cfg.kind, self.p, eta=cfg.eta,
                                             epsilon=cfg.epsilon, beta=cfg.beta)
        else:
            c = cfg.c if cfg.c is not None else (2.0 / 3.0 if self.averaged else 1.0)
            self.onedim = OneDimSchedule(cfg.gamma0, cfg.a, c)

    def step(self, n, gradient=None):
        if self.onedim is not None:
            return onedim_rate(self.onedim, n), None
        return _ADAPTIVE_STEPS[self.state.kind](self.state, gradient)


def limit_rate_constant(s):
    """The gamma with n * gamma_n -> gamma (for c = 1)."""
    if not math.isclose(s.c, 1.0):
        raise ConfigError("n * gamma_n has a finite limit only for c = 1")
    return 1.0 / s.a
