"""Single-observation SGD recursions and the fit loop.

Methods: ``esgd`` (explicit), ``isgd`` (implicit), ``asgd`` (explicit +
averaging), ``ai-sgd`` (implicit + averaging), ``momentum`` (classical
momentum) and ``nag`` (Nesterov).  Step functions update the state in place
and return it.

Momentum methods accept a penalty too: the penalty gradient is evaluated at
the same point as the likelihood gradient (the look-ahead point for NAG).
"""
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .data import SHUFFLE_STREAM, rng_for
from .diagnostics import TraceRecord, convergence_check, mse_to_truth
from .errors import ConfigError, DivergenceError, InvalidInputError, SchemaError
from .implicit import DEFAULT_IMPLICIT, implicit_update
from .models import NO_PENALTY, Observation, penalty_gradient
from .schedules import ScheduleConfig

METHODS = ("esgd", "isgd", "asgd", "ai-sgd", "momentum", "nag")
AVERAGED = ("asgd", "ai-sgd")
IMPLICIT = ("isgd", "ai-sgd")

DIVERGENCE_NORM = 1e10


@dataclass
class OptimizerState:
    theta: np.ndarray
    theta_bar: np.ndarray
    velocity: np.ndarray
    n: int = 0

    @classmethod
    def start(cls, theta0):
        theta0 = np.array(theta0, dtype=float)
        return cls(theta0, theta0.copy(), np.zeros_like(theta0))

    @classmethod
    def zeros(cls, p):
        return cls.start(np.zeros(p))


def _check_divergence(state):
    sq = float(state.theta @ state.theta)
    if not sq <= DIVERGENCE_NORM ** 2:
        norm = math.sqrt(sq) if sq == sq else math.nan
        raise DivergenceError(state.n, norm)


def _explicit_direction(spec, gamma, cond_diag, theta, obs, pen):
    x = obs.x
    g = spec.derivative()(float(x @ theta), float(obs.y)) * x
    if pen.active:
        g = g - penalty_gradient(pen, theta)
    if cond_diag is not None:
        g = cond_diag * g
    return gamma * g


def explicit_step(state, spec, gamma, cond_diag, obs, pen=NO_PENALTY):
    state.theta = state.theta + _explicit_direction(spec, gamma, cond_diag,
                                                    state.theta, obs, pen)
    state.n += 1
    _check_divergence(state)
    return state


def implicit_step(state, spec, gamma, cond_diag, obs, pen=NO_PENALTY,
                  solver_cfg=DEFAULT_IMPLICIT):
    state.theta = implicit_update(spec, gamma, state.theta, obs, cond_diag, pen,
                                  solver_cfg)
    state.n += 1
    _check_divergence(state)
    return state


def momentum_step(state, spec, gamma, cond_diag, obs, pen=NO_PENALTY, mu=0.9):
    state.velocity = mu * state.velocity + _explicit_direction(
        spec, gamma, cond_diag, state.theta, obs, pen)
    state.theta = state.theta + state.velocity
    state.n += 1
    _check_divergence(state)
    return state


def nag_step(state, spec, gamma, cond_diag, obs, pen=NO_PENALTY, mu=0.9):
    ahead = state.theta + mu * state.velocity
    state.velocity = mu * state.velocity + _explicit_direction(
        spec, gamma, cond_diag, ahead, obs, pen)
    state.theta = state.theta + state.velocity
    state.n += 1
    _check_divergence(state)
    return state


def update_average(state):
    """Fold the current iterate into the running mean of iterates 1..n."""
    if state.n < 1:
        raise InvalidInputError("update_average needs at least one update")
    state.theta_bar = state.theta_bar + (state.theta - state.theta_bar) / state.n
    return state


@dataclass(frozen=True)
class FitConfig:
    method: str = "ai-sgd"
    passes: int = 1
    momentum_mu: float = 0.9
    shuffle: bool = False
    seed: int = 0
    start: Optional[tuple] = None
    tol: float = 1e-3
    window: int = 1
    stop_on_convergence: bool = False
    trace_every: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.passes < 1:
            raise ConfigError("passes must be >= 1")
        if not 0.0 <= self.momentum_mu <= 1.0:
            raise ConfigError("momentum_mu must lie in [0, 1]")
        if self.trace_every < 0:
            raise ConfigError("trace_every must be >= 0")

    @property
    def averaged(self):
        return self.method in AVERAGED


@dataclass
class FitResult:
    estimate: np.ndarray
    last_iterate: np.ndarray
    updates: int
    converged: bool
    passes_completed: int = 0
    trace: List[TraceRecord] = field(default_factory=list)


def _make_step(cfg, solver_cfg):
    m = cfg.method
    if m in IMPLICIT:
        return lambda st, spec, g, c, obs, pen: implicit_step(st, spec, g, c, obs, pen,
                                                               solver_cfg)
    if m == "momentum":
        return lambda st, spec, g, c, obs, pen: momentum_step(st, spec, g, c, obs, pen,
                                                               cfg.momentum_mu)
    if m == "nag":
        return lambda st, spec, g, c, obs, pen: nag_step(st, spec, g, c, obs, pen,
                                                          cfg.momentum_mu)
    return explicit_step


def _check_chunk(X, y, p, spec):
    if X.shape[1] != p:
        raise SchemaError(f"expected {p} covariates, chunk has {X.shape[1]}")
    if spec.kind == "binomial" and not np.all((y == 0.0) | (y == 1.0)):
        raise InvalidInputError("binomial outcomes must be 0 or 1")


def fit(source, spec, schedule=None, pen=NO_PENALTY, cfg=None,
        solver_cfg=DEFAULT_IMPLICIT, theta_star=None,
        callback: Optional[Callable] = None):
    """Run ``cfg.passes`` passes of the chosen method over ``source``.

    ``callback(state)`` is invoked after every update (after averaging).
    When ``cfg.trace_every`` is positive a trace record is kept every that
    many updates: squared error to ``theta_star`` if given, else the norm of
    the current estimate.
    """
    cfg = cfg or FitConfig()
    schedule = schedule or ScheduleConfig()
    averaged = cfg.averaged
    step = _make_step(cfg, solver_cfg)
    lp = spec.derivative()
    rng = rng_for(cfg.seed, SHUFFLE_STREAM)

    state = None
    scheduler = None
    trace = []
    history = []
    converged = False
    passes_done = 0
    for _ in range(cfg.passes):
        for X, y in source.chunks():
            if state is None:
                p = X.shape[1]
                if cfg.start is not None:
                    theta0 = np.asarray(cfg.start, dtype=float)
                    if theta0.shape != (p,):
                        raise SchemaError(f"start has shape {theta0.shape}, data has p={p}")
                    state = OptimizerState.start(theta0)
                else:
                    state = OptimizerState.zeros(p)
                scheduler = schedule.start(p, averaged)
                history.append(state.theta.copy())
            _check_chunk(X, y, state.theta.shape[0], spec)
            order = rng.permutation(len(y)) if cfg.shuffle else range(len(y))
            for i in order:
                obs = Observation(X[i], float(y[i]))
                if schedule.adaptive:
                    grad = lp(float(obs.x @ state.theta), obs.y) * obs.x
                    gamma, cond = scheduler.step(state.n + 1, grad)
                else:
                    gamma, cond = scheduler.step(state.n + 1)
                step(state, spec, gamma, cond, obs, pen)
                if averaged:
                    update_average(state)
                if callback is not None:
                    callback(state)
                if cfg.trace_every and state.n % cfg.trace_every == 0:
                    est = state.theta_bar if averaged else state.theta
                    if theta_star is not None:
                        trace.append(TraceRecord(state.n, "mse_to_truth",
                                                 mse_to_truth(est, theta_star)))
                    else:
                        trace.append(TraceRecord(state.n, "estimate_norm",
                                                 float(np.linalg.norm(est))))
        if state is None or state.n == 0:
            raise InvalidInputError("empty data stream")
        passes_done += 1
        history.append((state.theta_bar if averaged else state.theta).copy())
        converged = convergence_check(history, cfg.tol, cfg.window)
        if cfg.stop_on_convergence and converged:
            break

    estimate = state.theta_bar if averaged else state.theta
    return FitResult(estimate.copy(), state.theta.copy(), state.n, converged,
                     passes_done, trace)
