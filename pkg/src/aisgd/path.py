"""Regularisation paths over a decreasing lambda grid."""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np

from .data import score_at_zero
from .errors import ConfigError, SGDError
from .models import Penalty
from .optimizers import FitConfig, FitResult, fit


@dataclass(frozen=True)
class PathConfig:
    n_lambda: int = 100
    lambda_min_ratio: float = 1e-3
    alpha: float = 1.0
    warm_start: bool = True
    lambda_max: Optional[float] = None

    def __post_init__(self):
        if self.n_lambda < 1:
            raise ConfigError("n_lambda must be >= 1")
        if not 0.0 < self.lambda_min_ratio < 1.0:
            raise ConfigError("lambda_min_ratio must lie in (0, 1)")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError("alpha must lie in [0, 1]")


def lambda_max_from_score(score, n, alpha):
    """Smallest lambda at which theta = 0 satisfies the L1 optimality condition."""
    if alpha <= 0:
        raise ConfigError("lambda_max is infinite for alpha = 0; pass it explicitly")
    return float(np.max(np.abs(score))) / (n * alpha)


def lambda_grid(score, n, alpha, cfg):
    """Log-spaced grid from lambda_max down to lambda_max * lambda_min_ratio.

    ``score`` is ``sum_n l'(0; y_n) x_n`` (``X' y`` for least squares).  When
    ``cfg.lambda_max`` is set it overrides the data-derived value.
    """
    lmax = cfg.lambda_max
    if lmax is None:
        lmax = lambda_max_from_score(score, n, alpha)
    if not (lmax > 0 and math.isfinite(lmax)):
        raise ConfigError(f"lambda_max must be positive and finite, got {lmax!r}")
    if cfg.n_lambda == 1:
        return np.array([lmax])
    exps = np.linspace(0.0, 1.0, cfg.n_lambda)
    grid = lmax * cfg.lambda_min_ratio ** exps
    grid[0] = lmax
    grid[-1] = lmax * cfg.lambda_min_ratio
    return grid


@dataclass
class PathEntry:
    lam: float
    status: str
    result: Optional[FitResult] = None
    error: Optional[str] = None

    @property
    def estimate(self):
        return None if self.result is None else self.result.estimate


def _fit_one(args):
    source, spec, schedule, lam, alpha, fit_cfg, solver_cfg = args
    try:
        res = fit(source, spec, schedule, Penalty(alpha, lam), fit_cfg, solver_cfg)
        return PathEntry(lam, "ok", res)
    except SGDError as exc:
        return PathEntry(lam, type(exc).__name__, None, str(exc))


def run_path(source, spec, schedule, cfg, fit_cfg=None, solver_cfg=None,
             grid=None, parallel=1) -> List[PathEntry]:
    """Fit every lambda in decreasing order.

    With warm starts each fit starts from the previous entry's estimate (or
    from the last successful one if an entry failed).  Failures are recorded
    in their entry and never abort the path.  Cold-start paths can run on
    ``parallel`` worker processes.
    """
    from .implicit import DEFAULT_IMPLICIT
    fit_cfg = fit_cfg or FitConfig()
    solver_cfg = solver_cfg or DEFAULT_IMPLICIT
    if grid is None:
        score, n = score_at_zero(source, spec)
        grid = lambda_grid(score, n, cfg.alpha, cfg)
    grid = [float(v) for v in grid]
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("lambda grid must be strictly decreasing")

    if not cfg.warm_start:
        jobs = [(source, spec, schedule, lam, cfg.alpha, fit_cfg, solver_cfg)
                for lam in grid]
        if parallel > 1:
            with ProcessPoolExecutor(max_workers=parallel) as pool:
                return list(pool.map(_fit_one, jobs))
        return [_fit_one(j) for j in jobs]

    entries = []
    start = fit_cfg.start
    for lam in grid:
        entry = _fit_one((source, spec, schedule, lam, cfg.alpha,
                          replace(fit_cfg, start=start), solver_cfg))
        if entry.result is not None:
            start = tuple(entry.result.estimate)
        entries.append(entry)
    return entries
