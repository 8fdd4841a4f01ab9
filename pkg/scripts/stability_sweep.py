#!/usr/bin/env python3
"""Sensitivity of explicit and implicit SGD to the learning-rate constant.

Sweeps gamma0 (with a = 1/gamma0, so n * gamma_n -> gamma0) on a Gaussian
simulation and reports, per method, the distance to the true parameter or
the update at which the iterates diverged.

    python scripts/stability_sweep.py --gamma0 0.5 2 10 50 200
"""
import argparse
import sys

import numpy as np

from aisgd import (DivergenceError, FitConfig, ObjectiveSpec, ScheduleConfig, fit,
                   simulate_lasso)

METHODS = ("esgd", "asgd", "isgd", "ai-sgd")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--p", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--gamma0", type=float, nargs="+", default=[0.5, 2, 10, 50, 200])
    args = ap.parse_args(argv)

    ds = simulate_lasso(args.n, args.p, seed=args.seed)
    spec = ObjectiveSpec.gaussian()
    print(f"baseline distance (theta = 0): {np.linalg.norm(ds.theta_star):.4f}")
    print(f"{'gamma0':>8}" + "".join(f"{m:>16}" for m in METHODS))
    for g0 in args.gamma0:
        sched = ScheduleConfig(gamma0=g0, a=1.0 / g0)
        cells = []
        for m in METHODS:
            try:
                est = fit(ds.source(), spec, sched, cfg=FitConfig(method=m)).estimate
                cells.append(f"{np.linalg.norm(est - ds.theta_star):.4f}")
            except DivergenceError as exc:
                cells.append(f"diverged@{exc.update_index}")
        print(f"{g0:>8g}" + "".join(f"{c:>16}" for c in cells))
    return 0


if __name__ == "__main__":
    sys.exit(main())
