#!/usr/bin/env python3
"""Lasso regularisation path on the equicorrelated simulation.

For each correlation level, fits an ai-sgd path and compares every entry with
the full-batch proximal-gradient solution at the same lambda.  Prints wall
time per path and the relative L2 distance to the batch solution.

    python scripts/lasso_study.py --n 1000 --p 100 --n-lambda 20 --runs 3
"""
import argparse
import csv
import sys
import time

import numpy as np

from aisgd import (FitConfig, ObjectiveSpec, PathConfig, ScheduleConfig,
                   proximal_gradient, run_path, simulate_lasso)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--p", type=int, default=100)
    ap.add_argument("--rho", type=float, nargs="+", default=[0.0, 0.5, 0.9])
    ap.add_argument("--n-lambda", type=int, default=20)
    ap.add_argument("--lambda-min-ratio", type=float, default=0.01)
    ap.add_argument("--passes", type=int, default=5)
    ap.add_argument("--gamma0", type=float, default=0.1)
    ap.add_argument("--lr-a", type=float, default=0.1)
    ap.add_argument("--runs", type=int, default=3)
    ap.add_argument("--csv", help="optional per-entry CSV output")
    args = ap.parse_args(argv)

    spec = ObjectiveSpec.gaussian()
    sched = ScheduleConfig(gamma0=args.gamma0, a=args.lr_a, c=1.0)
    rows = []
    print(f"{'rho':>5} {'run':>4} {'path s':>8} {'median rel':>11} {'max rel':>9}")
    for rho in args.rho:
        for run in range(args.runs):
            ds = simulate_lasso(args.n, args.p, rho=rho, seed=run)
            t0 = time.perf_counter()
            entries = run_path(ds.source(), spec, sched,
                               PathConfig(args.n_lambda, args.lambda_min_ratio),
                               FitConfig(passes=args.passes, shuffle=True, seed=run))
            elapsed = time.perf_counter() - t0
            rels = []
            for e in entries:
                ref = proximal_gradient(spec, ds.X, ds.y, e.lam, 1.0, tol=1e-8).theta
                dist = float(np.linalg.norm(e.estimate - ref))
                # the batch solution is exactly zero at lambda_max
                ref_norm = float(np.linalg.norm(ref))
                rel = dist / ref_norm if ref_norm > 0 else float("nan")
                rels.append(rel)
                rows.append(dict(rho=rho, run=run, lam=e.lam, l2=dist, rel_l2=rel,
                                 nonzero_batch=int(np.sum(ref != 0))))
            print(f"{rho:>5.2f} {run:>4d} {elapsed:>8.2f} {np.nanmedian(rels):>11.4f} "
                  f"{np.nanmax(rels):>9.4f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
