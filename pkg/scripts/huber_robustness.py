#!/usr/bin/env python3
"""Huber versus least squares under contaminated-normal noise.

Runs ai-sgd with the Huber loss and with squared loss on the same simulated
datasets and reports the mean squared distance to the true parameter.

    python scripts/huber_robustness.py --seeds 10 --n 10000 --p 50
"""
import argparse
import sys

import numpy as np

from aisgd import FitConfig, ObjectiveSpec, ScheduleConfig, fit, mse_to_truth, simulate_huber


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--p", type=int, default=50)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--delta", type=float, default=3.0)
    ap.add_argument("--passes", type=int, default=3)
    ap.add_argument("--gamma0", type=float, default=1000.0)
    ap.add_argument("--lr-a", type=float, default=1e-3)
    args = ap.parse_args(argv)

    sched = ScheduleConfig(gamma0=args.gamma0, a=args.lr_a)
    specs = {"huber": ObjectiveSpec.huber(args.delta), "lsq": ObjectiveSpec.gaussian()}
    print(f"{'seed':>4} {'huber mse':>10} {'lsq mse':>10}")
    wins = 0
    results = {k: [] for k in specs}
    for seed in range(args.seeds):
        ds = simulate_huber(args.n, args.p, seed=seed)
        cfg = FitConfig(method="ai-sgd", passes=args.passes, shuffle=True, seed=seed)
        for name, spec in specs.items():
            est = fit(ds.source(), spec, sched, cfg=cfg).estimate
            results[name].append(mse_to_truth(est, ds.theta_star))
        wins += results["huber"][-1] < results["lsq"][-1]
        print(f"{seed:>4d} {results['huber'][-1]:>10.4f} {results['lsq'][-1]:>10.4f}")
    print(f"mean {np.mean(results['huber']):>10.4f} {np.mean(results['lsq']):>10.4f}")
    print(f"huber lower in {wins}/{args.seeds} seeds")
    return 0


if __name__ == "__main__":
    sys.exit(main())
