"""Command-line interface: ``fit``, ``path``, ``simulate`` and ``predict``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 divergence
(single fits only; a path records failures per entry and exits 0).
"""
import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .data import CsvSource, simulate_huber, simulate_lasso, write_dataset
from .diagnostics import mse_to_truth, predict_many, write_trace
from .errors import (ConfigError, DataError, DivergenceError, InvalidInputError,
                     SGDError)
from .implicit import ImplicitConfig
from .models import ObjectiveSpec, Penalty
from .optimizers import METHODS, FitConfig, fit
from .path import PathConfig, run_path
from .schedules import SCHEDULE_KINDS, ScheduleConfig

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_DIVERGED = 0, 2, 3, 4
MODELS = ("gaussian", "binomial", "poisson", "huber")


def _add_data_flags(p, response_default="y"):
    p.add_argument("--data", required=True, help="delimited text file")
    p.add_argument("--response", default=response_default,
                   help="response column name, or integer index with --no-header")
    p.add_argument("--chunk-size", type=int, default=10_000)
    p.add_argument("--tab", action="store_true", help="tab-delimited input")
    p.add_argument("--no-header", action="store_true")


def _add_fit_flags(p):
    _add_data_flags(p)
    p.add_argument("--model", choices=MODELS, default="gaussian")
    p.add_argument("--huber-delta", type=float, default=3.0)
    p.add_argument("--method", choices=METHODS, default="ai-sgd")
    p.add_argument("--lr", choices=SCHEDULE_KINDS, default="onedim")
    p.add_argument("--gamma0", type=float, default=1.0)
    p.add_argument("--lr-a", type=float, default=1.0)
    p.add_argument("--lr-c", type=float, default=None,
                   help="decay exponent (default 2/3 averaged, 1 otherwise)")
    p.add_argument("--lr-eta", type=float, default=1.0)
    p.add_argument("--lr-eps", type=float, default=1e-6)
    p.add_argument("--lr-beta", type=float, default=0.9)
    p.add_argument("--passes", type=int, default=1)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--momentum", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shuffle", action="store_true")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--stop-on-convergence", action="store_true")
    p.add_argument("--root-tol", type=float, default=1e-10)
    p.add_argument("--max-root-iter", type=int, default=200)
    p.add_argument("--out", help="JSON output (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="aisgd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    pf = sub.add_parser("fit", help="fit one model")
    _add_fit_flags(pf)
    pf.add_argument("--trace", help="per-update CSV (update_index, metric, value)")
    pf.add_argument("--trace-every", type=int, default=100)
    pf.add_argument("--truth", help="simulation sidecar JSON; traces mse_to_truth")

    pp = sub.add_parser("path", help="fit a regularisation path")
    _add_fit_flags(pp)
    pp.add_argument("--n-lambda", type=int, default=100)
    pp.add_argument("--lambda-min-ratio", type=float, default=1e-3)
    pp.add_argument("--lambda-max", type=float, default=None)
    pp.add_argument("--no-warm-start", action="store_true")
    pp.add_argument("--parallel", type=int, default=1)

    ps = sub.add_parser("simulate", help="write a simulated dataset")
    ps.add_argument("--generator", choices=("lasso", "huber"), required=True)
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--p", type=int, required=True)
    ps.add_argument("--rho", type=float, default=0.0)
    ps.add_argument("--snr", type=float, default=3.0)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--standardize", action="store_true")
    ps.add_argument("--tab", action="store_true")
    ps.add_argument("--out", required=True)

    pr = sub.add_parser("predict", help="predict from a fitted model")
    _add_data_flags(pr, response_default=None)
    pr.add_argument("--fit", required=True, help="JSON written by `fit`")
    pr.add_argument("--out", help="CSV output (default: stdout)")
    return parser


def _response(args):
    r = args.response
    if r is not None and args.no_header:
        try:
            return int(r)
        except ValueError:
            raise ConfigError("--no-header needs an integer --response") from None
    return r


def _source(args):
    path = Path(args.data)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    return CsvSource(path, _response(args), args.chunk_size,
                     "\t" if args.tab else ",", not args.no_header)


def _spec(args):
    if args.model == "huber":
        return ObjectiveSpec.huber(args.huber_delta)
    return ObjectiveSpec(args.model)


def _schedule(args):
    return ScheduleConfig(args.lr, args.gamma0, args.lr_a, args.lr_c, args.lr_eta,
                          args.lr_eps, args.lr_beta)


def _fit_cfg(args, trace_every=0):
    return FitConfig(args.method, args.passes, args.momentum, args.shuffle, args.seed,
                     None, args.tol, args.window, args.stop_on_convergence, trace_every)


def _settings(args):
    return dict(model=args.model, huber_delta=args.huber_delta, method=args.method,
                lr=args.lr, gamma0=args.gamma0, lr_a=args.lr_a, lr_c=args.lr_c,
                lr_eta=args.lr_eta, lr_eps=args.lr_eps, lr_beta=args.lr_beta,
                passes=args.passes, alpha=args.alpha, seed=args.seed,
                shuffle=args.shuffle, chunk_size=args.chunk_size,
                response=args.response, data=str(args.data))


def _floats(v):
    return None if v is None else [float(t) for t in v]


def _emit_json(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt_vector(v, k=6):
    head = " ".join(f"{t: .5g}" for t in v[:k])
    return head + (" ..." if len(v) > k else "")


def cmd_fit(args):
    spec = _spec(args)
    src = _source(args)
    theta_star = None
    if args.truth:
        theta_star = np.asarray(json.loads(Path(args.truth).read_text())["theta_star"])
    trace_every = args.trace_every if args.trace else 0
    solver = ImplicitConfig(args.root_tol, args.max_root_iter)
    res = fit(src, spec, _schedule(args), Penalty(args.alpha, args.lam),
              _fit_cfg(args, trace_every), solver, theta_star)
    if args.trace:
        write_trace(res.trace, args.trace)
    out = dict(command="fit", settings=dict(_settings(args), lam=args.lam),
               status="ok", estimate=_floats(res.estimate),
               last_iterate=_floats(res.last_iterate), updates=res.updates,
               converged=res.converged, passes_completed=res.passes_completed)
    if theta_star is not None:
        out["mse_to_truth"] = mse_to_truth(res.estimate, theta_star)
    _emit_json(out, args.out)
    if args.out:
        print(f"{'method':<10}{'updates':>10}{'converged':>11}  estimate")
        print(f"{args.method:<10}{res.updates:>10}{str(res.converged):>11}  "
              f"{_fmt_vector(res.estimate)}")
    return EXIT_OK


def cmd_path(args):
    spec = _spec(args)
    src = _source(args)
    pcfg = PathConfig(args.n_lambda, args.lambda_min_ratio, args.alpha,
                      not args.no_warm_start, args.lambda_max)
    solver = ImplicitConfig(args.root_tol, args.max_root_iter)
    entries = run_path(src, spec, _schedule(args), pcfg, _fit_cfg(args), solver,
                       parallel=args.parallel)
    rows = []
    for e in entries:
        est = e.estimate
        rows.append(dict(
            lam=e.lam, status=e.status, error=e.error, estimate=_floats(est),
            updates=None if e.result is None else e.result.updates,
            l1_norm=None if est is None else float(np.abs(est).sum()),
            nonzero=None if est is None else int(np.sum(np.abs(est) > 1e-8))))
    out = dict(command="path", settings=dict(
        _settings(args), n_lambda=args.n_lambda, lambda_min_ratio=args.lambda_min_ratio,
        lambda_max=args.lambda_max, warm_start=not args.no_warm_start), entries=rows)
    _emit_json(out, args.out)
    if args.out:
        print(f"{'lambda':>12} {'status':>16} {'l1_norm':>12}")
        for r in rows:
            l1 = "" if r["l1_norm"] is None else f"{r['l1_norm']:.6g}"
            print(f"{r['lam']:>12.6g} {r['status']:>16} {l1:>12}")
    return EXIT_OK


def cmd_simulate(args):
    if args.generator == "lasso":
        ds = simulate_lasso(args.n, args.p, args.rho, args.snr, args.seed,
                            args.standardize)
    else:
        ds = simulate_huber(args.n, args.p, args.seed)
    out = Path(args.out)
    if out.suffix == ".json":
        raise ConfigError("--out must not end in .json (reserved for the sidecar)")
    sidecar = write_dataset(ds, out, "\t" if args.tab else ",")
    print(f"wrote {out} ({args.n} x {args.p}) and {sidecar}")
    return EXIT_OK


def cmd_predict(args):
    fitted = json.loads(Path(args.fit).read_text())
    s = fitted["settings"]
    spec = (ObjectiveSpec.huber(s["huber_delta"]) if s["model"] == "huber"
            else ObjectiveSpec(s["model"]))
    theta = np.asarray(fitted["estimate"], dtype=float)
    src = _source(args)
    lines = ["prediction"]
    for X, _ in src.chunks():
        lines.extend(repr(float(v)) for v in predict_many(spec, theta, X))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"fit": cmd_fit, "path": cmd_path, "simulate": cmd_simulate,
            "predict": cmd_predict}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, InvalidInputError, OSError, KeyError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SGDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
