"""Command line front end: ``glmpbb {solve,generate,bench,oracle}``.

Logging verbosity follows the GLMPBB_LOG environment variable
(error, info or debug).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .bb import InvalidInstanceError, SolverConfig, Status, TraceRecord, solve
from .generate import GenerationError, GenSpec, generate
from .model import SchemaError, load_instance, partition_terms, save_instance
from .oracle import grid_error_bound, grid_min_psi, vertex_min_h

EXIT_OK, EXIT_ERROR, EXIT_LIMIT = 0, 1, 2
BENCH_COLUMNS = ("scheme", "m", "n", "p", "p_bar", "repeats",
                 "Avg.Iter", "Avg.Time", "Opt.val")
RUN_COLUMNS = ("seed", "status", "iterations", "time", "opt_val", "gap")

log = logging.getLogger("glmpbb")


def _setup_logging():
    level = os.environ.get("GLMPBB_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s")


def _config(args) -> SolverConfig:
    return SolverConfig(epsilon=args.eps, max_iterations=args.max_iters,
                        time_limit=args.time_limit, sub_tol=args.sub_tol)


def write_trace(trace, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TraceRecord.CSV_COLUMNS)
        for rec in trace:
            writer.writerow(rec.csv_row())


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_solve(args) -> int:
    instance = load_instance(args.path)
    result = solve(instance, _config(args))
    if args.trace:
        write_trace(result.trace, args.trace)
    out = result.to_dict()
    out["name"] = instance.name
    out["epsilon"] = args.eps
    _emit(json.dumps(out, indent=1), args.out)
    if result.status in (Status.EPS_OPTIMAL, Status.CONVEX_SHORTCUT):
        return EXIT_OK
    return EXIT_LIMIT


def _spec(args, seed=None) -> GenSpec:
    return GenSpec(scheme=args.scheme, m=args.m, n=args.n, p=args.p,
                   p_bar_target=args.pbar,
                   seed=args.seed if seed is None else seed)


def cmd_generate(args) -> int:
    instance = generate(_spec(args))
    if args.out:
        save_instance(instance, args.out)
    else:
        print(json.dumps(instance.to_dict(), indent=1))
    return EXIT_OK


def _bench_one(spec: GenSpec, config: SolverConfig):
    instance = generate(spec)
    t0 = time.perf_counter()
    res = solve(instance, config)
    elapsed = round(time.perf_counter() - t0, 3)
    return {"seed": spec.seed, "status": res.status.value,
            "iterations": res.iterations, "time": elapsed,
            "opt_val": res.h_value, "gap": res.gap}


def cmd_bench(args) -> int:
    config = _config(args)
    specs = [_spec(args, args.seed + r) for r in range(args.repeats)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            runs = list(pool.map(_bench_one, specs, [config] * len(specs)))
    else:
        runs = [_bench_one(s, config) for s in specs]
    if args.runs_out:
        with open(args.runs_out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, RUN_COLUMNS)
            writer.writeheader()
            writer.writerows(runs)
    p_bar = args.p if args.pbar is None or args.scheme.upper() != "P3" else args.pbar
    row = [args.scheme.upper(), args.m, args.n, args.p, p_bar, args.repeats,
           float(np.mean([r["iterations"] for r in runs])),
           round(float(np.mean([r["time"] for r in runs])), 3),
           float(np.mean([r["opt_val"] for r in runs]))]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(fh)
        writer.writerow(BENCH_COLUMNS)
        writer.writerow(row)
    finally:
        if args.out:
            fh.close()
    limited = any(r["status"] not in (Status.EPS_OPTIMAL.value,
                                      Status.CONVEX_SHORTCUT.value) for r in runs)
    return EXIT_LIMIT if limited else EXIT_OK


def cmd_oracle(args) -> int:
    instance = load_instance(args.path)
    part = partition_terms(instance)
    value, t = grid_min_psi(instance, args.resolution)
    from .bb import compute_t_bounds
    bounds = compute_t_bounds(instance, part)
    out = {"grid_min_psi": value, "h_value": math.exp(value), "t": t.tolist(),
           "resolution": args.resolution,
           "error_bound": grid_error_bound(bounds, instance.alpha[list(part.j_plus)],
                                           args.resolution)}
    if np.all(instance.alpha > 0):
        try:
            h, x = vertex_min_h(instance)
            out["vertex_min_h"] = h
            out["vertex_argmin"] = x.tolist()
        except ValueError as err:
            out["vertex_min_h"] = f"unavailable: {err}"
    _emit(json.dumps(out, indent=1), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glmpbb",
        description="Global solver for products of powers of affine functions "
                    "over a polytope.")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        p.add_argument("--eps", type=float, default=1e-4,
                       help="gap tolerance on ln h; the returned h is within a "
                            "factor exp(eps) of the global minimum (default 1e-4)")
        p.add_argument("--max-iters", type=int, default=10 ** 6)
        p.add_argument("--time-limit", type=float, default=3600.0,
                       help="seconds (default 3600)")
        p.add_argument("--sub-tol", type=float, default=None,
                       help="subsolver gap tolerance (default eps/10)")

    def gen_flags(p):
        p.add_argument("--scheme", choices=["p1", "p2", "p3", "P1", "P2", "P3"],
                       default="p1")
        p.add_argument("--m", type=int, default=10)
        p.add_argument("--n", type=int, default=20)
        p.add_argument("--p", type=int, default=2)
        p.add_argument("--pbar", type=int, default=None,
                       help="number of positive exponents (p3 only)")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="solve an instance JSON file")
    p.add_argument("path")
    solver_flags(p)
    p.add_argument("--trace", help="write the per-iteration trace as CSV")
    p.add_argument("--out", help="write the result JSON here instead of stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="write a random instance JSON")
    gen_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="solve seeded random instances, report averages")
    gen_flags(p)
    solver_flags(p)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="summary CSV path (default stdout)")
    p.add_argument("--runs-out", help="per-run CSV path")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="brute-force grid check of an instance")
    p.add_argument("path")
    p.add_argument("--resolution", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as err:
        print(f"error: {err}", file=sys.stderr)
    except InvalidInstanceError as err:
        print("error: instance is not valid:", file=sys.stderr)
        for v in err.report.violations:
            print(f"  - {v}", file=sys.stderr)
    except (GenerationError, OSError, ValueError, RuntimeError) as err:
        print(f"error: {err}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
