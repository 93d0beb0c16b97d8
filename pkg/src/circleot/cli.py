"""Command-line front end.

Subcommands: ``distance``, ``plan``, ``curve``, ``check``, ``bench``.  Every
command writes a single JSON document to stdout.  Histogram files are JSON
({"points": [{"x": ..., "m": ...}, ...], "denominator": optional int}) or CSV
(two columns x,m with an optional header; denominator via --denominator).

Exit codes: 0 success, 1 parse/validation failure, 2 solver failure,
3 check disagreement.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from typing import Optional

import numpy as np

from . import __version__
from .bracket import bracket_for
from .costs import PowerCost
from .errors import CircleOtError
from .kernels import backend_name, has_compiled
from .measures import CircularHistogram, histogram_new, periodic_cdf
from .oracle import candidate_shifts, oracle_breakpoints, oracle_rotations
from .plan import extract_plan
from .profile import avg_cost_derivatives
from .solver import minimize
from .errors import (
    EmptyHistogram,
    MassSumMismatch,
    NoDenominator,
    NonPositiveMass,
)

AGREE_TOL = 1e-12


def _load_histogram(path: str, denominator: Optional[int]) -> CircularHistogram:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = None
    if doc is not None:
        points = doc["points"]
        xs = [p["x"] for p in points]
        ms = [p["m"] for p in points]
        denom = denominator if denominator is not None else doc.get("denominator")
        return histogram_new(xs, ms, denom)
    # CSV fallback: two columns x,m with an optional header line
    xs, ms = [], []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        try:
            x, m = float(parts[0]), float(parts[1])
        except (ValueError, IndexError):
            if not xs:  # header line
                continue
            raise ValueError(f"bad CSV row {line!r}")
        xs.append(x)
        ms.append(m)
    return histogram_new(xs, ms, denominator)


def _emit(report: dict) -> None:
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _fail(code: int, error: str, detail: str) -> int:
    _emit({"error": error, "detail": detail})
    return code


def _solve_report(args, with_plan: bool = False) -> dict:
    h0 = _load_histogram(args.file0, args.denominator)
    h1 = _load_histogram(args.file1, args.denominator)
    c = PowerCost(args.lam)
    t0 = time.perf_counter()
    res = minimize(h0, h1, c, args.epsilon, tight_bracket=args.tight_bracket)
    wall = (time.perf_counter() - t0) * 1e3
    report = {
        "theta_star": res.theta_star,
        "cost": res.cost,
        "mk_distance": max(res.cost, 0.0) ** (1.0 / args.lam),
        "exact": res.exact,
        "iterations": res.iterations,
        "epsilon_used": res.epsilon_used,
        "theta_tolerance": res.theta_tolerance,
        "cost_evaluations": res.cost_evaluations,
        "wall_time_ms": wall,
    }
    if args.verbose:
        report["bracket"] = {
            "theta_lo": res.bracket.theta_lo,
            "theta_hi": res.bracket.theta_hi,
            "lipschitz": res.bracket.lipschitz,
        }
        if res.flat_interval is not None:
            report["flat_interval"] = list(res.flat_interval)
    if with_plan:
        plan = extract_plan(h0, h1, c, res.theta_star)
        report["assignments"] = [
            {
                "source": a.source_position,
                "target_lifted": a.target_position_lifted,
                "target": a.target_position_circle,
                "mass": a.mass,
            }
            for a in plan.assignments
        ]
        report["plan_cost"] = plan.total_cost
    return report


def _cmd_distance(args) -> int:
    _emit(_solve_report(args))
    return 0


def _cmd_plan(args) -> int:
    _emit(_solve_report(args, with_plan=True))
    return 0


def _cmd_curve(args) -> int:
    h0 = _load_histogram(args.file0, args.denominator)
    h1 = _load_histogram(args.file1, args.denominator)
    c = PowerCost(args.lam)
    brk = bracket_for(c)
    if args.range:
        lo, hi = (float(t) for t in args.range.split(":"))
    else:
        lo, hi = brk.theta_lo, brk.theta_hi
    F0, F1 = periodic_cdf(h0), periodic_cdf(h1)
    rows = []
    for theta in np.linspace(lo, hi, args.samples):
        ev = avg_cost_derivatives(F0, F1, c, float(theta))
        rows.append(
            [float(theta), ev.value, ev.left_derivative, ev.right_derivative]
        )
    breakpoints = []
    if len(h0) * len(h1) <= 10_000:
        breakpoints = candidate_shifts(h0, h1, lo, hi)
    _emit(
        {
            "range": [lo, hi],
            "columns": ["theta", "cost", "d_left", "d_right"],
            "curve": rows,
            "breakpoints": breakpoints,
        }
    )
    return 0


def _cmd_check(args) -> int:
    h0 = _load_histogram(args.file0, args.denominator)
    h1 = _load_histogram(args.file1, args.denominator)
    c = PowerCost(args.lam)
    res = minimize(h0, h1, c)
    brk = bracket_for(c)
    bp = oracle_breakpoints(h0, h1, c, brk)
    report = {
        "solver_cost": res.cost,
        "breakpoint_oracle_cost": bp.cost,
        "exact": res.exact,
    }
    costs = [res.cost, bp.cost]
    try:
        rot = oracle_rotations(h0, h1, c)
        report["rotation_oracle_cost"] = rot.cost
        costs.append(rot.cost)
    except NoDenominator:
        report["rotation_oracle_cost"] = None
    tol = res.epsilon_used + AGREE_TOL
    agree = max(costs) - min(costs) <= tol and res.cost <= bp.cost + tol
    report["agree"] = agree
    _emit(report)
    return 0 if agree else 3


def _bench_instance(rng, n0: int, n1: int):
    x = np.sort(rng.uniform(0.0, 1.0, n0))
    y = np.sort(rng.uniform(0.0, 1.0, n1))
    mx = rng.uniform(0.0, 1.0, n0)
    my = rng.uniform(0.0, 1.0, n1)
    h0 = histogram_new(x, mx / mx.sum())
    h1 = histogram_new(y, my / my.sum())
    return h0, h1


def _cmd_bench(args) -> int:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("CIRC_OT_SEED", "0"))
    kernels = ["compiled", "python"] if args.kernel == "both" else [args.kernel]
    if "compiled" in kernels and not has_compiled():
        kernels = [k for k in kernels if k != "compiled"]
    c = PowerCost(1.0)
    rows = []
    for kern in kernels:
        for n in args.sizes:
            n0 = max(n // 2, 1)
            n1 = max(n - n0, 1)
            for eps in args.epsilons:
                rng = np.random.default_rng(seed)
                times = []
                for _ in range(args.repeats):
                    h0, h1 = _bench_instance(rng, n0, n1)
                    t0 = time.perf_counter()
                    minimize(h0, h1, c, eps, kernel=kern)
                    times.append(time.perf_counter() - t0)
                rows.append(
                    {
                        "kernel": kern,
                        "n": n,
                        "epsilon": eps,
                        "repeats": args.repeats,
                        "mean_ms": 1e3 * sum(times) / len(times),
                    }
                )
    _emit(
        {
            "seed": seed,
            "default_kernel": backend_name(),
            "columns": ["kernel", "n", "epsilon", "mean_ms"],
            "rows": rows,
        }
    )
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("file0")
    p.add_argument("file1")
    p.add_argument("--lambda", dest="lam", type=float, default=2.0)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--denominator", type=int, default=None)
    p.add_argument("--tight-bracket", action="store_true")
    p.add_argument("--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="circleot",
        description="Optimal transport between discrete measures on the circle",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="minimal transport cost and MK distance")
    _add_common(p)
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("plan", help="distance plus the optimal assignment list")
    _add_common(p)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("curve", help="sample the average-cost curve C(theta)")
    _add_common(p)
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--range", type=str, default=None, metavar="LO:HI")
    p.set_defaults(func=_cmd_curve)

    p = sub.add_parser("check", help="cross-check the solver against both oracles")
    _add_common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("bench", help="timing table over sizes and tolerances")
    p.add_argument("--sizes", type=int, nargs="+", default=[20, 50, 100, 200])
    p.add_argument("--epsilons", type=float, nargs="+", default=[1e-10])
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument(
        "--kernel", choices=["auto", "compiled", "python", "both"], default="auto"
    )
    p.set_defaults(func=_cmd_bench)
    return ap


_PARSE_ERRORS = (
    EmptyHistogram,
    NonPositiveMass,
    MassSumMismatch,
    ValueError,
    OSError,
    KeyError,
    TypeError,
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", None) is not None and args.samples < 2:
        return _fail(1, "bad_arguments", "samples must be >= 2")
    try:
        return args.func(args)
    except _PARSE_ERRORS as exc:
        return _fail(1, type(exc).__name__, str(exc))
    except CircleOtError as exc:
        return _fail(2, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
