"""Command-line front end: curves, region sweeps, oracle comparisons, simulations.

Every command writes CSV (or JSON with ``--json`` where supported) to
standard output or to ``--output``. Floats carry 12 significant digits.
Exit status is 0 on success, 2 for invalid arguments and 3 when a
computation fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from .closedform import (
    TwoPureProblem,
    trine_critical,
    trine_ensemble,
    trine_optimal_povm,
    trine_pe_min,
    trine_qc,
    two_pure_critical,
    two_pure_optimal_povm,
    two_pure_pe_min,
    two_pure_qc,
    two_pure_qth,
)
from .curves import FrioPoint
from .oracle import OracleConfig, convexify, optimize_fixed_q
from .qdcore import FrioError, mix_povms, trivial_povm
from .simulate import estimate_rates

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3
FLOAT_FORMAT = "%.12g"

CURVE_HEADER = ("q", "pe_min", "pe_conditional", "regime")
REGIONS_HEADER = ("eta1", "q_c", "q_th", "region")
COMPARE_HEADER = ("q", "pe_closed", "pe_oracle", "delta", "status")
SIMULATE_HEADER = ("quantity", "reference", "empirical", "standard_error", "z")


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return FLOAT_FORMAT % v
    return str(v)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        return None if not math.isfinite(v) else float(v)
    return v


# ---------------------------------------------------------------------------
# Argument validation
# ---------------------------------------------------------------------------

def _probability(name: str, v: float) -> float:
    if not 0.0 <= v <= 1.0:
        raise UsageError(f"--{name} must lie in [0, 1], got {v!r}")
    return v


def _two_pure(args) -> TwoPureProblem:
    if args.eta1 is None or args.cos_theta is None:
        raise UsageError("--eta1 and --cos-theta are required for two pure states")
    if not 0.0 < args.eta1 < 1.0:
        raise UsageError(f"--eta1 must lie strictly between 0 and 1, got {args.eta1!r}")
    _probability("cos-theta", args.cos_theta)
    return TwoPureProblem(args.eta1, args.cos_theta)


def _trine_theta(theta: float) -> float:
    if not 0.0 < theta <= math.pi / 4 + 1e-12:
        raise UsageError(f"--theta must lie in (0, pi/4] radians, got {theta!r}")
    return min(theta, math.pi / 4)


def _grid(args, upper: float = 1.0) -> np.ndarray:
    if args.steps < 2:
        raise UsageError(f"--steps must be at least 2, got {args.steps}")
    lo = _probability("q-min", args.q_min)
    hi = _probability("q-max", upper if args.q_max is None else args.q_max)
    if hi < lo:
        raise UsageError(f"--q-max {hi!r} is below --q-min {lo!r}")
    return np.linspace(lo, hi, args.steps)


def _family(args):
    """Pick the trine family when --theta is given, two pure states otherwise."""
    if args.theta is not None:
        if args.eta1 is not None or args.cos_theta is not None:
            raise UsageError("--theta selects trine states; do not combine it with --eta1/--cos-theta")
        theta = _trine_theta(args.theta)
        return "trine", theta
    return "two-pure", _two_pure(args)


def _oracle_config(args) -> OracleConfig:
    try:
        return OracleConfig(
            orientation_grid_size=args.grid_size,
            random_restarts=args.restarts,
            seed=args.seed,
            allow_full_rank_pi0=args.full_rank,
        )
    except FrioError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _curve_rows(points: Sequence[FrioPoint], alpha: float):
    for pt in points:
        cond = alpha if pt.q >= 1.0 else pt.conditional_error
        yield (float(pt.q), float(pt.pe_min), float(cond), pt.regime.value)


def cmd_curve_two_pure(args) -> str:
    p = _two_pure(args)
    qs = _grid(args)
    alpha = two_pure_critical(p).alpha
    return _csv(CURVE_HEADER, _curve_rows([two_pure_pe_min(p, float(q)) for q in qs], alpha))


def cmd_curve_trine(args) -> str:
    theta = _trine_theta(args.theta)
    qs = _grid(args)
    alpha = trine_critical(theta).alpha
    return _csv(CURVE_HEADER, _curve_rows([trine_pe_min(theta, float(q)) for q in qs], alpha))


def cmd_regions(args) -> str:
    cos_theta = _probability("cos-theta", args.cos_theta)
    if args.steps < 3:
        raise UsageError(f"--steps must be at least 3, got {args.steps}")
    rows = []
    # The endpoints eta1 = 0 and 1 are single-state problems and are skipped.
    for k in range(1, args.steps - 1):
        p = TwoPureProblem(k / (args.steps - 1), cos_theta)
        rows.append((float(p.eta1), two_pure_qc(p), two_pure_qth(p), p.region.value))
    return _csv(REGIONS_HEADER, rows)


def _compare_rows(args):
    kind, problem = _family(args)
    cfg = _oracle_config(args)
    if kind == "trine":
        ensemble = trine_ensemble(problem)
        closed = lambda q: trine_pe_min(problem, q).pe_min  # noqa: E731
    else:
        ensemble = problem.ensemble()
        closed = lambda q: two_pure_pe_min(problem, q).pe_min  # noqa: E731
    qs = [float(q) for q in _grid(args)]
    raw, failed = [], {}
    for q in qs:
        if q >= 1.0:
            continue
        try:
            res = optimize_fixed_q(ensemble, q, cfg)
        except FrioError as exc:
            failed[q] = str(exc)
            continue
        raw.append((res.achieved_q, res.pe, res.povm))
    envelope = {}
    if raw:
        hull = convexify(raw, n_states=len(ensemble))
        hq, hpe = hull.q, hull.pe
        envelope = {q: float(np.interp(q, hq, hpe)) for q in qs if q not in failed}
    elif not failed:
        envelope = {1.0: 0.0}
    rows = []
    for q in qs:
        pc = closed(q)
        if q in failed or q not in envelope:
            rows.append((q, pc, math.nan, math.nan, "infeasible"))
            continue
        po = envelope[q]
        delta = po - pc
        rows.append((q, pc, po, delta, "ok" if abs(delta) <= args.tolerance else "mismatch"))
    return rows, failed


def cmd_compare(args) -> str:
    rows, failed = _compare_rows(args)
    if args.json:
        deltas = [abs(r[3]) for r in rows if r[4] != "infeasible"]
        summary = {
            "rows": [dict(zip(COMPARE_HEADER, map(_json_value, r))) for r in rows],
            "max_abs_delta": max(deltas) if deltas else None,
            "mismatches": sum(r[4] == "mismatch" for r in rows),
            "infeasible": {str(q): msg for q, msg in failed.items()},
        }
        return json.dumps(summary, indent=2) + "\n"
    return _csv(COMPARE_HEADER, rows)


def _optimal_povm(kind, problem, q):
    """Optimal measurement at rate q, mixing with the trivial one past Q_c."""
    if kind == "trine":
        q_c, ensemble, build = trine_qc(problem), trine_ensemble(problem), trine_optimal_povm
    else:
        q_c, ensemble, build = two_pure_qc(problem), problem.ensemble(), two_pure_optimal_povm
    if q <= q_c:
        return ensemble, build(problem, q)
    # Past Q_c the optimum is a mixture of the Q_c strategy and always answering "inconclusive".
    weight = (1.0 - q) / (1.0 - q_c)
    return ensemble, mix_povms(weight, build(problem, q_c), trivial_povm(len(ensemble)))


def cmd_simulate(args) -> str:
    kind, problem = _family(args)
    q = _probability("q", args.q)
    if args.trials < 1:
        raise UsageError(f"--trials must be positive, got {args.trials}")
    ensemble, povm = _optimal_povm(kind, problem, q)
    report = estimate_rates(ensemble, povm, args.trials, args.seed)
    names = ("p_success", "p_error", "q_inconclusive")
    rows = [
        (name, ref, emp, se, z)
        for name, ref, emp, se, z in zip(
            names, report.reference.as_tuple(), report.empirical.as_tuple(),
            report.standard_errors, report.z_scores,
        )
    ]
    if args.json:
        summary = {
            "n_trials": report.n_trials,
            "seed": args.seed,
            "counts": dict(zip(names, report.counts)),
            "rows": [dict(zip(SIMULATE_HEADER, map(_json_value, r))) for r in rows],
            "max_abs_z": _json_value(report.max_abs_z),
        }
        return json.dumps(summary, indent=2) + "\n"
    return _csv(SIMULATE_HEADER, rows)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_output(p):
    p.add_argument("--output", "-o", help="write to this file instead of standard output")


def _add_grid(p, steps=101):
    p.add_argument("--q-min", type=float, default=0.0)
    p.add_argument("--q-max", type=float, default=None, help="defaults to 1")
    p.add_argument("--steps", type=int, default=steps)


def _add_family(p):
    p.add_argument("--eta1", type=float, help="prior of the first of two pure states")
    p.add_argument("--cos-theta", type=float, help="overlap |<psi1|psi2>| of the two states")
    p.add_argument("--theta", type=float, help="trine half-angle in radians, in (0, pi/4]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frio",
        description="Qubit state discrimination at a fixed rate of inconclusive outcomes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve-two-pure", help="optimal error curve for two pure states")
    p.add_argument("--eta1", type=float, required=True)
    p.add_argument("--cos-theta", type=float, required=True)
    _add_grid(p)
    _add_output(p)
    p.set_defaults(handler=cmd_curve_two_pure)

    p = sub.add_parser("curve-trine", help="optimal error curve for trine states")
    p.add_argument("--theta", type=float, required=True, help="radians, in (0, pi/4]")
    _add_grid(p)
    _add_output(p)
    p.set_defaults(handler=cmd_curve_trine)

    p = sub.add_parser("regions", help="critical and threshold rates across priors")
    p.add_argument("--cos-theta", type=float, required=True)
    p.add_argument("--steps", type=int, default=201)
    _add_output(p)
    p.set_defaults(handler=cmd_regions)

    p = sub.add_parser("compare", help="closed form against the numerical oracle")
    _add_family(p)
    _add_grid(p, steps=11)
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--grid-size", type=int, default=OracleConfig.orientation_grid_size)
    p.add_argument("--restarts", type=int, default=OracleConfig.random_restarts)
    p.add_argument("--seed", type=int, default=OracleConfig.seed)
    p.add_argument("--full-rank", action="store_true", help="also search full-rank Pi_0")
    p.add_argument("--json", action="store_true", help="emit a JSON summary")
    _add_output(p)
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("simulate", help="Monte Carlo check of an optimal measurement")
    _add_family(p)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="emit a JSON summary")
    _add_output(p)
    p.set_defaults(handler=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        text = args.handler(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"frio {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FrioError, ArithmeticError) as exc:
        print(f"frio {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK
