"""Command-line front end.

Subcommands: ``find`` (solve one curve), ``verify-ellipse`` (closed-form
checks), ``equivalence`` (residual-map harness), ``track`` (continuation
between two curves), ``strata-report`` (collision-proximity diagnostics).

Exit codes: 0 success, 1 bad input, 2 degeneracy (non-transverse results,
suspected continua, failed equivalence, broken paths).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .config import strata_proximity
from .continuation import track
from .curve import Curve, curve_from_json_dict, regularity_and_embedding_check
from .errors import NonTransversePath, RegularityLost, SquarePegError
from .reporting import (
    curve_hash,
    report_to_dict,
    trace_to_dict,
    write_csv,
    write_json,
    write_svg,
)
from .solver import SolverOptions, find_all
from .verify import (
    ellipse_dg_matrix,
    ellipse_square,
    equivalence_harness,
    mu_pushforward_dg_matrix,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DEGENERATE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squarepeg",
        description="Find, certify, count, and track square-like quadrilaterals "
        "inscribed in smooth closed curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    find_p = sub.add_parser("find", help="solve one curve and report classes")
    find_p.add_argument("--curve", required=True, help="curve JSON file")
    _add_solver_flags(find_p)
    _add_output_flags(find_p, svg=True, csv=True)

    ve = sub.add_parser("verify-ellipse", help="closed-form ellipse checks")
    ve.add_argument("--a", type=float, required=True)
    ve.add_argument("--b", type=float, required=True)
    _add_output_flags(ve)

    eq = sub.add_parser("equivalence", help="g/f residual equivalence harness")
    eq.add_argument("--trials", type=int, default=1000)
    eq.add_argument("--seed", type=int, default=1)
    _add_output_flags(eq)

    tr = sub.add_parser("track", help="continuation between two curves")
    tr.add_argument("--curve", required=True, help="start curve JSON file")
    tr.add_argument("--target", required=True, help="end curve JSON file")
    tr.add_argument("--steps", type=int, default=64)
    _add_solver_flags(tr)
    _add_output_flags(tr)

    st = sub.add_parser("strata-report", help="collision-proximity diagnostics")
    st.add_argument("--curve", required=True, help="curve JSON file")
    _add_solver_flags(st)
    _add_output_flags(st)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "find":
            return _cmd_find(args)
        if args.command == "verify-ellipse":
            return _cmd_verify_ellipse(args)
        if args.command == "equivalence":
            return _cmd_equivalence(args)
        if args.command == "track":
            return _cmd_track(args)
        if args.command == "strata-report":
            return _cmd_strata(args)
        raise AssertionError(f"unhandled command {args.command}")
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RegularityLost, NonTransversePath) as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except SquarePegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def cli() -> None:
    sys.exit(main())


# ---------------------------------------------------------------------------
# commands


def _cmd_find(args) -> int:
    curve = _load_curve(args.curve)
    opts = _solver_options(args)
    t0 = time.perf_counter()
    report = find_all(curve, opts)
    timings = {"solve_s": time.perf_counter() - t0}
    payload = report_to_dict(curve, opts, report, timings)
    _emit_json(args, payload)
    if getattr(args, "csv", None):
        write_csv(args.csv, curve, report)
    if getattr(args, "svg", None):
        if curve.dim == 2:
            write_svg(args.svg, curve, report)
        else:
            print("svg skipped: curve is not planar", file=sys.stderr)
    return _exit_for_flags(report.degeneracy_flags)


def _cmd_verify_ellipse(args) -> int:
    square = ellipse_square(args.a, args.b)
    mat = ellipse_dg_matrix(args.a, args.b)
    pushed = mu_pushforward_dg_matrix(args.a, args.b)
    det = float(np.linalg.det(mat))
    det_pushed = float(np.linalg.det(pushed))
    formula = 8 * (args.a**4 - args.b**4) / (args.a**2 * args.b**2)
    side = 2 * args.a * args.b / np.hypot(args.a, args.b)
    print(f"ellipse a={args.a} b={args.b}")
    print(f"  derivative matrix determinant: {det:.12g}")
    print(f"  pushforward determinant:       {det_pushed:.12g}")
    print(f"  closed-form 8(a^4-b^4)/(a^2 b^2): {formula:.12g}")
    print(f"  square side length: {side:.12g}")
    print("  vertices:")
    for i in range(1, 5):
        x, y = square.point(i)
        print(f"    p{i} = ({x: .12g}, {y: .12g})")
    payload = {
        "a": args.a,
        "b": args.b,
        "det": det,
        "det_pushforward": det_pushed,
        "det_formula": formula,
        "side_length": float(side),
        "vertices": [[float(x) for x in square.point(i)] for i in range(1, 5)],
        "matrix": mat.tolist(),
        "pushforward_matrix": pushed.tolist(),
    }
    if getattr(args, "json", None):
        write_json(args.json, payload)
    return EXIT_OK


def _cmd_equivalence(args) -> int:
    report = equivalence_harness(args.trials, args.seed)
    print(f"equivalence harness, {report.trials} trials (seed {args.seed})")
    print(f"  square-like: max |g residual| = {report.max_g_squarelike:.3e}")
    print(f"               max |f residual| = {report.max_f_squarelike:.3e}")
    print(f"  violated:    min |g residual| = {report.min_g_violated:.3e}")
    print(f"               min |f residual| = {report.min_f_violated:.3e}")
    print(f"  verdict: {'PASS' if report.passed else 'FAIL'}")
    payload = {
        "trials": report.trials,
        "seed": args.seed,
        "max_g_squarelike": report.max_g_squarelike,
        "max_f_squarelike": report.max_f_squarelike,
        "min_g_violated": report.min_g_violated,
        "min_f_violated": report.min_f_violated,
        "passed": report.passed,
    }
    if getattr(args, "json", None):
        write_json(args.json, payload)
    return EXIT_OK if report.passed else EXIT_DEGENERATE


def _cmd_track(args) -> int:
    c0 = _load_curve(args.curve)
    c1 = _load_curve(args.target)
    opts = _solver_options(args)
    trace = track(c0, c1, steps=args.steps, opts=opts)
    payload = trace_to_dict(trace)
    payload["curve_hash"] = curve_hash(c0)
    payload["target_hash"] = curve_hash(c1)
    _emit_json(args, payload)
    parities = {p for p in trace.parity_per_step}
    if "withheld" in parities or len(parities) > 1:
        return EXIT_DEGENERATE
    return EXIT_OK


def _cmd_strata(args) -> int:
    curve = _load_curve(args.curve)
    opts = _solver_options(args)
    report = find_all(curve, opts)
    check = regularity_and_embedding_check(curve)
    classes = []
    for sol in report.classes:
        stratum = strata_proximity(sol.config, scale=curve.diameter)
        classes.append(
            {
                "theta": [float(t) for t in sol.theta],
                "stratum": stratum.label,
                "codim": stratum.codim,
                "min_separation": float(sol.min_separation),
                "transverse": bool(sol.transverse),
            }
        )
    payload = {
        "curve_hash": curve_hash(curve),
        "min_speed": check["min_speed"],
        "min_self_distance": check["min_self_distance"],
        "diameter": curve.diameter,
        "classes": classes,
        "flags": list(report.degeneracy_flags),
    }
    _emit_json(args, payload)
    return _exit_for_flags(report.degeneracy_flags)


# ---------------------------------------------------------------------------
# helpers


def _add_solver_flags(parser) -> None:
    parser.add_argument("--grid", type=int, default=24, help="seed grid per axis")
    parser.add_argument("--tol", type=float, default=1e-12, help="residual tolerance")
    parser.add_argument("--dedup-eps", type=float, default=1e-6, help="dedup radius")
    parser.add_argument(
        "--sep-guard", type=float, default=1e-3, help="min separation / diameter"
    )
    parser.add_argument(
        "--det-threshold", type=float, default=1e-8, help="transversality threshold"
    )
    parser.add_argument("--max-iters", type=int, default=50, help="Newton iterations")


def _add_output_flags(parser, svg: bool = False, csv: bool = False) -> None:
    parser.add_argument("--json", help="write the JSON report here (default stdout)")
    if svg:
        parser.add_argument("--svg", help="write an SVG plot here (planar curves)")
    if csv:
        parser.add_argument("--csv", help="write the vertex CSV here")


def _solver_options(args) -> SolverOptions:
    return SolverOptions(
        grid=args.grid,
        tol_residual=args.tol,
        max_iters=args.max_iters,
        dedup_radius=args.dedup_eps,
        sep_guard=args.sep_guard,
        det_threshold=args.det_threshold,
    )


def _load_curve(path: str) -> Curve:
    with open(path) as fh:
        data = json.load(fh)
    return curve_from_json_dict(data)


def _emit_json(args, payload: dict) -> None:
    if getattr(args, "json", None):
        write_json(args.json, payload)
    else:
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")


def _exit_for_flags(flags) -> int:
    if "NonTransverse" in flags or "ContinuumSuspected" in flags:
        return EXIT_DEGENERATE
    return EXIT_OK


if __name__ == "__main__":
    cli()
