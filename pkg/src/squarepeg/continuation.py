"""Tracks inscribed square-like quadrilaterals along a family of curves.

The family is the straight line between two coefficient sets.  Each step
re-solves seeded by the previous step's classes plus a sparse fresh grid,
matches classes between steps, and records birth/death events; transverse
steps must keep the class-count parity constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .curve import Curve, regularity_and_embedding_check
from .errors import DimensionMismatch, NonTransversePath, RegularityLost
from .solver import SolveReport, SolverOptions, class_distance, find_all

#: default sparse grid used for interior steps (endpoints use the full grid)
FRESH_GRID = 12

#: refined event intervals stop at this width in t
EVENT_T_TOL = 1e-4

#: min self-distance below this fraction of the diameter aborts the path
EMBED_GUARD = 1e-3

#: samples for the per-step embedding check
STEP_CHECK_SAMPLES = 1024


def interpolate(c0: Curve, c1: Curve, t: float) -> Curve:
    """Coefficient-wise (1-t) c0 + t c1, zero-padding the shorter harmonics."""
    if c0.dim != c1.dim:
        raise DimensionMismatch(f"curve dims differ: {c0.dim} vs {c1.dim}")
    h = max(c0.harmonics, c1.harmonics)

    def pad(m: np.ndarray) -> np.ndarray:
        out = np.zeros((m.shape[0], h))
        out[:, : m.shape[1]] = m
        return out

    s = float(t)
    return Curve(
        (1.0 - s) * c0.a0 + s * c1.a0,
        (1.0 - s) * pad(c0.cos_coeffs) + s * pad(c1.cos_coeffs),
        (1.0 - s) * pad(c0.sin_coeffs) + s * pad(c1.sin_coeffs),
    )


@dataclass(frozen=True)
class TrackEvent:
    """A class-count change localized to (t_lo, t_hi).

    ``kind`` is "Birth" or "Death" for a clean conjugate pair (+2 / -2), and
    "Fold" for anything that does not fit that pattern.
    """

    t_lo: float
    t_hi: float
    kind: str
    classes: list


@dataclass(frozen=True)
class ContinuationTrace:
    ts: list
    reports: list
    events: list
    parity_per_step: list = field(default_factory=list)

    @property
    def class_counts(self) -> list:
        return [len(r.classes) for r in self.reports]


def track(
    c0: Curve,
    c1: Curve,
    steps: int = 64,
    opts: SolverOptions | None = None,
    fresh_grid: int = FRESH_GRID,
) -> ContinuationTrace:
    """Follow the solution classes of (1-t) c0 + t c1 for t in [0, 1].

    Endpoints are solved on the full grid in ``opts``; interior steps reuse
    the previous step's classes as seeds plus a ``fresh_grid`` scan.  Raises
    ``RegularityLost`` if any intermediate curve fails the regularity or
    embedding check, and ``NonTransversePath`` if a step withholds parity
    even after one retry at a shifted parameter.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    opts = opts or SolverOptions()
    interior = replace(opts, grid=fresh_grid)

    ts = [i / steps for i in range(steps + 1)]
    actual_ts = []
    reports = []
    prev_thetas = None
    for i, t in enumerate(ts):
        endpoint = i == 0 or i == steps
        step_opts = opts if endpoint else interior
        t_used, report = _solve_step(c0, c1, t, step_opts, prev_thetas)
        if report.parity == "withheld":
            if endpoint:
                raise NonTransversePath(
                    f"endpoint at t={t:.6g} is non-transverse", t=t
                )
            t_retry = 0.5 * (ts[i - 1] + t)
            t_used, report = _solve_step(c0, c1, t_retry, step_opts, prev_thetas)
            if report.parity == "withheld":
                raise NonTransversePath(
                    f"step at t={t:.6g} stayed non-transverse after refinement", t=t
                )
        actual_ts.append(t_used)
        reports.append(report)
        prev_thetas = np.array([s.theta for s in report.classes]).reshape(-1, 4)

    events = []
    for i in range(1, len(reports)):
        born, died = _match_classes(reports[i - 1], reports[i])
        if not born and not died:
            continue
        kind = _event_kind(born, died)
        t_lo, t_hi = _bisect_event(
            c0, c1, actual_ts[i - 1], actual_ts[i], reports[i - 1], reports[i], interior
        )
        events.append(
            TrackEvent(t_lo=t_lo, t_hi=t_hi, kind=kind, classes=born + died)
        )

    parity = [r.parity for r in reports]
    return ContinuationTrace(
        ts=actual_ts, reports=reports, events=events, parity_per_step=parity
    )


# ---------------------------------------------------------------------------
# internals


def _curve_at(c0: Curve, c1: Curve, t: float) -> Curve:
    try:
        curve = interpolate(c0, c1, t)
    except RegularityLost as exc:
        raise RegularityLost(f"regularity lost at t={t:.6g}: {exc}", t=t) from exc
    check = regularity_and_embedding_check(curve, samples=STEP_CHECK_SAMPLES)
    if check["min_self_distance"] <= EMBED_GUARD * curve.diameter:
        raise RegularityLost(
            f"embedding lost at t={t:.6g}: min self distance "
            f"{check['min_self_distance']:.3e}",
            t=t,
        )
    return curve


def _solve_step(c0, c1, t, step_opts, prev_thetas):
    curve = _curve_at(c0, c1, t)
    return t, find_all(curve, step_opts, extra_seeds=prev_thetas)


def _match_classes(prev: SolveReport, cur: SolveReport):
    """Nearest-angle assignment between consecutive class sets.

    Matches above 10x the median matched drift are rejected, so a class that
    jumps implausibly far counts as one death plus one birth.
    """
    a = [s.theta for s in prev.classes]
    b = [s.theta for s in cur.classes]
    if not a:
        return list(b), []
    if not b:
        return [], list(a)
    dist = np.array([[class_distance(x, y) for y in b] for x in a])
    rows, cols = linear_sum_assignment(dist)
    drifts = dist[rows, cols]
    threshold = max(10.0 * float(np.median(drifts)), 1e-9)
    matched_a = set()
    matched_b = set()
    for r, c, d in zip(rows, cols, drifts):
        if d <= threshold:
            matched_a.add(int(r))
            matched_b.add(int(c))
    born = [b[j] for j in range(len(b)) if j not in matched_b]
    died = [a[i] for i in range(len(a)) if i not in matched_a]
    return born, died


def _event_kind(born, died) -> str:
    if len(born) == 2 and not died:
        return "Birth"
    if len(died) == 2 and not born:
        return "Death"
    return "Fold"


def _bisect_event(c0, c1, t_lo, t_hi, rep_lo, rep_hi, interior_opts):
    """Shrink the interval where the class count changes to width EVENT_T_TOL."""
    count_lo = len(rep_lo.classes)
    count_hi = len(rep_hi.classes)
    if count_lo == count_hi:
        return t_lo, t_hi
    seeds = np.array(
        [s.theta for s in rep_lo.classes] + [s.theta for s in rep_hi.classes]
    ).reshape(-1, 4)
    lo, hi = t_lo, t_hi
    while hi - lo > EVENT_T_TOL:
        mid = 0.5 * (lo + hi)
        curve = _curve_at(c0, c1, mid)
        rep_mid = find_all(curve, interior_opts, extra_seeds=seeds)
        if len(rep_mid.classes) == count_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi
