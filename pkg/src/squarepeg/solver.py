"""Finds inscribed square-like quadrilaterals by damped Newton on the 4-torus.

The residual G(theta) = g(gamma(theta_1..4)) - (1,1,1,0) is driven to zero
from a grid of ordered seeds.  Converged roots are certified by the 4x4
reduced Jacobian determinant, deduplicated up to cyclic relabeling, and
reported with a parity verdict.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from .config import Config4, ordered_component_check
from .curve import Curve
from .errors import (
    DegenerateConfiguration,
    Divergence,
    LeftOrderedComponent,
    NearBoundary,
    SingularJacobianDuringIteration,
)
from .slq import G_TARGET

TWO_PI = 2.0 * np.pi

#: minimum separation (relative to diameter) below which G is not evaluated
MACHINE_SEP = 1e-9

#: a Jacobian row this much smaller than the largest row counts as zero
ROW_FLOOR = 1e-12

#: distance pairs used by the residual, 0-based
_PAIRS = ((0, 1), (0, 3), (1, 2), (2, 3), (0, 2), (1, 3))

_STATUS_CONVERGED = 0
_STATUS_DIVERGED = 1
_STATUS_LEFT_ORDERED = 2
_STATUS_NEAR_BOUNDARY = 3


@dataclass(frozen=True)
class SolverOptions:
    grid: int = 24
    tol_residual: float = 1e-12
    max_iters: int = 50
    dedup_radius: float = 1e-6
    sep_guard: float = 1e-3
    det_threshold: float = 1e-8

    def to_dict(self) -> dict:
        return {
            "grid": self.grid,
            "tol_residual": self.tol_residual,
            "max_iters": self.max_iters,
            "dedup_radius": self.dedup_radius,
            "sep_guard": self.sep_guard,
            "det_threshold": self.det_threshold,
        }


@dataclass(frozen=True)
class Solution:
    """One labeled root in canonical cyclic form (smallest angle first)."""

    theta: np.ndarray
    config: Config4
    residual_norm: float
    jac_det: float
    transverse: bool
    min_separation: float


@dataclass(frozen=True)
class SolveReport:
    """Cyclic classes of inscribed square-like quadrilaterals on one curve."""

    classes: list
    labeled_count: int
    parity: str  # "odd" | "even" | "withheld"
    all_transverse: bool
    degeneracy_flags: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# residual and Jacobian


def _points_at(curve: Curve, thetas: np.ndarray) -> np.ndarray:
    """(m, 4) angles -> (m, 4, k) curve points."""
    m = thetas.shape[0]
    return curve.eval(thetas.reshape(-1)).reshape(m, 4, curve.dim)


def _pair_distances(points: np.ndarray) -> dict:
    return {
        (i, j): np.linalg.norm(points[:, i] - points[:, j], axis=1) for i, j in _PAIRS
    }


def _residual_batch(curve: Curve, thetas: np.ndarray):
    """Residual, residual sup-norm, and min separation for a batch of tuples.

    Rows whose configuration is numerically degenerate get +inf norm instead
    of raising, so the damped line search can simply reject them.
    """
    pts = _points_at(curve, thetas)
    d = _pair_distances(pts)
    min_sep = np.min(np.stack([d[p] for p in _PAIRS], axis=1), axis=1)
    ok = min_sep > MACHINE_SEP * curve.diameter
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.stack(
            [
                d[(0, 1)] ** 2 / d[(0, 3)] ** 2,
                d[(1, 2)] ** 2 / d[(0, 1)] ** 2,
                d[(2, 3)] ** 2 / d[(1, 2)] ** 2,
                (d[(0, 2)] ** 2 - d[(1, 3)] ** 2) / d[(0, 1)] ** 2,
            ],
            axis=1,
        )
    res = g - G_TARGET
    with np.errstate(invalid="ignore"):
        norms = np.abs(res).max(axis=1)
    norms = np.where(ok & np.isfinite(norms), norms, np.inf)
    return res, norms, min_sep


def _jacobian_batch(curve: Curve, thetas: np.ndarray) -> np.ndarray:
    """Exact derivative of the residual w.r.t. each angle, (m, 4, 4)."""
    m = thetas.shape[0]
    pts = _points_at(curve, thetas)
    tan = curve.deriv(thetas.reshape(-1)).reshape(m, 4, curve.dim)
    d = {}
    u = {}
    for i, j in _PAIRS:
        diff = pts[:, i] - pts[:, j]
        dist = np.linalg.norm(diff, axis=1)
        d[(i, j)] = dist
        with np.errstate(divide="ignore", invalid="ignore"):
            u[(i, j)] = diff / dist[:, None]

    def dlen(i, j, col):
        if col == i:
            return np.einsum("mk,mk->m", u[(i, j)], tan[:, col])
        if col == j:
            return -np.einsum("mk,mk->m", u[(i, j)], tan[:, col])
        return np.zeros(m)

    d01, d03 = d[(0, 1)], d[(0, 3)]
    d12, d23 = d[(1, 2)], d[(2, 3)]
    d02, d13 = d[(0, 2)], d[(1, 3)]
    jac = np.empty((m, 4, 4))
    for col in range(4):
        dl01 = dlen(0, 1, col)
        dl03 = dlen(0, 3, col)
        dl12 = dlen(1, 2, col)
        dl23 = dlen(2, 3, col)
        dl02 = dlen(0, 2, col)
        dl13 = dlen(1, 3, col)
        jac[:, 0, col] = 2 * d01 / d03**2 * dl01 - 2 * d01**2 / d03**3 * dl03
        jac[:, 1, col] = 2 * d12 / d01**2 * dl12 - 2 * d12**2 / d01**3 * dl01
        jac[:, 2, col] = 2 * d23 / d12**2 * dl23 - 2 * d23**2 / d12**3 * dl12
        jac[:, 3, col] = (
            2 * d02 / d01**2 * dl02
            - 2 * d13 / d01**2 * dl13
            - 2 * (d02**2 - d13**2) / d01**3 * dl01
        )
    return jac


def _check_separation(curve: Curve, thetas: np.ndarray) -> None:
    pts = _points_at(curve, thetas[None, :])[0]
    dmin = min(np.linalg.norm(pts[i] - pts[j]) for i, j in _PAIRS)
    if dmin <= MACHINE_SEP * curve.diameter:
        raise DegenerateConfiguration(
            f"curve points separated by {dmin:.3e}, below guard"
        )


def residual(curve: Curve, thetas) -> np.ndarray:
    """G(theta) = g(gamma(theta)) - (1, 1, 1, 0) for one angle 4-tuple."""
    th = np.asarray(thetas, dtype=float).reshape(4)
    _check_separation(curve, th)
    res, _, _ = _residual_batch(curve, th[None, :])
    return res[0]


def jacobian(curve: Curve, thetas) -> np.ndarray:
    """Analytic 4x4 derivative of ``residual`` in the four angles."""
    th = np.asarray(thetas, dtype=float).reshape(4)
    _check_separation(curve, th)
    return _jacobian_batch(curve, th[None, :])[0]


# ---------------------------------------------------------------------------
# seeds and Newton refinement


def seed_grid(n_per_axis: int) -> np.ndarray:
    """Ordered seed tuples from the uniform grid, first angle in [0, pi/2).

    Every cyclic class of distinct grid angles keeps at least its minimal
    rotation when the minimum lies below pi/2, which pre-quotients the cyclic
    relabeling approximately while Newton remains free to leave the region.
    """
    if n_per_axis < 4:
        raise ValueError("n_per_axis must be >= 4")
    values = TWO_PI * np.arange(n_per_axis) / n_per_axis
    out = []
    for combo in itertools.combinations(range(n_per_axis), 4):
        for t in range(4):
            if values[combo[t]] < np.pi / 2:
                out.append([values[combo[(t + s) % 4]] for s in range(4)])
    return np.array(out, dtype=float).reshape(-1, 4)


def canonical_theta(thetas) -> np.ndarray:
    """Reduce mod 2pi and rotate the tuple so the smallest angle comes first."""
    th = np.mod(np.asarray(thetas, dtype=float).reshape(4), TWO_PI)
    return np.roll(th, -int(np.argmin(th)))


def _canonical_batch(thetas: np.ndarray) -> np.ndarray:
    th = np.mod(np.asarray(thetas, dtype=float).reshape(-1, 4), TWO_PI)
    rows = np.arange(th.shape[0])
    start = np.argmin(th, axis=1)
    return np.stack([th[rows, (start + s) % 4] for s in range(4)], axis=1)


def _ordered_batch(thetas: np.ndarray) -> np.ndarray:
    rot = _canonical_batch(thetas)
    return np.all(np.diff(rot, axis=1) > 0.0, axis=1)


def class_distance(t1, t2) -> float:
    """Sup metric on angle tuples up to cyclic relabeling, circular per angle."""
    a = np.mod(np.asarray(t1, dtype=float).reshape(4), TWO_PI)
    b = np.mod(np.asarray(t2, dtype=float).reshape(4), TWO_PI)
    best = np.inf
    for s in range(4):
        diff = np.abs(a - np.roll(b, s)) % TWO_PI
        diff = np.minimum(diff, TWO_PI - diff)
        best = min(best, float(diff.max()))
    return best


def _newton_batch(curve: Curve, seeds: np.ndarray, opts: SolverOptions):
    """Damped Newton on all seeds at once.

    Returns (thetas, residual sup-norms, status array, singular-fallback flags).
    The step is the plain Newton solve where the Jacobian is comfortably
    nonsingular and a pseudo-inverse (Gauss-Newton) step otherwise; damping
    halves the step until the residual norm decreases.
    """
    thetas = np.mod(np.array(seeds, dtype=float), TWO_PI)
    m = thetas.shape[0]
    res, norms, _ = _residual_batch(curve, thetas)
    converged = norms < opts.tol_residual
    active = np.ones(m, dtype=bool)
    used_singular = np.zeros(m, dtype=bool)
    for _ in range(opts.max_iters):
        work = active & ~converged
        if not work.any():
            break
        idx = np.flatnonzero(work)
        jac = _jacobian_batch(curve, thetas[idx])
        dets = np.linalg.det(jac)
        scale = np.abs(jac).max(axis=(1, 2)) + 1e-300
        regular = np.abs(dets) > 1e-10 * scale**4
        step = np.empty((len(idx), 4))
        if regular.any():
            step[regular] = np.linalg.solve(
                jac[regular], -res[idx][regular][..., None]
            )[..., 0]
        if (~regular).any():
            pinv = np.linalg.pinv(jac[~regular], rcond=1e-10)
            step[~regular] = -np.einsum("mij,mj->mi", pinv, res[idx][~regular])
            used_singular[idx[~regular]] = True
        damping = np.ones(len(idx))
        remaining = np.ones(len(idx), dtype=bool)
        best_theta = thetas[idx].copy()
        best_res = res[idx].copy()
        best_norm = norms[idx].copy()
        improved = np.zeros(len(idx), dtype=bool)
        for _ in range(11):
            if not remaining.any():
                break
            sub = np.flatnonzero(remaining)
            trial = np.mod(thetas[idx][sub] + damping[sub, None] * step[sub], TWO_PI)
            trial_res, trial_norm, _ = _residual_batch(curve, trial)
            better = trial_norm < best_norm[sub]
            hit = sub[better]
            best_theta[hit] = trial[better]
            best_res[hit] = trial_res[better]
            best_norm[hit] = trial_norm[better]
            improved[hit] = True
            remaining[hit] = False
            damping[remaining] *= 0.5
        thetas[idx] = best_theta
        res[idx] = best_res
        norms[idx] = best_norm
        converged[idx] = best_norm < opts.tol_residual
        active[idx] = improved | converged[idx]

    status = np.full(m, _STATUS_DIVERGED, dtype=np.int8)
    conv_idx = np.flatnonzero(converged)
    if conv_idx.size:
        pts = _points_at(curve, thetas[conv_idx])
        d = _pair_distances(pts)
        min_sep = np.min(np.stack([d[p] for p in _PAIRS], axis=1), axis=1)
        rel_sep = min_sep / curve.diameter
        ordered = _ordered_batch(thetas[conv_idx])
        st = np.full(conv_idx.size, _STATUS_CONVERGED, dtype=np.int8)
        st[~ordered] = _STATUS_LEFT_ORDERED
        st[ordered & (rel_sep <= opts.sep_guard)] = _STATUS_NEAR_BOUNDARY
        status[conv_idx] = st
    return thetas, norms, status, used_singular


def _certify(curve: Curve, theta: np.ndarray, opts: SolverOptions):
    """Jacobian determinant and the scale-relative transversality verdict."""
    jac = _jacobian_batch(curve, theta[None, :])[0]
    det = float(np.linalg.det(jac))
    rows = np.linalg.norm(jac, axis=1)
    if rows.max() == 0.0 or rows.min() <= ROW_FLOOR * rows.max():
        return det, False
    return det, bool(abs(det) > opts.det_threshold * float(np.prod(rows)))


def _make_solution(curve: Curve, theta: np.ndarray, opts: SolverOptions) -> Solution:
    th = canonical_theta(theta)
    pts = _points_at(curve, th[None, :])[0]
    cfg = Config4(pts)
    res, norms, min_sep = _residual_batch(curve, th[None, :])
    det, transverse = _certify(curve, th, opts)
    return Solution(
        theta=th,
        config=cfg,
        residual_norm=float(norms[0]),
        jac_det=det,
        transverse=transverse,
        min_separation=float(min_sep[0] / curve.diameter),
    )


def newton_refine(curve: Curve, theta0, opts: SolverOptions | None = None) -> Solution:
    """Refine one seed; raises a typed error instead of returning junk."""
    opts = opts or SolverOptions()
    th0 = np.asarray(theta0, dtype=float).reshape(4)
    if not ordered_component_check(th0):
        raise ValueError("seed must lie in the ordered component")
    thetas, norms, status, singular = _newton_batch(curve, th0[None, :], opts)
    st = int(status[0])
    if st == _STATUS_CONVERGED:
        return _make_solution(curve, thetas[0], opts)
    if st == _STATUS_LEFT_ORDERED:
        raise LeftOrderedComponent(f"converged to unordered angles {thetas[0]}")
    if st == _STATUS_NEAR_BOUNDARY:
        raise NearBoundary(
            "converged configuration violates the minimum-separation guard"
        )
    if bool(singular[0]):
        raise SingularJacobianDuringIteration(
            f"stalled at |G| = {norms[0]:.3e} despite pseudo-inverse steps"
        )
    raise Divergence(f"no convergence from seed {th0}, final |G| = {norms[0]:.3e}")


# ---------------------------------------------------------------------------
# cyclic quotient dedup


def _cluster_thetas(thetas, radius: float) -> list:
    """Single-linkage clusters under ``class_distance``; returns index lists.

    Tuples are first collapsed into quantization buckets of width radius/4
    (identical roots found from many seeds land in the same bucket), then the
    bucket representatives are swept in sorted order of the first angle of
    each cyclic rotation, so near-zero angles that wrap past 2pi still land
    in the same cluster.
    """
    arr = np.asarray(thetas, dtype=float).reshape(-1, 4)
    n = arr.shape[0]
    if n == 0:
        return []
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    canon = _canonical_batch(arr)
    q = radius / 4.0
    buckets = {}
    for i in range(n):
        key = tuple((canon[i] / q).astype(np.int64))
        other = buckets.setdefault(key, i)
        if other != i:
            union(other, i)
    rep_ids = sorted(set(buckets.values()))

    entries = []
    for owner in rep_ids:
        for s in range(4):
            rot = tuple(np.roll(canon[owner], -s))
            entries.append((rot[0], rot, owner))
    entries.sort(key=lambda e: e[0])

    def circ_sup(a, b):
        worst = 0.0
        for x, y in zip(a, b):
            d = abs(x - y) % TWO_PI
            d = min(d, TWO_PI - d)
            worst = max(worst, d)
        return worst

    window = radius + 4.0 * q
    for i, (first, rot, owner) in enumerate(entries):
        j = i - 1
        while j >= 0 and first - entries[j][0] <= window:
            other = entries[j][2]
            if find(owner) != find(other) and circ_sup(rot, entries[j][1]) <= radius:
                union(owner, other)
            j -= 1
    # wrap-around window: first angles near 0 vs near 2pi
    head = [e for e in entries if e[0] <= window]
    tail = [e for e in entries if e[0] >= TWO_PI - window]
    for _, rot_a, owner_a in head:
        for _, rot_b, owner_b in tail:
            if find(owner_a) != find(owner_b) and circ_sup(rot_a, rot_b) <= radius:
                union(owner_a, owner_b)

    clusters = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)
    return list(clusters.values())


def quotient_dedup(solutions: list, radius: float = 1e-6) -> list:
    """One canonical representative per cyclic class.

    Clusters are single-linkage in the cyclic-quotient sup metric on angles;
    the representative is the lexicographically smallest canonical tuple, and
    the result is sorted lexicographically for determinism.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if not solutions:
        return []
    canon = _canonical_batch(np.array([s.theta for s in solutions]))
    reps = []
    for members in _cluster_thetas(canon, radius):
        best = min(members, key=lambda i: tuple(canon[i]))
        sol = solutions[best]
        if not np.array_equal(sol.theta, canon[best]):
            sol = replace(sol, theta=canon[best])
        reps.append(sol)
    reps.sort(key=lambda s: tuple(s.theta))
    return reps


# ---------------------------------------------------------------------------
# full search


def find_all(
    curve: Curve,
    opts: SolverOptions | None = None,
    extra_seeds=None,
) -> SolveReport:
    """Search the full seed grid and report cyclic classes with parity.

    ``extra_seeds`` augments the grid (continuation feeds the previous
    step's solutions through here).  The report never raises on degeneracy;
    it carries flags instead.
    """
    opts = opts or SolverOptions()
    seeds = seed_grid(opts.grid)
    if extra_seeds is not None:
        extra = np.asarray(extra_seeds, dtype=float).reshape(-1, 4)
        if extra.size:
            seeds = np.vstack([seeds, extra])
    thetas, norms, status, _ = _newton_batch(curve, seeds, opts)

    flags = []
    if np.any(status == _STATUS_NEAR_BOUNDARY):
        flags.append("NearBoundary")

    good = thetas[status == _STATUS_CONVERGED]
    canon = _canonical_batch(good) if good.size else np.empty((0, 4))
    classes = []
    for members in _cluster_thetas(canon, opts.dedup_radius):
        rep_theta = min((canon[i] for i in members), key=tuple)
        classes.append(_make_solution(curve, rep_theta, opts))
    classes.sort(key=lambda s: tuple(s.theta))

    all_transverse = all(s.transverse for s in classes)
    if not all_transverse:
        flags.append("NonTransverse")
    if _continuum_suspected(classes, opts):
        flags.append("ContinuumSuspected")
    parity = (
        ("odd" if len(classes) % 2 == 1 else "even") if all_transverse else "withheld"
    )
    return SolveReport(
        classes=classes,
        labeled_count=4 * len(classes),
        parity=parity,
        all_transverse=all_transverse,
        degeneracy_flags=flags,
    )


def _continuum_suspected(classes: list, opts: SolverOptions) -> bool:
    """Two non-transverse classes closer than 1000x the dedup radius."""
    window = 1e3 * opts.dedup_radius
    suspects = [s for s in classes if not s.transverse]
    suspects.sort(key=lambda s: float(s.theta[0]))
    for i, a in enumerate(suspects):
        for b in suspects[i + 1 :]:
            if float(b.theta[0]) - float(a.theta[0]) > window:
                break
            if class_distance(a.theta, b.theta) <= window:
                return True
    # wrap-around pairs
    lo = [s for s in suspects if float(s.theta[0]) <= window]
    hi = [s for s in suspects if float(s.theta[0]) >= TWO_PI - window]
    for a in lo:
        for b in hi:
            if class_distance(a.theta, b.theta) <= window:
                return True
    return False
