"""Brute-force grid oracle, independent of the package's solver path.

Evaluates the square-likeness residual on the full n^4 angle lattice
(restricted to strictly increasing index tuples, one representative per
cyclic class), collects discrete local minima, polishes each candidate with
scipy's least-squares (a different algorithm from the package's Newton), and
clusters the surviving roots.  Distances are recomputed here from raw curve
points rather than through the package's configuration helpers.
"""

import numpy as np
from scipy.optimize import least_squares

TWO_PI = 2.0 * np.pi


def _residual_fn(curve):
    def res(theta):
        pts = curve.eval(np.asarray(theta, dtype=float))
        d12 = np.linalg.norm(pts[0] - pts[1])
        d14 = np.linalg.norm(pts[0] - pts[3])
        d23 = np.linalg.norm(pts[1] - pts[2])
        d34 = np.linalg.norm(pts[2] - pts[3])
        d13 = np.linalg.norm(pts[0] - pts[2])
        d24 = np.linalg.norm(pts[1] - pts[3])
        if min(d12, d14, d23, d34, d13, d24) < 1e-9:
            return np.full(4, 1e6)
        return np.array(
            [
                d12**2 / d14**2 - 1.0,
                d23**2 / d12**2 - 1.0,
                d34**2 / d23**2 - 1.0,
                (d13**2 - d24**2) / d12**2,
            ]
        )

    return res


def _norm_lattice(curve, n):
    """(n, n, n, n) float32 residual sup-norm; +inf off the ordered region."""
    values = TWO_PI * np.arange(n) / n
    pts = curve.eval(values)
    sq = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    out = np.full((n, n, n, n), np.inf, dtype=np.float32)
    jj, kk, ll = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    for i in range(n - 3):
        mask = (jj > i) & (kk > jj) & (ll > kk)
        d12 = sq[i, jj]
        d14 = sq[i, ll]
        d23 = sq[jj, kk]
        d34 = sq[kk, ll]
        d13 = sq[i, kk]
        d24 = sq[jj, ll]
        with np.errstate(divide="ignore", invalid="ignore"):
            g1 = d12 / d14 - 1.0
            g2 = d23 / d12 - 1.0
            g3 = d34 / d23 - 1.0
            g4 = (d13 - d24) / d12
            norm = np.maximum(
                np.maximum(np.abs(g1), np.abs(g2)), np.maximum(np.abs(g3), np.abs(g4))
            )
        out[i] = np.where(mask, norm, np.inf).astype(np.float32)
    return out


def _candidates(lattice, extra_lowest=500):
    is_min = np.ones(lattice.shape, dtype=bool)
    for axis in range(4):
        for shift in (1, -1):
            is_min &= lattice <= np.roll(lattice, shift, axis=axis)
    is_min &= np.isfinite(lattice)
    cands = np.argwhere(is_min)
    flat = lattice.ravel()
    order = np.argsort(np.where(np.isfinite(flat), flat, np.inf))[:extra_lowest]
    lowest = np.stack(np.unravel_index(order, lattice.shape), axis=1)
    return np.vstack([cands, lowest])


def _canonical(theta):
    th = np.mod(theta, TWO_PI)
    return np.roll(th, -int(np.argmin(th)))


def _class_dist(t1, t2):
    best = np.inf
    for s in range(4):
        d = np.abs(t1 - np.roll(t2, s)) % TWO_PI
        d = np.minimum(d, TWO_PI - d)
        best = min(best, float(d.max()))
    return best


def oracle_classes(curve, n=64, root_tol=1e-9, sep_guard=1e-3, cluster_radius=1e-6):
    """Canonical angle tuples of all inscribed square-like classes found."""
    lattice = _norm_lattice(curve, n)
    cands = _candidates(lattice)
    values = TWO_PI * np.arange(n) / n
    res = _residual_fn(curve)
    roots = []
    for idx in cands:
        sol = least_squares(
            res, values[idx], method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15
        )
        theta = _canonical(sol.x)
        if np.abs(res(theta)).max() > root_tol:
            continue
        if not np.all(np.diff(theta) > 0):
            continue
        pts = curve.eval(theta)
        sep = min(
            np.linalg.norm(pts[i] - pts[j]) for i in range(4) for j in range(i + 1, 4)
        )
        if sep <= sep_guard * curve.diameter:
            continue
        roots.append(theta)
    classes = []
    for theta in roots:
        for cluster in classes:
            if _class_dist(theta, cluster[0]) <= cluster_radius:
                cluster.append(theta)
                break
        else:
            classes.append([theta])
    reps = [min(cluster, key=lambda t: tuple(t)) for cluster in classes]
    return sorted(reps, key=lambda t: tuple(t))
