"""Riemann-branch enumeration, numerical continuation, and monodromy.

Continuation tracks the squarefree part of the content-free polynomial:
repeated factors would make Newton singular along the whole leaf while the
leaf sets coincide.  Paths are polygonal; each segment is walked with a
first-order predictor (implicit differentiation) and a Newton corrector in
w, with adaptive step halving.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import numpy.polynomial.polynomial as npoly

from . import poly as P
from .curve import DEDUP_EPS, CurveData, curve_data
from .errors import (AmbiguousMatching, MultipleZeroBranches, NearExcludedPoint,
                     NewtonDivergence, NoZeroBranch, NotClassB, StepUnderflow,
                     ZeroPolynomial)

# Residual tolerance factor: |S~(z, w)| <= BRANCH_RES * term scale at every
# accepted sample.
BRANCH_RES = 1e-9
# Absolute tolerance for "a branch value at z=0 equals 0".
ZERO_BRANCH_TOL = 1e-7
_MIN_STEP = 1e-12


@dataclass(frozen=True)
class ContinuationOptions:
    branch_res: float = BRANCH_RES
    r_margin: float | None = None      # hole clearance; default 1e-3 * path scale
    max_newton: int = 4                # corrector budget before halving
    validate_path: bool = True         # enforce hole clearance on input paths
    holes: tuple | None = None         # precomputed excluded points of S


@dataclass(frozen=True)
class BranchPath:
    """A tracked branch: the squarefree polynomial actually continued, the
    accepted samples, the worst scaled residual, and step statistics."""
    poly: P.BivarPoly
    samples: tuple                     # ((z, w), ...)
    max_residual: float
    step_stats: tuple                  # (min |dz|, max |dz|)

    @property
    def value(self) -> complex:
        return self.samples[-1][1]


@dataclass(frozen=True)
class Monodromy:
    base: complex
    loop: tuple
    permutation: tuple                 # permutation[i] = matched start index

    @property
    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.permutation))


# ---------------------------------------------------------------------------
# fiber values


def _fiber_roots(Stilde: P.BivarPoly, z: complex) -> np.ndarray:
    row = P.specialize_z(Stilde, z)
    return P._find_roots(np.array(row.coeffs))


def branch_values(S: P.BivarPoly, z: complex, *,
                  dedup_eps: float = DEDUP_EPS,
                  data: CurveData | None = None) -> list:
    """The simple fiber roots over z, one per branch; at most deg_total(S).

    Requires z away (by dedup_eps) from every excluded point of the
    content-free part; vertical-line zeros of the content do not block.
    """
    if S.is_zero:
        raise ZeroPolynomial("branch values of the zero polynomial")
    if data is None:
        data = curve_data(S)
    for z0 in data.pole + data.ram_int:
        if abs(z - z0) <= dedup_eps:
            raise NearExcludedPoint(f"z={z} is within {dedup_eps} of an "
                                    f"excluded point at {z0}")
    if data.Stilde is None:
        return []
    spec = P.specialize_z(data.Stilde, z)
    ell = spec.true_degree
    if ell < data.Stilde.deg_w:
        raise NearExcludedPoint("fiber degree drops at z (leading "
                                "coefficient nearly vanishes)")
    if ell <= 0:
        return []
    vals = _fiber_roots(data.Stilde, z)
    if len(vals) >= 2:
        sep = min(abs(a - b) for i, a in enumerate(vals)
                  for b in vals[i + 1:])
        if sep <= 2 * P.ROOT_CLUSTER_EPS:
            raise NearExcludedPoint("fiber roots collide at z")
    return sorted((complex(v) for v in vals), key=lambda w: (w.real, w.imag))


# ---------------------------------------------------------------------------
# predictor-corrector continuation


def _seg_point_dist(a: complex, b: complex, p: complex) -> float:
    if a == b:
        return abs(p - a)
    d = b - a
    t = ((p - a) * d.conjugate()).real / (abs(d) ** 2)
    t = min(1.0, max(0.0, t))
    return abs(a + t * d - p)


def _validate_clearance(path, holes, margin):
    for a, b in zip(path[:-1], path[1:]):
        for h in holes:
            if _seg_point_dist(a, b, h) < margin:
                raise NearExcludedPoint(
                    f"path segment {a} -> {b} passes within {margin} of the "
                    f"excluded point {h}")


def _newton_correct(spec_c, spec_d, w, tol_abs, max_iter):
    """Newton in w on the specialized fiber; returns (w, residual, iters,
    converged)."""
    it = 0
    f = npoly.polyval(w, spec_c)
    while it < max_iter:
        df = npoly.polyval(w, spec_d)
        if df == 0 or not np.isfinite(df):
            return w, abs(f), it, False
        w = w - f / df
        it += 1
        if not np.isfinite(w):
            raise NewtonDivergence("Newton iterate left the finite plane")
        f = npoly.polyval(w, spec_c)
        if abs(f) <= tol_abs:
            # polish while it still helps, for near machine-level residuals
            for _ in range(3):
                df = npoly.polyval(w, spec_d)
                if df == 0:
                    break
                w2 = w - f / df
                f2 = npoly.polyval(w2, spec_c)
                if abs(f2) >= abs(f):
                    break
                w, f = w2, f2
            return w, abs(f), it, True
    return w, abs(f), it, False


def _fiber_separation(Stilde, z, w) -> float:
    if Stilde.deg_w < 2:
        return np.inf
    vals = _fiber_roots(Stilde, z)
    others = sorted(abs(vals - w))
    return float(others[1]) if len(others) >= 2 else np.inf


def continue_branch(S: P.BivarPoly, start, path, opts: ContinuationOptions | None = None,
                    *, data: CurveData | None = None) -> BranchPath:
    """Continue the branch through `start` along a polygonal path.

    `start` is a (z, w) pair lying on the curve within the residual
    tolerance; `path` is a sequence of waypoints beginning at start's z
    (prepended when missing).
    """
    opts = opts or ContinuationOptions()
    if S.is_zero:
        raise ZeroPolynomial("continuation on the zero polynomial")
    if data is None:
        data = curve_data(S)
    if data.Stilde is None:
        raise ValueError("the curve has no branches (constant in w)")
    St = data.Stilde
    Sw = P.diff_w(St)
    Sz = P.diff_z(St)
    z0, w0 = complex(start[0]), complex(start[1])
    waypoints = [complex(z) for z in path]
    if not waypoints or abs(waypoints[0] - z0) > 1e-14 * max(1.0, abs(z0)):
        waypoints = [z0] + waypoints
    margin = opts.r_margin
    if margin is None:
        margin = 1e-3 * max(1.0, max(abs(z) for z in waypoints))
    if opts.validate_path:
        holes = opts.holes
        if holes is None:
            holes = data.vertical + data.pole + data.ram_int
        _validate_clearance(waypoints, holes, margin)

    res0 = abs(St(z0, w0))
    scale0 = P.term_scale(St, z0, w0)
    if res0 > opts.branch_res * max(scale0, 1e-300):
        raise ValueError("start point does not lie on the curve within the "
                         "residual tolerance")

    samples = [(z0, w0)]
    max_rel = res0 / max(scale0, 1e-300)
    hmin, hmax = np.inf, 0.0
    z, w = z0, w0
    for za, zb in zip(waypoints[:-1], waypoints[1:]):
        seg = zb - za
        if abs(seg) < _MIN_STEP:
            continue  # coincident waypoints
        t, h = 0.0, 1.0
        while t < 1.0 - 1e-15:
            h = min(h, 1.0 - t)
            step = h * seg
            if abs(step) < _MIN_STEP:
                raise StepUnderflow(
                    f"step collapsed below {_MIN_STEP} near z={z}")
            z_new = za + (t + h) * seg
            fw = P.evaluate(Sw, z, w)
            fz = P.evaluate(Sz, z, w)
            ok = np.isfinite(fw) and fw != 0
            if ok:
                w_pred = w + (-fz / fw) * step
                spec_c = npoly.polyval(z_new, St.coeffs)
                spec_d = npoly.polyval(z_new, Sw.coeffs)
                scale = P.term_scale(St, z_new, w_pred)
                tol_abs = opts.branch_res * max(scale, 1e-300)
                try:
                    w_corr, resid, iters, conv = _newton_correct(
                        spec_c, spec_d, w_pred, tol_abs, opts.max_newton)
                except NewtonDivergence:
                    conv = False
                if conv:
                    jump = abs(w_corr - w)
                    sep = _fiber_separation(St, z_new, w_corr)
                    if jump <= 0.5 * sep:
                        z, w = complex(z_new), complex(w_corr)
                        t += h
                        samples.append((z, w))
                        scale = P.term_scale(St, z, w)
                        max_rel = max(max_rel, resid / max(scale, 1e-300))
                        hmin = min(hmin, abs(step))
                        hmax = max(hmax, abs(step))
                        h = min(2 * h, 1.0)
                        continue
            h *= 0.5
    return BranchPath(St, tuple(samples), float(max_rel),
                      (float(hmin), float(hmax)))


# ---------------------------------------------------------------------------
# monodromy


def monodromy(S: P.BivarPoly, base: complex, loop, *,
              opts: ContinuationOptions | None = None) -> Monodromy:
    """Continue every branch around a closed polygonal loop and match the
    end values to the start values by nearest neighbor."""
    data = curve_data(S)
    starts = branch_values(S, base, data=data)
    if not starts:
        raise ValueError("no branches over the base point")
    pts = [complex(z) for z in loop]
    if abs(pts[0] - complex(base)) > 1e-12 * max(1.0, abs(base)):
        pts = [complex(base)] + pts
    if abs(pts[-1] - pts[0]) > 1e-12 * max(1.0, abs(pts[0])):
        pts = pts + [pts[0]]
    else:
        pts[-1] = pts[0]
    ends = [continue_branch(S, (base, w), pts, opts, data=data).value
            for w in starts]
    if len(starts) == 1:
        return Monodromy(complex(base), tuple(pts), (0,))
    sep = min(abs(a - b) for i, a in enumerate(starts) for b in starts[i + 1:])
    perm = []
    for e in ends:
        dists = [abs(e - s) for s in starts]
        j = int(np.argmin(dists))
        if dists[j] > 0.5 * sep:
            raise AmbiguousMatching(
                f"end value {e} is {dists[j]:.3e} from its nearest start, "
                f"more than half the start separation {sep:.3e}")
        perm.append(j)
    if len(set(perm)) != len(perm):
        raise AmbiguousMatching("two branches matched the same start value")
    return Monodromy(complex(base), tuple(pts), tuple(perm))


# ---------------------------------------------------------------------------
# the branch through the origin


def _batch_roots(rows: np.ndarray) -> np.ndarray:
    """Roots of many same-degree polynomials via stacked companion
    eigenvalues; rows are ascending with nonvanishing leading entries."""
    n, d1 = rows.shape
    d = d1 - 1
    if d == 1:
        return (-rows[:, 0] / rows[:, 1])[:, None]
    monic = rows / rows[:, -1:]
    comp = np.zeros((n, d, d), dtype=complex)
    idx = np.arange(d - 1)
    comp[:, idx + 1, idx] = 1.0
    comp[:, :, -1] = -monic[:, :-1]
    return np.linalg.eigvals(comp)


class BranchEvaluator:
    """The unique branch g with g(0) = 0 of a class-B polynomial.

    Calling the evaluator continues the branch from the origin (or from a
    cached anchor) along a radial polyline that detours around content
    zeros by a semicircular arc.  `eval_circle` tracks a whole ring of
    values at once through batched fiber solves with nearest-root matching
    and a half-separation guard.
    """

    def __init__(self, S: P.BivarPoly, data: CurveData, rho: float,
                 w0: complex, opts: ContinuationOptions):
        self.S = S
        self.data = data
        self.Stilde = data.Stilde
        self._Sw = P.diff_w(data.Stilde)
        self.rho = float(rho)
        self.w0 = complex(w0)
        self.opts = replace(opts, validate_path=False,
                            r_margin=opts.r_margin if opts.r_margin is not None
                            else 1e-3 * rho)
        self.holes = tuple(z for z in data.vertical if abs(z) < rho)
        self._anchors = [(0j, self.w0)]

    # -- path construction ------------------------------------------------

    def _clear_of_holes(self, a: complex, b: complex) -> bool:
        m = self.opts.r_margin
        return all(_seg_point_dist(a, b, h) >= m for h in self.holes
                   if abs(a - h) > m and abs(b - h) > m)

    def _route(self, a: complex, b: complex) -> list:
        """Polyline from a to b bending around content-zero holes."""
        margin = self.opts.r_margin
        R = 1.35 * margin
        seg = b - a
        if seg == 0:
            return [a]
        length = abs(seg)
        u = seg / length
        events = []
        for h in self.holes:
            if abs(a - h) <= R or abs(b - h) <= R:
                continue  # endpoints own the hole; pass straight
            t_mid = ((h - a) * u.conjugate()).real
            if t_mid <= 0 or t_mid >= length:
                continue
            d = _seg_point_dist(a, b, h)
            if d >= R:
                continue
            half = np.sqrt(R * R - d * d)
            t1, t2 = max(t_mid - half, 0.0), min(t_mid + half, length)
            events.append((t1, t2, h))
        events.sort()
        pts = [a]
        for t1, t2, h in events:
            p1 = a + t1 * u
            p2 = a + t2 * u
            a1 = np.angle(p1 - h)
            a2 = np.angle(p2 - h)
            # walk the left-hand arc from p1 to p2
            da = (a2 - a1) % (2 * np.pi)
            steps = max(3, int(np.ceil(da / (np.pi / 6))))
            for s in range(steps + 1):
                ang = a1 + da * s / steps
                pts.append(h + R * np.exp(1j * ang))
        pts.append(b)
        return pts

    # -- evaluation --------------------------------------------------------

    def __call__(self, z) -> complex:
        z = complex(z)
        if abs(z) >= self.rho:
            raise ValueError(f"|z|={abs(z):.6g} is outside the branch disk "
                             f"of radius {self.rho}")
        if z == 0:
            return self.w0
        anchor = min(self._anchors, key=lambda aw: abs(aw[0] - z))
        az, aw = anchor
        if abs(az - z) > 0.25 * self.rho or not self._clear_of_holes(az, z):
            az, aw = 0j, self.w0
        path = self._route(az, z)
        bp = continue_branch(self.S, (az, aw), path, self.opts, data=self.data)
        w = bp.value
        self._anchors.append((z, w))
        if len(self._anchors) > 128:
            del self._anchors[1:33]  # keep the origin anchor, drop old ones
        return w

    def eval_many(self, zs) -> np.ndarray:
        return np.array([self(z) for z in zs], dtype=complex)

    def eval_circle(self, center: complex, radius: float, n: int) -> np.ndarray:
        """Branch values at n equispaced points of a circle, tracked in one
        sweep around the ring."""
        center = complex(center)
        theta = 2 * np.pi * np.arange(n) / n
        zs = center + radius * np.exp(1j * theta)
        if np.max(np.abs(zs)) >= self.rho:
            raise ValueError("circle leaves the branch disk")
        St = self.Stilde
        rows = P.specialize_z_many(St, zs)
        lc = np.abs(rows[:, -1])
        if np.min(lc) < 1e-12 * np.max(np.abs(rows)):
            return self.eval_many(zs)  # degenerate fiber: go pointwise
        roots = _batch_roots(rows)
        out = np.empty(n, dtype=complex)
        out[0] = self(complex(zs[0]))
        ell = roots.shape[1]
        for t in range(1, n):
            cand = roots[t]
            dists = np.abs(cand - out[t - 1])
            j = int(np.argmin(dists))
            if ell >= 2:
                sep = np.min(np.abs(np.delete(cand, j) - cand[j]))
                if dists[j] > 0.45 * sep:
                    bp = continue_branch(self.S, (zs[t - 1], out[t - 1]),
                                         [zs[t - 1], zs[t]], self.opts,
                                         data=self.data)
                    out[t] = bp.value
                    continue
            out[t] = cand[j]
        # wrap-around check: class-B branches are single valued on the disk
        dists = np.abs(roots[0] - out[n - 1])
        j = int(np.argmin(np.abs(roots[0] - out[0])))
        if int(np.argmin(dists)) != j:
            raise AmbiguousMatching("ring tracking did not close up")
        # one vectorized Newton polish for machine-level residuals
        for _ in range(2):
            fv = P.evaluate(St, zs, out)
            dv = P.evaluate(self._Sw, zs, out)
            upd = np.where(dv != 0, fv / np.where(dv == 0, 1, dv), 0)
            out = out - upd
        return out


def origin_branch(S: P.BivarPoly, rho: float, K=None,
                  opts: ContinuationOptions | None = None) -> BranchEvaluator:
    """Select the unique branch through (0, 0) of a class-B polynomial.

    K, when given as a finite point set, must have cardinality larger than
    the total degree (the compact used downstream for branch-family
    normalization).
    """
    opts = opts or ContinuationOptions()
    if S.is_zero:
        raise ZeroPolynomial("branch selection on the zero polynomial")
    if rho <= 0:
        raise ValueError("rho must be positive")
    if K is not None and hasattr(K, "points"):
        if len(K.points) <= S.deg_total:
            raise ValueError("finite K must have cardinality > deg_total(S)")
    data = curve_data(S)
    if not _class_b_from_data(data, rho):
        raise NotClassB(f"excluded points inside the disk of radius {rho}")
    if abs(S(0, 0)) > opts.branch_res * S.max_coeff():
        raise NoZeroBranch("S(0,0) != 0: no branch through the origin")
    if data.Stilde is None:
        raise NoZeroBranch("the curve has no branches (constant in w)")
    spec = P.specialize_z(data.Stilde, 0j)
    if spec.true_degree < data.Stilde.deg_w:
        raise NearExcludedPoint("fiber degenerates at the origin")
    vals = _fiber_roots(data.Stilde, 0j)
    zero_vals = [v for v in vals if abs(v) <= ZERO_BRANCH_TOL]
    if not zero_vals:
        raise NoZeroBranch("no fiber root at the origin vanishes")
    if len(zero_vals) > 1:
        raise MultipleZeroBranches(
            f"{len(zero_vals)} fiber roots vanish within {ZERO_BRANCH_TOL}")
    return BranchEvaluator(S, data, rho, complex(zero_vals[0]), opts)


def _class_b_from_data(data: CurveData, rho: float) -> bool:
    return all(abs(z0) >= rho for z0 in data.pole + data.ram_int)
