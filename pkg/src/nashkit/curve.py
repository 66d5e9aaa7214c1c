"""Excluded points of algebraic curves, class-B membership, safe regions.

An excluded point of the curve S(z, w) = 0 is a z where the branch
structure can fail: a vertical-line component (zero of the z-content), a
ramification point or an intersection of two branch graphs (zeros of the
discriminant-type resultant of the squarefree part), or a pole (zero of
the leading w-coefficient of the squarefree part).  Ramification and
intersection cannot be told apart without irreducible factorization, so
they are reported as one joint category.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import poly as P
from .errors import EmptyRegion, ZeroPolynomial

# Radius for merging coincident excluded points across defining equations.
DEDUP_EPS = 1e-7


class Category(enum.Enum):
    VERTICAL_LINE = "vertical_line"
    RAMIFICATION_INTERSECTION = "ramification_intersection"
    POLE = "pole"


@dataclass(frozen=True)
class ExcludedPoint:
    location: complex
    categories: frozenset
    witness_residual: float

    def has(self, cat: Category) -> bool:
        return cat in self.categories


@dataclass(frozen=True)
class ExcludedSet:
    points: tuple
    k: int
    bound: int

    def __len__(self):
        return len(self.points)

    def locations(self) -> list:
        return [p.location for p in self.points]

    def with_category(self, cat: Category) -> list:
        return [p for p in self.points if p.has(cat)]


@dataclass(frozen=True)
class SafeRegion:
    """Closed disk of radius rho - r minus open r-disks around excluded
    points."""
    rho: float
    r: float
    holes: tuple  # ((center, radius), ...)

    def contains(self, z: complex) -> bool:
        if abs(z) > self.rho - self.r:
            return False
        return all(abs(z - c) >= rr for c, rr in self.holes)


def excluded_bound(k: int) -> int:
    """Cardinality bound for the excluded set, depending only on k.

    Vertical lines and poles contribute at most k each; ramification at
    most k per irreducible factor (k factors); pairwise graph
    intersections at most k^2 per pair over k(k-1)/2 pairs.
    """
    if k < 1:
        raise ValueError("excluded_bound requires k >= 1")
    return 2 * k + k * k + k * k * (k * (k - 1) // 2)


def _relative_residual(p: P.UnivarPoly, z: complex) -> float:
    c = p.trimmed()
    scale = float(np.sum(np.abs(c) * np.abs(z) ** np.arange(len(c))))
    if scale == 0.0:
        return 0.0
    return float(abs(p(z))) / scale


@dataclass(frozen=True)
class CurveData:
    """Cached decomposition of S: content, reduced and squarefree parts,
    and the global root lists behind every excluded-point category."""
    q: P.UnivarPoly
    Sbar: P.BivarPoly
    Stilde: P.BivarPoly | None       # None when Sbar is constant in w
    vertical: tuple                  # roots of q
    pole: tuple                      # roots of the leading w-coefficient
    ram_int: tuple                   # resultant roots not explained by poles


def curve_data(S: P.BivarPoly, *, gcd_eps: float = P.GCD_EPS,
               dedup_eps: float = DEDUP_EPS) -> CurveData:
    """Decompose S and locate every excluded point in the whole plane."""
    if S.is_zero:
        raise ZeroPolynomial("curve of the zero polynomial")
    q, Sbar = P.content_z(S, gcd_eps)
    vertical = tuple(P.roots(q).values) if q.true_degree > 0 else ()
    if Sbar.deg_w < 1:
        return CurveData(q, Sbar, None, vertical, (), ())
    Stilde = P.squarefree_w(Sbar, gcd_eps)
    lead = Stilde.leading_w_coefficient()
    pole = tuple(P.roots(lead).values) if lead.true_degree > 0 else ()
    disc = P.resultant_w(Stilde, P.diff_w(Stilde), gcd_eps)
    ram = []
    if not disc.is_zero and disc.true_degree > 0:
        for z0 in P.roots(disc).values:
            near_pole = any(abs(z0 - zp) <= dedup_eps for zp in pole)
            if not near_pole:
                ram.append(z0)
            elif _has_repeated_finite_root(Stilde, z0):
                ram.append(z0)
    return CurveData(q, Sbar, Stilde, vertical, pole, tuple(ram))


def _has_repeated_finite_root(Stilde: P.BivarPoly, z0: complex) -> bool:
    """True when the specialized fiber still carries a repeated finite root
    (the resultant zero is then not explained by the leading coefficient
    alone)."""
    spec = P.specialize_z(Stilde, z0)
    if spec.true_degree < 2:
        return False
    rs = P.roots(spec, eps=1e-6)
    return any(m > 1 for _, m in rs.finite_roots)


def excluded_points(S: P.BivarPoly, rho: float, *,
                    gcd_eps: float = P.GCD_EPS,
                    dedup_eps: float = DEDUP_EPS) -> ExcludedSet:
    """All excluded points of S inside the open disk |z| < rho.

    Nonzero constants have an empty curve and return the empty set.
    """
    if S.is_zero:
        raise ZeroPolynomial("excluded points of the zero polynomial")
    if rho <= 0:
        raise ValueError("rho must be positive")
    k = S.deg_total
    if k == 0:
        return ExcludedSet((), 0, 0)
    data = curve_data(S, gcd_eps=gcd_eps, dedup_eps=dedup_eps)
    buckets = [
        (Category.VERTICAL_LINE, data.vertical, data.q),
        (Category.POLE, data.pole,
         data.Stilde.leading_w_coefficient() if data.Stilde is not None else None),
        (Category.RAMIFICATION_INTERSECTION, data.ram_int, None),
    ]
    merged: list[list] = []  # [location, {categories}, residual]
    for cat, locs, witness in buckets:
        for z0 in locs:
            if abs(z0) >= rho:
                continue
            res = _relative_residual(witness, z0) if witness is not None else 0.0
            for entry in merged:
                if abs(entry[0] - z0) <= dedup_eps:
                    entry[1].add(cat)
                    entry[2] = max(entry[2], res)
                    break
            else:
                merged.append([z0, {cat}, res])
    pts = tuple(
        ExcludedPoint(complex(loc), frozenset(cats), float(res))
        for loc, cats, res in sorted(merged, key=lambda e: (e[0].real, e[0].imag))
    )
    return ExcludedSet(pts, k, excluded_bound(k))


def is_class_b(S: P.BivarPoly, rho: float, *,
               gcd_eps: float = P.GCD_EPS) -> bool:
    """True when the content-free part of S has no poles and no
    ramification/intersection points inside the open disk of radius rho
    (vertical lines from the content are permitted)."""
    if S.is_zero:
        raise ZeroPolynomial("class membership of the zero polynomial")
    if rho <= 0:
        raise ValueError("rho must be positive")
    data = curve_data(S, gcd_eps=gcd_eps)
    for z0 in data.pole + data.ram_int:
        if abs(z0) < rho:
            return False
    return True


def safe_region(S: P.BivarPoly, rho: float, r: float, *,
                probe_points: int = 10_000, seed: int = 0) -> SafeRegion:
    """The compact region |z| <= rho - r away from all excluded points.

    Emptiness is decided by an area lower bound, falling back to a
    rejection-sampling probe when the bound is inconclusive.
    """
    if S.is_zero:
        raise ZeroPolynomial("safe region of the zero polynomial")
    if not (0 < r < rho):
        raise EmptyRegion(f"need 0 < r < rho, got r={r} rho={rho}")
    exc = excluded_points(S, rho)
    holes = tuple((p.location, r) for p in exc.points)
    region = SafeRegion(rho, r, holes)
    bound = exc.bound if exc.k >= 1 else 0
    area_lb = math.pi * (rho - r) ** 2 - bound * math.pi * r * r
    if area_lb > 0:
        return region
    rng = np.random.default_rng(seed)
    pts = ((rho - r) * np.sqrt(rng.random(probe_points))
           * np.exp(2j * np.pi * rng.random(probe_points)))
    for z in pts:
        if region.contains(complex(z)):
            return region
    raise EmptyRegion("no admissible point found by the rejection probe")
