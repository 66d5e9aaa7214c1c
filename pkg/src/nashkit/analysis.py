"""Maximum-modulus evaluation, Bernstein constants, argument-principle
zero counting, valency, Taylor coefficients and their uniform bounds.

Maxima of |f| over disks are taken on the boundary only (maximum
principle) from equispaced samples refined by golden-section search on the
boundary parameter; the reported value is a lower bound of the true
maximum with O(samples^-2) error for analytic f.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Union

import numpy as np

from .errors import BoundaryZero, ConstantBranch, NoConvergence, NullOnK

GOLDEN_TOL = 1e-10       # golden-section tolerance in the boundary parameter
BERN_FLOOR_FACTOR = 1e-12  # "numerically null on K" threshold vs. domain max
WIND_EPS = 1e-8          # boundary-zero guard for the argument principle
GROWTH_SLACK = 1.05      # allowed growth of the normalized Taylor profile

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


# ---------------------------------------------------------------------------
# compact / domain specifications


@dataclass(frozen=True)
class FinitePoints:
    points: tuple

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        if not pts:
            raise ValueError("FinitePoints requires at least one point")
        object.__setattr__(self, "points", pts)

    @property
    def cardinality(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class ClosedDisk:
    center: complex
    radius: float
    boundary_samples: int = 256

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("disk radius must be positive")
        object.__setattr__(self, "center", complex(self.center))


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex
    samples: int = 129

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if self.a == self.b:
            raise ValueError("segment endpoints must differ")


CompactSpec = Union[FinitePoints, ClosedDisk, Segment]


@dataclass(frozen=True)
class OpenDisk:
    center: complex
    radius: float
    boundary_samples: int = 256

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("disk radius must be positive")
        if self.boundary_samples < 64:
            raise ValueError("boundary_samples must be at least 64")
        object.__setattr__(self, "center", complex(self.center))


DomainSpec = OpenDisk


def spec_to_json(spec) -> dict:
    if isinstance(spec, FinitePoints):
        return {"kind": "points",
                "points": [[p.real, p.imag] for p in spec.points]}
    if isinstance(spec, ClosedDisk):
        return {"kind": "disk", "center": [spec.center.real, spec.center.imag],
                "radius": spec.radius, "boundary_samples": spec.boundary_samples}
    if isinstance(spec, Segment):
        return {"kind": "segment", "a": [spec.a.real, spec.a.imag],
                "b": [spec.b.real, spec.b.imag], "samples": spec.samples}
    if isinstance(spec, OpenDisk):
        return {"kind": "open_disk",
                "center": [spec.center.real, spec.center.imag],
                "radius": spec.radius, "boundary_samples": spec.boundary_samples}
    raise ValueError(f"unknown spec {spec!r}")


def spec_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "points":
        return FinitePoints(tuple(complex(re, im) for re, im in obj["points"]))
    if kind == "disk":
        return ClosedDisk(complex(*obj["center"]), float(obj["radius"]),
                          int(obj.get("boundary_samples", 256)))
    if kind == "segment":
        return Segment(complex(*obj["a"]), complex(*obj["b"]),
                       int(obj.get("samples", 129)))
    if kind == "open_disk":
        return OpenDisk(complex(*obj["center"]), float(obj["radius"]),
                        int(obj.get("boundary_samples", 256)))
    raise ValueError(f"unknown compact/domain kind {kind!r}")


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class BernsteinReport:
    B: float
    max_on_domain: float
    max_on_K: float
    argmax_domain: complex
    argmax_K: complex
    samples_used: dict
    tolerances: dict

    def to_json(self) -> dict:
        return {
            "B": self.B,
            "max_on_domain": self.max_on_domain,
            "max_on_K": self.max_on_K,
            "argmax_domain": [self.argmax_domain.real, self.argmax_domain.imag],
            "argmax_K": [self.argmax_K.real, self.argmax_K.imag],
            "samples_used": self.samples_used,
            "tolerances": self.tolerances,
        }


@dataclass(frozen=True)
class TaylorReport:
    coeffs: tuple                   # a_1 .. a_J
    radius_used: float
    a0: complex
    geometric_rate: float
    empirical_K: float | None = None


class CauchyProfile(NamedTuple):
    ok: bool
    normalized: tuple


# ---------------------------------------------------------------------------
# maxima


def _golden_max(h: Callable[[float], float], a: float, b: float,
                tol: float = GOLDEN_TOL):
    """Golden-section maximization of h on [a, b]."""
    lo, hi = min(a, b), max(a, b)
    span = hi - lo
    if span <= tol:
        mid = 0.5 * (lo + hi)
        return mid, h(mid)
    c = lo + _INV_PHI2 * span
    d = lo + _INV_PHI * span
    yc, yd = h(c), h(d)
    while hi - lo > tol:
        if yc > yd:
            hi, d, yd = d, c, yc
            c = lo + _INV_PHI2 * (hi - lo)
            yc = h(c)
        else:
            lo, c, yc = c, d, yd
            d = lo + _INV_PHI * (hi - lo)
            yd = h(d)
    x = c if yc > yd else d
    return x, max(yc, yd)


def _sample_circle(f, center: complex, radius: float, n: int) -> np.ndarray:
    if hasattr(f, "eval_circle"):
        return np.asarray(f.eval_circle(center, radius, n), dtype=complex)
    theta = 2 * np.pi * np.arange(n) / n
    zs = center + radius * np.exp(1j * theta)
    try:
        vals = f(zs)
        vals = np.asarray(vals, dtype=complex)
        if vals.shape == zs.shape:
            return vals
    except Exception:
        pass
    return np.array([f(z) for z in zs], dtype=complex)


def _max_on_circle(f, center: complex, radius: float, n: int):
    vals = np.abs(_sample_circle(f, center, radius, n))
    i = int(np.argmax(vals))
    step = 2 * np.pi / n

    def h(theta):
        return abs(f(center + radius * cmath.exp(1j * theta)))

    theta0 = i * step
    x, y = _golden_max(h, theta0 - step, theta0 + step)
    if y >= vals[i]:
        return float(y), center + radius * cmath.exp(1j * x)
    return float(vals[i]), center + radius * cmath.exp(1j * theta0)


def _max_on_segment(f, a: complex, b: complex, n: int):
    ts = np.linspace(0.0, 1.0, n)
    vals = np.abs(np.array([f(a + t * (b - a)) for t in ts]))
    i = int(np.argmax(vals))
    step = 1.0 / (n - 1)

    def h(t):
        return abs(f(a + t * (b - a)))

    x, y = _golden_max(h, max(0.0, ts[i] - step), min(1.0, ts[i] + step))
    if y >= vals[i]:
        return float(y), a + x * (b - a)
    return float(vals[i]), a + ts[i] * (b - a)


def max_modulus(f, region: OpenDisk):
    """Maximum of |f| over the closure of the region, from boundary samples
    refined by golden-section search.  Returns (value, argmax)."""
    return _max_on_circle(f, region.center, region.radius,
                          region.boundary_samples)


def max_on_compact(f, K: CompactSpec):
    """Maximum of |f| over a compact of one of the three supported kinds."""
    if isinstance(K, FinitePoints):
        vals = [abs(f(p)) for p in K.points]
        i = int(np.argmax(vals))
        return float(vals[i]), K.points[i]
    if isinstance(K, ClosedDisk):
        # |f| is maximal on the boundary for analytic f
        return _max_on_circle(f, K.center, K.radius, K.boundary_samples)
    if isinstance(K, Segment):
        return _max_on_segment(f, K.a, K.b, K.samples)
    raise ValueError(f"unsupported compact {K!r}")


def bernstein_constant(f, K: CompactSpec, Omega: OpenDisk) -> BernsteinReport:
    """The growth ratio max over the closed domain / max over K.

    Raises NullOnK when f is numerically null on K (below
    BERN_FLOOR_FACTOR times the domain maximum).
    """
    max_dom, arg_dom = max_modulus(f, Omega)
    max_k, arg_k = max_on_compact(f, K)
    floor = BERN_FLOOR_FACTOR * max_dom
    if max_k <= floor:
        raise NullOnK(f"max over K = {max_k:.3e} is below the floor "
                      f"{floor:.3e}")
    nK = (K.cardinality if isinstance(K, FinitePoints)
          else K.boundary_samples if isinstance(K, ClosedDisk) else K.samples)
    return BernsteinReport(
        B=max_dom / max_k,
        max_on_domain=max_dom,
        max_on_K=max_k,
        argmax_domain=arg_dom,
        argmax_K=arg_k,
        samples_used={"domain": Omega.boundary_samples, "K": nK},
        tolerances={"golden_tol": GOLDEN_TOL, "bern_floor": floor},
    )


# ---------------------------------------------------------------------------
# the 1912 polynomial-growth inequality on ellipses


def check_bernstein_1912(coeffs, R: float, *, samples: int = 512):
    """Growth of a real polynomial on the ellipse with foci +-1 whose
    semi-axes sum to R, against R^deg times its max on [-1, 1].

    Returns (B, bound, ok) with B the ellipse maximum, bound = R^deg *
    max_[-1,1] |P|, and ok = (B <= bound * (1 + 1e-6)).
    """
    if R <= 1:
        raise ValueError("R must exceed 1")
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if np.max(np.abs(c.imag)) > 1e-12 * max(1.0, float(np.max(np.abs(c)))):
        raise ValueError("the 1912 inequality needs real coefficients")
    c = c.real.astype(float)
    m = float(np.max(np.abs(c)))
    if m == 0.0:
        return 0.0, 0.0, True
    deg_idx = np.nonzero(np.abs(c) > 1e-12 * m)[0]
    k = int(deg_idx[-1])
    a = (R + 1.0 / R) / 2.0
    b = (R - 1.0 / R) / 2.0

    def on_ellipse(theta):
        z = a * math.cos(theta) + 1j * b * math.sin(theta)
        return abs(np.polynomial.polynomial.polyval(z, c))

    thetas = 2 * np.pi * np.arange(samples) / samples
    vals = np.array([on_ellipse(t) for t in thetas])
    i = int(np.argmax(vals))
    step = 2 * np.pi / samples
    _, B = _golden_max(on_ellipse, thetas[i] - step, thetas[i] + step)
    B = max(B, float(vals[i]))

    def on_interval(x):
        return abs(np.polynomial.polynomial.polyval(x, c))

    xs = np.linspace(-1.0, 1.0, samples)
    ivals = np.array([on_interval(x) for x in xs])
    j = int(np.argmax(ivals))
    h = 2.0 / (samples - 1)
    _, mi = _golden_max(on_interval, max(-1.0, xs[j] - h), min(1.0, xs[j] + h))
    max_i = max(mi, float(ivals[j]))

    bound = R ** k * max_i
    return float(B), float(bound), bool(B <= bound * (1.0 + 1e-6))


# ---------------------------------------------------------------------------
# argument-principle zero counting


def _winding_from_ring(thetas, vals, refine, wind_eps: float) -> int:
    """Winding about 0 of a sampled closed ring, bisecting coarse arcs with
    the pointwise `refine(theta)` callback."""
    thetas = list(thetas)
    vals = list(vals)
    maxv = max(abs(v) for v in vals)
    if maxv == 0.0 or min(abs(v) for v in vals) < wind_eps * maxv:
        raise _BoundaryZeroInternal
    budget = 40 * len(vals)
    i = 0
    while i < len(vals) - 1:
        d = cmath.phase(vals[i + 1] / vals[i])
        if abs(d) > 1.0 and len(vals) < budget:
            tm = 0.5 * (thetas[i] + thetas[i + 1])
            vm = refine(tm)
            if abs(vm) < wind_eps * maxv:
                raise _BoundaryZeroInternal
            thetas.insert(i + 1, tm)
            vals.insert(i + 1, vm)
            continue
        i += 1
    total = 0.0
    for i in range(len(vals) - 1):
        total += cmath.phase(vals[i + 1] / vals[i])
    turns = total / (2 * np.pi)
    if abs(turns - round(turns)) > 0.25:
        raise NoConvergence(f"winding number ambiguous: {turns:.4f} turns")
    return int(round(turns))


def _winding(f, center: complex, R: float, n0: int, wind_eps: float) -> int:
    thetas = list(np.linspace(0.0, 2 * np.pi, n0, endpoint=False))
    thetas.append(2 * np.pi)
    ring = _sample_circle(f, center, R, n0)
    vals = list(ring) + [ring[0]]
    return _winding_from_ring(
        thetas, vals, lambda tm: f(center + R * cmath.exp(1j * tm)), wind_eps)


class _BoundaryZeroInternal(Exception):
    pass


def zero_count(f, center: complex, R: float, *, samples: int = 256,
               wind_eps: float = WIND_EPS) -> int:
    """Number of zeros of f inside the disk of radius R about center, by
    phase accumulation along the circle (exact integer).

    Zeros sitting on the circle (within wind_eps relative) trigger up to
    three radius perturbations before BoundaryZero is raised.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    for factor in (1.0, 1.0 + 1.1e-3, 1.0 - 1.7e-3, 1.0 + 2.9e-3):
        try:
            return _winding(f, complex(center), R * factor, samples, wind_eps)
        except _BoundaryZeroInternal:
            continue
    raise BoundaryZero(f"zeros persist on the counting circle R={R}")


def tijdeman_check(f, R: float, s: float, t: float):
    """Zero count over D_R against the growth-ratio bound between the disks
    of radii tR and (st+s+t)R.  Returns (N, rhs, ok)."""
    if s <= 1 or t <= 0 or R <= 0:
        raise ValueError("need s > 1, t > 0, R > 0")
    N = zero_count(f, 0.0, R)
    K = ClosedDisk(0.0, t * R)
    Omega = OpenDisk(0.0, (s * t + s + t) * R)
    rep = bernstein_constant(f, K, Omega)
    rhs = math.log(rep.B) / math.log(s) if rep.B > 0 else 0.0
    return N, float(rhs), bool(N <= rhs + 1e-9)


# ---------------------------------------------------------------------------
# valency


def valency_check(S, g, domain: OpenDisk, probes: int, *, seed: int = 0,
                  samples: int = 512) -> int:
    """Maximum preimage count of probe values drawn from the image of g.

    Probe values are sampled from the image of an interior ring (so the
    counting circle stays clear of them); each count is an argument-
    principle zero count of g - w0 over the domain.  The boundary ring of
    g is sampled once and shared across probes.
    """
    inner = _sample_circle(g, domain.center, 0.7 * domain.radius, 128)
    spread = float(np.max(np.abs(inner - np.mean(inner))))
    if spread <= 1e-12 * max(1.0, float(np.max(np.abs(inner)))):
        raise ConstantBranch("image spread is numerically zero")
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(inner), size=min(probes, len(inner)), replace=False)
    center = domain.center
    thetas = list(np.linspace(0.0, 2 * np.pi, samples, endpoint=False))
    thetas.append(2 * np.pi)
    rings: dict = {}  # boundary samples of g per perturbed radius
    worst = 0
    for idx in picks:
        w0 = complex(inner[idx])
        count = None
        for factor in (1.0, 1.0 + 1.1e-3, 1.0 - 1.7e-3, 1.0 + 2.9e-3):
            R = domain.radius * factor
            if factor not in rings:
                rings[factor] = _sample_circle(g, center, R, samples)
            ring = rings[factor]
            vals = [v - w0 for v in ring] + [ring[0] - w0]
            try:
                count = _winding_from_ring(
                    thetas, vals,
                    lambda tm, R=R: g(center + R * cmath.exp(1j * tm)) - w0,
                    WIND_EPS)
                break
            except _BoundaryZeroInternal:
                continue
        if count is None:
            raise BoundaryZero("probe value persists on the counting circle")
        worst = max(worst, count)
    return worst


# ---------------------------------------------------------------------------
# Taylor coefficients and the uniform coefficient bounds


def taylor_coeffs(g, r: float, J: int, *, samples: int | None = None) -> TaylorReport:
    """First J Taylor coefficients of g at 0 from the Cauchy integral on
    |z| = r, discretized by the trapezoid rule (a power-of-two FFT)."""
    if r <= 0 or J < 1:
        raise ValueError("need r > 0 and J >= 1")
    n = samples or max(64, 1 << int(math.ceil(math.log2(4 * J))))
    if J > n // 4:
        raise ValueError("J must not exceed a quarter of the sample count")
    vals = _sample_circle(g, 0.0, r, n)
    hat = np.fft.fft(vals) / n
    js = np.arange(J + 1)
    coeff = hat[: J + 1] / (r ** js)
    a = coeff[1:]
    mags = np.abs(a)
    top = float(np.max(mags)) if len(mags) else 0.0
    valid = np.nonzero(mags > 1e-13 * max(top, 1e-300))[0]
    if len(valid) >= 3:
        slope = np.polyfit(valid.astype(float), np.log(mags[valid]), 1)[0]
        rate = float(np.exp(slope))
    else:
        rate = float("nan")
    return TaylorReport(coeffs=tuple(complex(x) for x in a),
                        radius_used=float(r), a0=complex(coeff[0]),
                        geometric_rate=rate)


def cauchy_bound_check(rep: TaylorReport, M: float, rho: float,
                       m_param: float = 2.0, *,
                       growth_slack: float = GROWTH_SLACK):
    """Empirical uniform-coefficient constant and its growth profile.

    For rho > 1 the normalized sequence is |a_j| / M; for rho <= 1 it is
    |a_j| (rho/m)^j / M with m_param > 1.  The profile is accepted when the
    last-quartile maximum does not exceed the earlier maximum by more than
    growth_slack.
    """
    if M <= 0:
        raise ValueError("M must be positive")
    if rho <= 1 and m_param <= 1:
        raise ValueError("m_param must exceed 1 when rho <= 1")
    mags = np.abs(np.asarray(rep.coeffs))
    js = np.arange(1, len(mags) + 1)
    if rho > 1:
        normalized = mags / M
    else:
        normalized = mags * (rho / m_param) ** js / M
    emp = float(np.max(normalized)) if len(normalized) else 0.0
    J = len(normalized)
    q = max(1, J // 4)
    if J >= 4:
        ok = float(np.max(normalized[J - q:])) <= \
            float(np.max(normalized[: J - q])) * growth_slack
    else:
        ok = True
    return emp, CauchyProfile(bool(ok), tuple(float(x) for x in normalized))
