"""Complex polynomial arithmetic in one and two variables.

Dense double-precision coefficient arrays throughout.  A bivariate
polynomial stores ``coeffs[i, j]`` multiplying ``z**i * w**j``; a
univariate one stores ascending coefficients whose array length fixes the
*formal* degree (which may exceed the true degree when leading entries
vanish).  Tolerances are module constants and overridable per call.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as npoly

from .errors import BothConstantInW, GcdIllConditioned, NoConvergence, ZeroPolynomial

# Degree trimming: entries below TRIM_EPS * max|coeff| count as zero.
TRIM_EPS = 1e-12
# Approximate-GCD rank decisions and division-residual certification.
GCD_EPS = 1e-9
# Default clustering radius for root multiplicities.
ROOT_CLUSTER_EPS = 1e-7
# Residual acceptance for reported roots, scaled by sum_i |c_i| |r|^i.
ROOT_RES = 1e-9

_MAX_ABERTH_ITER = 200


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class UnivarPoly:
    """Univariate complex polynomial with ascending coefficients.

    ``formal_degree = len(coeffs) - 1`` is fixed by the array; the true
    degree is lower whenever leading entries vanish relative to TRIM_EPS.
    The zero polynomial is representable (``is_zero``) with true degree -1.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1:
            raise ValueError("UnivarPoly coefficients must be 1-D")
        if not np.all(np.isfinite(c)):
            raise ValueError("UnivarPoly coefficients must be finite")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def formal_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def true_degree(self) -> int:
        """Largest index with a non-negligible coefficient, -1 if zero."""
        m = float(np.max(np.abs(self.coeffs)))
        if m == 0.0:
            return -1
        nz = np.nonzero(np.abs(self.coeffs) > TRIM_EPS * m)[0]
        return int(nz[-1]) if len(nz) else -1

    @property
    def is_zero(self) -> bool:
        return self.true_degree < 0

    def trimmed(self) -> np.ndarray:
        """Ascending coefficients up to the true degree (``[0]`` if zero)."""
        d = self.true_degree
        if d < 0:
            return np.zeros(1, dtype=complex)
        return np.array(self.coeffs[: d + 1])

    def __call__(self, z):
        return npoly.polyval(z, self.coeffs)

    def derivative(self) -> "UnivarPoly":
        if self.formal_degree == 0:
            return UnivarPoly(np.zeros(1, dtype=complex))
        return UnivarPoly(npoly.polyder(self.coeffs))

    def monic(self) -> "UnivarPoly":
        d = self.true_degree
        if d < 0:
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        return UnivarPoly(self.coeffs[: d + 1] / self.coeffs[d])

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


@dataclass(frozen=True)
class BivarPoly:
    """Bivariate complex polynomial; ``coeffs[i, j]`` multiplies z^i w^j.

    The stored array is trimmed so the last row and column carry at least
    one entry above TRIM_EPS * max|coeff|.  Instances are immutable; all
    operations are pure.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 2:
            raise ValueError("BivarPoly coefficients must be 2-D")
        if not np.all(np.isfinite(c)):
            raise ValueError("BivarPoly coefficients must be finite")
        c = _trim2(c)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_terms(cls, terms: dict) -> "BivarPoly":
        """Build from a ``{(i, j): coefficient}`` mapping."""
        if not terms:
            return cls(np.zeros((1, 1)))
        ni = max(i for i, _ in terms) + 1
        nj = max(j for _, j in terms) + 1
        c = np.zeros((ni, nj), dtype=complex)
        for (i, j), v in terms.items():
            c[i, j] = v
        return cls(c)

    @property
    def is_zero(self) -> bool:
        return not np.any(self._mask())

    @property
    def deg_total(self) -> int:
        """Largest i+j with a significant coefficient; -1 for zero."""
        mask = self._mask()
        if not mask.any():
            return -1
        ii, jj = np.nonzero(mask)
        return int(np.max(ii + jj))

    @property
    def deg_w(self) -> int:
        mask = self._mask()
        if not mask.any():
            return -1
        return int(np.max(np.nonzero(mask)[1]))

    @property
    def deg_z(self) -> int:
        mask = self._mask()
        if not mask.any():
            return -1
        return int(np.max(np.nonzero(mask)[0]))

    def _mask(self) -> np.ndarray:
        a = np.abs(self.coeffs)
        m = a.max()
        return a > TRIM_EPS * m if m > 0 else np.zeros_like(a, dtype=bool)

    def __call__(self, z, w):
        return evaluate(self, z, w)

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        a, b = self.coeffs, other.coeffs
        ni = max(a.shape[0], b.shape[0])
        nj = max(a.shape[1], b.shape[1])
        c = np.zeros((ni, nj), dtype=complex)
        c[: a.shape[0], : a.shape[1]] += a
        c[: b.shape[0], : b.shape[1]] += b
        return BivarPoly(c)

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, BivarPoly):
            return BivarPoly(_conv2(self.coeffs, other.coeffs))
        return BivarPoly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __neg__(self):
        return BivarPoly(-self.coeffs)

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(self.coeffs))

    def max_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def w_coefficient(self, j: int) -> UnivarPoly:
        """Coefficient of w^j as a polynomial in z."""
        if j > self.coeffs.shape[1] - 1:
            return UnivarPoly(np.zeros(1))
        return UnivarPoly(self.coeffs[:, j])

    def leading_w_coefficient(self) -> UnivarPoly:
        """Leading coefficient in w (a polynomial in z)."""
        d = self.deg_w
        if d < 0:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return UnivarPoly(self.coeffs[:, d])


@dataclass(frozen=True)
class RootSet:
    """Roots of a univariate polynomial with roots-at-infinity bookkeeping.

    sum of multiplicities + count_at_infinity equals the formal degree of
    the input; count_at_infinity = formal degree - true degree.
    """

    finite_roots: tuple = field(default_factory=tuple)  # ((value, multiplicity), ...)
    count_at_infinity: int = 0

    @property
    def values(self) -> list:
        return [r for r, _ in self.finite_roots]

    @property
    def total_finite_multiplicity(self) -> int:
        return sum(m for _, m in self.finite_roots)


# ---------------------------------------------------------------------------
# low-level helpers


def _trim2(c: np.ndarray) -> np.ndarray:
    a = np.abs(c)
    m = a.max()
    if m == 0.0:
        return np.zeros((1, 1), dtype=complex)
    mask = a > TRIM_EPS * m
    rows = np.nonzero(mask.any(axis=1))[0]
    cols = np.nonzero(mask.any(axis=0))[0]
    if len(rows) == 0:
        return np.zeros((1, 1), dtype=complex)
    return np.array(c[: rows[-1] + 1, : cols[-1] + 1])


def _conv2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1),
                   dtype=complex)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j] != 0:
                out[i:i + b.shape[0], j:j + b.shape[1]] += a[i, j] * b
    return out


def _trim1(c: np.ndarray) -> np.ndarray:
    m = float(np.max(np.abs(c))) if len(c) else 0.0
    if m == 0.0:
        return np.zeros(1, dtype=complex)
    nz = np.nonzero(np.abs(c) > TRIM_EPS * m)[0]
    return np.array(c[: nz[-1] + 1]) if len(nz) else np.zeros(1, dtype=complex)


# ---------------------------------------------------------------------------
# evaluation and specialization


def evaluate(S: BivarPoly, z, w):
    """Evaluate S(z, w) (Horner in both variables; broadcasts over arrays)."""
    return npoly.polyval2d(np.asarray(z), np.asarray(w), S.coeffs)


def term_scale(S: BivarPoly, z, w) -> float:
    """max_ij |c_ij| |z|^i |w|^j, the natural backward-error scale at (z, w)."""
    az, aw = abs(z), abs(w)
    zi = az ** np.arange(S.coeffs.shape[0])
    wj = aw ** np.arange(S.coeffs.shape[1])
    return float(np.max(np.abs(S.coeffs) * np.outer(zi, wj)))


def specialize_z(S: BivarPoly, z0: complex) -> UnivarPoly:
    """S at z=z0 as a polynomial in w, with formal degree deg_w(S)."""
    return UnivarPoly(npoly.polyval(z0, S.coeffs))


def specialize_z_many(S: BivarPoly, zs: np.ndarray) -> np.ndarray:
    """Coefficient rows of S at each z in zs; shape (len(zs), deg_w+1)."""
    zs = np.asarray(zs, dtype=complex)
    V = zs[:, None] ** np.arange(S.coeffs.shape[0])[None, :]
    return V @ S.coeffs


def diff_w(S: BivarPoly) -> BivarPoly:
    c = S.coeffs
    if c.shape[1] == 1:
        return BivarPoly(np.zeros((1, 1)))
    return BivarPoly(c[:, 1:] * np.arange(1, c.shape[1])[None, :])


def diff_z(S: BivarPoly) -> BivarPoly:
    c = S.coeffs
    if c.shape[0] == 1:
        return BivarPoly(np.zeros((1, 1)))
    return BivarPoly(c[1:, :] * np.arange(1, c.shape[0])[:, None])


def sphere_normalize(S: BivarPoly) -> BivarPoly:
    """S divided by the Euclidean norm of its coefficient vector."""
    if S.is_zero:
        raise ZeroPolynomial("cannot normalize the zero polynomial")
    return BivarPoly(S.coeffs / S.norm())


# ---------------------------------------------------------------------------
# approximate GCD machinery (univariate, SVD rank decisions)


def _sylvester(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Sylvester matrix of f, g (ascending, true-degree arrays).

    Rows hold shifted descending coefficients: deg(g) rows of f above
    deg(f) rows of g, so det = Res(f, g) in the classical convention.
    """
    m, n = len(f) - 1, len(g) - 1
    N = m + n
    M = np.zeros((N, N), dtype=complex)
    fd, gd = f[::-1], g[::-1]
    for r in range(n):
        M[r, r:r + m + 1] = fd
    for r in range(m):
        M[n + r, r:r + n + 1] = gd
    return M


def _gcd_degree(f: np.ndarray, g: np.ndarray, eps: float) -> int:
    """Numerical gcd degree via the nullity of the Sylvester matrix."""
    M = _sylvester(f, g)
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0.0:
        return len(f) - 1
    return int(np.sum(sv <= eps * sv[0]))


def _conv_matrix(u: np.ndarray, d: int) -> np.ndarray:
    """Matrix of q -> u*q for deg(q) <= d (ascending convolution)."""
    rows = len(u) + d
    M = np.zeros((rows, d + 1), dtype=complex)
    for c in range(d + 1):
        M[c:c + len(u), c] = u
    return M


def _deconv_ls(f: np.ndarray, g: np.ndarray):
    """Least-squares quotient q with f ~= g*q; returns (q, residual)."""
    d = len(f) - len(g)
    if d < 0:
        q = np.zeros(1, dtype=complex)
        return q, float(np.linalg.norm(f))
    M = _conv_matrix(g, d)
    q, *_ = np.linalg.lstsq(M, f, rcond=None)
    res = float(np.linalg.norm(M @ q - f))
    return q, res


def approx_gcd(f: UnivarPoly, g: UnivarPoly, eps: float = GCD_EPS) -> UnivarPoly:
    """Monic approximate GCD of two univariate polynomials.

    Gcd degree comes from an SVD rank decision on the Sylvester matrix;
    cofactors from the null vector of the degree-restricted Sylvester
    submatrix; the gcd itself from a stacked least-squares division,
    certified against both inputs at relative tolerance eps.
    """
    fa, ga = f.trimmed(), g.trimmed()
    fz = float(np.max(np.abs(fa))) == 0.0
    gz = float(np.max(np.abs(ga))) == 0.0
    if fz and gz:
        raise ZeroPolynomial("gcd of two zero polynomials")
    if fz:
        return UnivarPoly(ga / ga[-1])
    if gz:
        return UnivarPoly(fa / fa[-1])
    m, n = len(fa) - 1, len(ga) - 1
    if m == 0 or n == 0:
        return UnivarPoly(np.ones(1))
    # scale both to unit norm for balanced rank decisions
    fa = fa / np.linalg.norm(fa)
    ga = ga / np.linalg.norm(ga)
    d = min(_gcd_degree(fa, ga, eps), m, n)
    if d == 0:
        return UnivarPoly(np.ones(1))
    # cofactor pair (u, v), deg u = n-d, deg v = m-d, with u*f + v*g = 0
    rows = m + n - d + 1
    A = np.zeros((rows, (n - d + 1) + (m - d + 1)), dtype=complex)
    A[: , : n - d + 1] = _conv_matrix(fa, n - d)
    A[: , n - d + 1:] = _conv_matrix(ga, m - d)
    _, _, vh = np.linalg.svd(A)
    null = vh[-1].conj()
    u, v = null[: n - d + 1], null[n - d + 1:]
    # g = (u/c) * G and f = (-v/c) * G; solve the stacked LS system for G
    B = np.vstack([_conv_matrix(u, d), _conv_matrix(-v, d)])
    r1 = len(u) + d
    rhs = np.concatenate([np.pad(ga, (0, r1 - len(ga))),
                          np.pad(fa, (0, B.shape[0] - r1 - len(fa)))])
    G, *_ = np.linalg.lstsq(B, rhs, rcond=None)
    G = _trim1(G)
    if len(G) - 1 != d or abs(G[-1]) == 0.0:
        raise GcdIllConditioned(f"gcd extraction degenerated at degree {d}")
    G = G / G[-1]
    # certification: both inputs must divide by G within eps
    _, rf = _deconv_ls(fa, G)
    _, rg = _deconv_ls(ga, G)
    if rf > 10 * eps * np.linalg.norm(fa) or rg > 10 * eps * np.linalg.norm(ga):
        raise GcdIllConditioned(
            f"approximate gcd of degree {d} failed certification "
            f"(residuals {rf:.2e}, {rg:.2e})")
    return UnivarPoly(G)


def _gcd_list(polys, eps: float) -> UnivarPoly:
    nonzero = [p for p in polys if not p.is_zero]
    if not nonzero:
        raise ZeroPolynomial("gcd of all-zero coefficient list")
    nonzero.sort(key=lambda p: p.true_degree)
    g = nonzero[0].monic()
    for p in nonzero[1:]:
        if g.true_degree == 0:
            break
        g = approx_gcd(g, p, eps)
    return g


# ---------------------------------------------------------------------------
# content and squarefree decomposition


def content_z(S: BivarPoly, eps: float = GCD_EPS):
    """Split S = q(z) * Sbar with q the monic GCD of the w-coefficients.

    Returns (q, Sbar).  Raises GcdIllConditioned when the division residual
    exceeds eps * ||S||.
    """
    if S.is_zero:
        raise ZeroPolynomial("content of the zero polynomial")
    cols = [S.w_coefficient(j) for j in range(S.deg_w + 1)]
    q = _gcd_list(cols, eps)
    if q.true_degree == 0:
        return UnivarPoly(np.ones(1)), S
    qa = q.trimmed()
    nrm = S.norm()
    out = np.zeros((S.coeffs.shape[0] - len(qa) + 1, S.coeffs.shape[1]),
                   dtype=complex)
    total_res = 0.0
    for j, col in enumerate(cols):
        if col.is_zero:
            continue
        quo, res = _deconv_ls(np.array(col.coeffs), qa)
        total_res += res * res
        out[: len(quo), j] = quo
    if np.sqrt(total_res) > eps * nrm:
        raise GcdIllConditioned("content division residual too large")
    return q, BivarPoly(out)


def _cluster_to_count(roots: np.ndarray, count: int):
    """Agglomerative merge of root values into exactly `count` clusters."""
    clusters = [[r] for r in roots]
    while len(clusters) > count:
        best = (np.inf, 0, 1)
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                d = min(abs(x - y) for x in clusters[a] for y in clusters[b])
                if d < best[0]:
                    best = (d, a, b)
        _, a, b = best
        clusters[a].extend(clusters[b])
        del clusters[b]
    return [(complex(np.mean(c)), len(c)) for c in clusters]


def _polish_root(c: np.ndarray, r: complex, m: int, steps: int = 5) -> complex:
    """Newton-polish a multiplicity-m cluster representative.

    An m-fold root of p is a simple, well-conditioned root of p^(m-1);
    polishing there recovers accuracy the raw cluster mean lacks.
    """
    d = np.asarray(c)
    for _ in range(m - 1):
        d = npoly.polyder(d)
    dd = npoly.polyder(d)
    for _ in range(steps):
        dv = npoly.polyval(r, dd)
        if dv == 0:
            break
        step = npoly.polyval(r, d) / dv
        r = r - step
        if abs(step) < 1e-15 * max(1.0, abs(r)):
            break
    return complex(r)


def _cluster_by_radius(roots: np.ndarray, eps: float):
    """Union-find clustering of root values at linkage radius eps."""
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= eps:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    return [(complex(np.mean(g)), len(g)) for g in groups.values()]


def squarefree_w(Sbar: BivarPoly, eps: float = GCD_EPS) -> BivarPoly:
    """Squarefree part of Sbar in w (same leaves, simple generic fibers).

    Computed by evaluation-interpolation: at circle samples z_t the gcd
    degree of (Sbar^z, d/dw Sbar^z) is decided by Sylvester SVD, the
    distinct roots are recovered by count-constrained clustering, and the
    product lc(z_t) * prod (w - root) is interpolated back and freed of its
    z-content.  The division Sbar = result * cofactor is re-expanded and
    certified to eps * ||Sbar||.
    """
    if Sbar.is_zero:
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    if Sbar.deg_w < 1:
        raise ValueError("squarefree_w requires positive degree in w")
    n = Sbar.deg_w
    nz = Sbar.deg_z
    N = 2 * nz + 1 if nz > 0 else 1
    for attempt in range(6):
        radius = 1.0 + 0.17 * attempt
        phase = np.exp(1j * (0.379 + 0.811 * attempt))
        zs = radius * phase * np.exp(2j * np.pi * np.arange(N) / N)
        rows = specialize_z_many(Sbar, zs)
        lcv = rows[:, -1]
        if np.min(np.abs(lcv)) < 1e-10 * np.max(np.abs(rows)):
            continue  # leading coefficient nearly vanishes on a sample
        degs = []
        ok = True
        for t in range(N):
            fa = rows[t] / np.linalg.norm(rows[t])
            da = npoly.polyder(fa)
            degs.append(_gcd_degree(fa, _trim1(da), eps))
        d = min(degs)
        if any(x != d for x in degs):
            continue  # a special point sits on the sample circle
        if d == 0:
            return Sbar
        ell = n - d
        qvals = np.zeros((N, ell + 1), dtype=complex)
        for t in range(N):
            rts = _find_roots(rows[t])
            reps = [_polish_root(rows[t], r, m)
                    for r, m in _cluster_to_count(rts, ell)]
            qvals[t] = npoly.polyfromroots(reps) * lcv[t]
        # invert the evaluation on the scaled/rotated Fourier grid
        coeffs = np.fft.fft(qvals, axis=0) / N
        scale = (radius * phase) ** np.arange(N)
        Q = coeffs / scale[:, None]
        Qp = BivarPoly(_trim2(Q))
        _, St = content_z(Qp, eps)
        # certify: Sbar == St * D for the interpolated cofactor D
        try:
            D = _bivar_quotient(Sbar, St, zs)
        except ZeroPolynomial:
            continue
        resid = (Sbar - St * D).norm()
        if resid <= eps * Sbar.norm():
            return St
    raise GcdIllConditioned("squarefree decomposition failed certification")


def _bivar_quotient(A: BivarPoly, B: BivarPoly, zs: np.ndarray) -> BivarPoly:
    """Interpolated w-wise quotient A/B, assuming exact divisibility."""
    N = len(zs)
    rows_a = specialize_z_many(A, zs)
    rows_b = specialize_z_many(B, zs)
    dq = A.deg_w - B.deg_w
    if dq < 0:
        raise ZeroPolynomial("quotient degree negative")
    vals = np.zeros((N, dq + 1), dtype=complex)
    for t in range(N):
        quo, _ = _deconv_ls(rows_a[t], _trim1(rows_b[t]))
        vals[t, : len(quo)] = quo
    # zs[t] = c * omega^t, so the DFT recovers coefficients up to c^j
    coeffs = np.fft.fft(vals, axis=0) / N
    c = zs[0]
    coeffs = coeffs / (c ** np.arange(N))[:, None]
    return BivarPoly(_trim2(coeffs))


# ---------------------------------------------------------------------------
# resultants


def resultant_w(A: BivarPoly, B: BivarPoly, eps: float = GCD_EPS) -> UnivarPoly:
    """Resultant of A and B with respect to w, a polynomial in z.

    Evaluation-interpolation: numeric Sylvester determinants at circle
    samples, inverse DFT back to coefficients.  The sign convention is the
    classical one (det with deg(B) rows of A on top), pinned by the golden
    value Res_w(w - z, w + z) = 2z.
    """
    if A.is_zero or B.is_zero:
        raise ZeroPolynomial("resultant with a zero polynomial")
    na, nb = A.deg_w, B.deg_w
    if na == 0 and nb == 0:
        raise BothConstantInW("both inputs are constant in w")
    bound = max(A.deg_total * B.deg_total, A.deg_z * nb + B.deg_z * na, 1)
    N = bound + 1
    zs = np.exp(2j * np.pi * np.arange(N) / N)
    rows_a = specialize_z_many(A, zs)
    rows_b = specialize_z_many(B, zs)
    vals = np.empty(N, dtype=complex)
    for t in range(N):
        fa = rows_a[t][: na + 1]
        ga = rows_b[t][: nb + 1]
        if na == 0:
            vals[t] = fa[0] ** nb
        elif nb == 0:
            vals[t] = ga[0] ** na
        else:
            vals[t] = np.linalg.det(_sylvester(fa, ga))
    coeffs = np.fft.fft(vals) / N
    return UnivarPoly(_trim1(coeffs))


def sylvester_det(p: UnivarPoly, q: UnivarPoly) -> complex:
    """Numeric Sylvester determinant of two univariate polynomials
    (formal degrees as given by the coefficient arrays)."""
    fa, ga = np.array(p.coeffs), np.array(q.coeffs)
    m, n = len(fa) - 1, len(ga) - 1
    if m == 0 and n == 0:
        raise BothConstantInW("both inputs are constants")
    if m == 0:
        return complex(fa[0] ** n)
    if n == 0:
        return complex(ga[0] ** m)
    return complex(np.linalg.det(_sylvester(fa, ga)))


# ---------------------------------------------------------------------------
# univariate root finding


def _initial_guesses(c: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    cn = abs(c[-1])
    r_hi = 1.0 + max(abs(c[:-1])) / cn
    c0 = abs(c[0])
    r_lo = (c0 / cn) ** (1.0 / n) if c0 > 0 else 0.5
    r0 = min(max(np.sqrt(r_lo * r_hi), 1e-6), r_hi)
    ang = 2 * np.pi * np.arange(n) / n + 0.41
    return r0 * np.exp(1j * ang)


def _residual_scale(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    ax = np.abs(x)[:, None] ** np.arange(len(c))[None, :]
    return ax @ np.abs(c)


def _aberth(c: np.ndarray, max_iter: int = _MAX_ABERTH_ITER) -> np.ndarray:
    """Aberth-Ehrlich simultaneous iteration; c ascending, lc nonzero."""
    n = len(c) - 1
    dc = npoly.polyder(c)
    x = _initial_guesses(c)
    eps = np.finfo(float).eps
    for _ in range(max_iter):
        p = npoly.polyval(x, c)
        tol = 8 * (n + 1) * eps * _residual_scale(c, x)
        done = np.abs(p) <= tol
        if done.all():
            return x
        dp = npoly.polyval(x, dc)
        dp = np.where(dp == 0, eps, dp)
        newton = p / dp
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * s
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = newton / denom
        x = np.where(done, x, x - step)
        if not np.all(np.isfinite(x)):
            break
    raise NoConvergence("Aberth iteration stalled")


def _find_roots(coeff_row: np.ndarray) -> np.ndarray:
    """All roots of the trimmed polynomial given by an ascending row."""
    c = _trim1(np.asarray(coeff_row, dtype=complex))
    n = len(c) - 1
    if n <= 0:
        return np.zeros(0, dtype=complex)
    c = c / np.max(np.abs(c))
    if n == 1:
        return np.array([-c[0] / c[1]])
    if n == 2:
        a, b, cc = c[2], c[1], c[0]
        disc = np.sqrt(b * b - 4 * a * cc + 0j)
        qq = -(b + disc) / 2 if abs(b + disc) >= abs(b - disc) else -(b - disc) / 2
        r1 = qq / a
        r2 = cc / qq if qq != 0 else np.array(0j)
        return np.array([r1, r2])
    try:
        x = _aberth(c)
    except NoConvergence:
        x = np.roots(c[::-1])
        # one Newton polish pass after the companion fallback
        dc = npoly.polyder(c)
        for _ in range(3):
            p = npoly.polyval(x, c)
            dp = npoly.polyval(x, dc)
            dp = np.where(np.abs(dp) < 1e-300, 1e-300, dp)
            x = x - p / dp
    return x


def roots(p: UnivarPoly, eps: float = ROOT_CLUSTER_EPS) -> RootSet:
    """Finite roots with multiplicities plus the count at infinity.

    Finite roots come from Aberth-Ehrlich iteration (companion-matrix
    eigenvalues as fallback) on the true-degree polynomial; multiplicities
    from clustering at radius eps; count_at_infinity = formal degree - true
    degree.  Every reported root r satisfies |p(r)| <= ROOT_RES * sum_i
    |c_i| |r|^i.
    """
    if p.is_zero:
        raise ZeroPolynomial("root finding on the zero polynomial")
    d_true = p.true_degree
    at_inf = p.formal_degree - d_true
    if d_true == 0:
        return RootSet((), at_inf)
    c = p.trimmed()
    x = _find_roots(c)
    clusters = [(_polish_root(c, r, m), m) for r, m in _cluster_by_radius(x, eps)]
    reps = np.array([r for r, _ in clusters])
    scale = np.maximum(_residual_scale(c, reps), np.linalg.norm(c))
    resid = np.abs(npoly.polyval(reps, c))
    bad = resid > ROOT_RES * np.maximum(scale, 1e-300)
    if np.any(bad):
        raise NoConvergence(
            f"{int(bad.sum())} root(s) exceed the residual target")
    ordered = sorted(clusters, key=lambda rm: (rm[0].real, rm[0].imag))
    return RootSet(tuple(ordered), at_inf)


# ---------------------------------------------------------------------------
# JSON interchange


def poly_to_json(S: BivarPoly, k: int | None = None) -> dict:
    """Serialize as {"k": ..., "coeffs": [[[re, im], ...], ...]}."""
    kk = k if k is not None else max(S.deg_total, 0)
    return {
        "k": int(kk),
        "coeffs": [[[float(v.real), float(v.imag)] for v in row]
                   for row in S.coeffs],
    }


def poly_from_json(obj: dict) -> BivarPoly:
    """Parse the polynomial interchange format, rejecting ragged rows and
    non-finite entries."""
    if not isinstance(obj, dict) or "coeffs" not in obj or "k" not in obj:
        raise ValueError("polynomial JSON must carry 'k' and 'coeffs'")
    k = obj["k"]
    if not isinstance(k, int) or k < 0:
        raise ValueError("'k' must be a non-negative integer")
    rows = obj["coeffs"]
    if not isinstance(rows, list) or not rows:
        raise ValueError("'coeffs' must be a non-empty 2-D array")
    width = None
    data = []
    for row in rows:
        if not isinstance(row, list) or (width is not None and len(row) != width):
            raise ValueError("'coeffs' rows are ragged")
        width = len(row)
        if width == 0:
            raise ValueError("'coeffs' rows must be non-empty")
        vals = []
        for entry in row:
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(x, (int, float)) for x in entry)):
                raise ValueError("coefficients must be [re, im] pairs")
            if not all(np.isfinite(x) for x in entry):
                raise ValueError("coefficients must be finite")
            vals.append(complex(entry[0], entry[1]))
        data.append(vals)
    S = BivarPoly(np.array(data, dtype=complex))
    if S.deg_total > k:
        raise ValueError(f"total degree {S.deg_total} exceeds declared k={k}")
    return S
