import numpy as np
import pytest
import sympy

from conftest import T, random_bivar
from nashkit.errors import (BothConstantInW, NoConvergence, ZeroPolynomial)
from nashkit.poly import (BivarPoly, UnivarPoly, content_z, evaluate,
                          poly_from_json, poly_to_json, resultant_w, roots,
                          specialize_z, sphere_normalize, squarefree_w,
                          sylvester_det, GCD_EPS)

W2Z = T({(0, 2): 1, (1, 0): -1})          # w^2 - z
ZW1 = T({(1, 1): 1, (0, 0): -1})          # zw - 1


def sympy_bivar(S, drop=1e-9):
    z, w = sympy.symbols("z w")
    expr = 0
    top = float(np.max(np.abs(S.coeffs)))
    for i in range(S.coeffs.shape[0]):
        for j in range(S.coeffs.shape[1]):
            c = complex(S.coeffs[i, j])
            if abs(c) > drop * top:
                expr += sympy.nsimplify(c, rational=True) * z**i * w**j
    return expr, z, w


class TestEvaluate:
    def test_point_on_parabola(self):
        assert evaluate(W2Z, 4, 2) == 0

    def test_point_on_hyperbola(self):
        assert evaluate(ZW1, 2, 0.5) == 0

    def test_circle_point(self):
        assert abs(evaluate(T({(2, 0): 1, (0, 2): 1}), 1, 1j)) < 1e-14

    def test_broadcasts(self):
        zs = np.array([1.0, 4.0])
        assert np.allclose(evaluate(W2Z, zs, np.sqrt(zs)), 0)


class TestSpecialize:
    def test_parabola_origin(self):
        u = specialize_z(W2Z, 0)
        assert np.allclose(u.coeffs, [0, 0, 1])
        assert u.formal_degree == 2

    def test_degree_drop(self):
        u = specialize_z(ZW1, 0)
        assert u.formal_degree == 1 and u.true_degree == 0
        assert u.coeffs[0] == -1

    def test_zero_specialization(self):
        u = specialize_z(T({(1, 1): 1, (1, 0): -1}), 0)  # z(w-1) at 0
        assert u.formal_degree == 1 and u.is_zero


class TestContent:
    def test_common_factor_z(self):
        q, sbar = content_z(T({(1, 1): 1, (1, 0): 1}))   # zw + z
        assert q.true_degree == 1 and abs(q(0)) < 1e-12
        assert np.allclose(sbar.coeffs, [[1, 1]])

    def test_coprime(self):
        q, sbar = content_z(W2Z)
        assert q.true_degree == 0
        assert np.allclose(sbar.coeffs, W2Z.coeffs)

    def test_square_content(self):
        q, sbar = content_z(T({(2, 1): 1, (2, 0): -1}))  # z^2 (w - 1)
        assert q.true_degree == 2
        assert np.allclose(sbar.coeffs, [[-1, 1]])

    def test_zero_rejected(self):
        with pytest.raises(ZeroPolynomial):
            content_z(BivarPoly(np.zeros((1, 1))))

    def test_reexpansion_invariant(self, rng):
        # q * Sbar reproduces S coefficientwise within GCD_EPS * ||S||
        for _ in range(25):
            k = int(rng.integers(1, 5))
            S = random_bivar(rng, k)
            qz = UnivarPoly(np.concatenate(
                [rng.standard_normal(2) + 1j * rng.standard_normal(2), [1.0]]))
            full = BivarPoly(np.array(qz.coeffs)[:, None]) * S
            q, sbar = content_z(full)
            back = BivarPoly(np.array(q.coeffs)[:, None]) * sbar
            # compare up to the scalar freedom between q and the factor
            scale = full.norm() / back.norm()
            diff = (full - scale * back).norm()
            alt = (full + scale * back).norm()
            assert min(diff, alt) <= GCD_EPS * full.norm() * 10


class TestSquarefree:
    def test_double_line(self):
        St = squarefree_w(T({(0, 2): 1, (1, 1): -2, (2, 0): 1}))  # (w-z)^2
        assert St.deg_w == 1
        ref = T({(0, 1): 1, (1, 0): -1})
        scale = St.coeffs[0, 1]
        assert np.allclose(St.coeffs / scale, ref.coeffs)

    def test_already_squarefree(self):
        St = squarefree_w(W2Z)
        assert np.allclose(St.coeffs, W2Z.coeffs)

    def test_mixed_composite_against_sympy(self):
        S = W2Z * T({(0, 2): 1, (1, 1): -2, (2, 0): 1})   # (w^2-z)(w-z)^2
        St = squarefree_w(S)
        assert St.deg_w == 3
        expr, z, w = sympy_bivar(St)
        ref = sympy.expand((w**2 - z) * (w - z))
        quotient = sympy.simplify(expr / ref)
        assert quotient.is_constant()

    def test_zero_and_constant_rejected(self):
        with pytest.raises(ZeroPolynomial):
            squarefree_w(BivarPoly(np.zeros((1, 1))))
        with pytest.raises(ValueError):
            squarefree_w(T({(2, 0): 1}))


class TestResultant:
    def test_golden_discriminant(self):
        r = resultant_w(W2Z, T({(0, 1): 2}))
        assert np.allclose(r.trimmed(), [0, -4], atol=1e-12)

    def test_golden_sign_convention(self):
        r = resultant_w(T({(0, 1): 1, (1, 0): -1}), T({(0, 1): 1, (1, 0): 1}))
        assert np.allclose(r.trimmed(), [0, 2], atol=1e-12)

    def test_shared_root_vanishes(self):
        r = resultant_w(T({(0, 1): 1, (0, 0): -1}), T({(0, 1): 1, (0, 0): -1}))
        assert r.is_zero

    def test_both_constant_rejected(self):
        with pytest.raises(BothConstantInW):
            resultant_w(T({(1, 0): 1}), T({(2, 0): 1}))

    def test_specialization_invariant(self, rng):
        # Res_w(A,B)(z0) equals the numeric Sylvester determinant of the
        # specialized pair, within 1e-8 relative
        checked = 0
        while checked < 50:
            A = random_bivar(rng, int(rng.integers(1, 5)))
            B = random_bivar(rng, int(rng.integers(1, 5)))
            if A.deg_w < 1 and B.deg_w < 1:
                continue
            r = resultant_w(A, B)
            z0 = complex(rng.standard_normal(), rng.standard_normal())
            direct = sylvester_det(specialize_z(A, z0), specialize_z(B, z0))
            interp = r(z0)
            if abs(direct) < 1e-12:
                continue
            assert abs(interp - direct) <= 1e-8 * abs(direct)
            checked += 1


class TestRoots:
    def test_plain_quadratic(self):
        rs = roots(UnivarPoly([-1, 0, 1]))
        assert rs.count_at_infinity == 0
        assert sorted(np.round(rs.values, 12)) == [-1, 1]

    def test_near_degenerate_quadratic(self):
        rs = roots(UnivarPoly([-1, 1, 1e-6]))
        vals = sorted(rs.values, key=abs)
        assert abs(vals[0] - 1.0) < 2e-6
        assert abs(vals[1] + 1e6) < 5.0
        assert rs.count_at_infinity == 0

    def test_degree_drop_gives_infinity(self):
        rs = roots(UnivarPoly([-1, 0]))
        assert rs.finite_roots == () and rs.count_at_infinity == 1

    def test_zero_rejected(self):
        with pytest.raises(ZeroPolynomial):
            roots(UnivarPoly([0, 0]))

    def test_multiplicity_clustering(self):
        c = np.polynomial.polynomial.polyfromroots([1, 1, 2])
        rs = roots(UnivarPoly(c), eps=1e-5)
        by_mult = sorted(rs.finite_roots, key=lambda rm: rm[1])
        assert [m for _, m in by_mult] == [1, 2]
        assert abs(by_mult[1][0] - 1) < 1e-6

    def test_reconstruction_invariant(self, rng):
        # monic rebuild from computed roots matches the monic input
        done = 0
        while done < 100:
            deg = int(rng.integers(2, 7))
            rts = rng.standard_normal(deg) + 1j * rng.standard_normal(deg)
            sep = min(abs(a - b) for i, a in enumerate(rts)
                      for b in rts[i + 1:])
            if sep < 1e-3:
                continue
            lc = complex(rng.standard_normal(), rng.standard_normal())
            if abs(lc) < 0.1:
                continue
            c = np.polynomial.polynomial.polyfromroots(rts) * lc
            got = roots(UnivarPoly(c))
            rebuilt = np.polynomial.polynomial.polyfromroots(
                [r for r, m in got.finite_roots for _ in range(m)])
            ref = c / lc
            assert np.max(np.abs(rebuilt - ref)) <= 1e-8 * np.max(np.abs(ref))
            done += 1

    def test_root_continuity_toward_infinity(self):
        # eps*w^2 + w - 1: the finite root approaches 1 monotonically and
        # exactly one root leaves every disk of radius 1/sqrt(eps)
        last_gap = np.inf
        for e in [10.0 ** (-p) for p in range(2, 11)]:
            rs = roots(UnivarPoly([-1, 1, e]))
            vals = sorted(rs.values, key=abs)
            gap = abs(vals[0] - 1.0)
            assert gap <= last_gap + 1e-15
            last_gap = gap
            escaped = [v for v in vals if abs(v) > 1 / np.sqrt(e)]
            assert len(escaped) == 1


class TestSphereNormalize:
    def test_monomial(self):
        Sn = sphere_normalize(T({(0, 1): 2}))
        assert np.allclose(Sn.coeffs, [[0, 1]])

    def test_pythagorean(self):
        Sn = sphere_normalize(T({(1, 0): 3, (0, 1): 4}))
        assert abs(Sn.norm() - 1) < 1e-14
        assert abs(Sn.coeffs[1, 0] - 0.6) < 1e-14

    def test_idempotent(self, rng):
        S = random_bivar(rng, 3)
        once = sphere_normalize(S)
        twice = sphere_normalize(once)
        assert np.max(np.abs(once.coeffs - twice.coeffs)) < 1e-14

    def test_zero_rejected(self):
        with pytest.raises(ZeroPolynomial):
            sphere_normalize(BivarPoly(np.zeros((2, 2))))


class TestJson:
    def test_round_trip(self, rng):
        S = random_bivar(rng, 3)
        back = poly_from_json(poly_to_json(S, 3))
        assert np.allclose(back.coeffs, S.coeffs)

    def test_rejects_ragged(self):
        with pytest.raises(ValueError):
            poly_from_json({"k": 1, "coeffs": [[[0, 0], [1, 0]], [[1, 0]]]})

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            poly_from_json({"k": 1, "coeffs": [[[float("nan"), 0]]]})

    def test_rejects_overdeclared_degree(self):
        with pytest.raises(ValueError):
            poly_from_json({"k": 0, "coeffs": [[[0, 0], [1, 0]]]})

    def test_rejects_missing_keys(self):
        with pytest.raises(ValueError):
            poly_from_json({"coeffs": [[[1, 0]]]})
