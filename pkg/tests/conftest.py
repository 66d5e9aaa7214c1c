import numpy as np
import pytest

from nashkit.poly import BivarPoly


def T(terms):
    return BivarPoly.from_terms(terms)


# the ten-curve golden catalog: polynomial, expected excluded set in D_1
# as (location, {category values})
CORPUS = {
    "w2-z": (T({(0, 2): 1, (1, 0): -1}),
             [(0j, {"ramification_intersection"})]),
    "z(w-1)": (T({(1, 1): 1, (1, 0): -1}), [(0j, {"vertical_line"})]),
    "zw-1": (T({(1, 1): 1, (0, 0): -1}), [(0j, {"pole"})]),
    "w-z": (T({(0, 1): 1, (1, 0): -1}), []),
    "(w-z)(w+z)": (T({(0, 2): 1, (2, 0): -1}),
                   [(0j, {"ramification_intersection"})]),
    "w-z2": (T({(0, 1): 1, (2, 0): -1}), []),
    "(1-z/2)w-z": (T({(0, 1): 1, (1, 1): -0.5, (1, 0): -1}), []),
    "w3-z": (T({(0, 3): 1, (1, 0): -1}),
             [(0j, {"ramification_intersection"})]),
    "z2(w-1)": (T({(2, 1): 1, (2, 0): -1}), [(0j, {"vertical_line"})]),
    "zw2-1": (T({(1, 2): 1, (0, 0): -1}), [(0j, {"pole"})]),
}


def random_bivar(rng, k, zero_constant=False):
    """Unit-norm draw from the degree-k coefficient sphere."""
    c = np.zeros((k + 1, k + 1), dtype=complex)
    for i in range(k + 1):
        for j in range(k + 1 - i):
            c[i, j] = rng.standard_normal() + 1j * rng.standard_normal()
    if zero_constant:
        c[0, 0] = 0.0
    return BivarPoly(c / np.linalg.norm(c))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
