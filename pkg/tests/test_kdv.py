import functools
import math
from fractions import Fraction

import pytest

from kwfeynman.kdv import DiffPoly, derive_t0, free_energy, gelfand_dikii, kdv_residual, string_residual
from kwfeynman.kdv import solve_correlators as _solve

u = DiffPoly.jet

solve_correlators = functools.lru_cache(maxsize=None)(_solve)


def test_first_gelfand_dikii_polynomials():
    assert gelfand_dikii(0) == DiffPoly.constant(1)
    assert gelfand_dikii(1) == u(0)
    assert gelfand_dikii(2) == u(0) * u(0) * Fraction(1, 2) + u(2) * Fraction(1, 12)


def test_first_kdv_flow():
    # d/dt1 U = U U' + U'''/12
    assert derive_t0(gelfand_dikii(2)) == u(0) * u(1) + u(3) * Fraction(1, 12)


@pytest.mark.parametrize("n", range(1, 6))
def test_gelfand_dikii_weight_and_leading_term(n):
    r = gelfand_dikii(n)
    assert r.is_weight_homogeneous() and r.weight() == 2 * n
    assert r.constant_term() == 0
    assert r.terms[(n,)] == Fraction(1, math.factorial(n))


def test_low_correlators():
    t = solve_correlators(4)
    assert t[(0, 0, 0)] == 1
    assert t[(0, 0, 0, 1)] == 1
    assert t[(1,)] == Fraction(1, 24)


@pytest.mark.parametrize("nu, value", [
    ((1, 1), Fraction(1, 24)),
    ((0, 2), Fraction(1, 24)),
    ((4,), Fraction(1, 1152)),
    ((2, 2, 2), Fraction(7, 240)),
    ((0, 0, 0, 0, 2), Fraction(1)),   # genus zero: (n-3)! / prod d_i!
    ((0, 0, 0, 1, 1, 1), Fraction(6)),
    ((1, 3), Fraction(0)),            # violates the dimension constraint
])
def test_known_intersection_numbers(nu, value):
    assert solve_correlators(7)[nu] == value


@pytest.mark.parametrize("i", [0, 1, 2])
def test_kdv_residuals_vanish(i):
    assert kdv_residual(solve_correlators(8), i) == {}


def test_string_equation_holds():
    res = string_residual(free_energy(solve_correlators(6)), 6)
    assert all(c == 0 for c in res.terms.values())
