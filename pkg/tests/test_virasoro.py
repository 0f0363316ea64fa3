import functools
from fractions import Fraction

import pytest

from kwfeynman.kdv import Series
from kwfeynman.kdv import solve_correlators as _solve
from kwfeynman.virasoro import (
    commutator,
    kw_residual,
    miwa_derivative_identity,
    monomials_up_to,
    virasoro_L,
    virasoro_relation_defect,
)

MONOS = monomials_up_to(6)

solve_correlators = functools.lru_cache(maxsize=None)(_solve)


@pytest.mark.parametrize("m", [-1, 0, 1, 2])
@pytest.mark.parametrize("n", [-1, 0, 1, 2])
def test_virasoro_relations_on_monomials(m, n):
    assert virasoro_relation_defect(m, n, MONOS) == []


def test_central_value():
    K = 8
    c = commutator(virasoro_L(2, K), virasoro_L(-2, K)) - virasoro_L(0, K) * 4
    assert c.apply(Series.constant(1)).terms == {(): Fraction(1, 2)}


@pytest.mark.parametrize("n", [-1, 0, 1, 2])
def test_constraints_annihilate_partition_function(n):
    assert kw_residual(n, solve_correlators(6)) == {}


@pytest.mark.parametrize("spectrum", [[1, 2], [1, 2, 3]])
def test_miwa_derivative_identity(spectrum):
    for k in range(-1, 3):
        for i in range(max(k, 0), 5):
            lhs, rhs = miwa_derivative_identity(k, i, spectrum)
            assert lhs == rhs


def test_miwa_rejects_out_of_range():
    with pytest.raises(ValueError):
        miwa_derivative_identity(2, 1, [1])
