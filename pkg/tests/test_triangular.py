import random

import pytest

from kwfeynman.triangular import D0, D1_at_base, NotTriangular, TriangularOp, compose_then_evaluate, norm_minus, norm_plus


def test_composition_at_base_point():
    assert repr(compose_then_evaluate(D1_at_base(), D0())) == "13/24*ds0 + 1/2*ds0*ds1"


def test_identity_after_d0():
    assert repr(compose_then_evaluate(TriangularOp.identity(), D0())) == "ds0"


def test_zero_operator():
    assert not compose_then_evaluate(TriangularOp(), TriangularOp())


def test_d1_display():
    assert repr(D1_at_base()) == "1/24 + 1/2*ds1"


def test_d0_terms_are_triangular():
    for (m, n), _ in D0().terms.items():
        assert norm_plus(n) <= norm_minus(m)


def test_non_triangular_term_rejected():
    with pytest.raises(NotTriangular):
        TriangularOp({((), ((1, 1),)): 1})


def _random_op(rng):
    op = TriangularOp.identity(rng.randint(-2, 2))
    for _ in range(2):
        i = rng.randint(0, 2)
        j = rng.randint(0, i)
        op = op + TriangularOp.variable(i + 1) * TriangularOp.derivative(j) * rng.randint(1, 3)
    return op


def test_composition_is_associative_and_stays_triangular():
    rng = random.Random(31)
    for _ in range(10):
        a, b, c = (_random_op(rng) for _ in range(3))
        ab_c = (a * b) * c
        assert ab_c == a * (b * c)
        for (m, n), _ in ab_c.terms.items():
            assert norm_plus(n) <= norm_minus(m)
