import random
from fractions import Fraction

import pytest

from kwfeynman.algebra import GaussianRational
from kwfeynman.cyclic import (
    CyclicPoly,
    NotDecomposable,
    cyclic_decompose,
    cyclic_symmetrize,
    make_u,
    split_loop_backward,
    split_loop_forward,
    split_tensor,
    star_product,
)

th = CyclicPoly.theta


def poly(arity, terms):
    return CyclicPoly(arity, {tuple(e): c for e, c in terms.items()})


# the bivalent consolidation and its witness, as displayed in the reference derivation
PHIBAR_2 = CyclicPoly(2, {(5, 0): -8, (4, 1): -14, (3, 2): -14, (2, 3): -14, (1, 4): -14, (0, 5): -8},
                      ciliated=False)
PSI_2 = CyclicPoly(2, {(4, 0): -4, (3, 1): -3, (2, 2): -4, (1, 3): -3, (0, 4): -4})


def test_symmetrize_examples():
    assert cyclic_symmetrize(th(1, 2)) == (th(1, 2) + th(2, 2)).unciliated()
    assert cyclic_symmetrize(th(1, 2) ** 2 * th(2, 2)) == (th(1, 2) ** 2 * th(2, 2) + th(2, 2) ** 2 * th(1, 2)).unciliated()
    assert cyclic_symmetrize(make_u(PSI_2)) == PHIBAR_2


def test_make_u_examples():
    assert make_u(CyclicPoly.monomial((5,), Fraction(1, 2))) == CyclicPoly.monomial((6,))
    assert make_u(CyclicPoly.constant(1, 2)) == th(1, 2) + th(2, 2)


def test_decompose_certifies_phibar_2_and_accepts_reference_witness():
    psi = cyclic_decompose(PHIBAR_2)
    assert cyclic_symmetrize(make_u(psi)) == PHIBAR_2
    assert cyclic_symmetrize(make_u(PSI_2)) == PHIBAR_2


def test_decompose_univalent_sixth_power():
    assert cyclic_decompose(CyclicPoly(1, {(6,): 1}, ciliated=False)) == CyclicPoly.monomial((5,), Fraction(1, 2))


def test_sum_of_squares_is_not_decomposable():
    with pytest.raises(NotDecomposable):
        cyclic_decompose((th(1, 2) ** 2 + th(2, 2) ** 2).unciliated())


def _random_cyclic(rng, n, degree):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        e = [0] * n
        for _ in range(degree):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = GaussianRational(rng.randint(-4, 4), rng.randint(-1, 1))
    return CyclicPoly(n, terms)


def test_decompose_round_trip_on_random_u():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(1, 4)
        psi = _random_cyclic(rng, n, rng.randint(0, 4))
        phibar = cyclic_symmetrize(make_u(psi))
        assert phibar.is_invariant()
        assert cyclic_symmetrize(make_u(cyclic_decompose(phibar))) == phibar


def test_symmetrize_normalization():
    rng = random.Random(4)
    for _ in range(20):
        n = rng.randint(1, 4)
        phibar = cyclic_symmetrize(_random_cyclic(rng, n, 3))
        assert cyclic_symmetrize(phibar) / n == phibar


def _point(rng, n):
    return [Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(n)]


def test_split_loop_forward_reconstructs():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(3, 5)
        psi = _random_cyclic(rng, n, 4)
        x = _point(rng, n - 1)
        # psi(x1, ..., x_{n-1}, x2) = sum_h x1^h psi_h(x2, ..., x_{n-1})
        lhs = psi.evaluate(x[: n - 1] + [x[1]])
        rhs = sum((x[0] ** h * p.evaluate(x[1:]) for h, p in split_loop_forward(psi)), 0)
        assert lhs == rhs


def test_split_loop_backward_reconstructs():
    rng = random.Random(6)
    for _ in range(30):
        n = rng.randint(3, 5)
        psi = _random_cyclic(rng, n, 4)
        x = _point(rng, n)
        # psi(x1, ..., x_{n-2}, x1, x_n) = sum_h x_n^h eta_h(x1, ..., x_{n-2})
        lhs = psi.evaluate(x[: n - 2] + [x[0], x[n - 1]])
        rhs = sum((x[n - 1] ** h * p.evaluate(x[: n - 2]) for h, p in split_loop_backward(psi)), 0)
        assert lhs == rhs


def test_split_tensor_reconstructs():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(4, 6)
        j = rng.randint(1, n - 3)
        psi = _random_cyclic(rng, n, 4)
        x = _point(rng, n)
        # psi(x1..xj, x1, x_{j+2}..x_{n-1}, x_{j+2})
        args = x[:j] + [x[0]] + x[j + 1: n - 1] + [x[j + 1]]
        rhs = sum((a.evaluate(x[:j]) * b.evaluate(x[j + 1: n - 1]) for a, b in split_tensor(psi, j)), 0)
        assert psi.evaluate(args) == rhs


def test_split_examples():
    assert split_loop_forward(CyclicPoly.monomial((2, 0, 0))) == [(2, CyclicPoly.constant(1, 1))]
    assert split_loop_backward(CyclicPoly.monomial((1, 0, 1))) == [(1, th(1, 1))]
    assert split_tensor(CyclicPoly.monomial((0, 2, 0, 0)), 1) == [(th(1, 1) ** 2, CyclicPoly.constant(1, 1))]
    assert split_tensor(CyclicPoly.monomial((1, 0, 1, 0)), 1) == [(th(1, 1), th(1, 1))]


def test_star_product_pointwise():
    rng = random.Random(8)
    for _ in range(30):
        n, m = rng.randint(1, 4), rng.randint(2, 4)
        psi, zeta = _random_cyclic(rng, n, 3), _random_cyclic(rng, m, 3)
        x = _point(rng, n + m - 2)
        lhs = star_product(psi, zeta).evaluate(x)
        rhs = psi.evaluate(x[:n]) * zeta.evaluate([x[n - 1]] + x[n: n + m - 2] + [x[0]])
        assert lhs == rhs


def test_json_round_trip():
    assert CyclicPoly.from_json(PSI_2.to_json()) == PSI_2
    assert CyclicPoly.from_json(PHIBAR_2.to_json()) == PHIBAR_2
