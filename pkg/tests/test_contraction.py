import functools
import random
from fractions import Fraction
from itertools import product

import pytest

from kwfeynman.algebra import I, ONE, ZERO, GaussianRational, TracePoly
from kwfeynman.contraction import (
    ClusterExpr,
    appendix_expression,
    build_equation_I,
    build_equation_II,
    cluster_amplitude,
    expand_ciliated,
    hole_type_contribution,
    reduce,
    rule_instances,
    truncated_expectation,
    vertex_key,
    witten_derivative,
)
from kwfeynman.cyclic import CyclicPoly, NotDecomposable, cyclic_symmetrize, make_u
from kwfeynman.ribbon import enumerate_hole_types

T = TracePoly.T
SPEC = (1, 2)


# -- an oracle independent of the graph enumeration: Wick's theorem on matrix entries --------


def _propagator(spec, a, b):
    return Fraction(2) / (spec[a] + spec[b])


@functools.lru_cache(maxsize=None)
def _wick(entries, spec):
    # E[prod X_ab] with E[X_ab X_cd] = delta_ad delta_bc 2/(l_a + l_b)
    if not entries:
        return Fraction(1)
    if len(entries) % 2:
        return Fraction(0)
    (a, b), rest = entries[0], entries[1:]
    total = Fraction(0)
    for k, (c, d) in enumerate(rest):
        if c == b and d == a:
            total += _propagator(spec, a, b) * _wick(rest[:k] + rest[k + 1:], spec)
    return total


def _vertex_terms(n, exps, spec):
    # P_phi = sum phi(l_i1..l_in) X_{in i1} X_{i1 i2} ... X_{i(n-1) in}
    out = []
    N = len(spec)
    for idx in product(range(N), repeat=n):
        c = Fraction(1)
        for j, e in zip(idx, exps):
            c *= Fraction(spec[j]) ** e
        ents = [(idx[-1], idx[0])] + [(idx[k], idx[k + 1]) for k in range(n - 1)]
        out.append((c, ents))
    return out


def _cubic_terms(spec):
    N = len(spec)
    return [(Fraction(1), [(i, j), (j, k), (k, i)]) for i in range(N) for j in range(N) for k in range(N)]


def _expect(factors, spec):
    total = Fraction(0)
    for choice in product(*factors):
        c = Fraction(1)
        ents = []
        for cc, e in choice:
            c *= cc
            ents += e
        if c:
            total += c * _wick(tuple(sorted(ents)), spec)
    return total


def wick_rooted(cluster, v, spec):
    spec = tuple(Fraction(x) for x in spec)
    verts = [_vertex_terms(n, e, spec) for n, e in cluster]
    cubic = _cubic_terms(spec)

    def weight(a):
        # (i/6)^a / a!
        w = GaussianRational(Fraction(1, 6 ** a * _fact(a)))
        return w * I ** a

    num = [weight(a) * _expect(verts + [cubic] * a, spec) for a in range(v + 1)]
    vac = [weight(a) * _expect([cubic] * a, spec) for a in range(v + 1)]
    inv = [ONE]
    for k in range(1, v + 1):
        s = ZERO
        for j in range(1, k + 1):
            s = s + vac[j] * inv[k - j]
        inv.append(-s)
    return sum((num[a] * inv[v - a] for a in range(v + 1)), ZERO)


def _fact(a):
    out = 1
    for k in range(2, a + 1):
        out *= k
    return out


@pytest.mark.parametrize("cluster, v", [
    (((1, (0,)),), 1),
    (((1, (2,)),), 1),
    (((2, (1, 0)),), 0),
    (((2, (1, 0)),), 2),
    (((3, (0, 0, 0)),), 1),
    (((3, (2, 1, 0)),), 1),
    (((1, (0,)), (1, (1,))), 0),
    (((1, (0,)), (1, (1,))), 2),
    (((1, (0,)), (3, (0, 0, 0))), 0),
    (((4, (1, 0, 0, 0)),), 2),
])
def test_graph_expansion_matches_wick_theorem(cluster, v):
    assert cluster_amplitude(cluster, v, SPEC) == wick_rooted(cluster, v, SPEC)


# -- cluster expressions ------------------------------------------------------------------


def test_vertex_key_uses_orbit_representative():
    assert vertex_key((0, 1, 2)) == vertex_key((1, 2, 0)) == (3, (2, 0, 1))


def test_expand_psi_2_on_bivalent_vertex():
    psi2 = CyclicPoly(2, {(4, 0): -4, (3, 1): -3, (2, 2): -4, (1, 3): -3, (0, 4): -4})
    terms = {rule: (c, polys) for rule, c, polys, _ in expand_ciliated(psi2)}
    assert terms["C2"][0] == -(T(0) * T(4) * 16 + T(1) * T(3) * 12 + T(2) ** 2 * 8)
    c, (p,) = terms["C1"]
    assert c == TracePoly.constant(I) and p == psi2.substitute([2, 3], 3)


def _oracle_equal(a, b, v_max=3):
    va = truncated_expectation(a, v_max, SPEC)
    vb = truncated_expectation(b, v_max, SPEC)
    common = set(va) & set(vb)
    assert common
    return all(va[d] == vb[d] for d in common)


def _random_psi(rng, n, degree):
    terms = {}
    for _ in range(rng.randint(1, 2)):
        e = [0] * n
        for _ in range(degree):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = rng.randint(-3, 3) or 1
    return CyclicPoly(n, terms)


@pytest.mark.parametrize("seed", range(12))
def test_expansion_preserves_expectations(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(1, 3)
    psi = _random_psi(rng, n, rng.randint(0, 2))
    rest = tuple(sorted(vertex_key(_random_psi(rng, m, rng.randint(0, 1)).terms.popitem()[0])
                        for m in [rng.randint(1, 3) for _ in range(rng.randint(0, 1))]))
    lhs = ClusterExpr.from_product(1, [make_u(psi)], rest)
    rhs = ClusterExpr()
    for _, c, polys, r in expand_ciliated(psi, rest):
        rhs = rhs + ClusterExpr.from_product(c, polys, r)
    assert _oracle_equal(lhs, rhs)


@pytest.mark.parametrize("seed", range(8))
def test_equal_symmetrizations_give_equal_expectations(seed):
    rng = random.Random(200 + seed)
    n = rng.randint(2, 3)
    phi = _random_psi(rng, n, rng.randint(1, 3))
    # a different ciliated polynomial with the same symmetrization
    other = phi.rotate(rng.randint(1, n - 1))
    assert cyclic_symmetrize(other) == cyclic_symmetrize(phi)
    assert _oracle_equal(ClusterExpr.from_product(1, [phi]), ClusterExpr.from_product(1, [other]), 2)


def test_reduce_leaves_plain_clusters_alone():
    e = ClusterExpr.from_product(T(2), [CyclicPoly.monomial((0, 0, 0))])
    assert reduce(e) == e


def test_reduce_is_sound_on_small_clusters():
    for exps in [(2,), (2, 1, 0), (4,), (1, 1, 1)]:
        e = ClusterExpr.from_product(1, [CyclicPoly.monomial(exps)])
        assert _oracle_equal(e, reduce(e, allow_remainder=True))


def test_reduce_raises_on_obstruction():
    e = ClusterExpr.from_product(1, [CyclicPoly.monomial((1, 1))])
    with pytest.raises(NotDecomposable):
        reduce(e)
    assert _oracle_equal(e, reduce(e, allow_remainder=True))


def test_reduction_lowers_the_top_degree_each_round():
    steps = []
    reduce(build_equation_II(), steps)
    degrees = [s.degree for s in steps]
    assert degrees == sorted(degrees, reverse=True)
    assert degrees[0] == 6 and degrees[-1] >= 0


def test_reduction_is_independent_of_term_order():
    base = build_equation_II()
    items = list(base.terms.items())
    ref_steps = []
    ref = reduce(base, ref_steps)
    rng = random.Random(5)
    for _ in range(3):
        rng.shuffle(items)
        shuffled = ClusterExpr()
        for cl, c in items:
            shuffled = shuffled + ClusterExpr({cl: c})
        steps = []
        assert reduce(shuffled, steps) == ref
        assert [s.to_dict() for s in steps] == [s.to_dict() for s in ref_steps]


# -- hole types and equations --------------------------------------------------------------


def test_single_edge_hole_type():
    (G, aut), = enumerate_hole_types(1)
    assert witten_derivative(0) == ClusterExpr.from_product(-I, [CyclicPoly.monomial((0,))])
    assert hole_type_contribution(G, 3, aut) * 210 == ClusterExpr.from_product(-14 * I, [CyclicPoly.monomial((6,))])


def test_two_edge_hole_type_gives_eta_2():
    G, aut = enumerate_hole_types(2)[1]
    eta2 = CyclicPoly(2, {(p, 5 - p): -14 for p in range(6)}, ciliated=False)
    # an unciliated invariant decoration is stored divided by the valence
    assert hole_type_contribution(G, 3, aut) * 210 == ClusterExpr.from_product(1, [eta2 / 2])


def test_equation_I():
    assert len(enumerate_hole_types(1)) == 1
    e = build_equation_I()
    assert reduce(e) == 0
    assert all(v == 0 for v in truncated_expectation(e, 3, SPEC).values())


def test_equation_II_reduces_to_zero():
    assert reduce(build_equation_II()) == 0


def test_equation_II_has_one_top_degree_term():
    e = build_equation_II()
    tops = [t for t in e.monomial_terms() if sum(sum(x) for _, x in t[0]) + sum(h * k for h, k in t[1]) == 6]
    assert len(tops) == 1


@pytest.mark.parametrize("signs", [{"t1": -1}, {"t3": -1}, {"t1": -1, "t3": -1}])
def test_wrong_signs_do_not_reduce(signs):
    assert reduce(build_equation_II(signs)) != 0


def test_appendix_cross_check():
    d = witten_derivative((0, 1)) - appendix_expression()
    assert reduce(d) == 0
    vals = truncated_expectation(d, 2, SPEC)
    assert vals and all(v == 0 for v in vals.values())


def test_rule_instances_are_sound_for_equation_I():
    for kind, lhs, rhs in rule_instances(build_equation_I()):
        assert _oracle_equal(lhs, rhs)


def test_empty_cluster_expectation():
    assert cluster_amplitude((), 0, SPEC) == 1
    assert cluster_amplitude((), 2, SPEC) == 0
    assert truncated_expectation(ClusterExpr.vacuum(T(2)), 3, SPEC) == {Fraction(2): 5}
