import random
from fractions import Fraction

import pytest

from kwfeynman.cyclic import CyclicPoly
from kwfeynman.kdv import solve_correlators
from kwfeynman.ribbon import (
    RibbonGraph,
    amplitude_colored,
    closures,
    dumbbell_graph,
    enumerate_closed_trivalent,
    enumerate_hole_types,
    enumerate_two_hole_types,
    kmi_check,
    special_edge_count,
    special_vertex_graph,
    theta_graph,
    topology,
)


def test_theta_and_dumbbell():
    th = theta_graph()
    assert topology(th) == {"V": 2, "E": 3, "holes": topology(th)["holes"], "genus": [0]}
    assert len(th.faces()) == 3
    assert th.canonical_form()[1] == 6 == th.automorphism_count_brute_force()
    assert dumbbell_graph().canonical_form()[1] == 2 == dumbbell_graph().automorphism_count_brute_force()
    assert topology(theta_graph(twisted=True))["genus"] == [1]


def test_canonical_form_is_relabeling_invariant():
    rng = random.Random(21)
    for G, _ in enumerate_closed_trivalent(0, 4) + enumerate_closed_trivalent(1, 2):
        for _ in range(5):
            perm = list(range(G.n_half_edges()))
            rng.shuffle(perm)
            assert G.relabel(perm).key() == G.key()


def test_automorphism_counts_match_brute_force():
    # the brute force runs over all half-edge permutations, so keep to two vertices
    graphs = enumerate_closed_trivalent(0, 3) + enumerate_closed_trivalent(1, 1)
    graphs += closures(special_vertex_graph(valence=4, ciliated=False))
    for G, aut in graphs:
        assert aut == G.automorphism_count_brute_force()


@pytest.mark.parametrize("v, weight", [(2, Fraction(5, 6)), (4, Fraction(5))])
def test_connected_vacuum_weights_match_gaussian_moments(v, weight):
    # at N = 1 the cubic model gives E[exp(i x^3/6)] with E[x^2] = 1; its logarithm at order x^(3v)
    # equals (i/2)^v times the sum of 1/|Aut| over connected trivalent graphs with v vertices
    total = Fraction(0)
    for g in range(3):
        n = v // 2 + 2 - 2 * g
        if n >= 1:
            total += sum(Fraction(1, aut) for _, aut in enumerate_closed_trivalent(g, n))
    assert total == weight


def test_gaussian_cross_check_at_four_vertices():
    # E[(i tr X^3/6)^4 / 4!] at N = 1 is 11!! / (6^4 * 24) = 385/1152
    connected = Fraction(5, 16)
    two_thetas = Fraction(1, 2) * Fraction(-5, 24) ** 2
    assert connected + two_thetas == Fraction(385, 1152)
    amp = sum(amplitude_colored(G, [1]) / aut for g, n in ((0, 4), (1, 2)) for G, aut in enumerate_closed_trivalent(g, n))
    assert amp == connected


@pytest.mark.parametrize("g, n", [(0, 3), (0, 4), (1, 1)])
def test_main_identity(g, n):
    ok, lhs, rhs = kmi_check(g, n, solve_correlators(4))
    assert ok, (lhs, rhs)


def test_json_round_trip():
    G, _ = enumerate_closed_trivalent(0, 4)[0]
    assert RibbonGraph.from_json(G.to_json()).key() == G.key()


def test_closures_of_decorated_vertex():
    assert len(closures(special_vertex_graph(valence=4))) == 3
    assert closures(special_vertex_graph(valence=3)) == []
    loop = special_vertex_graph(CyclicPoly.monomial((5, 0)), pairs=[(0, 1)])
    assert amplitude_colored(loop, [1, 2]) == 39


def test_hole_type_counts_per_edge_number():
    types = enumerate_hole_types(7)
    counts = [sum(1 for G, _ in types if special_edge_count(G) == e) for e in range(1, 8)]
    assert counts == [1, 1, 3, 2, 3, 9, 11]


def test_two_hole_types():
    types = enumerate_two_hole_types(4)
    assert len(types) == 17
    for G, _ in types:
        assert {G.hole_label(d) for d in range(G.n_half_edges())} >= {"z", "w"}
