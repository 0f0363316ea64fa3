"""
Ribbon graphs and the cubic matrix model
=========================================

The Kontsevich model integrates `exp(i tr X^3 / 6)` against the Gaussian
measure `exp(-tr(Lambda X^2) / 2)`.  Its Feynman graphs are ribbon graphs
with trivalent vertices; each edge bordering holes coloured `a`, `b`
carries `2 / (Lambda_a + Lambda_b)` and each vertex carries `i/2`.
"""

from fractions import Fraction

from kwfeynman.ribbon import (
    amplitude_colored,
    dumbbell_graph,
    enumerate_closed_trivalent,
    kmi_check,
    theta_graph,
    topology,
)

# The two planar graphs with two vertices.  Automorphisms are the
# half-edge bijections commuting with the vertex rotation and the edge
# pairing.
for name, g in [("theta", theta_graph()), ("dumbbell", dumbbell_graph())]:
    _, aut = g.canonical_form()
    print(name, topology(g), "automorphisms:", aut)

# Summing 1/|Aut| over connected graphs with four vertices reproduces the
# connected part of the one-dimensional integral: E[(i x^3/6)^4/4!] = 385/1152
# minus the square of the two-vertex term.
connected = sum(
    amplitude_colored(G, [1]) / aut
    for g, n in [(0, 4), (1, 2)]
    for G, aut in enumerate_closed_trivalent(g, n)
)
print("connected, four vertices:", connected)
print("plus disconnected:", connected + Fraction(1, 2) * Fraction(-5, 24) ** 2)

# The graph sum over surfaces of genus g with n numbered holes equals the
# generating function of intersection numbers.
for g, n in [(0, 3), (1, 1)]:
    ok, lhs, rhs = kmi_check(g, n)
    print("genus %d, %d holes:" % (g, n), rhs, "matches" if ok else "DIFFERS")
