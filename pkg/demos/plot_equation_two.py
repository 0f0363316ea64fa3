"""
Reducing the second equation to zero
=====================================

Derivatives of the partition function with respect to the trace
coordinates are finite sums over hole types.  The second equation becomes
a combination of decorated clusters; lowering total degrees with the
edge-contraction rules reduces it to zero.
"""

from kwfeynman.contraction import build_equation_II, reduce, truncated_expectation

# Before reducing anything, a brute-force expansion over all graphs with at
# most three ordinary vertices (eigenvalues 1 and 2) certifies the signs:
# the expression vanishes degree by degree.  Flipping the signs of the
# T_1 and T_3 terms does not.
eq = build_equation_II()
print("oracle:", truncated_expectation(eq, 3, (1, 2)))
flipped = build_equation_II({"t1": -1, "t3": -1})
print("oracle, flipped signs:", truncated_expectation(flipped, 3, (1, 2)))

# Each reduction step collects the top-degree terms around one vertex,
# symmetrizes the decoration and writes it as a sum of (theta_n + theta_1) psi.
steps = []
result = reduce(eq, steps)
for s in steps[:3]:
    print("degree %d, valence %d" % (s.degree, s.valence))
    print("   symmetrized:", s.phibar)
    print("   psi:        ", s.psi)
print("%d steps, normal form: %r" % (len(steps), result))
