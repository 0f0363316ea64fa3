"""
Intersection numbers from the KdV hierarchy
============================================

The string equation and the KdV flows determine every correlator
`<tau_{d_1} ... tau_{d_n}>`.  The same numbers are annihilated by the
Virasoro operators `L_n`, `n >= -1`.
"""

from kwfeynman.kdv import derive_t0, gelfand_dikii, kdv_residual, solve_correlators
from kwfeynman.virasoro import kw_residual, monomials_up_to, virasoro_relation_defect

# Gel'fand-Dikii polynomials; the derivative of R_2 is the right hand side
# of the first KdV flow.
for n in range(4):
    print("R_%d =" % n, gelfand_dikii(n))
print("d/dt0 R_2 =", derive_t0(gelfand_dikii(2)))

# Solve for correlators up to total index 6.
table = solve_correlators(6)
for nu in [(0, 0, 0), (1,), (4,), (2, 2, 2), (1, 1, 1, 1)]:
    print("<%s> =" % " ".join("tau_%d" % d for d in nu), table[nu])
print("KdV residuals vanish:", all(not kdv_residual(table, i) for i in range(3)))

# The operators satisfy the Virasoro relations with central term
# (m^3 - m)/12, and annihilate the partition function.
monos = monomials_up_to(4)
print("relations hold:", all(not virasoro_relation_defect(m, n, monos) for m in range(-1, 3) for n in range(-1, 3)))
print("constraints hold:", all(not kw_residual(n, table) for n in range(-1, 3)))
