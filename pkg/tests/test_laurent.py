import random
from fractions import Fraction

import sympy

from kwfeynman.algebra import I, TracePoly
from kwfeynman.laurent import ColorPoly, HoleRational, coeff_at_infinity, coeff_two_vars, colors_to_traces

z, w, a, b, c = sympy.symbols("z w a b c")
SYM = {"a": a, "b": b, "c": c}


def _to_sympy(p):
    out = sympy.Integer(0)
    for mono, coef in p.terms.items():
        t = sympy.Rational(coef.re.numerator, coef.re.denominator) + sympy.I * sympy.Rational(coef.im.numerator, coef.im.denominator)
        for s, e in mono:
            t *= SYM[s] ** e
        out += t
    return sympy.expand(out)


def _sympy_coeff_at_infinity(expr, k):
    # substitute z = 1/x and read the coefficient of x^k
    x = sympy.Symbol("x")
    ser = sympy.series(expr.subs(z, 1 / x), x, 0, k + 1).removeO()
    return sympy.expand(ser).coeff(x, k)


def test_single_hole_against_series_expansion():
    rng = random.Random(11)
    for _ in range(8):
        zero = rng.randint(0, 2)
        factors = {s: rng.randint(0, 2) for s in "abc"}
        factors = {s: m for s, m in factors.items() if m}
        num = Fraction(rng.randint(1, 5), rng.randint(1, 3))
        f = HoleRational(num, zero, factors)
        expr = sympy.Rational(num.numerator, num.denominator) * z ** (-zero)
        for s, m in factors.items():
            expr *= (z + SYM[s]) ** (-m)
        for k in range(1, 6):
            assert _to_sympy(coeff_at_infinity(f, k)) == sympy.expand(_sympy_coeff_at_infinity(expr, k))


def test_single_edge_hole_values():
    # Coeff_z^{-1} of i/(z + a) is i; Coeff_z^{-7} is i a^6
    f = HoleRational(I, 0, {"a": 1})
    assert _to_sympy(coeff_at_infinity(f, 1)) == sympy.I
    assert _to_sympy(coeff_at_infinity(f, 7)) == sympy.I * a ** 6


def test_two_variable_expansion_region():
    # 1/(w (z + w)) = sum_j (-1)^j w^{j-1} z^{-1-j} for |z| > |w|
    assert coeff_two_vars(1, {}, {}, 1, 1, w_pow=1, zw_pow=1) == ColorPoly.constant(1)
    assert coeff_two_vars(1, {}, {}, 2, 0, w_pow=1, zw_pow=1) == ColorPoly.constant(-1)
    # 2/((z + a)(w + b)): z^{-3} carries a^2, w^{-2} carries -b
    got = coeff_two_vars(2, {"a": 1}, {"b": 1}, 3, 2)
    assert _to_sympy(got) == -2 * a ** 2 * b


def test_two_variable_against_double_series():
    rng = random.Random(12)
    x, y = sympy.symbols("x y")
    for _ in range(6):
        zf = {"a": rng.randint(0, 1)}
        wf = {"b": rng.randint(0, 1)}
        zf = {s: m for s, m in zf.items() if m}
        wf = {s: m for s, m in wf.items() if m}
        zp, wp, zw = rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 2)
        expr = z ** (-zp) * w ** (-wp) * (z + w) ** (-zw)
        for s, m in zf.items():
            expr *= (z + SYM[s]) ** (-m)
        for s, m in wf.items():
            expr *= (w + SYM[s]) ** (-m)
        # |z| > |w| > colours: expand in 1/z first, then in 1/w
        ez = sympy.expand(sympy.series(expr.subs(z, 1 / x), x, 0, 6).removeO())
        for kz in range(1, 6):
            cz = ez.coeff(x, kz)
            ew = sympy.expand(sympy.series(cz.subs(w, 1 / y), y, 0, 5).removeO())
            for kw in range(0, 5):
                want = sympy.expand(ew.coeff(y, kw))
                got = _to_sympy(coeff_two_vars(1, zf, wf, kz, kw, z_pow=zp, w_pow=wp, zw_pow=zw))
                assert got == want, (zf, wf, zp, wp, zw, kz, kw)


def test_colors_to_traces():
    a_, b_ = ColorPoly.symbol("a"), ColorPoly.symbol("b")
    assert colors_to_traces(a_ ** 4) == TracePoly.T(4)
    # every colour of the polynomial is summed, including those absent from a term
    assert colors_to_traces(a_ ** 2 * b_ ** 3 + a_) == TracePoly.T(2) * TracePoly.T(3) + TracePoly.T(1) * TracePoly.T(0)
    assert colors_to_traces(ColorPoly.constant(1, ["a", "b"])) == TracePoly.T(0) ** 2
