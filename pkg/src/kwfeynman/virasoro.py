r"""
The operators `\alpha_\rho`, `L_n` and the Miwa change of variables.

Operators are normal ordered: a term is `c\, t^a \partial^b` with all
multiplications to the left.  Every `\alpha_\rho` carries one factor
`1/\sqrt2`, recorded as an integer power of `\sqrt2` so that bilinear
combinations stay rational.

EXAMPLES::

    >>> from kwfeynman.virasoro import alpha, virasoro_L, commutator
    >>> commutator(alpha(Fraction(1, 2)), alpha(Fraction(-1, 2)))
    1/2
    >>> virasoro_L(-1, 2)
    -1/2*d0 + 1/4*t0^2 + 1/2*t1*d0 + 1/2*t2*d1 + 1/2*t3*d2
"""
from fractions import Fraction
from math import comb

from .algebra import TracePoly, double_factorial
from .kdv import Series, free_energy

__all__ = [
    "FormalOperator",
    "alpha",
    "virasoro_L",
    "commutator",
    "kw1_operator",
    "kw2_operator",
    "partition_function",
    "kw_residual",
    "virasoro_relation_defect",
    "miwa_t",
    "miwa_derivative_identity",
]


def _mono(d):
    return tuple(sorted((i, e) for i, e in d.items() if e))


def _mmul(a, b):
    d = dict(a)
    for i, e in b:
        d[i] = d.get(i, 0) + e
    return _mono(d)


def _falling(n, k):
    r = 1
    for j in range(k):
        r *= n - j
    return r


class FormalOperator:
    r"""
    Finite sum of `c\, t^a \partial^b`, times `\sqrt2^{\,s}` with ``s`` the
    attribute ``sqrt2``.

    >>> FormalOperator.derivative(0) * FormalOperator.variable(0)
    1 + t0*d0
    """
    __slots__ = ("terms", "sqrt2")

    def __init__(self, terms=None, sqrt2=0):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}
        self.sqrt2 = sqrt2
        self._normalize()

    def _normalize(self):
        # fold even powers of sqrt 2 into the coefficients
        if self.sqrt2 and self.sqrt2 % 2 == 0:
            f = Fraction(2) ** (self.sqrt2 // 2)
            self.terms = {k: c * f for k, c in self.terms.items()}
            self.sqrt2 = 0

    @classmethod
    def identity(cls, c=1):
        return cls({((), ()): c})

    @classmethod
    def variable(cls, i):
        return cls({(((i, 1),), ()): 1})

    @classmethod
    def derivative(cls, i):
        return cls({((), ((i, 1),)): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FormalOperator):
            other = FormalOperator.identity(other)
        return self.sqrt2 == other.sqrt2 and self.terms == other.terms

    def __add__(self, other):
        if not isinstance(other, FormalOperator):
            other = FormalOperator.identity(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.sqrt2 != other.sqrt2:
            raise ValueError("cannot add operators with different sqrt(2) gradings")
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k, 0) + c
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return FormalOperator(t, self.sqrt2)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FormalOperator):
            c = Fraction(other)
            return FormalOperator({k: v * c for k, v in self.terms.items()}, self.sqrt2)
        out = {}
        for (a, b), c1 in self.terms.items():
            for (p, q), c2 in other.terms.items():
                for (ma, mb), c in _leibniz(b, p):
                    key = (_mmul(a, ma), _mmul(mb, q))
                    out[key] = out.get(key, 0) + c1 * c2 * c
        return FormalOperator(out, self.sqrt2 + other.sqrt2)

    def __rmul__(self, other):
        return self * other

    def apply(self, f):
        r"""
        Apply to a polynomial given as a :class:`~kwfeynman.kdv.Series`
        (rational coefficients).  Requires an even ``sqrt2`` grading.
        """
        if self.sqrt2:
            raise ValueError("operator has an odd power of sqrt(2)")
        out = Series()
        for (a, b), c in self.terms.items():
            g = f
            for i, e in b:
                for _ in range(e):
                    g = g.derivative(i)
            if not g.terms:
                continue
            g = Series({_mmul(m, a): v * c for m, v in g.terms.items()})
            out = out + g
        return out

    def max_derivative_index(self):
        return max((i for (_, b) in self.terms for i, _ in b), default=-1)

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for (a, b), c in sorted(self.terms.items(), key=lambda kc: (sum(e for _, e in kc[0][0]) + sum(e for _, e in kc[0][1]), kc[0])):
            ms = "*".join(
                ["t%d" % i if e == 1 else "t%d^%d" % (i, e) for i, e in a]
                + ["d%d" % i if e == 1 else "d%d^%d" % (i, e) for i, e in b]
            )
            if not ms:
                out.append(str(c))
            elif c == 1:
                out.append(ms)
            elif c == -1:
                out.append("-" + ms)
            else:
                out.append("%s*%s" % (c, ms))
        s = " + ".join(out).replace("+ -", "- ")
        if self.sqrt2:
            s = "sqrt2^%d*(%s)" % (self.sqrt2, s)
        return s


def _leibniz(b, p):
    # d^b t^p = sum_k prod_i C(b_i, k_i) (p_i)_(k_i) t^(p-k) d^(b-k)
    bd, pd = dict(b), dict(p)
    shared = sorted(set(bd) & set(pd))
    results = [(({}, {}), 1)]
    for i in shared:
        nxt = []
        for (ma, mb), c in results:
            for k in range(min(bd[i], pd[i]) + 1):
                na, nb = dict(ma), dict(mb)
                na[i] = pd[i] - k
                nb[i] = bd[i] - k
                nxt.append(((na, nb), c * comb(bd[i], k) * _falling(pd[i], k)))
        results = nxt
    out = []
    for (ma, mb), c in results:
        a = {i: e for i, e in pd.items() if i not in bd}
        a.update(ma)
        d = {i: e for i, e in bd.items() if i not in pd}
        d.update(mb)
        out.append(((_mono(a), _mono(d)), c))
    return out


def commutator(A, B):
    return A * B - B * A


def alpha(rho):
    r"""
    `\alpha_\rho = \frac{(2\rho)!!}{\sqrt2}\partial_{t_{\rho-1/2}}` for
    `\rho > 0` and
    `\alpha_\rho = \frac{1}{(-2\rho-2)!!\sqrt2}(t_{-\rho-1/2} - \delta_{\rho,-3/2})`
    for `\rho < 0`.

    >>> alpha(Fraction(3, 2))
    sqrt2^-1*(3*d1)
    >>> alpha(Fraction(-3, 2))
    sqrt2^-1*(-1 + t1)
    """
    rho = Fraction(rho)
    if rho.denominator != 2:
        raise ValueError("rho must lie in Z + 1/2")
    if rho > 0:
        j = int(rho - Fraction(1, 2))
        return FormalOperator({((), ((j, 1),)): double_factorial(int(2 * rho))}, -1)
    j = int(-rho - Fraction(1, 2))
    c = Fraction(1, double_factorial(int(-2 * rho - 2)))
    terms = {(((j, 1),), ()): c}
    if rho == Fraction(-3, 2):
        terms[((), ())] = -c
    return FormalOperator(terms, -1)


def virasoro_L(n, max_index):
    r"""
    `L_n = \frac12\sum_\rho\alpha_\rho\alpha_{n-\rho}` (`n \ne 0`) and
    `L_0 = \sum_{\rho>0}\alpha_{-\rho}\alpha_\rho + \frac1{16}`, keeping the
    terms that differentiate in `t_0, \dots, t_K` with `K` = ``max_index``.
    This is exact on polynomials in `t_0, \dots, t_K`.

    >>> virasoro_L(0, 1)
    1/16 - 3/2*d1 + 1/2*t0*d0 + 3/2*t1*d1
    """
    half = Fraction(1, 2)
    # alpha_rho with rho > 0 differentiates in t_{rho-1/2}
    top = Fraction(max_index) + half
    if n == 0:
        total = FormalOperator.identity(Fraction(1, 16))
        rho = half
        while rho <= top:
            total = total + alpha(-rho) * alpha(rho)
            rho += 1
        return total
    # a positive index above `top` would differentiate in t_j, j > K; so
    # rho ranges over n - top <= rho <= top
    total = FormalOperator()
    rho = Fraction(n) - top
    while rho <= top:
        total = total + alpha(rho) * alpha(n - rho)
        rho += 1
    return total * half


def kw1_operator(max_index):
    r"""
    `\partial_{t_0} - \sum_i t_{i+1}\partial_{t_i} - t_0^2/2`.
    """
    op = FormalOperator.derivative(0) - FormalOperator({(((0, 2),), ()): Fraction(1, 2)})
    for i in range(max_index + 1):
        op = op - FormalOperator.variable(i + 1) * FormalOperator.derivative(i)
    return op


def kw2_operator(max_index):
    r"""
    `\partial_{t_3} - \frac{1}{7!!}\bigl(\sum_i (2i+5)(2i+3)(2i+1)t_i\partial_{t_{i+2}}
    + 3\partial_{t_0}\partial_{t_1}\bigr)`.
    """
    op = FormalOperator.derivative(3)
    for i in range(max(0, max_index - 1)):
        c = Fraction((2 * i + 5) * (2 * i + 3) * (2 * i + 1), 105)
        op = op - FormalOperator.variable(i) * FormalOperator.derivative(i + 2) * c
    op = op - FormalOperator({((), ((0, 1), (1, 1))): Fraction(3, 105)})
    return op


def _slen(m):
    return sum(e for _, e in m)


def _sweight(m):
    return sum(i * e for i, e in m)


def partition_function(table, max_weight, max_length):
    r"""
    `Z = \exp F` on the monomials with weight `\sum\nu \le` ``max_weight``
    and at most ``max_length`` variables; every such coefficient is exact.
    """
    F = free_energy(table, max_weight)
    F = Series({m: Fraction(int(c.numerator), int(c.denominator)) for m, c in F.terms.items() if _slen(m) <= max_length})

    def cut(s):
        return Series({m: c for m, c in s.terms.items() if _slen(m) <= max_length and _sweight(m) <= max_weight})

    Z = Series.constant(Fraction(1))
    power = Series.constant(Fraction(1))
    for k in range(1, max_length + 1):
        power = cut(power * F).scale(Fraction(1, k))
        Z = Z + power
    return Z


def kw_residual(n, table, max_weight=None, max_length=6):
    r"""
    `L_n Z` on the monomials whose coefficient only involves exactly known
    coefficients of `Z`.  Returns a dict of the nonzero values (empty when
    the constraint holds).

    >>> from kwfeynman.kdv import solve_correlators
    >>> kw_residual(-1, solve_correlators(4), max_length=4)
    {}
    """
    if max_weight is None:
        max_weight = table.max_weight
    Z = partition_function(table, max_weight, max_length)
    op = virasoro_L(n, max_weight + 2)
    out = op.apply(Z)
    certified = {}
    for m, c in out.terms.items():
        if _certified(op, m, max_weight, max_length):
            if c:
                certified[m] = c
    return certified


def _certified(op, m, max_weight, max_length):
    md = dict(m)
    for (a, b), _ in op.terms.items():
        if any(md.get(i, 0) < e for i, e in a):
            continue
        src = dict(md)
        for i, e in a:
            src[i] -= e
        for i, e in b:
            src[i] = src.get(i, 0) + e
        sm = _mono(src)
        if _slen(sm) > max_length or _sweight(sm) > max_weight:
            return False
    return True


def monomials_up_to(max_weight, max_index=None):
    r"""All monomials `t_\nu` with `\sum\nu_i \le` ``max_weight`` (and at least one variable)."""
    if max_index is None:
        max_index = max_weight
    out = [()]

    def rec(i, budget, cur):
        if i > max_index:
            if cur:
                out.append(_mono(cur))
            return
        e = 0
        while (i * e <= budget) and (i > 0 or e <= max_weight):
            nxt = dict(cur)
            if e:
                nxt[i] = e
            rec(i + 1, budget - i * e, nxt)
            e += 1

    rec(0, max_weight, {})
    return sorted(set(out))


def virasoro_relation_defect(m, n, monomials, max_index=16):
    r"""
    Apply `[L_m, L_n] - (m-n)L_{m+n} - \delta_{m+n,0}(m^3-m)/12` to each
    monomial; return the list of monomials where the result is nonzero.

    >>> virasoro_relation_defect(2, -2, monomials_up_to(2))
    []
    """
    Lm, Ln = virasoro_L(m, max_index), virasoro_L(n, max_index)
    rhs = virasoro_L(m + n, max_index) * (m - n)
    if m + n == 0:
        rhs = rhs + FormalOperator.identity(Fraction(m ** 3 - m, 12))
    bad = []
    for mono in monomials:
        f = Series({mono: Fraction(1)})
        left = Lm.apply(Ln.apply(f)) - Ln.apply(Lm.apply(f))
        diff = left - rhs.apply(f)
        if any(diff.terms.values()):
            bad.append(mono)
    return bad


def miwa_t(k):
    r"""
    `t_k(\Lambda) = -(2k-1)!!\,\mathrm{tr}\,\Lambda^{-(2k+1)}`.

    >>> miwa_t(0), miwa_t(3)
    (-T-1, -15*T-7)
    """
    return TracePoly.T(-(2 * k + 1)) * (-double_factorial(2 * k - 1))


def miwa_derivative_identity(k, i, spectrum):
    r"""
    Check `\mathrm{tr}\,\Lambda^{2k+1}\partial_\Lambda t_i(\Lambda) =
    -\frac{(2i+1)!!}{(2i-2k-1)!!}t_{i-k}(\Lambda)` on a diagonal spectrum by
    differentiating in each eigenvalue.  Returns ``(lhs, rhs)``.

    >>> miwa_derivative_identity(-1, 0, [1, 2])
    (Fraction(9, 8), Fraction(9, 8))
    """
    if k < -1 or i < max(k, 0):
        raise ValueError("need k >= -1 and i >= max(k, 0)")
    lam = [Fraction(x) for x in spectrum]
    p = -(2 * i + 1)
    c = -double_factorial(2 * i - 1)
    # d/d lambda_a of c * lambda_a^p is c * p * lambda_a^(p-1)
    lhs = sum((x ** (2 * k + 1) * c * p * x ** (p - 1) for x in lam), Fraction(0))
    j = i - k
    t_j = -double_factorial(2 * j - 1) * sum((x ** (-(2 * j + 1)) for x in lam), Fraction(0))
    rhs = -Fraction(double_factorial(2 * i + 1), double_factorial(2 * i - 2 * k - 1)) * t_j
    return lhs, rhs
