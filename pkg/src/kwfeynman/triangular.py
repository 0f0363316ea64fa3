r"""
Formal triangular differential operators in the variables `s_0, s_1, \dots`.

A term `c\, s^m \partial^n` is triangular when
`\|n\|_+ \le \|m\|_-`, where `\|m\|_- = \sum_{i\ge1}(2i-1)m_i` and
`\|n\|_+ = \sum_{i\ge0}(2i+1)n_i`.  Operators already evaluated at the base
point `s^\circ = (0, 1, 0, 0, \dots)` are exempt from the check.

EXAMPLES::

    >>> from kwfeynman.triangular import D0, D1_at_base, compose_then_evaluate
    >>> compose_then_evaluate(D1_at_base(), D0())
    13/24*ds0 + 1/2*ds0*ds1
"""
from fractions import Fraction

from .virasoro import FormalOperator

__all__ = [
    "TriangularOp",
    "NotTriangular",
    "norm_minus",
    "norm_plus",
    "D0",
    "D1_at_base",
    "compose_then_evaluate",
    "BASE_POINT",
]

BASE_POINT = {1: Fraction(1)}


class NotTriangular(ValueError):
    pass


def norm_minus(m):
    r"""`\|m\|_- = \sum_{i\ge1}(2i-1)m_i` for a monomial ``((i, e), ...)``."""
    return sum((2 * i - 1) * e for i, e in m if i >= 1)


def norm_plus(n):
    r"""`\|n\|_+ = \sum_{i\ge0}(2i+1)n_i`."""
    return sum((2 * i + 1) * e for i, e in n)


class TriangularOp(FormalOperator):
    r"""
    A :class:`~kwfeynman.virasoro.FormalOperator` in the `s` variables.

    >>> TriangularOp.variable(2) * TriangularOp.derivative(1)
    s2*ds1
    >>> TriangularOp({((), ((1, 1),)): 1})
    Traceback (most recent call last):
    ...
    kwfeynman.triangular.NotTriangular: term ds1 is not triangular
    """
    __slots__ = ("at_base",)

    def __init__(self, terms=None, at_base=False, check=True):
        FormalOperator.__init__(self, terms)
        self.at_base = at_base
        if check and not at_base:
            self.check()

    @classmethod
    def _wrap(cls, op, at_base):
        return cls(op.terms, at_base=at_base)

    @classmethod
    def variable(cls, i):
        return cls({(((i, 1),), ()): 1}, check=False)

    @classmethod
    def derivative(cls, i):
        return cls({((), ((i, 1),)): 1}, check=False)

    def check(self):
        for (m, n) in self.terms:
            if norm_plus(n) > norm_minus(m):
                raise NotTriangular("term %s is not triangular" % _term_str(m, n))

    def __add__(self, other):
        r = FormalOperator.__add__(self, other)
        at_base = self.at_base or getattr(other, "at_base", False)
        return TriangularOp(r.terms, at_base=at_base, check=False)

    def __mul__(self, other):
        r = FormalOperator.__mul__(self, other)
        if isinstance(other, TriangularOp):
            at_base = self.at_base or other.at_base
            return TriangularOp(r.terms, at_base=at_base, check=not at_base)
        return TriangularOp(r.terms, at_base=self.at_base, check=False)

    def evaluate_at(self, point):
        r"""
        Substitute values for the multiplication variables (missing
        variables are set to zero).
        """
        out = {}
        for (m, n), c in self.terms.items():
            v = c
            for i, e in m:
                v *= Fraction(point.get(i, 0)) ** e
            if v:
                out[((), n)] = out.get(((), n), 0) + v
        return TriangularOp(out, at_base=True)

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for (m, n), c in sorted(self.terms.items(), key=lambda kc: (sum(e for _, e in kc[0][0]) + sum(e for _, e in kc[0][1]), kc[0])):
            ms = _term_str(m, n)
            if not ms:
                out.append(str(c))
            elif c == 1:
                out.append(ms)
            elif c == -1:
                out.append("-" + ms)
            else:
                out.append("%s*%s" % (c, ms))
        return " + ".join(out).replace("+ -", "- ")


def _term_str(m, n):
    return "*".join(
        ["s%d" % i if e == 1 else "s%d^%d" % (i, e) for i, e in m]
        + ["ds%d" % i if e == 1 else "ds%d^%d" % (i, e) for i, e in n]
    )


def D0(max_index=6):
    r"""
    `D_0 = s_0^2/2 + \sum_{m\ge0}(2m+1)s_{m+1}\partial_{s_m}`, truncated to
    `m \le` ``max_index``.

    >>> D0(1)
    1/2*s0^2 + s1*ds0 + 3*s2*ds1
    """
    terms = {(((0, 2),), ()): Fraction(1, 2)}
    for m in range(max_index + 1):
        terms[(((m + 1, 1),), ((m, 1),))] = 2 * m + 1
    return TriangularOp(terms)


def D1_at_base():
    r"""
    `D_1(s^\circ, \partial_s) = \frac12\partial_{s_1} + \frac1{24}`.

    >>> D1_at_base()
    1/24 + 1/2*ds1
    """
    return TriangularOp({((), ((1, 1),)): Fraction(1, 2), ((), ()): Fraction(1, 24)}, at_base=True)


def compose_then_evaluate(A, B, base=None):
    r"""
    `A \circ B` with every `s` coefficient evaluated at ``base``
    (default `s^\circ`).

    >>> compose_then_evaluate(TriangularOp.identity(), D0())
    ds0
    """
    if base is None:
        base = BASE_POINT
    if not isinstance(A, TriangularOp):
        A = TriangularOp(A.terms, at_base=True)
    if not isinstance(B, TriangularOp):
        B = TriangularOp(B.terms, at_base=True)
    return (A * B).evaluate_at(base)
