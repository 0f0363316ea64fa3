r"""
Expansion at infinity of the propagator products around marked holes.

Edges bounding a `z`-marked hole contribute `2/(z+a)` when the other side
has colour `a` and `1/z` when both sides are the marked hole.  The
products are expanded in `1/z` exactly; colours stay symbolic and are
summed into traces only at the end.

EXAMPLES::

    >>> from kwfeynman.laurent import HoleRational, coeff_at_infinity, colors_to_traces
    >>> f = HoleRational(1, 0, {"a": 1, "b": 1})
    >>> p = coeff_at_infinity(f, 3)
    >>> p
    -a - b
    >>> colors_to_traces(p)
    -2*T0*T1
"""
from math import comb

from .algebra import ONE, ZERO, TracePoly, as_gaussian

__all__ = [
    "ColorPoly",
    "HoleRational",
    "coeff_at_infinity",
    "coeff_two_vars",
    "colors_to_traces",
]


class ColorPoly:
    r"""
    Polynomial in abstract colour symbols.  ``colors`` lists every colour
    that is summed over, including those absent from all monomials.

    >>> ColorPoly.symbol("a") * ColorPoly.symbol("b") + 1
    a*b + 1
    """
    __slots__ = ("terms", "colors")

    def __init__(self, terms=None, colors=()):
        self.terms = {}
        self.colors = frozenset(colors)
        if terms:
            for m, c in terms.items():
                c = as_gaussian(c)
                if c:
                    m = tuple(sorted((s, e) for s, e in m if e))
                    self.terms[m] = self.terms.get(m, ZERO) + c
            self.terms = {m: c for m, c in self.terms.items() if c}
        for m in self.terms:
            self.colors |= {s for s, _ in m}

    @classmethod
    def symbol(cls, s, e=1):
        return cls({((s, e),): ONE})

    @classmethod
    def constant(cls, c, colors=()):
        return cls({(): c}, colors)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ColorPoly):
            other = ColorPoly.constant(other)
        return self.terms == other.terms

    def __add__(self, other):
        if not isinstance(other, ColorPoly):
            other = ColorPoly.constant(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m, ZERO) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        r = ColorPoly()
        r.terms = t
        r.colors = self.colors | other.colors
        return r

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ColorPoly):
            c = as_gaussian(other)
            r = ColorPoly()
            r.terms = {m: v * c for m, v in self.terms.items()} if c else {}
            r.colors = self.colors
            return r
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                d = dict(m1)
                for s, e in m2:
                    d[s] = d.get(s, 0) + e
                m = tuple(sorted(d.items()))
                v = t.get(m, ZERO) + c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        r = ColorPoly()
        r.terms = t
        r.colors = self.colors | other.colors
        return r

    __rmul__ = __mul__

    def __pow__(self, k):
        r = ColorPoly.constant(1)
        for _ in range(int(k)):
            r = r * self
        return r

    def with_colors(self, colors):
        r = ColorPoly()
        r.terms = dict(self.terms)
        r.colors = self.colors | frozenset(colors)
        return r

    def evaluate(self, values):
        total = ZERO
        for m, c in self.terms.items():
            v = ONE
            for s, e in m:
                v = v * as_gaussian(values[s]) ** e
            total = total + c * v
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in sorted(self.terms.items(), key=lambda mc: (-sum(e for _, e in mc[0]), mc[0])):
            ms = "*".join(s if e == 1 else "%s^%d" % (s, e) for s, e in m)
            if not ms:
                out.append(c.to_str())
            elif c == 1:
                out.append(ms)
            elif c == -1:
                out.append("-" + ms)
            else:
                out.append(c.to_str() + "*" + ms)
        return " + ".join(out).replace("+ -", "- ")


class HoleRational:
    r"""
    The rational function
    `c \cdot z^{-m_0} \prod_j (z + a_j)^{-m_j}` in the marked variable `z`.

    >>> HoleRational(2, 1, {"a": 2}).edge_count()
    3
    """
    __slots__ = ("numerator", "zero_pole_order", "simple_factors")

    def __init__(self, numerator=1, zero_pole_order=0, simple_factors=None):
        self.numerator = as_gaussian(numerator)
        self.zero_pole_order = int(zero_pole_order)
        self.simple_factors = {a: int(m) for a, m in (simple_factors or {}).items() if m}
        if self.zero_pole_order < 0 or any(m < 0 for m in self.simple_factors.values()):
            raise ValueError("pole orders must be non-negative")

    def edge_count(self):
        return self.zero_pole_order + sum(self.simple_factors.values())

    def evaluate(self, z, values):
        z = as_gaussian(z)
        v = self.numerator * z.inverse() ** self.zero_pole_order
        for a, m in self.simple_factors.items():
            v = v * (z + as_gaussian(values[a])).inverse() ** m
        return v

    def __repr__(self):
        parts = [self.numerator.to_str()]
        if self.zero_pole_order:
            parts.append("z^-%d" % self.zero_pole_order)
        for a, m in sorted(self.simple_factors.items()):
            parts.append("(z+%s)^-%d" % (a, m))
        return "*".join(parts)


def _expand_factors(factors, order):
    # coefficient of x^{-order} in prod (x + a)^{-m}, as a ColorPoly
    total_m = sum(factors.values())
    excess = order - total_m
    if excess < 0:
        return ColorPoly()
    items = sorted(factors.items())
    if not items:
        return ColorPoly.constant(1) if excess == 0 else ColorPoly()
    terms = {}
    for js in _compositions(excess, len(items)):
        c = 1
        mono = []
        for (a, m), j in zip(items, js):
            c *= comb(m + j - 1, j) * (-1) ** j
            if j:
                mono.append((a, j))
        terms[tuple(mono)] = terms.get(tuple(mono), 0) + c
    return ColorPoly(terms, [a for a, _ in items])


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for j in range(total + 1):
        for rest in _compositions(total - j, parts - 1):
            yield (j,) + rest


def coeff_at_infinity(f, k):
    r"""
    Coefficient of `z^{-k}` in the expansion of ``f`` at `z = \infty`.

    >>> f = HoleRational(1, 0, {"a": 1, "b": 1})
    >>> coeff_at_infinity(f, 7) == -sum((ColorPoly.symbol("a", p) * ColorPoly.symbol("b", 5 - p) for p in range(6)), ColorPoly())
    True
    >>> coeff_at_infinity(HoleRational(1, 3), 7)
    0
    """
    poly = _expand_factors(f.simple_factors, k - f.zero_pole_order)
    return (poly * f.numerator).with_colors(f.simple_factors)


def coeff_two_vars(numerator, z_factors, w_factors, k_z, k_w, z_pow=0, w_pow=0, zw_pow=0):
    r"""
    Coefficient of `w^{-k_w} z^{-k_z}` of
    `c\, z^{-z_{pow}} w^{-w_{pow}} (z+w)^{-zw_{pow}} \prod (z+a)^{-m_a} \prod (w+b)^{-n_b}`,
    expanded in the region `|z| > |w|` (the `z` coefficient is taken first).

    >>> coeff_two_vars(1, {}, {}, 1, 1, w_pow=1, zw_pow=1)
    1
    >>> coeff_two_vars(1, {}, {}, 3, 1, zw_pow=2)
    0
    """
    numerator = as_gaussian(numerator)
    colors = set(z_factors) | set(w_factors)
    total = ColorPoly()
    z_lead = z_pow + sum(z_factors.values())
    w_lead = w_pow + sum(w_factors.values())
    if zw_pow == 0:
        zpart = _expand_factors(z_factors, k_z - z_pow)
        wpart = _expand_factors(w_factors, k_w - w_pow)
        return (zpart * wpart * numerator).with_colors(colors)
    # (z+w)^{-c} = sum_j C(c+j-1, j) (-w)^j z^{-c-j}
    j = 0
    while zw_pow + j + z_lead <= k_z:
        zpart = _expand_factors(z_factors, k_z - z_pow - zw_pow - j)
        if zpart and k_w + j >= w_lead:
            wpart = _expand_factors(w_factors, k_w + j - w_pow)
            c = comb(zw_pow + j - 1, j) * (-1) ** j
            total = total + zpart * wpart * c
        j += 1
    return (total * numerator).with_colors(colors)


def colors_to_traces(p, colors=None):
    r"""
    Sum every colour freely over the spectrum: `a^p b^q \mapsto T_p T_q`.

    >>> a, b = ColorPoly.symbol("a"), ColorPoly.symbol("b")
    >>> colors_to_traces(ColorPoly.constant(1, ["a", "b"]))
    T0^2
    >>> colors_to_traces(a**4)
    T4
    """
    colors = p.colors if colors is None else frozenset(colors) | p.colors
    out = TracePoly()
    for m, c in p.terms.items():
        d = {s: e for s, e in m}
        t = TracePoly.constant(c)
        for s in colors:
            t = t * TracePoly.T(d.get(s, 0))
        out = out + t
    return out
