r"""
Exact scalars and trace polynomials.

Everything in the package is computed over the Gaussian rationals
`\QQ(i)`; there is no floating point anywhere.

EXAMPLES::

    >>> from kwfeynman.algebra import GaussianRational, I, TracePoly, trace_eval
    >>> (I / 2) ** 2
    -1/4
    >>> p = TracePoly.T(1) * TracePoly.T(-1)
    >>> trace_eval(p, [1, 2])
    9/2
"""
from fractions import Fraction
from numbers import Rational

__all__ = [
    "GaussianRational",
    "I",
    "ONE",
    "ZERO",
    "as_gaussian",
    "double_factorial",
    "TracePoly",
    "trace_eval",
]


def double_factorial(n):
    r"""
    Return `n!! = n (n-2) (n-4) \cdots`, with `(-1)!! = 0!! = 1`.

    >>> [double_factorial(k) for k in (-1, 0, 1, 5, 7)]
    [1, 1, 1, 15, 105]
    """
    n = int(n)
    if n < -1:
        raise ValueError("double factorial undefined for n = %d < -1" % n)
    r = 1
    while n > 1:
        r *= n
        n -= 2
    return r


class GaussianRational:
    r"""
    Element `a + b i` of `\QQ(i)` with `a, b` exact rationals.

    >>> z = GaussianRational(1, 2)
    >>> z * z.conjugate()
    5
    >>> GaussianRational(Fraction(1, 3)) + 1
    4/3
    """
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _make(cls, re, im):
        z = object.__new__(cls)
        z.re = re
        z.im = im
        return z

    def __repr__(self):
        return self.to_str()

    def to_str(self):
        r"""
        Canonical text: ``p/q``, ``p/q*i`` or ``(a + b*i)``.

        >>> GaussianRational(0, Fraction(-1, 4)).to_str()
        '-1/4*i'
        >>> GaussianRational(1, -1).to_str()
        '(1 - i)'
        """
        re, im = self.re, self.im
        if not im:
            return str(re)
        ims = "i" if abs(im) == 1 else "%s*i" % abs(im)
        if not re:
            return ims if im > 0 else "-" + ims
        return "(%s %s %s)" % (re, "+" if im > 0 else "-", ims)

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return not self.im and self.re == other
        return NotImplemented

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self):
        return not self.im

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __add__(self, other):
        if type(other) is not GaussianRational:
            if not isinstance(other, Rational):
                return NotImplemented
            return GaussianRational._make(self.re + other, self.im)
        return GaussianRational._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not GaussianRational:
            if not isinstance(other, Rational):
                return NotImplemented
            return GaussianRational._make(self.re - other, self.im)
        return GaussianRational._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is not GaussianRational:
            if not isinstance(other, Rational):
                return NotImplemented
            return GaussianRational._make(self.re * other, self.im * other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            return GaussianRational._make(a * c, a * d)
        if not d:
            return GaussianRational._make(a * c, b * c)
        return GaussianRational._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational._make(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational._make(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if type(other) is not GaussianRational:
            if not isinstance(other, Rational):
                return NotImplemented
            return GaussianRational._make(self.re / other, self.im / other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        r = ONE
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r


def as_gaussian(x):
    if type(x) is GaussianRational:
        return x
    if isinstance(x, Rational):
        return GaussianRational._make(Fraction(x), Fraction(0))
    if isinstance(x, str):
        return _parse_gaussian(x)
    raise TypeError("cannot convert %r to a Gaussian rational" % (x,))


def _parse_gaussian(s):
    s = s.strip().replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s.endswith("i"):
        return GaussianRational(Fraction(s))
    # split "a+b*i" at the last sign that is not a leading one
    cut = max(s.rfind("+", 1), s.rfind("-", 1))
    re, imag = (s[:cut], s[cut:]) if cut > 0 else ("0", s)
    imag = imag[:-1].rstrip("*")
    if imag in ("", "+"):
        imag = "1"
    elif imag == "-":
        imag = "-1"
    return GaussianRational(Fraction(re), Fraction(imag))


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


class TracePoly:
    r"""
    Polynomial in the abstract trace symbols `T_h = \mathrm{tr}\,\Lambda^h`,
    `h \in \ZZ`, with Gaussian rational coefficients.

    A monomial is a sorted tuple of pairs ``(h, e)``; ``T_0`` is a formal
    symbol that evaluates to the matrix size.

    >>> T = TracePoly.T
    >>> p = 2*T(4) - 2*T(3)*T(1) + T(2)**2
    >>> p
    2*T4 - 2*T1*T3 + T2^2
    >>> p.degree()
    4
    """
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for m, c in terms.items():
                c = as_gaussian(c)
                if c:
                    self.terms[m] = c

    @classmethod
    def _raw(cls, terms):
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def constant(cls, c):
        c = as_gaussian(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def T(cls, h, e=1):
        return cls._raw({((int(h), int(e)),): ONE} if e else {(): ONE})

    @classmethod
    def monomial(cls, mono, c=ONE):
        return cls({_norm_mono(mono): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TracePoly):
            try:
                other = TracePoly.constant(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return TracePoly._raw({m: -c for m, c in self.terms.items()})

    def _coerce(self, other):
        if isinstance(other, TracePoly):
            return other
        return TracePoly.constant(other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            s = c if s is None else s + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return TracePoly._raw(t)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TracePoly):
            try:
                c = as_gaussian(other)
            except TypeError:
                return NotImplemented
            if not c:
                return TracePoly()
            return TracePoly._raw({m: v * c for m, v in self.terms.items()})
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = t.get(m)
                s = c1 * c2 if s is None else s + c1 * c2
                if s:
                    t[m] = s
                else:
                    del t[m]
        return TracePoly._raw(t)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = as_gaussian(c)
        return self * c.inverse()

    def __pow__(self, k):
        r = TracePoly.constant(1)
        for _ in range(int(k)):
            r = r * self
        return r

    def degree(self):
        r"""
        Weighted degree with `\deg T_h = h`; ``None`` for the zero polynomial.
        """
        if not self.terms:
            return None
        return max(mono_degree(m) for m in self.terms)

    def is_constant(self):
        return all(m == () for m in self.terms)

    def constant_coefficient(self):
        return self.terms.get((), ZERO)

    def homogeneous_parts(self):
        parts = {}
        for m, c in self.terms.items():
            parts.setdefault(mono_degree(m), {})[m] = c
        return {d: TracePoly._raw(t) for d, t in parts.items()}

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0])))

    def __repr__(self):
        return self.to_str()

    def to_str(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0]), reverse=True):
            ms = "*".join("T%d" % h if e == 1 else "T%d^%d" % (h, e) for h, e in m)
            if not ms:
                s = c.to_str()
            elif c == 1:
                s = ms
            elif c == -1:
                s = "-" + ms
            else:
                s = c.to_str() + "*" + ms
            out.append(s)
        s = " + ".join(out)
        return s.replace("+ -", "- ")


def _norm_mono(mono):
    d = {}
    for h, e in mono:
        d[h] = d.get(h, 0) + e
    return tuple(sorted((h, e) for h, e in d.items() if e))


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for h, e in m2:
        d[h] = d.get(h, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m):
    return sum(h * e for h, e in m)


def _mono_key(m):
    # total degree, then fewer factors, then larger exponents first
    hs = sorted((h for h, e in m for _ in range(e)), reverse=True)
    return (mono_degree(m), -len(hs), hs)


def trace_eval(p, spectrum):
    r"""
    Substitute `T_h \mapsto \sum_i \lambda_i^h` (so `T_0 \mapsto N`).

    >>> T = TracePoly.T
    >>> trace_eval(T(2), [1, 2]), trace_eval(T(0), [1, 2, 3])
    (5, 3)
    """
    spectrum = [Fraction(x) for x in spectrum]
    cache = {}

    def tr(h):
        v = cache.get(h)
        if v is None:
            if h < 0 and any(x == 0 for x in spectrum):
                raise ZeroDivisionError("negative power of a zero eigenvalue")
            v = cache[h] = sum((x ** h for x in spectrum), Fraction(0))
        return v

    total = ZERO
    for m, c in p.terms.items():
        v = Fraction(1)
        for h, e in m:
            v *= tr(h) ** e
        total = total + c * v
    return total
