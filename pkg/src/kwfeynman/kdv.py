r"""
Differential polynomials, Gel'fand-Dikii polynomials and intersection
numbers.

The jet variable `u^{(k)}` stands for `\partial^k u/\partial t_0^k`.  The
intersection numbers `\langle\tau_{\nu_1}\cdots\tau_{\nu_n}\rangle_g` are
obtained by matching coefficients in the string equation and in the KdV
flows `\partial_{t_i}U = \partial_{t_0}R_{i+1}(U)`, `U = \partial_{t_0}^2F`.

EXAMPLES::

    >>> from kwfeynman.kdv import gelfand_dikii, derive_t0, solve_correlators
    >>> gelfand_dikii(2)
    1/2*u^2 + 1/12*u''
    >>> derive_t0(gelfand_dikii(2))
    u*u' + 1/12*u'''
    >>> table = solve_correlators(4)
    >>> table[(1,)], table[(4,)]
    (Fraction(1, 24), Fraction(1, 1152))
"""
from fractions import Fraction
from functools import lru_cache
from math import factorial

from gmpy2 import mpq as Q

__all__ = [
    "DiffPoly",
    "NotExact",
    "derive_t0",
    "integrate_t0",
    "gelfand_dikii",
    "CorrelatorTable",
    "solve_correlators",
    "free_energy",
    "kdv_residual",
    "string_residual",
    "genus_of",
]


class NotExact(ValueError):
    """Raised when a differential polynomial is not a total `t_0`-derivative."""


def _trim(e):
    e = list(e)
    while e and not e[-1]:
        e.pop()
    return tuple(e)


class DiffPoly:
    r"""
    Polynomial in the jets `u, u', u'', \dots` with rational coefficients.
    A monomial is the exponent vector ``(e_0, e_1, ...)``.

    >>> u = DiffPoly.jet(0)
    >>> u * u + DiffPoly.jet(2)
    u^2 + u''
    >>> (u * u).weight()
    4
    """
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                e = _trim(e)
                s = self.terms.get(e, 0) + c
                if s:
                    self.terms[e] = s
                else:
                    self.terms.pop(e, None)

    @classmethod
    def jet(cls, k):
        e = [0] * (k + 1)
        e[k] = 1
        return cls({tuple(e): 1})

    @classmethod
    def constant(cls, c):
        return cls({(): c})

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            other = DiffPoly.constant(other)
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, DiffPoly):
            other = DiffPoly.constant(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        p = DiffPoly()
        p.terms = t
        return p

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            c = Fraction(other)
            p = DiffPoly()
            p.terms = {e: v * c for e, v in self.terms.items()} if c else {}
            return p
        out = DiffPoly()
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                n = max(len(e1), len(e2))
                e = tuple((e1[k] if k < len(e1) else 0) + (e2[k] if k < len(e2) else 0) for k in range(n))
                out = out + DiffPoly({e: c1 * c2})
        return out

    __rmul__ = __mul__

    def weight(self):
        r"""
        Largest weight of a monomial, with `u^{(k)}` of weight `k+2`;
        ``None`` for zero.
        """
        if not self.terms:
            return None
        return max(_weight(e) for e in self.terms)

    def is_weight_homogeneous(self):
        return len({_weight(e) for e in self.terms}) <= 1

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in sorted(self.terms.items(), key=lambda ec: (len(ec[0]), ec[0])):
            ms = "*".join(
                ("u" + "'" * k) + ("" if a == 1 else "^%d" % a)
                for k, a in enumerate(e) if a
            )
            if not ms:
                out.append(str(c))
            elif c == 1:
                out.append(ms)
            elif c == -1:
                out.append("-" + ms)
            else:
                out.append("%s*%s" % (c, ms))
        return " + ".join(out).replace("+ -", "- ")

    def evaluate_series(self, jets):
        r"""
        Substitute series for the jets; ``jets[k]`` is the series of
        `U^{(k)}`.
        """
        total = Series()
        for e, c in self.terms.items():
            term = Series.constant(c)
            for k, a in enumerate(e):
                for _ in range(a):
                    term = term * jets[k]
            total = total + term
        return total


def _weight(e):
    return sum((k + 2) * a for k, a in enumerate(e))


def derive_t0(p):
    r"""
    Total derivative in `t_0`: `u^{(k)} \mapsto u^{(k+1)}` with Leibniz.

    >>> derive_t0(DiffPoly.jet(0) * DiffPoly.jet(0))
    2*u*u'
    """
    out = {}
    for e, c in p.terms.items():
        for k, a in enumerate(e):
            if not a:
                continue
            ne = list(e) + [0]
            ne[k] -= 1
            ne[k + 1] += 1
            ne = _trim(ne)
            out[ne] = out.get(ne, 0) + c * a
    return DiffPoly(out)


def _monomials_of_weight(w, min_part=2):
    # exponent vectors of jets with total weight w
    def parts(rest, k):
        if rest == 0:
            yield ()
            return
        if k + 2 > rest:
            return
        for a in range(rest // (k + 2), -1, -1):
            for tail in parts(rest - a * (k + 2), k + 1):
                yield (a,) + tail

    return [_trim(e) for e in parts(w, 0)]


def integrate_t0(p):
    r"""
    Return `q` with zero constant term and ``derive_t0(q) == p``.

    >>> u, u1, u3 = DiffPoly.jet(0), DiffPoly.jet(1), DiffPoly.jet(3)
    >>> integrate_t0(3 * u * u1 + u3 * Fraction(1, 4))
    3/2*u^2 + 1/4*u''
    >>> integrate_t0(u)
    Traceback (most recent call last):
    ...
    kwfeynman.kdv.NotExact: u is not a total t0-derivative
    """
    by_weight = {}
    for e, c in p.terms.items():
        by_weight.setdefault(_weight(e), {})[e] = c
    result = DiffPoly()
    for w, part in sorted(by_weight.items()):
        if w < 3:
            raise NotExact("%s is not a total t0-derivative" % (p,))
        basis = [e for e in _monomials_of_weight(w - 1) if e]
        images = [derive_t0(DiffPoly({e: 1})) for e in basis]
        rows = {}
        for j, img in enumerate(images):
            for e, c in img.terms.items():
                rows.setdefault(e, {})[j] = c
        eqs = []
        for e in set(rows) | set(part):
            eqs.append((rows.get(e, {}), part.get(e, Fraction(0))))
        sol = solve_affine(eqs, range(len(basis)))
        if sol is None:
            raise NotExact("%s is not a total t0-derivative" % (p,))
        result = result + DiffPoly({basis[j]: v for j, v in sol.items()})
    return result


def solve_affine(equations, unknowns):
    r"""
    Solve the sparse system `\sum_j a_{rj} x_j = b_r` exactly.

    ``equations`` is a list of ``(row, rhs)`` with ``row`` a dict.  Returns
    a dict with the values of the determined unknowns (free unknowns set
    to zero and omitted when undetermined), or ``None`` if inconsistent.

    >>> solve_affine([({0: 1, 1: 1}, 3), ({0: 1, 1: -1}, 1)], [0, 1])
    {0: Fraction(2, 1), 1: Fraction(1, 1)}
    """
    pivots = {}
    order = []
    for row, rhs in equations:
        row = {j: Q(c) for j, c in row.items() if c}
        rhs = Q(rhs)
        # pivot rows are kept fully reduced, so one pass clears every pivot column
        for j in [j for j in row if j in pivots]:
            prow, prhs = pivots[j]
            f = row[j]
            for k, c in prow.items():
                v = row.get(k, 0) - f * c
                if v:
                    row[k] = v
                else:
                    row.pop(k, None)
            rhs -= f * prhs
        if not row:
            if rhs:
                return None
            continue
        p = min(row)
        f = row[p]
        row = {k: c / f for k, c in row.items()}
        rhs /= f
        # keep the pivot rows fully reduced against the new pivot
        for q in order:
            qrow, qrhs = pivots[q]
            if p in qrow:
                g = qrow[p]
                for k, c in row.items():
                    v = qrow.get(k, 0) - g * c
                    if v:
                        qrow[k] = v
                    else:
                        qrow.pop(k, None)
                pivots[q] = (qrow, qrhs - g * rhs)
        pivots[p] = (row, rhs)
        order.append(p)
    out = {}
    for p in order:
        row, rhs = pivots[p]
        if len(row) == 1:
            out[p] = Fraction(int(rhs.numerator), int(rhs.denominator))
    return dict(sorted(out.items()))


@lru_cache(maxsize=None)
def gelfand_dikii(n):
    r"""
    The Gel'fand-Dikii polynomial `R_n` from
    `\partial_0 R_{n+1} = \frac{1}{2n+1}(u' + 2u\partial_0 + \tfrac14\partial_0^3)R_n`,
    `R_0 = 1`, `R_n(0) = 0`.

    >>> gelfand_dikii(1)
    u
    >>> gelfand_dikii(3)
    1/6*u^3 + 1/24*u'^2 + 1/12*u*u'' + 1/240*u''''
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return DiffPoly.constant(1)
    r = gelfand_dikii(n - 1)
    u, u1 = DiffPoly.jet(0), DiffPoly.jet(1)
    d1 = derive_t0(r)
    d3 = derive_t0(derive_t0(d1))
    rhs = (u1 * r + 2 * u * d1 + d3 * Fraction(1, 4)) * Fraction(1, 2 * n - 1)
    return integrate_t0(rhs)


# -- truncated power series in t_0, t_1, ... ------------------------------

class Series:
    r"""
    Polynomial in `t_0, t_1, \dots`; a monomial is a sorted tuple of
    ``(index, exponent)`` pairs.  Coefficients are rationals or
    :class:`LinForm` values.
    """
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms or {})

    @classmethod
    def constant(cls, c):
        return cls({(): c} if c else {})

    def __add__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            s = c if s is None else s + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Series(t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Series({m: v * c for m, v in self.terms.items()} if c else {})

    def __mul__(self, other):
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                if not c:
                    continue
                m = _mono_mul(m1, m2)
                s = t.get(m)
                s = c if s is None else s + c
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        return Series(t)

    def derivative(self, i):
        t = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(i, 0)
            if not e:
                continue
            if e == 1:
                del d[i]
            else:
                d[i] = e - 1
            nm = tuple(sorted(d.items()))
            s = t.get(nm)
            s = c * e if s is None else s + c * e
            if s:
                t[nm] = s
            else:
                t.pop(nm, None)
        return Series(t)

    def times_variable(self, i):
        return Series({_mono_mul(m, ((i, 1),)): c for m, c in self.terms.items()})

    def truncate(self, max_weight):
        return Series({m: c for m, c in self.terms.items() if _sweight(m) <= max_weight})


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for i, e in m2:
        d[i] = d.get(i, 0) + e
    return tuple(sorted(d.items()))


def _sweight(m):
    return sum(i * e for i, e in m)


def _slen(m):
    return sum(e for _, e in m)


class LinForm:
    r"""
    Affine form `c_0 + \sum_j c_j x_j` in unknown correlators.  Products
    of two non-constant forms are dropped: they only enter equations of
    higher genus than the one being solved.
    """
    __slots__ = ("c",)

    def __init__(self, c):
        self.c = c

    def __bool__(self):
        return any(self.c.values())

    def __add__(self, other):
        if not isinstance(other, LinForm):
            other = LinForm({None: Q(other)})
        d = dict(self.c)
        for k, v in other.c.items():
            s = d.get(k, 0) + v
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return LinForm(d)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, LinForm):
            other = Q(other)
            return LinForm({k: v * other for k, v in self.c.items()} if other else {})
        a0 = self.c.get(None, 0)
        b0 = other.c.get(None, 0)
        d = {}
        if a0 and b0:
            d[None] = a0 * b0
        if b0:
            for k, v in self.c.items():
                if k is not None:
                    d[k] = d.get(k, 0) + v * b0
        if a0:
            for k, v in other.c.items():
                if k is not None:
                    d[k] = d.get(k, 0) + v * a0
        return LinForm({k: v for k, v in d.items() if v})

    __rmul__ = __mul__


# -- correlators -----------------------------------------------------------

def genus_of(nu):
    r"""
    Genus forced by the dimension constraint `\sum\nu_i = 3g-3+n`, or
    ``None`` if there is none.

    >>> genus_of((0, 0, 0)), genus_of((1,)), genus_of((0, 1))
    (0, 1, None)
    """
    s = sum(nu) - len(nu) + 3
    if s < 0 or s % 3:
        return None
    g = s // 3
    if 2 - 2 * g - len(nu) >= 0:
        return None
    return g


class CorrelatorTable(dict):
    r"""
    Map from sorted index tuples `(\nu_1 \le \dots \le \nu_n)` to
    `\langle\tau_{\nu_1}\cdots\tau_{\nu_n}\rangle_g`.  Missing entries
    allowed by the dimension constraint are treated as unknown.
    """

    def __init__(self, data=(), max_weight=0):
        dict.__init__(self, data)
        self.max_weight = max_weight

    def __getitem__(self, nu):
        nu = tuple(sorted(nu))
        if genus_of(nu) is None:
            return Fraction(0)
        return dict.__getitem__(self, nu)

    def get_value(self, nu):
        return self[nu]


def _multisets(total, n, start=0):
    # non-decreasing tuples of length n with the given sum
    if n == 0:
        if total == 0:
            yield ()
        return
    for a in range(start, total // n + 1):
        for rest in _multisets(total - a, n - 1, a):
            yield (a,) + rest


def correlator_indices(g, max_weight):
    r"""All index tuples of genus `g` and weight `\sum\nu_i \le` ``max_weight``."""
    out = []
    for n in range(1, max_weight + 4):
        w = 3 * g - 3 + n
        if w > max_weight or w < 0:
            continue
        if 2 - 2 * g - n >= 0:
            continue
        out.extend(_multisets(w, n))
    return out


def _mono_of(nu):
    d = {}
    for a in nu:
        d[a] = d.get(a, 0) + 1
    return tuple(sorted(d.items()))


def _symmetry(nu):
    r = 1
    for _, e in _mono_of(nu):
        r *= factorial(e)
    return r


def free_energy(table, max_weight=None, genera=None):
    r"""
    The truncated series `F = \sum \langle\tau_\nu\rangle \prod t^{m}/m!`.
    """
    if max_weight is None:
        max_weight = table.max_weight
    t = {}
    for nu, v in dict.items(table):
        if sum(nu) <= max_weight and (genera is None or genus_of(nu) in genera):
            if v:
                t[_mono_of(nu)] = Q(v) / _symmetry(nu)
    return Series(t)


def _monomial_genus_string(m):
    # genus of the F-monomials feeding a string-equation coefficient
    s = _sweight(m) - _slen(m) + 2
    return s // 3 if s % 3 == 0 and s >= 0 else None


def _monomial_genus_kdv(m, i):
    s = _sweight(m) - _slen(m) + i
    return s // 3 if s % 3 == 0 and s >= 0 else None


def string_residual(F, max_weight):
    r"""
    `\partial_0F - \sum_i t_{i+1}\partial_iF - t_0^2/2` on monomials of
    weight at most ``max_weight``.
    """
    res = F.derivative(0)
    idx = sorted({i for m in F.terms for i, _ in m})
    for i in idx:
        res = res - F.derivative(i).times_variable(i + 1)
    res = res - Series({((0, 2),): Q(1, 2)})
    return res.truncate(max_weight)


def _kdv_raw(F, i, max_weight, genus=None):
    # LHS - RHS of the i-th flow on monomials of weight <= max_weight - i
    U = F.derivative(0).derivative(0)
    lhs = U.derivative(i)
    r = gelfand_dikii(i + 1)
    order = max((len(e) for e in r.terms), default=1)
    jets = [U.truncate(max_weight - i)]
    for _ in range(order + 1):
        jets.append(jets[-1].derivative(0))
    rhs = _evaluate_truncated(r, jets, max_weight - i, genus).derivative(0)
    return (lhs - rhs).truncate(max_weight - i)


def _evaluate_truncated(p, jets, w, genus=None):
    # products of jets are shared between monomials through a cache keyed
    # by the exponent vector.  With ``genus`` set, a partial product of f
    # factors keeps only monomials with (weight - length) <= 3*genus - f:
    # each further factor lowers that quantity by at most one, so larger
    # values can never reach the genus being solved.
    cache = {(): Series.constant(Q(1))}

    def power_product(e):
        e = _trim(e)
        got = cache.get(e)
        if got is None:
            k = max(j for j, a in enumerate(e) if a)
            smaller = list(e)
            smaller[k] -= 1
            got = (power_product(tuple(smaller)) * jets[k]).truncate(w)
            if genus is not None:
                cap = 3 * genus - sum(e)
                got = Series({m: c for m, c in got.terms.items() if _sweight(m) - _slen(m) <= cap})
            cache[e] = got
        return got

    total = Series()
    for e, c in sorted(p.terms.items()):
        total = total + power_product(e).scale(c)
    return total


def kdv_residual(table, i, max_weight=None):
    r"""
    `\partial_{t_i}U - \partial_{t_0}R_{i+1}(U)` restricted to the monomials
    whose coefficient only involves correlators of weight at most
    ``max_weight``.  Returns a dict of the nonzero coefficients.

    >>> kdv_residual(solve_correlators(6), 1)
    {}
    """
    if max_weight is None:
        max_weight = table.max_weight
    F = free_energy(table, max_weight)
    res = _kdv_raw(F, i, max_weight)
    return {m: c for m, c in res.terms.items() if c}


def solve_correlators(max_weight, flows=None):
    r"""
    Intersection numbers of weight `\sum\nu_i \le` ``max_weight``, found by
    exact coefficient matching in the string equation and the KdV flows,
    one genus at a time.

    Correlators without `\tau_0` are only pinned down by flows acting at
    higher weight, so the internal system runs two weights further than
    requested.  ``flows`` bounds the KdV flows used (default: all that
    can contribute).

    >>> t = solve_correlators(3)
    >>> t[(0, 0, 0)], t[(0, 0, 0, 1)], t[(0, 2)]
    (Fraction(1, 1), Fraction(1, 1), Fraction(1, 24))
    """
    W = max_weight + 2
    if flows is None:
        flows = W
    table = CorrelatorTable(max_weight=max_weight)
    known = Series()
    g = 0
    while 3 * g - 2 <= W:
        idx = correlator_indices(g, W)
        if not idx:
            g += 1
            continue
        pos = {nu: j for j, nu in enumerate(idx)}
        unknown = Series({_mono_of(nu): LinForm({j: Q(1, _symmetry(nu))}) for nu, j in pos.items()})
        lifted = Series({m: LinForm({None: c}) for m, c in known.terms.items()})
        F = lifted + unknown
        eqs = []
        for m, c in string_residual(F, W).terms.items():
            if _monomial_genus_string(m) == g:
                eqs.append(_as_equation(c))
        if g > 0:
            for i in range(0, flows + 1):
                res = _kdv_raw(F, i, W, g)
                for m, c in res.terms.items():
                    if _monomial_genus_kdv(m, i) == g:
                        eqs.append(_as_equation(c))
        sol = solve_affine(eqs, range(len(idx)))
        if sol is None:
            raise ArithmeticError("inconsistent correlator system in genus %d" % g)
        values = {}
        for nu, j in pos.items():
            if j in sol:
                values[nu] = Q(sol[j])
            elif sum(nu) <= max_weight:
                raise ArithmeticError("correlator %r undetermined" % (nu,))
        for nu, v in values.items():
            if sum(nu) <= max_weight:
                dict.__setitem__(table, nu, Fraction(int(v.numerator), int(v.denominator)))
        known = known + Series({_mono_of(nu): v / _symmetry(nu) for nu, v in values.items() if v})
        g += 1
    return table


def _as_equation(c):
    if not isinstance(c, LinForm):
        return ({}, -Q(c))
    row = {k: v for k, v in c.c.items() if k is not None}
    return (row, -c.c.get(None, Q(0)))
