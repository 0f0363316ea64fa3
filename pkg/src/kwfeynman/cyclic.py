r"""
Polynomials in `\theta_1, \dots, \theta_n` with a cyclic group action.

A :class:`CyclicPoly` decorates an `n`-valent special vertex.  Slot `k`
is the hole between leg `k` and leg `k+1`; a ciliated polynomial has its
first slot fixed by the cilium, an unciliated one must be invariant under
the cyclic shift.  Exponents may be negative (Laurent decorations), which
only happens for the `\Lambda^{-1}` insertion.

EXAMPLES::

    >>> from kwfeynman.cyclic import CyclicPoly, cyclic_symmetrize, make_u
    >>> t1 = CyclicPoly.theta(1, 2)
    >>> cyclic_symmetrize(t1**2 * CyclicPoly.theta(2, 2))
    th1^2*th2 + th1*th2^2
    >>> make_u(CyclicPoly.constant(1, 2))
    ★[th1 + th2]
"""
import json
from fractions import Fraction

from .algebra import ONE, ZERO, as_gaussian

__all__ = [
    "CyclicPoly",
    "NotDecomposable",
    "cyclic_symmetrize",
    "make_u",
    "cyclic_decompose",
    "split_loop_forward",
    "split_tensor",
    "split_loop_backward",
    "star_product",
    "orbit_representative",
]


class NotDecomposable(ValueError):
    r"""
    Raised when a cyclically invariant polynomial is not of the form
    `\sum_\sigma u_\psi \circ \sigma`.  ``remainder`` is the coefficient
    of the obstruction `\theta_1^d`.
    """

    def __init__(self, poly, remainder=None):
        self.poly = poly
        self.remainder = remainder
        ValueError.__init__(self, "no cyclic decomposition of %s" % (poly,))


class CyclicPoly:
    __slots__ = ("arity", "terms", "ciliated")

    def __init__(self, arity, terms=None, ciliated=True):
        self.arity = int(arity)
        self.ciliated = bool(ciliated)
        self.terms = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != self.arity:
                    raise ValueError("exponent %r does not have length %d" % (e, self.arity))
                c = as_gaussian(c)
                if c:
                    self.terms[e] = self.terms.get(e, ZERO) + c
                    if not self.terms[e]:
                        del self.terms[e]
        if not self.ciliated and not self.is_invariant():
            raise ValueError("unciliated decoration must be cyclically invariant")

    @classmethod
    def _raw(cls, arity, terms, ciliated=True):
        p = object.__new__(cls)
        p.arity = arity
        p.terms = terms
        p.ciliated = ciliated
        return p

    @classmethod
    def constant(cls, c, arity):
        c = as_gaussian(c)
        return cls._raw(arity, {(0,) * arity: c} if c else {})

    @classmethod
    def theta(cls, k, arity):
        if not 1 <= k <= arity:
            raise ValueError("theta_%d undefined for arity %d" % (k, arity))
        e = [0] * arity
        e[k - 1] = 1
        return cls._raw(arity, {tuple(e): ONE})

    @classmethod
    def monomial(cls, exps, c=ONE):
        exps = tuple(exps)
        return cls(len(exps), {exps: c})

    # -- arithmetic -----------------------------------------------------

    def _check(self, other):
        if other.arity != self.arity:
            raise ValueError("arity mismatch: %d vs %d" % (self.arity, other.arity))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, CyclicPoly):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __neg__(self):
        return CyclicPoly._raw(self.arity, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, CyclicPoly):
            other = CyclicPoly.constant(other, self.arity)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e)
            s = c if s is None else s + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return CyclicPoly._raw(self.arity, t)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CyclicPoly):
            c = as_gaussian(other)
            if not c:
                return CyclicPoly._raw(self.arity, {})
            return CyclicPoly._raw(self.arity, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e)
                s = c1 * c2 if s is None else s + c1 * c2
                if s:
                    t[e] = s
                else:
                    del t[e]
        return CyclicPoly._raw(self.arity, t)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * as_gaussian(c).inverse()

    def __pow__(self, k):
        r = CyclicPoly.constant(1, self.arity)
        for _ in range(int(k)):
            r = r * self
        return r

    # -- structure ------------------------------------------------------

    def degree(self):
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_parts(self):
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: CyclicPoly._raw(self.arity, t) for d, t in parts.items()}

    def rotate(self, s=1):
        r"""
        Return `R^s \varphi` where
        `(R\varphi)(\theta_1, \dots, \theta_n) = \varphi(\theta_2, \dots, \theta_n, \theta_1)`.

        >>> CyclicPoly.theta(1, 3).rotate()
        ★[th2]
        """
        n = self.arity
        if not n:
            return self
        s %= n
        if not s:
            return CyclicPoly._raw(n, dict(self.terms), self.ciliated)
        return CyclicPoly._raw(n, {e[-s:] + e[:-s]: c for e, c in self.terms.items()}, self.ciliated)

    def is_invariant(self):
        return self.arity == 0 or self.rotate(1).terms == self.terms

    def unciliated(self):
        return CyclicPoly._raw(self.arity, dict(self.terms), False)

    def substitute(self, slots, arity):
        r"""
        Return `\varphi(\theta_{s_1}, \dots, \theta_{s_n})` as a polynomial
        of the given arity; ``slots`` are 1-based target indices.
        """
        t = {}
        for e, c in self.terms.items():
            ne = [0] * arity
            for k, a in zip(slots, e):
                ne[k - 1] += a
            ne = tuple(ne)
            s = t.get(ne)
            s = c if s is None else s + c
            if s:
                t[ne] = s
            else:
                t.pop(ne, None)
        return CyclicPoly._raw(arity, t)

    def evaluate(self, point):
        total = ZERO
        for e, c in self.terms.items():
            v = Fraction(1)
            for x, a in zip(point, e):
                v *= Fraction(x) ** a
            total = total + c * v
        return total

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), ZERO)

    # -- text / json ----------------------------------------------------

    def __repr__(self):
        s = self.to_str()
        return "★[%s]" % s if self.ciliated else s

    def to_str(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in sorted(self.terms.items(), key=lambda ec: _glex(ec[0]), reverse=True):
            ms = "*".join(
                "th%d" % (k + 1) if a == 1 else "th%d^%d" % (k + 1, a)
                for k, a in enumerate(e) if a
            )
            if not ms:
                out.append(c.to_str())
            elif c == 1:
                out.append(ms)
            elif c == -1:
                out.append("-" + ms)
            else:
                out.append(c.to_str() + "*" + ms)
        return " + ".join(out).replace("+ -", "- ")

    def to_json(self):
        return json.dumps({
            "arity": self.arity,
            "ciliated": self.ciliated,
            "terms": [[list(e), c.to_str()] for e, c in sorted(self.terms.items())],
        }, sort_keys=True)

    @classmethod
    def from_json(cls, s):
        d = json.loads(s)
        return cls(d["arity"], {tuple(e): as_gaussian(c) for e, c in d["terms"]}, d["ciliated"])


def _glex(e):
    return (sum(e), e)


def orbit_representative(e):
    r"""
    Canonical representative of the rotation orbit of an exponent vector
    (the lexicographically largest rotation).

    >>> orbit_representative((0, 1, 2))
    (2, 0, 1)
    """
    e = tuple(e)
    if not e:
        return e
    return max(e[k:] + e[:k] for k in range(len(e)))


def cyclic_symmetrize(phi):
    r"""
    Return `\overline\varphi = \sum_{\sigma \in \ZZ/n} \varphi \circ \sigma`
    (unciliated).  Note ``cyclic_symmetrize(phibar) == n * phibar`` for an
    invariant ``phibar``.

    >>> t = CyclicPoly.theta
    >>> cyclic_symmetrize(t(1, 2))
    th1 + th2
    """
    n = phi.arity
    if n == 0:
        return CyclicPoly._raw(0, dict(phi.terms), False)
    acc = CyclicPoly._raw(n, {})
    for s in range(n):
        acc = acc + phi.rotate(s)
    return CyclicPoly._raw(n, acc.terms, False)


def make_u(psi):
    r"""
    Return the ciliated `u_\psi = (\theta_n + \theta_1)\,\psi`.

    >>> make_u(CyclicPoly.monomial((5,), Fraction(1, 2)))
    ★[th1^6]
    """
    n = psi.arity
    if n == 0:
        raise ValueError("u_psi needs at least one variable")
    lin = CyclicPoly.theta(n, n) + CyclicPoly.theta(1, n)
    return CyclicPoly._raw(n, (lin * psi).terms, True)


def _elementary_divide(phi):
    # exact division by 2 * (theta_1 + ... + theta_n); None if not divisible
    n = phi.arity
    rem = dict(phi.terms)
    quot = {}
    while rem:
        e = max(rem, key=lambda x: (x[0], x))
        c = rem[e]
        if e[0] <= 0:
            return None
        q = (e[0] - 1,) + e[1:]
        quot[q] = c
        for k in range(n):
            m = list(q)
            m[k] += 1
            m = tuple(m)
            s = rem.get(m, ZERO) - c
            if s:
                rem[m] = s
            else:
                rem.pop(m, None)
    return CyclicPoly._raw(n, {e: c / 2 for e, c in quot.items()})


def _transport(n, e, c, psi):
    # moves all exponent of a monomial into slot 1 using
    # c th_k q == -c th_{k-1} q  (mod image), recording the u-parts in psi
    e = list(e)
    for k in range(n, 1, -1):
        while e[k - 1] > 0:
            e[k - 1] -= 1
            q = CyclicPoly._raw(n, {tuple(e): c}).rotate(-(k - 1))
            _accumulate(psi, q)
            e[k - 2] += 1
            c = -c
    return c


def _accumulate(acc, p):
    for e, c in p.terms.items():
        s = acc.get(e)
        s = c if s is None else s + c
        if s:
            acc[e] = s
        else:
            acc.pop(e, None)


def cyclic_decompose(phibar):
    r"""
    Find `\psi` with `\sum_\sigma u_\psi\circ\sigma = \overline\varphi`.

    The rotation invariant witness `\overline\varphi / (2\sum_k\theta_k)` is
    used whenever it exists; otherwise the witness is built by moving
    exponent between neighbouring slots.  A homogeneous component of degree
    `d` is obstructed exactly when `d = 0`, or when `n` and `d` are both
    even and `\overline\varphi(1,-1,1,-1,\dots) \neq 0`.

    >>> t = CyclicPoly.theta
    >>> cyclic_decompose((t(1, 2)**2 + t(2, 2)**2).unciliated())
    Traceback (most recent call last):
    ...
    kwfeynman.cyclic.NotDecomposable: no cyclic decomposition of th1^2 + th2^2
    >>> cyclic_decompose(CyclicPoly(1, {(6,): 1}, ciliated=False))
    ★[1/2*th1^5]
    """
    n = phibar.arity
    if not phibar.is_invariant():
        raise ValueError("cyclic_decompose expects a cyclically invariant polynomial")
    if not phibar:
        return CyclicPoly._raw(n, {})
    if n == 0:
        raise NotDecomposable(phibar, phibar)
    inv = _elementary_divide(phibar)
    if inv is not None:
        return inv
    psi = {}
    obstructed = {}
    for d, part in sorted(phibar.homogeneous_parts().items()):
        lead = ZERO
        for e, c in part.terms.items():
            lead = lead + _transport(n, e, c / n, psi)
        if not lead:
            continue
        if d == 0 or (n % 2 == 0 and d % 2 == 0):
            obstructed[d] = lead
            continue
        # close the loop: C th1^d == -C th1^d mod image
        sub = {}
        e1 = (d,) + (0,) * (n - 1)
        if n % 2:
            q = (d - 1,) + (0,) * (n - 1)
            _accumulate(sub, CyclicPoly._raw(n, {q: lead}))
            e = list(q)
            e[n - 1] += 1
            _transport(n, tuple(e), -lead, sub)
        else:
            c = lead
            e = list(e1)
            for _ in range(d):
                e[0] -= 1
                _accumulate(sub, CyclicPoly._raw(n, {tuple(e): c}).rotate(-1))
                e[1] += 1
                c = -c
        _accumulate(psi, CyclicPoly._raw(n, {k: v / 2 for k, v in sub.items()}))
    if obstructed:
        rem = CyclicPoly._raw(n, {(d,) + (0,) * (n - 1): c for d, c in obstructed.items()})
        raise NotDecomposable(phibar, rem)
    out = CyclicPoly._raw(n, psi)
    assert cyclic_symmetrize(make_u(out)).terms == phibar.terms
    return out


def decompose_with_remainder(phibar):
    r"""
    Split `\overline\varphi = \sum_\sigma u_\psi\circ\sigma + n\,\rho` with
    `\rho` a combination of the obstructions `\theta_1^d` (ciliated).
    Returns ``(psi, rho)``.
    """
    try:
        return cyclic_decompose(phibar), CyclicPoly._raw(phibar.arity, {})
    except NotDecomposable as err:
        rho = err.remainder
        rest = CyclicPoly._raw(phibar.arity, (phibar - cyclic_symmetrize(rho)).terms, False)
        return cyclic_decompose(rest), rho


def split_loop_forward(psi):
    r"""
    Return pairs `(h, \psi_h)` with
    `\psi(\theta_1, \dots, \theta_{n-1}, \theta_2) = \sum_h \theta_1^h \psi_h(\theta_2, \dots, \theta_{n-1})`.

    ``psi_h`` has arity `n-2`, its slot `j` standing for `\theta_{j+1}`.
    For `n = 2` no variable is identified and ``psi_h`` has arity one, its
    single slot being the free colour `\theta_2`.

    >>> split_loop_forward(CyclicPoly.monomial((2, 0, 0)))
    [(2, ★[1])]
    """
    n = psi.arity
    if n < 2:
        raise ValueError("loop split needs n >= 2")
    if n == 2:
        out = {}
        for (a, b), c in psi.terms.items():
            _accumulate(out.setdefault(a, {}), CyclicPoly._raw(1, {(b,): c}))
        return [(h, CyclicPoly._raw(1, t)) for h, t in sorted(out.items()) if t]
    out = {}
    for e, c in psi.terms.items():
        rest = list(e[1:n - 1])
        rest[0] += e[n - 1]
        _accumulate(out.setdefault(e[0], {}), CyclicPoly._raw(n - 2, {tuple(rest): c}))
    return [(h, CyclicPoly._raw(n - 2, t)) for h, t in sorted(out.items()) if t]


def split_loop_backward(psi):
    r"""
    Return pairs `(h, \eta_h)` with
    `\psi(\theta_1, \dots, \theta_{n-2}, \theta_1, \theta_n) = \sum_h \theta_n^h \eta_h(\theta_1, \dots, \theta_{n-2})`.

    >>> split_loop_backward(CyclicPoly.monomial((1, 0, 1)))
    [(1, ★[th1])]
    """
    n = psi.arity
    if n < 3:
        raise ValueError("backward loop split needs n >= 3")
    out = {}
    for e, c in psi.terms.items():
        rest = list(e[:n - 2])
        rest[0] += e[n - 2]
        _accumulate(out.setdefault(e[n - 1], {}), CyclicPoly._raw(n - 2, {tuple(rest): c}))
    return [(h, CyclicPoly._raw(n - 2, t)) for h, t in sorted(out.items()) if t]


def split_tensor(psi, j):
    r"""
    Return pairs `(\varphi'_h, \varphi''_h)` of arities `j` and `n-j-2` with
    `\psi(\theta_1, \dots, \theta_j, \theta_1, \theta_{j+2}, \dots, \theta_{n-1}, \theta_{j+2}) = \sum_h \varphi'_h \varphi''_h`.

    The second factor's slot `r` stands for `\theta_{j+1+r}`.  Terms are
    grouped by the monomial of the second factor.

    >>> split_tensor(CyclicPoly.monomial((0, 2, 0, 0)), 1)
    [(★[th1^2], ★[1])]
    """
    n = psi.arity
    if not 0 < j < n - 2:
        raise ValueError("tensor split needs 0 < j < n - 2")
    groups = {}
    for e, c in psi.terms.items():
        first = list(e[:j])
        first[0] += e[j]
        second = list(e[j + 1:n - 1])
        second[0] += e[n - 1]
        _accumulate(groups.setdefault(tuple(second), {}), CyclicPoly._raw(j, {tuple(first): c}))
    out = []
    for second in sorted(groups):
        if groups[second]:
            out.append((CyclicPoly._raw(j, groups[second]), CyclicPoly._raw(n - j - 2, {second: ONE})))
    return out


def star_product(psi, zeta):
    r"""
    Return `(\psi * \zeta)(\theta_1, \dots, \theta_{n+j}) =
    \psi(\theta_1, \dots, \theta_n)\,\zeta(\theta_n, \theta_{n+1}, \dots, \theta_{n+j}, \theta_1)`
    where ``zeta`` has arity `j + 2`.

    >>> star_product(CyclicPoly.theta(1, 2), CyclicPoly.theta(1, 3))
    ★[th1*th2]
    """
    n = psi.arity
    m = zeta.arity
    if m < 2:
        raise ValueError("star product needs zeta of arity >= 2")
    total = n + m - 2
    slots = [n] + list(range(n + 1, total + 1)) + [1]
    return psi.substitute(range(1, n + 1), total) * zeta.substitute(slots, total)
