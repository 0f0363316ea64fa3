r"""
Ribbon graphs as permutation pairs, with canonical forms, enumeration and
Feynman amplitudes.

A ribbon graph on half-edges `0, \dots, H-1` is a permutation `\sigma`
whose cycles are the vertices (legs in cyclic order) and a partial
involution `\alpha` pairing half-edges into edges; unpaired half-edges
are legs, stored as ``-1``.  Holes are the cycles of
`\varphi = \sigma\circ\alpha`, where a leg is treated as fixed by
`\alpha`, so a boundary walk slides past it.

EXAMPLES::

    >>> from kwfeynman.ribbon import theta_graph, dumbbell_graph, topology
    >>> topology(theta_graph())["genus"], topology(theta_graph(twisted=True))["genus"]
    ([0], [1])
    >>> theta_graph().canonical_form()[1], dumbbell_graph().canonical_form()[1]
    (6, 2)

The automorphism count is over orientation-preserving relabelings only,
which is what makes `\sum_\Gamma Z_\Lambda(\Gamma)/|\mathrm{Aut}\,\Gamma|`
agree with the Gaussian matrix integral.
"""
import json
from fractions import Fraction
from itertools import permutations
from math import factorial

import sympy

from .algebra import TracePoly, as_gaussian, double_factorial
from .cyclic import CyclicPoly

__all__ = [
    "Special",
    "RibbonGraph",
    "MalformedGraph",
    "topology",
    "canonical_form",
    "theta_graph",
    "dumbbell_graph",
    "special_vertex_graph",
    "enumerate_closed_trivalent",
    "enumerate_numbered",
    "amplitude_numbered",
    "amplitude_colored",
    "kmi_sides",
    "kmi_check",
    "enumerate_extensions",
    "closures",
    "enumerate_hole_types",
    "enumerate_two_hole_types",
    "special_edge_count",
]


class MalformedGraph(ValueError):
    pass


class Special:
    r"""
    Kind of a special vertex: a decoration (``None`` for the plain vertex,
    whose decoration is the constant 1) and an optional cilium, the leg
    that carries the first variable.

    >>> Special(CyclicPoly.monomial((2, 0)), cilium=4)
    Special(th1^2, cilium=4)
    """
    __slots__ = ("decoration", "cilium")

    def __init__(self, decoration=None, cilium=None):
        self.decoration = decoration
        self.cilium = cilium

    def key(self):
        if self.decoration is None:
            return "plain"
        return self.decoration.to_json()

    def __eq__(self, other):
        return (isinstance(other, Special) and self.key() == other.key()
                and self.cilium == other.cilium)

    def __hash__(self):
        return hash((self.key(), self.cilium))

    def __repr__(self):
        d = "plain" if self.decoration is None else self.decoration.to_str()
        return "Special(%s, cilium=%r)" % (d, self.cilium)


def _cycles(perm):
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if not seen[s]:
            c = []
            d = s
            while not seen[d]:
                seen[d] = True
                c.append(d)
                d = perm[d]
            out.append(tuple(c))
    return out


class RibbonGraph:
    r"""
    Immutable ribbon graph.

    ``kinds`` maps a half-edge of each special vertex to its
    :class:`Special` (vertices not mentioned are ordinary and must be
    trivalent); a list aligned with :meth:`vertices` is also accepted.
    ``holes`` maps any half-edge of a hole to its decoration (``"z"``,
    ``"w"`` or an integer hole number); blank holes are omitted.

    >>> g = RibbonGraph([1, 2, 0], [2, -1, 0], holes={0: "z"})
    >>> g.legs(), g.faces()
    ([1], [(0,), (1, 2)])
    """
    __slots__ = ("sigma", "alpha", "special", "holes", "_faces", "_face_of")

    def __init__(self, sigma, alpha, kinds=None, holes=None, check=True):
        self.sigma = tuple(int(x) for x in sigma)
        self.alpha = tuple(int(x) for x in alpha)
        self._faces = None
        self._face_of = None
        n = len(self.sigma)
        if check:
            if sorted(self.sigma) != list(range(n)) or len(self.alpha) != n:
                raise MalformedGraph("sigma must be a permutation of the half-edges")
            for d, a in enumerate(self.alpha):
                if a >= n or a < -1 or a == d or (a >= 0 and self.alpha[a] != d):
                    raise MalformedGraph("alpha is not a fixed-point-free partial involution at %d" % d)
        cyc = _cycles(self.sigma)
        vertex_of = {}
        for c in cyc:
            for d in c:
                vertex_of[d] = min(c)
        self.special = {}
        if kinds:
            items = kinds.items() if isinstance(kinds, dict) else (
                (min(c), k) for c, k in zip(sorted(cyc, key=min), kinds))
            for d, k in items:
                if k is not None:
                    self.special[vertex_of[d]] = k
        for c in cyc:
            k = self.special.get(min(c))
            if k is None:
                if check and len(c) != 3:
                    raise MalformedGraph("ordinary vertex %r is not trivalent" % (c,))
            else:
                if k.cilium is not None and k.cilium not in c:
                    raise MalformedGraph("cilium %d is not a half-edge of its vertex" % k.cilium)
                if k.decoration is not None and k.decoration.arity != len(c):
                    raise MalformedGraph("decoration arity %d on a %d-valent vertex"
                                         % (k.decoration.arity, len(c)))
                if (k.decoration is not None and k.cilium is None
                        and not k.decoration.is_invariant()):
                    raise MalformedGraph("non-invariant decoration needs a cilium")
        fo = self.face_of()
        self.holes = {}
        for d, lab in (holes or {}).items():
            self.holes[self._faces[fo[int(d)]][0]] = lab

    # -- structure ------------------------------------------------------

    def n_half_edges(self):
        return len(self.sigma)

    def phi(self, d):
        a = self.alpha[d]
        return self.sigma[a if a >= 0 else d]

    def vertices(self):
        """Vertex cycles, each starting at its smallest half-edge, sorted."""
        out = []
        for c in _cycles(self.sigma):
            i = c.index(min(c))
            out.append(c[i:] + c[:i])
        return sorted(out)

    def edges(self):
        return [(d, a) for d, a in enumerate(self.alpha) if a > d]

    def legs(self):
        return [d for d, a in enumerate(self.alpha) if a < 0]

    def is_closed(self):
        return all(a >= 0 for a in self.alpha)

    def faces(self):
        """Boundary cycles of `\\sigma\\circ\\alpha`, each starting at its smallest half-edge."""
        if self._faces is None:
            phi = [self.phi(d) for d in range(len(self.sigma))]
            self._faces = sorted(_cycles(phi))
            fo = [0] * len(self.sigma)
            for i, f in enumerate(self._faces):
                for d in f:
                    fo[d] = i
            self._face_of = fo
        return self._faces

    def face_of(self):
        self.faces()
        return self._face_of

    def hole_label(self, d):
        """Decoration of the hole containing half-edge ``d``."""
        return self.holes.get(self.faces()[self.face_of()[d]][0])

    def vertex_of(self):
        out = {}
        for c in self.vertices():
            for d in c:
                out[d] = c
        return out

    def ordinary_vertices(self):
        return [c for c in self.vertices() if c[0] not in self.special]

    def special_vertices(self):
        return [c for c in self.vertices() if c[0] in self.special]

    def components(self):
        parent = list(range(len(self.sigma)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in range(len(self.sigma)):
            for e in (self.sigma[d], self.alpha[d]):
                if e >= 0:
                    parent[find(d)] = find(e)
        comps = {}
        for d in range(len(self.sigma)):
            comps.setdefault(find(d), []).append(d)
        return sorted(comps.values())

    # -- relabeling and canonical form ------------------------------------

    def relabel(self, perm):
        """Image under the half-edge bijection ``perm`` (old -> new)."""
        n = len(self.sigma)
        sigma = [0] * n
        alpha = [0] * n
        for d in range(n):
            sigma[perm[d]] = perm[self.sigma[d]]
            a = self.alpha[d]
            alpha[perm[d]] = perm[a] if a >= 0 else -1
        kinds = {perm[v]: Special(k.decoration, None if k.cilium is None else perm[k.cilium])
                 for v, k in self.special.items()}
        holes = {perm[d]: lab for d, lab in self.holes.items()}
        return RibbonGraph(sigma, alpha, kinds, holes, check=False)

    def _attrs(self):
        vo = {}
        for c in self.vertices():
            k = self.special.get(c[0])
            key = "o" if k is None else "s" + k.key()
            for d in c:
                vo[d] = key + ("*" if k is not None and k.cilium == d else "")
        return [vo[d] + "|" + str(self.hole_label(d)) for d in range(len(self.sigma))]

    def _code_from(self, seeds, attrs):
        lab = {}
        order = []
        for s in seeds:
            if s not in lab:
                lab[s] = len(order)
                order.append(s)
        i = 0
        while i < len(order):
            d = order[i]
            i += 1
            for e in (self.sigma[d], self.alpha[d]):
                if e >= 0 and e not in lab:
                    lab[e] = len(order)
                    order.append(e)
        code = tuple((lab[self.sigma[d]], lab[self.alpha[d]] if self.alpha[d] >= 0 else -1, attrs[d])
                     for d in order)
        return code, order

    def canonical_form(self):
        r"""
        Return ``(canonical graph, automorphism count)``.  The canonical
        graph depends only on the isomorphism class.

        >>> t = theta_graph()
        >>> t.relabel([3, 5, 1, 0, 2, 4]).canonical_form()[0] == t.canonical_form()[0]
        True
        """
        attrs = self._attrs()
        comps = []
        for comp in self.components():
            best = None
            count = 0
            for s in comp:
                code, order = self._code_from([s], attrs)
                if best is None or code < best[0]:
                    best, count = (code, order), 1
                elif code == best[0]:
                    count += 1
            comps.append((best[0], best[1], count))
        comps.sort(key=lambda c: c[0])
        aut = 1
        mult = {}
        for code, _, count in comps:
            aut *= count
            mult[code] = mult.get(code, 0) + 1
        for m in mult.values():
            aut *= factorial(m)
        perm = [0] * len(self.sigma)
        i = 0
        for _, order, _ in comps:
            for d in order:
                perm[d] = i
                i += 1
        return self.relabel(perm), aut

    def key(self):
        """Hashable isomorphism invariant (complete)."""
        attrs = self._attrs()
        codes = []
        for comp in self.components():
            codes.append(min(self._code_from([s], attrs)[0] for s in comp))
        return tuple(sorted(codes))

    def rooted_key(self, seeds):
        r"""
        Isomorphism invariant for relabelings that fix the half-edges
        ``seeds`` pointwise.  Components not reachable from the seeds
        are keyed up to isomorphism.
        """
        attrs = self._attrs()
        code, order = self._code_from(seeds, attrs)
        if len(order) == len(self.sigma):
            return (code,)
        seen = set(order)
        rest = []
        for comp in self.components():
            if comp[0] not in seen:
                rest.append(min(self._code_from([s], attrs)[0] for s in comp))
        return (code,) + tuple(sorted(rest))

    def automorphism_count_brute_force(self):
        """Count half-edge bijections preserving all structure (small graphs only)."""
        attrs = self._attrs()
        n = len(self.sigma)
        count = 0
        for p in permutations(range(n)):
            if all(attrs[p[d]] == attrs[d] for d in range(n)) and all(
                    p[self.sigma[d]] == self.sigma[p[d]]
                    and (self.alpha[d] < 0 and self.alpha[p[d]] < 0
                         or self.alpha[d] >= 0 and p[self.alpha[d]] == self.alpha[p[d]])
                    for d in range(n)):
                count += 1
        return count

    def __eq__(self, other):
        return (isinstance(other, RibbonGraph) and self.sigma == other.sigma
                and self.alpha == other.alpha and self.special == other.special
                and self.holes == other.holes)

    def __hash__(self):
        return hash((self.sigma, self.alpha))

    def __repr__(self):
        return "RibbonGraph(sigma=%r, alpha=%r%s%s)" % (
            list(self.sigma), list(self.alpha),
            ", kinds=%r" % self.special if self.special else "",
            ", holes=%r" % self.holes if self.holes else "")

    # -- json ----------------------------------------------------------------

    def to_json(self):
        r"""
        >>> g = dumbbell_graph()
        >>> RibbonGraph.from_json(g.to_json()) == g
        True
        """
        kinds = []
        for c in self.vertices():
            k = self.special.get(c[0])
            if k is None:
                kinds.append(None)
            else:
                kinds.append({
                    "decoration": None if k.decoration is None else json.loads(k.decoration.to_json()),
                    "cilium": k.cilium,
                })
        return json.dumps({
            "sigma": list(self.sigma),
            "alpha": list(self.alpha),
            "kinds": kinds,
            "holes": {str(d): lab for d, lab in sorted(self.holes.items())},
        }, sort_keys=True)

    @classmethod
    def from_json(cls, s):
        d = json.loads(s)
        kinds = []
        for k in d["kinds"]:
            if k is None:
                kinds.append(None)
            else:
                dec = k["decoration"]
                kinds.append(Special(None if dec is None else CyclicPoly.from_json(json.dumps(dec)),
                                     k["cilium"]))
        return cls(d["sigma"], d["alpha"], kinds, {int(h): lab for h, lab in d["holes"].items()})


# -- topology -----------------------------------------------------------------


def topology(g):
    r"""
    Vertex, edge and hole counts together with the genus of every
    connected component, from `V - E + F = 2 - 2g`.

    >>> t = topology(dumbbell_graph())
    >>> t["V"], t["E"], len(t["holes"]), t["genus"]
    (2, 3, 3, [0])
    """
    faces = g.faces()
    fo = g.face_of()
    genus = []
    for comp in g.components():
        cs = set(comp)
        V = len({min(c) for c in g.vertices() if c[0] in cs})
        E = sum(1 for d in comp if g.alpha[d] > d)
        F = len({fo[d] for d in comp})
        chi = V - E + F
        if chi % 2 or chi > 2:
            raise MalformedGraph("Euler characteristic %d is not that of a surface" % chi)
        genus.append((2 - chi) // 2)
    return {"V": len(g.vertices()), "E": len(g.edges()), "holes": faces, "genus": genus}


def canonical_form(g):
    """Function form of :meth:`RibbonGraph.canonical_form`."""
    return g.canonical_form()


# -- small constructors --------------------------------------------------------


def theta_graph(twisted=False):
    r"""
    Two trivalent vertices joined by three edges; ``twisted=True`` gives the
    one-hole torus version.

    >>> len(theta_graph().faces()), len(theta_graph(twisted=True).faces())
    (3, 1)
    """
    alpha = [3, 4, 5, 0, 1, 2] if twisted else [3, 5, 4, 0, 2, 1]
    return RibbonGraph([1, 2, 0, 4, 5, 3], alpha)


def dumbbell_graph():
    """Two loops joined by a bar."""
    return RibbonGraph([1, 2, 0, 4, 5, 3], [1, 0, 5, 4, 3, 2])


def special_vertex_graph(decoration=None, valence=None, pairs=(), ciliated=True):
    r"""
    A single special vertex on half-edges `0, \dots, n-1` (in cyclic
    order, cilium on 0) with the given half-edge ``pairs`` joined.

    >>> g = special_vertex_graph(CyclicPoly.monomial((5, 0)), pairs=[(0, 1)])
    >>> len(g.faces()), g.is_closed()
    (2, True)
    """
    n = decoration.arity if decoration is not None else valence
    alpha = [-1] * n
    for a, b in pairs:
        alpha[a], alpha[b] = b, a
    sigma = [(d + 1) % n for d in range(n)]
    return RibbonGraph(sigma, alpha, {0: Special(decoration, 0 if ciliated else None)})


# -- completion engine ------------------------------------------------------------


def _completions(sigma, alpha, n_fresh, must_pair, seed_active):
    r"""
    Yield ``alpha`` arrays completing the partial pairing by adding
    ``n_fresh`` ordinary trivalent vertices (appended to ``sigma``) and
    pairing every half-edge in ``must_pair`` plus every fresh half-edge.

    Fresh vertices are brought in one at a time through their first
    half-edge, so every output component meets an initially active
    half-edge (or fresh vertex 0 when nothing is active).  Results still
    contain isomorphic duplicates.
    """
    B = len(sigma)
    sigma = list(sigma) + [x for j in range(n_fresh) for x in (B + 3 * j + 1, B + 3 * j + 2, B + 3 * j)]
    alpha = list(alpha) + [-1] * (3 * n_fresh)
    pending = set(d for d in must_pair if alpha[d] < 0)
    touched = 0
    if not seed_active and n_fresh:
        touched = 1
        pending |= {B, B + 1, B + 2}

    def rec(touched):
        if not pending:
            if touched == n_fresh:
                yield tuple(sigma), tuple(alpha)
            return
        d = min(pending)
        pending.discard(d)
        for x in sorted(pending):
            pending.discard(x)
            alpha[d], alpha[x] = x, d
            yield from rec(touched)
            alpha[d] = alpha[x] = -1
            pending.add(x)
        if touched < n_fresh:
            f = B + 3 * touched
            pending.update((f + 1, f + 2))
            alpha[d], alpha[f] = f, d
            yield from rec(touched + 1)
            alpha[d] = alpha[f] = -1
            pending.difference_update((f + 1, f + 2))
        pending.add(d)

    yield from rec(touched)


def enumerate_closed_trivalent(g, n):
    r"""
    Isomorphism classes of closed connected trivalent ribbon graphs of
    genus ``g`` with ``n`` holes, as ``(graph, aut)`` pairs with unnumbered
    holes.

    >>> [aut for _, aut in enumerate_closed_trivalent(0, 3)]
    [2, 6]
    >>> sum(Fraction(1, a) for _, a in enumerate_closed_trivalent(1, 1))
    Fraction(1, 6)
    """
    if 2 - 2 * g - n >= 0:
        raise ValueError("need 2 - 2g - n < 0")
    V = 2 * (2 * g - 2 + n)
    found = {}
    for sigma, alpha in _completions([], [], V, (), seed_active=False):
        G = RibbonGraph(sigma, alpha, check=False)
        if len(G.faces()) != n:
            continue
        k = G.key()
        if k not in found:
            found[k] = G
    out = []
    for G in found.values():
        assert topology(G)["genus"] == [g]
        out.append(G.canonical_form())
    out.sort(key=lambda ga: ga[0].key())
    return out


def enumerate_numbered(g, n):
    r"""
    Classes with holes numbered `1, \dots, n`: every numbering of every
    unnumbered class, deduplicated.

    >>> len(enumerate_numbered(0, 3))
    4
    """
    out = {}
    for G, _ in enumerate_closed_trivalent(g, n):
        roots = [f[0] for f in G.faces()]
        for labels in permutations(range(1, n + 1)):
            H = RibbonGraph(G.sigma, G.alpha, holes=dict(zip(roots, labels)), check=False)
            k = H.key()
            if k not in out:
                out[k] = H.canonical_form()
    return sorted(out.values(), key=lambda ga: ga[0].key())


# -- amplitudes -----------------------------------------------------------------


def lambda_symbols(n):
    return sympy.symbols("lambda1:%d" % (n + 1))


def amplitude_numbered(g, lambdas=None):
    r"""
    `(1/2)^V \prod_{\text{edges}} 2/(\lambda_{h(l^+)} + \lambda_{h(l^-)})`
    for a closed trivalent graph with numbered holes.

    >>> a, b, c = lambda_symbols(3)
    >>> G = RibbonGraph(theta_graph().sigma, theta_graph().alpha, holes={0: 1, 1: 2, 2: 3})
    >>> sympy.factor(amplitude_numbered(G))
    2/((lambda1 + lambda2)*(lambda1 + lambda3)*(lambda2 + lambda3))
    """
    labels = sorted(set(g.holes.values()))
    if lambdas is None:
        lambdas = {lab: sympy.Symbol("lambda%d" % lab) for lab in labels}
    elif not isinstance(lambdas, dict):
        lambdas = dict(zip(range(1, len(lambdas) + 1), lambdas))
    if len(g.holes) != len(g.faces()):
        raise ValueError("every hole must be numbered")
    val = sympy.Rational(1, 2) ** len(g.vertices())
    for d, a in g.edges():
        val *= 2 / (lambdas[g.hole_label(d)] + lambdas[g.hole_label(a)])
    return val


def _vertex_factor(g, c, color):
    k = g.special.get(c[0])
    if k is None:
        return sympy.I / 2
    if k.decoration is None:
        return sympy.Integer(1)
    start = c.index(k.cilium) if k.cilium is not None else 0
    legs = c[start:] + c[:start]
    # slot j (0-based) sits in the corner after leg j, i.e. in the hole of leg j+1
    pts = [color[g.face_of()[g.sigma[legs[j]]]] for j in range(len(legs))]
    val = sympy.Integer(0)
    for e, coef in k.decoration.terms.items():
        term = sympy.Rational(coef.re.numerator, coef.re.denominator) + sympy.I * sympy.Rational(
            coef.im.numerator, coef.im.denominator)
        for x, p in zip(pts, e):
            term *= x ** p
        val += term
    return val


def _amplitude_summand(g, color):
    val = sympy.Integer(1)
    for c in g.vertices():
        val *= _vertex_factor(g, c, color)
    fo = g.face_of()
    for d, a in g.edges():
        x, y = color[fo[d]], color[fo[a]]
        val *= 2 / (x + y)
    return val


def amplitude_colored(g, spectrum=None):
    r"""
    Amplitude of a closed graph summed over all colourings of its holes.

    Ordinary vertices give `i/2`, special vertices their decoration
    evaluated at the surrounding hole colours, edges `2/(\Lambda_a +
    \Lambda_b)`.  With ``spectrum`` the exact value is returned;
    otherwise the summand is symmetrized over hole relabelings and must
    reduce to a Laurent polynomial, returned as a trace polynomial.

    >>> g = special_vertex_graph(CyclicPoly.monomial((5, 0)), pairs=[(0, 1)])
    >>> amplitude_colored(g)
    2*T0*T4 - 2*T1*T3 + T2^2
    >>> amplitude_colored(special_vertex_graph(CyclicPoly.monomial((5, 0)), pairs=[(0, 1)]), [1, 2])
    39
    """
    if not g.is_closed():
        raise ValueError("amplitude of a graph with legs")
    F = len(g.faces())
    if spectrum is not None:
        spec = [sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in spectrum]
        total = sympy.Integer(0)
        from itertools import product
        for col in product(spec, repeat=F):
            total += _amplitude_summand(g, col)
        return as_gaussian(_sympy_to_gaussian(sympy.nsimplify(sympy.expand(total))))
    xs = sympy.symbols("x0:%d" % F)
    summand = _amplitude_summand(g, xs)
    sym = sympy.Integer(0)
    for p in permutations(xs):
        sym += summand.subs(dict(zip(xs, p)), simultaneous=True)
    sym = sympy.cancel(sympy.together(sym / factorial(F)))
    num, den = sympy.fraction(sym)
    den_poly = sympy.Poly(den, *xs)
    if len(den_poly.terms()) != 1:
        raise ValueError("amplitude is not a trace polynomial")
    (dexp, dcoef), = den_poly.terms()
    out = TracePoly()
    for nexp, ncoef in sympy.Poly(num, *xs).terms():
        c = _sympy_to_gaussian(ncoef / dcoef)
        t = TracePoly.constant(c)
        for a, b in zip(nexp, dexp):
            t = t * TracePoly.T(a - b)
        out = out + t
    return out


def _sympy_to_gaussian(x):
    re, im = sympy.re(x), sympy.im(x)
    return as_gaussian(Fraction(int(re.p), int(re.q))) + as_gaussian(Fraction(int(im.p), int(im.q))) * as_gaussian("i")


# -- Kontsevich's main identity ----------------------------------------------------


def kmi_sides(g, n, table):
    r"""
    Both sides of the main identity for genus ``g`` and ``n`` numbered
    holes: the correlator side and the graph side, as sympy expressions.
    """
    lam = lambda_symbols(n)
    lhs = sympy.Integer(0)
    target = 3 * g - 3 + n

    def rec(prefix):
        if len(prefix) == n:
            if sum(prefix) == target:
                yield prefix
            return
        for v in range(target - sum(prefix) + 1):
            yield from rec(prefix + (v,))

    for nu in rec(()):
        val = table[nu]
        term = sympy.Rational(val.numerator, val.denominator)
        for x, v in zip(lam, nu):
            term *= double_factorial(2 * v - 1) / x ** (2 * v + 1)
        lhs += term
    rhs = sympy.Integer(0)
    for G, aut in enumerate_numbered(g, n):
        rhs += amplitude_numbered(G, lam) / aut
    return lhs, rhs


def kmi_check(g, n, table=None):
    r"""
    Exact comparison of the two sides of the main identity.

    >>> ok, lhs, rhs = kmi_check(0, 3)
    >>> ok, lhs
    (True, 1/(lambda1*lambda2*lambda3))
    """
    if table is None:
        from .kdv import solve_correlators
        table = solve_correlators(max(3 * g - 3 + n, 1))
    lhs, rhs = kmi_sides(g, n, table)
    return sympy.cancel(sympy.together(lhs - rhs)) == 0, lhs, sympy.factor(rhs)


# -- extensions and closures ----------------------------------------------------------


def enumerate_extensions(xi, v):
    r"""
    Closed graphs obtained from ``xi`` by adding ``v`` ordinary trivalent
    vertices and pairing all legs, with every new vertex connected to
    ``xi``.  Classes are taken up to relabelings that fix the half-edges
    of ``xi`` pointwise, which is the count that enters the expectation
    of a product of labelled vertex insertions.  For empty ``xi`` the
    connected closed graphs with ``v`` vertices are returned up to
    isomorphism, paired with their automorphism counts.

    >>> xi = special_vertex_graph(valence=1)
    >>> [len(g.vertices()) for g in enumerate_extensions(xi, 1)]
    [2]
    >>> enumerate_extensions(special_vertex_graph(valence=1), 2)
    []
    >>> sorted(a for _, a in enumerate_extensions(RibbonGraph([], []), 2))
    [2, 6, 6]
    """
    B = xi.n_half_edges()
    if (len(xi.legs()) + 3 * v) % 2:
        return []
    seeds = list(range(B))
    found = {}
    for sigma, alpha in _completions(xi.sigma, xi.alpha, v, xi.legs(), seed_active=B > 0):
        G = RibbonGraph(sigma, alpha, xi.special, xi.holes, check=False)
        k = G.rooted_key(seeds) if B else G.key()
        if k not in found:
            found[k] = G
    if B:
        return [found[k] for k in sorted(found)]
    return [found[k].canonical_form() for k in sorted(found)]


def closures(psi):
    r"""
    Isomorphism classes of closed graphs obtained by pairing the legs of
    ``psi`` among themselves, with automorphism counts.

    >>> closures(special_vertex_graph(valence=1))
    []
    >>> len(closures(special_vertex_graph(valence=4))), len(closures(special_vertex_graph(valence=4, ciliated=False)))
    (3, 2)
    """
    if len(psi.legs()) % 2:
        return []
    found = {}
    for sigma, alpha in _completions(psi.sigma, psi.alpha, 0, psi.legs(), seed_active=True):
        G = RibbonGraph(sigma, alpha, psi.special, psi.holes, check=False)
        found.setdefault(G.key(), G)
    return [found[k].canonical_form() for k in sorted(found)]


# -- hole types --------------------------------------------------------------------------


def _walk(sigma, alpha, d, start, max_edges):
    # complete the boundary walk through d back to start, choosing partners
    # for unpaired half-edges on the way; every half-edge met gets paired
    a = alpha[d]
    if a >= 0:
        nxt = sigma[a]
        if nxt == start:
            yield sigma, alpha
        else:
            yield from _walk(sigma, alpha, nxt, start, max_edges)
        return
    if sum(1 for x in alpha if x >= 0) // 2 >= max_edges:
        return
    for x in range(len(sigma)):
        if x != d and alpha[x] < 0:
            al = list(alpha)
            al[d], al[x] = x, d
            yield from _walk(sigma, al, d, start, max_edges)
    m = len(sigma)
    sg = list(sigma) + [m + 1, m + 2, m]
    al = list(alpha) + [-1, -1, -1]
    al[d], al[m] = m, d
    yield from _walk(sg, al, d, start, max_edges)


def special_edge_count(g, labels=("z", "w")):
    """Number of edges having a hole decorated by one of ``labels`` on a side."""
    return sum(1 for d, a in g.edges()
               if g.hole_label(d) in labels or g.hole_label(a) in labels)


def enumerate_hole_types(max_edges):
    r"""
    Isomorphism classes of hole types with at most ``max_edges`` edges,
    as ``(graph, aut)`` pairs: ordinary trivalent vertices and edges that
    all touch one ``z``-decorated hole, the remaining half-edges being
    legs.

    >>> [topology(g)["E"] for g, _ in enumerate_hole_types(1)]
    [1]
    >>> sum(1 for g, _ in enumerate_hole_types(3) if topology(g)["E"] == 3)
    3
    """
    found = {}
    for sigma, alpha in _walk([1, 2, 0], [-1, -1, -1], 0, 0, max_edges):
        G = RibbonGraph(sigma, alpha, holes={0: "z"}, check=False)
        found.setdefault(G.key(), G)
    out = [found[k].canonical_form() for k in found]
    out.sort(key=lambda ga: (len(ga[0].edges()), ga[0].key()))
    return out


def enumerate_two_hole_types(max_total_edges):
    r"""
    Isomorphism classes of two-hole types (one ``z`` and one ``w`` hole)
    with at most ``max_total_edges`` edges, as ``(graph, aut)`` pairs.
    The two special holes may share edges, vertices, or nothing.

    >>> def shares(g):
    ...     return any({g.hole_label(d), g.hole_label(a)} == {"z", "w"} for d, a in g.edges())
    >>> [len(g.edges()) for g, _ in enumerate_two_hole_types(3) if shares(g)]
    [3, 3, 3]
    >>> len(enumerate_two_hole_types(4))
    17
    """
    found = {}
    for sigma, alpha in _walk([1, 2, 0], [-1, -1, -1], 0, 0, max_total_edges):
        G = RibbonGraph(sigma, alpha, check=False)
        zface = set(G.faces()[G.face_of()[0]])
        roots = [r for r in range(len(sigma)) if r not in zface]
        starts = [(sigma, alpha, r) for r in roots]
        m = len(sigma)
        starts.append((list(sigma) + [m + 1, m + 2, m], list(alpha) + [-1, -1, -1], m))
        for sg, al, r in starts:
            for s2, a2 in _walk(sg, al, r, r, max_total_edges):
                H = RibbonGraph(s2, a2, holes={0: "z", r: "w"}, check=False)
                found.setdefault(H.key(), H)
    out = [found[k].canonical_form() for k in found]
    out.sort(key=lambda ga: (len(ga[0].edges()), ga[0].key()))
    return out
