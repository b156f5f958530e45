"""Sparse multivariate polynomials, Buchberger's algorithm and a solver for
zero-dimensional systems over a finite field.

Polynomials are dicts {exponent tuple: coefficient}.  Orders are 'lex' and
'degrevlex' with variables ordered as listed in the ring (first is largest).
"""
from __future__ import annotations

import itertools

from .field import poly_roots, ExtField


class NotZeroDimensional(ArithmeticError):
    pass


def _key_lex(e):
    return e


def _key_degrevlex(e):
    return (sum(e), tuple(-x for x in reversed(e)))


ORDERS = {"lex": _key_lex, "degrevlex": _key_degrevlex}


class PolyRing:
    def __init__(self, K, names):
        self.K = K
        self.names = list(names)
        self.n = len(self.names)

    def __repr__(self):
        return f"PolyRing({self.names})"

    def zero(self):
        return MPoly(self, {})

    def one(self):
        return MPoly(self, {(0,) * self.n: self.K.one})

    def const(self, c):
        return MPoly(self, {(0,) * self.n: self.K(c) if isinstance(c, int) else c})

    def gens(self):
        out = []
        for i in range(self.n):
            e = [0] * self.n
            e[i] = 1
            out.append(MPoly(self, {tuple(e): self.K.one}))
        return out

    def monomial(self, e, c=None):
        return MPoly(self, {tuple(e): self.K.one if c is None else c})


class MPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(f"{v}^{k}" if k > 1 else v
                           for v, k in zip(self.ring.names, e) if k)
            parts.append(f"({c})" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    def copy(self):
        return MPoly(self.ring, dict(self.terms))

    def _coerce(self, other):
        if isinstance(other, MPoly):
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t[e] + c if e in t else c
        return MPoly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = self.ring.K(other) if isinstance(other, int) else other
            return MPoly(self.ring, {e: v * c for e, v in self.terms.items()})
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                t[e] = t[e] + v if e in t else v
        return MPoly(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def lead(self, order="degrevlex"):
        """(exponent, coefficient) of the leading term."""
        key = ORDERS[order]
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, order="degrevlex"):
        _, c = self.lead(order)
        return self * c.inverse()

    def __call__(self, *vals):
        """Evaluate at a point (values may be field elements or anything that
        supports ring operations)."""
        if len(vals) == 1 and isinstance(vals[0], (list, tuple)):
            vals = vals[0]
        out = None
        cache = {}
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = vals[i] ** k
                    t = cache[(i, k)] * t
            out = t if out is None else out + t
        if out is None:
            return self.ring.K.zero
        return out

    def subs(self, i, val):
        """Substitute a field value for variable i (variable stays, degree 0)."""
        t = {}
        for e, c in self.terms.items():
            v = c * val ** e[i] if e[i] else c
            e2 = e[:i] + (0,) + e[i + 1:]
            t[e2] = t[e2] + v if e2 in t else v
        return MPoly(self.ring, t)

    def univariate(self, i):
        """Coefficient list in variable i (requires no other variables)."""
        R = self.ring.K.R
        coeffs = [self.ring.K.zero] * (self.degree(i) + 1)
        for e, c in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError("not univariate")
            coeffs[e[i]] = c
        return R(coeffs)

    def variables(self):
        return sorted({i for e in self.terms for i, k in enumerate(e) if k})


# ----------------------------------------------------------------------------
# Groebner bases


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_mon(a, b):
    return tuple(x - y for x, y in zip(a, b))


def reduce(f, G, order="degrevlex"):
    """Full reduction of f modulo the list G."""
    key = ORDERS[order]
    leads = [(g.lead(order), g) for g in G if not g.is_zero()]
    r = {}
    p = dict(f.terms)
    ring = f.ring
    while p:
        e = max(p, key=key)
        c = p[e]
        for (ge, gc), g in leads:
            if _divides(ge, e):
                q = c / gc
                shift = _sub_mon(e, ge)
                for e2, c2 in g.terms.items():
                    e3 = tuple(a + b for a, b in zip(e2, shift))
                    v = p.get(e3)
                    v = -(q * c2) if v is None else v - q * c2
                    if v.is_zero():
                        p.pop(e3, None)
                    else:
                        p[e3] = v
                break
        else:
            r[e] = c
            del p[e]
    return MPoly(ring, r)


def _spoly(f, g, order):
    (fe, fc), (ge, gc) = f.lead(order), g.lead(order)
    L = _lcm(fe, ge)
    ring = f.ring
    a = ring.monomial(_sub_mon(L, fe), fc.inverse())
    b = ring.monomial(_sub_mon(L, ge), gc.inverse())
    return a * f - b * g


def groebner(gens, order="degrevlex"):
    """Reduced Groebner basis by Buchberger's algorithm with the sugar
    selection strategy, the coprime criterion and the chain criterion."""
    G = [g.monic(order) for g in gens if not g.is_zero()]
    if not G:
        return []
    sugar = {id(g): g.total_degree() for g in G}
    pairs = []

    def add_pairs(k):
        ek = G[k].lead(order)[0]
        for i in range(k):
            ei = G[i].lead(order)[0]
            L = _lcm(ei, ek)
            s = max(sugar[id(G[i])] + sum(L) - sum(ei), sugar[id(G[k])] + sum(L) - sum(ek))
            pairs.append((s, i, k))

    for k in range(1, len(G)):
        add_pairs(k)
    while pairs:
        pairs.sort(key=lambda t: (t[0], t[1], t[2]))
        s, i, k = pairs.pop(0)
        ei, ek = G[i].lead(order)[0], G[k].lead(order)[0]
        L = _lcm(ei, ek)
        if all(a == 0 or b == 0 for a, b in zip(ei, ek)):
            continue  # coprime leading monomials
        chain = False
        for m in range(len(G)):
            if m in (i, k):
                continue
            em = G[m].lead(order)[0]
            if _divides(em, L):
                p1 = tuple(sorted((i, m)))
                p2 = tuple(sorted((k, m)))
                live = {(a, b) for _, a, b in pairs}
                if p1 not in live and p2 not in live:
                    chain = True
                    break
        if chain:
            continue
        h = reduce(_spoly(G[i], G[k], order), G, order)
        if h.is_zero():
            continue
        h = h.monic(order)
        sugar[id(h)] = s
        G.append(h)
        add_pairs(len(G) - 1)
    return _interreduce(G, order)


def _interreduce(G, order):
    G = [g.monic(order) for g in G]
    # drop elements whose leading monomial is divisible by another's
    keep = []
    for i, g in enumerate(G):
        e = g.lead(order)[0]
        dominated = False
        for j, h in enumerate(G):
            if j == i:
                continue
            f = h.lead(order)[0]
            if _divides(f, e) and (f != e or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        rest = keep[:i] + keep[i + 1:]
        out.append(reduce(g, rest, order).monic(order))
    key = ORDERS[order]
    out.sort(key=lambda g: key(g.lead(order)[0]))
    return out


def is_groebner(G, order="degrevlex"):
    for f, g in itertools.combinations(G, 2):
        if not reduce(_spoly(f, g, order), G, order).is_zero():
            return False
    return True


def is_zero_dimensional(G, order="degrevlex"):
    n = G[0].ring.n if G else 0
    pure = set()
    for g in G:
        e = g.lead(order)[0]
        nz = [i for i, k in enumerate(e) if k]
        if len(nz) == 1:
            pure.add(nz[0])
    return len(pure) == n


def solve_zero_dim(gens, rng=None):
    """All solutions of a zero-dimensional system, as tuples of field
    elements.  Over a prime field, solutions in extensions are returned as
    elements of the smallest F_{p^d} that contains all coordinates of that
    solution; over a non-prime field only rational solutions are returned."""
    if not gens:
        raise NotZeroDimensional("empty system")
    ring = gens[0].ring
    G = groebner(gens, "degrevlex")
    if G and G[0].total_degree() == 0:
        return []
    if not is_zero_dimensional(G, "degrevlex"):
        raise NotZeroDimensional("staircase is infinite")
    L = groebner(G, "lex")
    K = ring.K
    sols = _back_substitute(L, ring, K, ring.n - 1, {})
    if K.k == 1:
        sols += _extension_solutions(L, ring, K, sols)
    return sols


def _back_substitute(L, ring, K, i, partial):
    """Solve for variables i, i-1, ..., 0 given values for > i."""
    if i < 0:
        return [tuple(partial[j] for j in range(ring.n))]
    cand = None
    for g in L:
        vs = g.variables()
        if not vs or min(vs) != i:
            continue
        h = g
        for j, v in partial.items():
            h = h.subs(j, v)
        if h.is_zero():
            continue
        up = h.univariate(i)
        cand = up if cand is None else cand.gcd(up)
    out = []
    if cand is None or cand.degree() < 0:
        raise NotZeroDimensional("free variable in back substitution")
    if cand.degree() == 0:
        return []
    for r, _ in poly_roots(cand):
        p2 = dict(partial)
        p2[i] = r
        out += _back_substitute(L, ring, K, i - 1, p2)
    return out


def _extension_solutions(L, ring, K, rational):
    """Solutions over F_{p^d} (d > 1) for systems over a prime field: the
    system is re-solved over growing extensions and non-rational solutions
    are kept."""
    out = []
    seen = set()
    # the degree of the last eliminant bounds the extension degree needed
    last = [g for g in L if g.variables() == [ring.n - 1]]
    if not last:
        return out
    dmax = last[0].degree(ring.n - 1)
    for d in range(2, dmax + 1):
        E = ExtField(K.p, d)
        ring2 = PolyRing(E, ring.names)
        L2 = [MPoly(ring2, {e: E(int(c.to_list()[0]) if c.to_list() else 0)
                            for e, c in g.terms.items()}) for g in L]
        for s in _back_substitute(L2, ring2, E, ring.n - 1, {}):
            if all(len([c for c in x.to_list()[1:] if int(c)]) == 0 for x in s):
                continue
            key = tuple(tuple(int(c) for c in x.to_list()) for x in s)
            if key in seen:
                continue
            seen.add(key)
            out.append(s)
        if out:
            break
    return out
