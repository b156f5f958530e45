"""Weil functions, the theta-group cocycle, Weil pairings and normal Weil sets.

For a torsion class P on the hyperelliptic Jacobian, ``eta(P, N)`` builds

    g_P = (det f_i^{D_P}(z_j) / det f_i^{D_0}(z_j))^N * prod_i h^{E_P}(z_i)

with D_P = E_P + 2(oo), D_0 = 5(oo).  Seen as a function of
z = [E_z - 3(oo)] it has divisor N W_P - N W; the Weil function attached to P
in the theta group is f_P = eta_{-P}.

Evaluation at a reduced divisor (U, W) of degree 3 is done algebraically in
k[x]/(U) with y -> W: the determinant ratio is the x^2 coefficient of the
third basis function reduced mod U, and the product of h over the points is a
product of norms.  This needs no splitting of U and is exact even when the
points of E_z coincide.  Tuples of explicit points can also be evaluated
through formal points at distinct local parameters (the t^0 coefficient of
the series value).
"""
from __future__ import annotations

import itertools

from .field import InsufficientPrecision, DivisionByNonUnit, elem_sqrt, NotASquare
from .hypercurve import (Degenerate, NotTorsion, PolyResidue, formal_point,
                         principal_function, weil_basis, series_det,
                         deform_divisor, FormalClass)


class PersistentDegeneracy(ArithmeticError):
    pass


class RootNotInField(ArithmeticError):
    pass


MAX_RETRIES = 64


class HyperWeilFunction:
    """eta_P at level N on the Jacobian of y^2 = f(x)."""

    def __init__(self, P, N):
        self.P = P
        self.N = N
        self.curve = P.curve
        self.h = principal_function(P, N)
        self.basis = weil_basis(P)

    def __repr__(self):
        return f"eta[{self.P}; N={self.N}]"

    def ratio(self, z):
        """det f^{D_P} / det f^{D_0} at the points of z."""
        if self.P.degree <= 1:
            return self.curve.K.one
        alg = PolyResidue(z.u)
        f3 = self.basis[2].in_residue(alg, alg.from_poly(z.v))
        return alg.coeffs(f3)[2]

    def eval(self, z):
        """Value at z, a reduced class of degree 3 given as a MumfordDiv.

        When a factor of the formula vanishes or has a pole on E_z the value
        is taken along a formal deformation z(t) instead."""
        if z.degree != 3:
            raise Degenerate("z lies on the polar divisor")
        K = self.curve.K
        if self.P.is_zero():
            return K.one
        if isinstance(z, FormalClass):
            return self._eval_residue(*z.residue())
        try:
            return self.eval_algebraic(z)
        except Degenerate:
            return self.eval_deformed(z)

    def eval_algebraic(self, z):
        K = self.curve.K
        alg = PolyResidue(z.u)
        r = self.ratio(z)
        hv = self.h.eval_divisor(alg, alg.from_poly(z.v)) if len(self.h) else K.one
        return r ** self.N * hv

    def eval_deformed(self, z, prec=8, direction=None):
        K = self.curve.K
        if direction is None:
            direction = [K(1), K(3), K(7)]
        while True:
            try:
                alg, W = deform_divisor(z, direction, prec)
                val = self._eval_residue(alg, W)
                v = val.valuation()
                if v is None:
                    raise InsufficientPrecision("value is O(t^n)")
                if v < 0:
                    raise Degenerate("pole at z")
                return val.coeff(0)
            except (InsufficientPrecision, DivisionByNonUnit):
                if prec >= 64:
                    raise PersistentDegeneracy("deformed evaluation does not settle")
                prec *= 2

    def _eval_residue(self, alg, W):
        if self.P.degree <= 1:
            ratio = None
        else:
            f3 = self.basis[2].in_residue(alg, W)
            ratio = alg.coeffs(f3)[2]
        val = self.h.eval_divisor(alg, W) if len(self.h) else None
        if ratio is not None:
            r = ratio ** self.N
            val = r if val is None else val * r
        return val

    def eval_tuple(self, pts, cs=None, prec=None):
        """Value at an explicit tuple of three points of C, possibly repeated,
        Weierstrass or "oo", through formal points c_j t."""
        K = self.curve.K
        if cs is None:
            cs = [K(1), K(2), K(3)]
        prec = prec or 8
        while True:
            try:
                return self._eval_formal(pts, cs, prec)
            except (InsufficientPrecision, DivisionByNonUnit):
                if prec > 64:
                    raise PersistentDegeneracy("formal evaluation does not settle")
                prec *= 2

    def eval_series(self, fps):
        """The series value at formal points (before taking t = 0)."""
        rows_P = [[b.eval_point(fp.X, fp.Y) for fp in fps] for b in self.basis]
        rows_0 = [[_pow_series(fp.X, i) for fp in fps] for i in range(3)]
        ratio = series_det(rows_P) / series_det(rows_0)
        val = ratio ** self.N
        if len(self.h):
            for fp in fps:
                val = val * self.h.eval_point(fp.X, fp.Y)
        return val

    def _eval_formal(self, pts, cs, prec):
        fps = [formal_point(self.curve, p, c, prec) for p, c in zip(pts, cs)]
        if self.P.is_zero():
            return self.curve.K.one
        val = self.eval_series(fps)
        v = val.valuation()
        if v is None:
            raise InsufficientPrecision("value known only to be O(t^n)")
        if v < 0:
            raise Degenerate("pole at the tuple")
        return val.coeff(0)


def _pow_series(s, i):
    return s ** i


def eta(P, N):
    return HyperWeilFunction(P, N)


# ----------------------------------------------------------------------------
# groups of torsion points indexed by coordinates


class TorsionGroup:
    """The group generated by ``gens``, each of order ``N``; elements are
    indexed by coordinate tuples in (Z/N)^r."""

    def __init__(self, gens, N, zero):
        self.gens = list(gens)
        self.N = N
        self.r = len(gens)
        self.zero = zero
        self.elements = {}
        for coords in itertools.product(range(N), repeat=self.r):
            acc = zero
            for c, g in zip(coords, gens):
                if c:
                    acc = acc + c * g
            self.elements[coords] = acc

    def coords(self):
        return list(self.elements)

    def __getitem__(self, c):
        return self.elements[tuple(x % self.N for x in c)]

    def add(self, a, b):
        return tuple((x + y) % self.N for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.N for x in a)

    def scale(self, n, a):
        return tuple((n * x) % self.N for x in a)


class WeilSet:
    """Weil functions f_P for the elements of a TorsionGroup.

    ``func(P)`` returns an object with ``eval(z)`` whose divisor is
    N T_P^* W - N W; ``add`` adds a torsion point to a Jacobian point;
    ``sample(rng)`` draws a random Jacobian point.
    """

    def __init__(self, group, func, sample, d=None, power=1):
        self.G = group
        self.power = power
        self.N = group.N
        self.funcs = {c: func(group[c], c) for c in group.coords()}
        self.sample = sample
        self.d = d or (lambda a, b: 1)
        self.alpha = None
        self._cache = {}

    def f(self, c, z):
        key = (c, z.key())
        if key not in self._cache:
            self._cache[key] = self.funcs[c].eval(z)
        return self._cache[key]

    def ft(self, c, z):
        """Normalized value alpha_P f_P(z)."""
        return self.alpha[c] * self.f(c, z)

    def _retry(self, rng, fn):
        last = None
        for _ in range(MAX_RETRIES):
            z = self.sample(rng)
            try:
                v = fn(z)
            except (Degenerate, ZeroDivisionError, DivisionByNonUnit) as exc:
                last = exc
                continue
            if v is not None:
                return v
        raise PersistentDegeneracy(str(last))

    def raw_cocycle(self, a, b, rng, z=None):
        """d(P,Q) = f_P T_P^* f_Q / f_{P+Q} (a constant)."""
        G = self.G

        def at(z):
            num = self.f(a, z) * self.f(b, z + G[a])
            den = self.f(G.add(a, b), z)
            if num.is_zero() or den.is_zero():
                return None
            return num / den
        return at(z) if z is not None else self._retry(rng, at)

    def gamma(self, a, b, rng, z=None):
        """gamma(P,Q) = d_N(P,Q) f_{P+Q} / (f_P T_P^* f_Q), with the quotient
        raised to ``power`` (used for pushed-forward sets)."""
        return self.d(a, b) * self.raw_cocycle(a, b, rng, z).inverse() ** self.power

    def pairing(self, a, b, rng):
        """e_N(P,Q) = d(P,Q)/d(Q,P), evaluated at a common point."""
        def at(z):
            x = self.raw_cocycle(a, b, rng, z)
            y = self.raw_cocycle(b, a, rng, z)
            if x is None or y is None:
                return None
            return x / y
        e = self._retry(rng, at)
        if e ** self.N != e ** 0:
            raise ArithmeticError("pairing value is not an N-th root of unity")
        return e

    def normalize_symmetric(self, rng):
        """Root-free symmetric normalization for odd N:
        alpha_P = alpha_P^N / (alpha_P^2)^((N-1)/2)."""
        N = self.N
        if N % 2 == 0:
            raise ValueError("symmetric formula needs odd N")
        G = self.G
        alpha = {}
        for c in G.coords():
            if not any(c):
                alpha[c] = self._one()
                continue
            aN = self._one()
            for j in range(1, N):
                aN = aN * self.gamma(c, G.scale(j, c), rng)
            mc = G.neg(c)

            def sq(z):
                # gamma(P,-P) f_{-P}(z) / f_P(-z)
                g = self.gamma(c, mc, rng, z)
                den = self.f(c, -z)
                if den.is_zero():
                    return None
                return g * self.f(mc, z) / den
            a2 = self._retry(rng, sq)
            alpha[c] = aN / a2 ** ((N - 1) // 2)
        self.alpha = alpha
        return alpha

    def normalize_recurrence(self, rng):
        """Normalization along the generators: alpha_{P_i}^N is a product of
        cocycle values and one root is picked per generator (deterministic
        root for N = 2), then alpha propagates along cyclic subgroups."""
        N = self.N
        G = self.G
        r = G.r
        alpha = {tuple([0] * r): self._one()}
        basis = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
        known = [tuple([0] * r)]
        for i, e in enumerate(basis):
            aN = self._one()
            for j in range(1, N):
                aN = aN * self.gamma(e, G.scale(j, e), rng)
            ae = _nth_root(aN, N)
            # alpha on <e>
            cyc = {tuple([0] * r): self._one(), e: ae}
            cur = e
            for j in range(1, N - 1):
                nxt = G.add(cur, e)
                cyc[nxt] = cyc[cur] * ae / self.gamma(cur, e, rng)
                cur = nxt
            new = []
            for P in known:
                for j in range(N):
                    jP = G.scale(j, e)
                    Q = G.add(P, jP)
                    if Q in alpha:
                        continue
                    alpha[Q] = cyc[jP] * alpha[P] / self.gamma(jP, P, rng)
                    new.append(Q)
            known += new
        self.alpha = alpha
        return alpha

    def check_normal(self, a, b, rng, z=None):
        """f~_P T_P^* f~_Q == d_N(P,Q) f~_{P+Q} at a point."""
        G = self.G

        def at(z):
            lhs = self.ft(a, z) * self.ft(b, z + G[a])
            rhs = self.d(a, b) * self.ft(G.add(a, b), z)
            return lhs == rhs
        return at(z) if z is not None else self._retry(rng, at)

    def _one(self):
        f = next(iter(self.funcs.values()))
        return f.curve.K.one if hasattr(f, "curve") else f.K.one


def _nth_root(a, N):
    if N == 1:
        return a
    if N == 2:
        try:
            return elem_sqrt(a)
        except NotASquare as exc:
            raise RootNotInField(str(exc))
    raise RootNotInField("roots of order > 2 are not needed here")


def hyper_weil_set(gens, N, curve, d=None, power=1):
    """Weil set {f_P = eta_{-P}} on <gens> at level N for a hyperelliptic
    Jacobian."""
    G = TorsionGroup(gens, N, curve.zero())
    for g in gens:
        if not (N * g).is_zero():
            raise NotTorsion(f"generator is not {N}-torsion")

    def func(P, c):
        return HyperWeilFunction(-P, N)
    return WeilSet(G, func, lambda rng: curve.random_divisor(rng), d, power)


def weil_pairing(P, Q, N, rng):
    """e_N(P, Q) from the cocycle of the Weil set on <P, Q>."""
    C = P.curve
    for X in (P, Q):
        if not (N * X).is_zero():
            raise NotTorsion(f"point is not {N}-torsion")
    G = TorsionGroup([P, Q], N, C.zero())

    def func(X, c):
        return HyperWeilFunction(-X, N)
    ws = WeilSet(G, func, lambda r: C.random_divisor(r))
    return ws.pairing((1, 0), (0, 1), rng)
