"""Genus-3 hyperelliptic curves y^2 = f(x), deg f = 7, and their Jacobians.

Classes are stored in Mumford form (u, v).  Addition is Cantor's algorithm;
every composition and reduction step also records the rational function
relating input and output divisors, which gives Miller functions for free.

Conventions: O = oo and theta = 2(oo), so a point z of the Jacobian is the
class [E_z - 3(oo)] of an effective degree-3 divisor padded with copies of oo.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .field import (ExtField, Series, elem_sqrt, poly_factor, resultant,
                    InsufficientPrecision,
                    lex_key, poly_at_series)


class CurveError(ValueError):
    pass


class NotTorsion(CurveError):
    pass


class OddSubset(CurveError):
    pass


class UnsupportedDivisor(CurveError):
    pass


class Degenerate(ArithmeticError):
    """An evaluation hit a zero or pole of one of its factors."""


# ----------------------------------------------------------------------------
# tracked products of functions a(x) + b(x) y


class TrackedFunc:
    """A product of factors (a(x) + b(x) y)^e kept in factored form."""

    def __init__(self, factors=None):
        self.factors = {}
        for a, b, e in factors or ():
            self._add(a, b, e)

    @staticmethod
    def _key(a, b):
        return (tuple(tuple(lex_key(c)) for c in a.coeffs()),
                tuple(tuple(lex_key(c)) for c in b.coeffs()))

    def _add(self, a, b, e):
        if e == 0 or (b.is_zero() and a.degree() == 0):
            return
        if a.is_zero() and b.is_zero():
            raise ZeroDivisionError("zero factor")
        k = self._key(a, b)
        if k in self.factors:
            a0, b0, e0 = self.factors[k]
            if e0 + e == 0:
                del self.factors[k]
            else:
                self.factors[k] = (a0, b0, e0 + e)
        else:
            self.factors[k] = (a, b, e)

    def __mul__(self, other):
        out = TrackedFunc()
        out.factors = dict(self.factors)
        for a, b, e in other.factors.values():
            out._add(a, b, e)
        return out

    def __pow__(self, n):
        out = TrackedFunc()
        for a, b, e in self.factors.values():
            out._add(a, b, e * n)
        return out

    def items(self):
        return list(self.factors.values())

    def __len__(self):
        return len(self.factors)

    def eval_point(self, x, y):
        """Value at an affine point (field elements or series)."""
        val = None
        for a, b, e in self.factors.values():
            if isinstance(x, Series):
                t = poly_at_series(a, x)
                if not b.is_zero():
                    t = t + poly_at_series(b, x) * y
            else:
                t = a(x) + b(x) * y
                if t.is_zero():
                    raise Degenerate("factor vanishes at point")
            t = t ** e if e > 0 else t.inverse() ** (-e)
            val = t if val is None else val * t
        return val

    def eval_divisor(self, alg, W):
        """Product of the values over the points of an effective divisor,
        computed as norms in the residue algebra ``alg`` = k[x]/(U)."""
        val = None
        for a, b, e in self.factors.values():
            el = alg.from_poly(a)
            if not b.is_zero():
                el = alg.add(el, alg.mul(alg.from_poly(b), W))
            n = alg.norm(el)
            alg.check_nonzero(n)
            t = n ** e if e > 0 else alg.inv_scalar(n) ** (-e)
            val = t if val is None else val * t
        return val

    def divisor_degree_check(self):
        return sum(e for _, _, e in self.factors.values())


# ----------------------------------------------------------------------------
# residue algebras k[x]/(U)


class PolyResidue:
    """k[x]/(U) for U monic over a field, elements are flint polynomials."""

    def __init__(self, U):
        self.U = U
        self.R = U.context()
        self.n = U.degree()

    def from_poly(self, a):
        return a % self.U

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return (a * b) % self.U

    def inv(self, a):
        g, s, _ = a.xgcd(self.U)
        if g.degree() != 0:
            raise Degenerate("element is not invertible modulo U")
        return (s / g.coeffs()[0]) % self.U

    def norm(self, a):
        if a.is_zero():
            return self.R.base_field().zero()
        return resultant(self.U, a)

    def coeffs(self, a):
        c = list(a.coeffs())
        z = self.R.base_field().zero()
        return c + [z] * (self.n - len(c))

    @staticmethod
    def is_zero_scalar(s):
        return s.is_zero()

    @staticmethod
    def check_nonzero(s):
        if s.is_zero():
            raise Degenerate("factor vanishes on the divisor")

    @staticmethod
    def inv_scalar(s):
        return s.inverse()


class SeriesResidue:
    """k((t))[x]/(U) for U monic with Laurent series coefficients."""

    def __init__(self, U, K):
        # U: list of Series, constant term first, monic (last entry 1)
        self.U = U
        self.n = len(U) - 1
        self.K = K

    def _reduce(self, c):
        c = list(c)
        n = self.n
        for k in range(len(c) - 1, n - 1, -1):
            lead = c[k]
            if lead is None:
                continue
            for i in range(n):
                if c[k - n + i] is None:
                    c[k - n + i] = -(lead * self.U[i])
                else:
                    c[k - n + i] = c[k - n + i] - lead * self.U[i]
        out = c[:n]
        return out + [None] * (n - len(out))

    def from_poly(self, a):
        """Embed a polynomial with field (or series) coefficients."""
        if isinstance(a, list):
            return self._reduce(a)
        coeffs = a.coeffs()
        return self._reduce([self._const(c) for c in coeffs])

    def _const(self, c):
        if isinstance(c, Series):
            return c
        return Series(self.K.R([c]), 10 ** 6, 0)

    def add(self, a, b):
        return [x if y is None else y if x is None else x + y for x, y in zip(a, b)]

    def sub(self, a, b):
        return self.add(a, [None if y is None else -y for y in b])

    def mul(self, a, b):
        n = self.n
        c = [None] * (2 * n - 1)
        for i, x in enumerate(a):
            if x is None:
                continue
            for j, y in enumerate(b):
                if y is None:
                    continue
                c[i + j] = x * y if c[i + j] is None else c[i + j] + x * y
        return self._reduce(c)

    def matrix(self, a):
        cols = []
        xk = a
        X = [None] * self.n
        if self.n > 1:
            X[1] = self._const(self.K.one)
        else:
            X = self._reduce([None, self._const(self.K.one)])
        for k in range(self.n):
            cols.append(xk)
            xk = self.mul(xk, X)
        zero = Series(self.K.R([]), 10 ** 6, 0)
        return [[cols[j][i] if cols[j][i] is not None else zero
                 for j in range(self.n)] for i in range(self.n)]

    def norm(self, a):
        return series_det(self.matrix(a))

    def inv(self, a):
        M = self.matrix(a)
        one = self._const(self.K.one)
        e = [one] + [Series(self.K.R([]), 10 ** 6, 0)] * (self.n - 1)
        return series_solve(M, e)

    def coeffs(self, a):
        zero = Series(self.K.R([]), 10 ** 6, 0)
        return [zero if c is None else c for c in a]

    @staticmethod
    def is_zero_scalar(s):
        return s.valuation() is None

    @staticmethod
    def check_nonzero(s):
        if s.valuation() is None:
            raise InsufficientPrecision("norm is O(t^n)")

    @staticmethod
    def inv_scalar(s):
        return s.inverse()


def _series_pivot(col):
    best, bv = None, None
    for i, s in col:
        v = s.valuation()
        if v is not None and (bv is None or v < bv):
            best, bv = i, v
    return best


def series_det(M):
    M = [list(r) for r in M]
    n = len(M)
    det = None
    sign = 1
    for k in range(n):
        p = _series_pivot([(i, M[i][k]) for i in range(k, n)])
        if p is None:
            return Series(M[0][0].c * 0, M[0][0].prec, 0)
        if p != k:
            M[k], M[p] = M[p], M[k]
            sign = -sign
        piv = M[k][k]
        det = piv if det is None else det * piv
        inv = piv.inverse()
        for i in range(k + 1, n):
            if M[i][k].valuation() is None:
                continue
            fct = M[i][k] * inv
            for j in range(k + 1, n):
                M[i][j] = M[i][j] - fct * M[k][j]
    return det if sign == 1 else -det


def series_solve(M, b):
    M = [list(r) + [bb] for r, bb in zip(M, b)]
    n = len(M)
    for k in range(n):
        p = _series_pivot([(i, M[i][k]) for i in range(k, n)])
        if p is None:
            raise Degenerate("singular series system")
        M[k], M[p] = M[p], M[k]
        inv = M[k][k].inverse()
        M[k] = [c * inv for c in M[k]]
        for i in range(n):
            if i != k and M[i][k].valuation() is not None:
                fct = M[i][k]
                M[i] = [c - fct * d for c, d in zip(M[i], M[k])]
    return [M[i][n] for i in range(n)]


# ----------------------------------------------------------------------------
# the curve


class HyperCurve:
    """y^2 = f(x) with f monic of degree 7 over an ExtField."""

    def __init__(self, K: ExtField, f_coeffs):
        self.K = K
        self.R = K.R
        self.f = K.poly(f_coeffs)
        if self.f.degree() != 7:
            raise CurveError("f must have degree 7")
        if not self.f.is_monic():
            raise CurveError("f must be monic")
        if self.f.gcd(self.f.derivative()).degree() > 0:
            raise CurveError("f is not squarefree")
        self.genus = 3
        self._roots = None

    def __repr__(self):
        return f"HyperCurve(y^2 = {self.f})"

    def x(self):
        return self.K.x()

    def zero(self):
        return MumfordDiv(self, self.R([1]), self.R([]))

    def mumford(self, u, v):
        u = u if not isinstance(u, list) else self.K.poly(u)
        v = v if not isinstance(v, list) else self.K.poly(v)
        D = MumfordDiv(self, u, v)
        D.check()
        return D

    def is_on_curve(self, x, y):
        return y * y == self.f(x)

    def point_divisor(self, x, y):
        """The class [(x, y) - (oo)]."""
        if not self.is_on_curve(x, y):
            raise CurveError("point not on curve")
        X = self.x()
        return MumfordDiv(self, X - x, self.R([y]))

    def random_point(self, rng):
        while True:
            x = self.K.random(rng)
            fx = self.f(x)
            if fx.is_zero() or not fx.is_square():
                continue
            y = elem_sqrt(fx)
            if rng.randrange(2):
                y = -y
            return x, y

    def random_divisor(self, rng, degree=3):
        """A random class with reduced Mumford representative of the given
        degree, built from distinct x-coordinates."""
        while True:
            pts = [self.random_point(rng) for _ in range(degree)]
            xs = [p[0] for p in pts]
            if len(set(tuple(lex_key(x)) for x in xs)) < degree:
                continue
            return self.divisor_from_points(pts)

    def divisor_from_points(self, pts):
        """Mumford form of sum (P_i) - n(oo) for points with distinct x."""
        from .field import interpolate
        X = self.x()
        u = self.R([1])
        for x, _ in pts:
            u = u * (X - x)
        if not pts:
            return self.zero()
        v = interpolate(self.R, [p[0] for p in pts], [p[1] for p in pts])
        return self.mumford(u, v)

    def weierstrass_roots(self):
        """Affine branch points, sorted by coefficient vector; they must be
        defined over the base field."""
        if self._roots is None:
            rs = []
            for g, m in poly_factor(self.f):
                if g.degree() != 1:
                    raise CurveError("f does not split over the field")
                rs.append(-g.coeffs()[0])
            rs.sort(key=lex_key)
            self._roots = rs
        return self._roots

    def to_json(self):
        d = self.K.to_json()
        d["f"] = [self.K.to_ints(c) for c in _padded(self.f, 8, self.K)]
        return d

    @classmethod
    def from_json(cls, d):
        K = ExtField.from_json(d)
        return cls(K, [K.from_ints(c) for c in d["f"]])


def _padded(p, n, K):
    c = list(p.coeffs())
    return c + [K.zero] * (n - len(c))


# ----------------------------------------------------------------------------
# Mumford divisors and Cantor's algorithm


@dataclass(frozen=True, eq=False)
class MumfordDiv:
    curve: HyperCurve
    u: object
    v: object

    def check(self):
        if not self.u.is_monic():
            raise CurveError("u must be monic")
        if self.u.degree() > 3:
            raise CurveError("u has degree > 3")
        if not self.v.is_zero() and self.v.degree() >= self.u.degree():
            raise CurveError("deg v must be < deg u")
        if not ((self.v * self.v - self.curve.f) % self.u).is_zero():
            raise CurveError("u does not divide v^2 - f")

    @property
    def degree(self):
        return self.u.degree()

    def is_zero(self):
        return self.u.degree() == 0

    def __eq__(self, other):
        return (isinstance(other, MumfordDiv) and self.u == other.u
                and self.v == other.v)

    def __hash__(self):
        return hash((str(self.u), str(self.v)))

    def __repr__(self):
        return f"({self.u}, {self.v})"

    def __neg__(self):
        return MumfordDiv(self.curve, self.u, -self.v)

    def __add__(self, other):
        return cantor_add(self, other)

    def __sub__(self, other):
        return cantor_add(self, -other)

    def __rmul__(self, n):
        return scalar_mul(self, n)

    def __mul__(self, n):
        return scalar_mul(self, n)

    def key(self):
        K = self.curve.K
        return (tuple(tuple(K.to_ints(c)) for c in self.u.coeffs()),
                tuple(tuple(K.to_ints(c)) for c in self.v.coeffs()))

    def to_json(self):
        K = self.curve.K
        return {"u": [K.to_ints(c) for c in self.u.coeffs()],
                "v": [K.to_ints(c) for c in self.v.coeffs()]}

    @classmethod
    def from_json(cls, curve, d):
        K = curve.K
        u = K.poly([K.from_ints(c) for c in d["u"]])
        v = K.poly([K.from_ints(c) for c in d["v"]])
        return curve.mumford(u, v)


def _compose(a, b):
    """Cantor composition; returns (u, v, d) with d(x) the factor satisfying
    div d = (E_a - n_a oo) + (E_b - n_b oo) - (E - n oo)."""
    f = a.curve.f
    u1, v1, u2, v2 = a.u, a.v, b.u, b.v
    d0, e1, e2 = u1.xgcd(u2)
    if d0.degree() == 0:
        c = d0.coeffs()[0].inverse()
        d, s1, s2 = d0 * c, e1 * c, e2 * c
        u = u1 * u2
        v = (s1 * u1 * v2 + s2 * u2 * v1) % u
        return u, v, d
    d, c1, c2 = d0.xgcd(v1 + v2)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    u = (u1 * u2) // (d * d)
    num = s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + f)
    v = (num // d) % u
    return u, v, d


def _reduce_step(curve, u, v):
    f = curve.f
    u2 = ((f - v * v) // u).monic()
    v2 = (-v) % u2
    return u2, v2


def cantor_add_tracked(a, b):
    """Sum of two classes and the function phi with
    div phi = (E_a - n_a oo) + (E_b - n_b oo) - (E_c - n_c oo)."""
    curve = a.curve
    R = curve.R
    zero = R([])
    u, v, d = _compose(a, b)
    phi = TrackedFunc([(d, zero, 1)]) if d.degree() > 0 else TrackedFunc()
    while u.degree() > 3:
        u2, v2 = _reduce_step(curve, u, v)
        phi = phi * TrackedFunc([(-v, R([1]), 1), (u2, zero, -1)])
        u, v = u2, v2
    u = u.monic() if u.degree() >= 0 else u
    return MumfordDiv(curve, u, v % u if u.degree() > 0 else zero), phi


def cantor_add(a, b):
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    curve = a.curve
    u, v, _ = _compose(a, b)
    while u.degree() > 3:
        u, v = _reduce_step(curve, u, v)
    return MumfordDiv(curve, u, v % u if u.degree() > 0 else curve.R([]))


def scalar_mul(a, n):
    if n < 0:
        return scalar_mul(-a, -n)
    out = a.curve.zero()
    base = a
    while n:
        if n & 1:
            out = cantor_add(out, base)
        base = cantor_add(base, base)
        n >>= 1
    return out


def miller(a, n):
    """(n a, h) with div h = n (E_a - deg(u_a) oo) - (E_{na} - deg oo)."""
    if n <= 0:
        raise ValueError("n must be positive")
    acc, h = None, TrackedFunc()
    base, hb = a, TrackedFunc()
    while n:
        if n & 1:
            if acc is None:
                acc, h = base, hb
            else:
                acc, phi = cantor_add_tracked(acc, base)
                h = h * hb * phi
        n >>= 1
        if n:
            base, phi = cantor_add_tracked(base, base)
            hb = hb * hb * phi
    return acc, h


def principal_function(P, N):
    """h with div h = N (E_P - (O) - theta), built along a double-and-add
    chain; E_P is the Mumford divisor of P padded with copies of oo."""
    if P.is_zero():
        return TrackedFunc()
    Q, h = miller(P, N)
    if not Q.is_zero():
        raise NotTorsion(f"{N} * P != 0")
    return h


# ----------------------------------------------------------------------------
# Riemann-Roch on C


@dataclass
class RRFunction:
    """The function (F(x) + G(x) y) / den(x)."""
    F: object
    G: object
    den: object

    def eval_point(self, x, y):
        if isinstance(x, Series):
            num = poly_at_series(self.F, x) + poly_at_series(self.G, x) * y
            return num / poly_at_series(self.den, x)
        d = self.den(x)
        if d.is_zero():
            raise Degenerate("pole of basis function")
        return (self.F(x) + self.G(x) * y) / d

    def in_residue(self, alg, W):
        num = alg.add(alg.from_poly(self.F), alg.mul(alg.from_poly(self.G), W))
        if self.den.degree() == 0:
            c = self.den.coeffs()[0]
            return alg.mul(num, alg.from_poly(self.den.context()([c.inverse()])))
        return alg.mul(num, alg.inv(alg.from_poly(self.den)))


def rr_basis(curve, A, m):
    """Basis of L(E_A + m (oo)) for an affine effective divisor E_A given in
    Mumford form.

    Functions are (F + G y)/u_A with F + G y of pole order at most
    m + 2 deg u_A at oo and vanishing on the conjugate divisor (u_A, -v_A).
    """
    from .linalg import kernel
    K = curve.K
    R = curve.R
    a = A.degree
    bound = m + 2 * a
    if bound < 0:
        return []
    mons = []
    for i in range(bound // 2 + 1):
        mons.append((i, 0))
    for j in range((bound - 7) // 2 + 1 if bound >= 7 else 0):
        mons.append((j, 1))
    rows = []
    # conditions: F(x) - G(x) v_A(x) == 0 mod u_A
    cols = []
    X = R.gen()
    for i, kind in mons:
        if kind == 0:
            p = X ** i
        else:
            p = -(X ** i) * A.v
        r = p % A.u if a > 0 else R([])
        c = list(r.coeffs())
        cols.append(c + [K.zero] * (a - len(c)))
    for k in range(a):
        rows.append([cols[j][k] for j in range(len(mons))])
    if rows:
        ker = kernel(rows, K, len(mons))
    else:
        ker = [[K.one if i == j else K.zero for i in range(len(mons))]
               for j in range(len(mons))]
    out = []
    for vec in ker:
        F = R([])
        G = R([])
        for c, (i, kind) in zip(vec, mons):
            if c.is_zero():
                continue
            if kind == 0:
                F = F + c * X ** i
            else:
                G = G + c * X ** i
        out.append(RRFunction(F, G, A.u))
    return out


def weil_basis(P):
    """Basis of L(D_P) with D_P = E_P + 2(oo), in the canonical shape."""
    curve = P.curve
    R = curve.R
    X = R.gen()
    one = R([1])
    zero = R([])
    if P.degree <= 1:
        return [RRFunction(one, zero, one), RRFunction(X, zero, one),
                RRFunction(X * X, zero, one)]
    return [RRFunction(one, zero, one), RRFunction(X, zero, one),
            RRFunction(P.v, one, P.u)]


# ----------------------------------------------------------------------------
# formal points


@dataclass
class FormalPoint:
    X: Series
    Y: Series
    center: tuple
    c: object


def formal_point(curve, P, c, prec):
    """Formal point near P whose local parameter equals c t.

    P is (x, y) or the string "oo".  The local parameter is x - x0 at
    ordinary affine points, y at Weierstrass points and x^3/y at infinity.
    """
    K = curve.K
    R = curve.R
    f = curve.f
    if P == "oo":
        # x = s^-2, y = s^-7 sqrt(s^14 f(s^-2)) with s = c t
        coeffs = [K.zero] * 15
        for i in range(8):
            coeffs[14 - 2 * i] = f[i]
        root = _scale_series(Series.from_poly(R(coeffs), prec).sqrt(), c)
        X = Series(R([c ** -2]), prec, -2)
        Y = Series(root.c * (c ** -7), root.prec, -7)
        return FormalPoint(X, Y, P, c)
    x0, y0 = P
    if y0.is_zero():
        # Y = c t, solve f(X) = c^2 t^2 by Newton
        Y = Series.from_poly(R([K.zero, c]), prec)
        X = Series.from_poly(R([x0]), prec)
        target = Y * Y
        df = f.derivative()
        n = 1
        while True:
            X = X - (poly_at_series(f, X) - target) / poly_at_series(df, X)
            n *= 2
            if n >= 2 * prec:
                break
        return FormalPoint(X, Y, P, c)
    X = Series.from_poly(R([x0, c]), prec)
    Y = poly_at_series(f, X).sqrt()
    if Y.c[0] != y0:
        Y = -Y
    return FormalPoint(X, Y, P, c)


def _scale_series(s, c):
    """s(c t) for a series s in t."""
    out = []
    p = c ** s.val if s.val >= 0 else (c ** -s.val).inverse()
    for a in s.c.coeffs():
        out.append(a * p)
        p = p * c
    return Series(s.c.context()(out), s.prec, s.val)


# ----------------------------------------------------------------------------
# two-torsion from Weierstrass subsets


def two_torsion(curve, T):
    """The class [sum_{P in T} (P) - #T (oo)] for a bitmask T over the 8
    branch points (bits 0..6 the sorted affine roots, bit 7 oo)."""
    if bin(T).count("1") % 2:
        raise OddSubset(T)
    roots = curve.weierstrass_roots()
    A = T & 0x7F
    if bin(A).count("1") > 3:
        A = (~A) & 0x7F
    X = curve.x()
    u = curve.R([1])
    for i in range(7):
        if A >> i & 1:
            u = u * (X - roots[i])
    return MumfordDiv(curve, u, curve.R([]))


def affine_mask(curve, D):
    """The even-size subset of affine roots representing a 2-torsion class."""
    roots = curve.weierstrass_roots()
    if not D.v.is_zero():
        raise CurveError("not a 2-torsion class")
    m = 0
    for i, r in enumerate(roots):
        if D.u(r).is_zero():
            m |= 1 << i
    if bin(m).count("1") % 2:
        m = (~m) & 0x7F
    return m


def two_torsion_pairing_combinatorial(T1, T2):
    """(-1)^{#(T1 & T2)} for even affine subsets."""
    return -1 if bin(T1 & T2 & 0x7F).count("1") % 2 else 1


# ----------------------------------------------------------------------------
# formal deformations of Mumford divisors


def deform_divisor(D, direction, prec):
    """A formal curve z(t) in the Jacobian with z(0) = D.

    U(t) = u + t e(x) with deg e < deg u, and W(t) the Hensel lift of v with
    W^2 = f mod U(t).  Returns (alg, W) with alg = k((t))[x]/(U(t)).
    Requires v to be invertible modulo u (no Weierstrass point in D).
    """
    curve = D.curve
    K = curve.K
    R = K.R
    n = D.degree
    uc = list(D.u.coeffs())
    ec = list(direction) + [K.zero] * (n - len(direction))
    U = [Series(R([uc[i], ec[i]]), prec, 0) for i in range(n)]
    U.append(Series(R([K.one]), 10 ** 6, 0))
    alg = SeriesResidue(U, K)
    W = alg.from_poly(D.v)
    F = alg.from_poly(curve.f)
    two = alg.from_poly(R([K(2)]))
    k = 1
    while True:
        err = alg.sub(alg.mul(W, W), F)
        W = alg.sub(W, alg.mul(err, alg.inv(alg.mul(two, W))))
        k *= 2
        if k >= 2 * prec:
            break
    return alg, W


# ----------------------------------------------------------------------------
# formal classes [P(t) - oo] + D


def _sp_const(K, c, prec=10 ** 6):
    return Series(K.R([c]), prec, 0)


def _sp_mul(a, b, zero):
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _sp_divmod_monic(a, u):
    """Quotient and remainder of a by a monic u (lists of series)."""
    a = list(a)
    n = len(u) - 1
    q = [None] * max(len(a) - n, 1)
    for k in range(len(a) - 1, n - 1, -1):
        c = a[k]
        q[k - n] = c
        for i in range(n + 1):
            a[k - n + i] = a[k - n + i] - c * u[i]
    return q, a[:n]


class FormalClass:
    """The class [P(t) - oo] + D on J_C for a formal point P(t) and a fixed
    reduced class D of degree 3; U, V are lists of series (constant term
    first, U monic of degree 3)."""

    degree = 3
    _ids = itertools.count()

    def __init__(self, curve, fp, D):
        if D.degree != 3:
            raise Degenerate("offset class must have degree 3")
        K = curve.K
        self.curve = curve
        self.fp = fp
        self.D = D
        self._id = next(FormalClass._ids)
        X, Y = fp.X, fp.Y
        zero = _sp_const(K, K.zero)
        uX = poly_at_series(D.u, X)
        vX = poly_at_series(D.v, X)
        if uX.valuation() != 0:
            raise Degenerate("P(0) lies in the support of D")
        lam = (Y - vX) / uX
        uc = [_sp_const(K, c) for c in D.u.coeffs()]
        vc = [_sp_const(K, c) for c in D.v.coeffs()] + [zero] * 3
        V4 = [vc[i] + uc[i] * lam for i in range(4)]
        U4 = _sp_mul([-X, _sp_const(K, K.one)], uc, zero)
        f = [_sp_const(K, c) for c in curve.f.coeffs()]
        N = [f[i] - s for i, s in enumerate(_sp_mul(V4, V4, zero) + [zero])]
        U, rem = _sp_divmod_monic(N, U4)
        for r in rem:
            if r.valuation() is not None:
                raise InsufficientPrecision("composition is not exact")
        if U[3].coeff(0) != K.one:
            raise Degenerate("reduction did not give degree 3")
        lead = V4[3]
        self.U = U
        self.V = [lead * U[i] - V4[i] for i in range(3)]

    def key(self):
        return ("formal", self._id)

    def residue(self):
        alg = SeriesResidue(self.U, self.curve.K)
        return alg, alg.from_poly(self.V)

    def at_zero(self):
        """The class at t = 0."""
        K = self.curve.K
        return self.curve.mumford(K.poly([s.coeff(0) for s in self.U]),
                                  K.poly([s.coeff(0) for s in self.V]))
