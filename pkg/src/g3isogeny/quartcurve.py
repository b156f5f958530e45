"""Smooth plane quartics: divisors, Riemann-Roch spaces and Jacobian arithmetic.

All divisor computations happen in an affine chart (X, Y) obtained from the
model coordinates (x : y : z) by a random projective change of coordinates,
so that the finitely many special points in play (contact points of the
bitangents, the points at infinity of the model) are affine and in general
position with respect to the projection to X.

An effective divisor E of degree n is stored as a pair (u, w): u monic of
degree n in X, and Y - w(X) vanishing on E, i.e. the ideal of E in the chart
is (u(X), Y - w(X)).  This needs distinct X-coordinates for distinct points,
which holds in a generic chart; coincidences raise Degenerate.

Functions are quotients F/G of chart polynomials of the same "form degree";
only monomials X^i Y^j with j <= 3 are used, which represents functions
modulo the quartic uniquely.
"""
from __future__ import annotations

import random

from .field import (poly_roots, resultant, interpolate, crt_pair, poly_factor, lex_key,
                    Series, InsufficientPrecision, DivisionByNonUnit)
from .hypercurve import Degenerate, SeriesResidue
from .linalg import kernel, inverse, det as mat_det


class SingularQuartic(ArithmeticError):
    pass


class FormVanishesOnCurve(ArithmeticError):
    pass


class NonReducedInput(ValueError):
    pass


class NotTwoTorsion(ArithmeticError):
    pass


class UnsupportedDivisor(ValueError):
    pass


# graded lex order of the degree-4 monomials in (x, y, z)
MONOMIALS4 = [(i, j, 4 - i - j) for i in range(4, -1, -1) for j in range(4 - i, -1, -1)]


class PlaneQuartic:
    """A ternary quartic F(x, y, z) over an ExtField."""

    def __init__(self, K, coeffs):
        if len(coeffs) != 15:
            raise ValueError("a quartic has 15 coefficients")
        self.K = K
        self.coeffs = [K(c) if isinstance(c, int) else c for c in coeffs]

    @classmethod
    def from_mpoly(cls, F):
        K = F.ring.K
        return cls(K, [F.terms.get(e, K.zero) for e in MONOMIALS4])

    def to_mpoly(self, ring=None):
        from .algebra import PolyRing, MPoly
        ring = ring or PolyRing(self.K, ["x", "y", "z"])
        return MPoly(ring, dict(zip(MONOMIALS4, self.coeffs)))

    def __call__(self, x, y, z):
        out = self.K.zero
        for (i, j, k), c in zip(MONOMIALS4, self.coeffs):
            if not c.is_zero():
                out = out + c * x ** i * y ** j * z ** k
        return out

    def __eq__(self, other):
        return isinstance(other, PlaneQuartic) and self.coeffs == other.coeffs

    def proportional(self, other):
        i0 = next(i for i, c in enumerate(self.coeffs) if not c.is_zero())
        if other.coeffs[i0].is_zero():
            return False
        lam = other.coeffs[i0] / self.coeffs[i0]
        return all(a * lam == b for a, b in zip(self.coeffs, other.coeffs))

    def is_smooth(self):
        """No common zero of the three partial derivatives (Groebner bases in
        the three standard charts)."""
        from .algebra import PolyRing, groebner
        F = self.to_mpoly()
        K = self.K
        parts = []
        for v in range(3):
            t = {}
            for e, c in F.terms.items():
                if e[v]:
                    e2 = list(e)
                    e2[v] -= 1
                    t[tuple(e2)] = c * K(e[v])
            parts.append(t)
        R2 = PolyRing(K, ["a", "b"])
        from .algebra import MPoly
        # chart z = 1
        G = [MPoly(R2, _dehom(t, 2, (0, 1))) for t in parts]
        if _has_zero(groebner(G)):
            return False
        # z = 0, x = 1: (1 : y : 0)
        G = [MPoly(R2, _dehom_line(t)) for t in parts]
        if _has_zero(groebner([g for g in G if not g.is_zero()] or [R2.zero()])):
            return False
        # (0 : 1 : 0)
        vals = [t.get((0, 3, 0), K.zero) for t in parts]
        if all(v.is_zero() for v in vals):
            return False
        return True

    def to_json(self):
        return {"coeffs": [self.K.to_ints(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, K, d):
        return cls(K, [K.from_ints(c) for c in d["coeffs"]])


def _dehom(t, drop, keep):
    out = {}
    for e, c in t.items():
        k = (e[keep[0]], e[keep[1]])
        out[k] = out[k] + c if k in out else c
    return out


def _dehom_line(t):
    # points (1 : b : 0): keep only monomials without z, variable b <- y
    out = {}
    for e, c in t.items():
        if e[2] == 0:
            k = (0, e[1])
            out[k] = out[k] + c if k in out else c
    return out


def _has_zero(G):
    if not G:
        return True
    return not any(g.total_degree() == 0 and not g.is_zero() for g in G)


# ----------------------------------------------------------------------------
# bivariate helpers; a chart polynomial is a list of X-polynomials indexed by
# the power of Y


def _bv_trim(F):
    F = list(F)
    while F and F[-1].is_zero():
        F.pop()
    return F


def _bv_eval_y(F, w, u):
    """F(X, w(X)) mod u."""
    acc = None
    for c in reversed(F):
        acc = c % u if acc is None else (acc * w + c) % u
    return acc if acc is not None else u * 0


def _bv_at(F, x, y):
    acc = None
    for c in reversed(F):
        v = c(x)
        acc = v if acc is None else acc * y + v
    return acc


def _bv_eval_alg(F, alg, W):
    """F(X, W) in a residue algebra (PolyResidue or SeriesResidue)."""
    acc = None
    for c in reversed(F):
        cc = alg.from_poly(c)
        acc = cc if acc is None else alg.add(alg.mul(acc, W), cc)
    return acc


class Chart:
    """Affine chart of a plane quartic in coordinates (X, Y).

    Model coordinates are (x, y, z) = A (X, Y, 1); h(X, Y) is the quartic in
    the chart, scaled so the coefficient of Y^4 is 1."""

    def __init__(self, quartic, A):
        self.Q = quartic
        K = quartic.K
        self.K = K
        self.R = K.R
        self.A = [list(r) for r in A]
        self.Ainv = inverse(self.A, K)
        # model coordinates as chart polynomials (Y-lists)
        self.coord = [self.linear(r) for r in self.A]
        h = self.form(quartic.to_mpoly())
        if len(h) != 5 or h[4].degree() != 0:
            raise Degenerate("chart is not generic: Y^4 coefficient")
        c = h[4].coeffs()[0].inverse()
        self.h = [p * c for p in h]
        self.hY = [self.h[j] * K(j) for j in range(1, 5)]

    @classmethod
    def random(cls, quartic, rng):
        K = quartic.K
        while True:
            A = [[K.random(rng) for _ in range(3)] for _ in range(3)]
            if mat_det(A, K).is_zero():
                continue
            try:
                return cls(quartic, A)
            except Degenerate:
                continue

    def linear(self, coeffs):
        """Chart polynomial of the model linear form a x + b y + c z given
        through the row (a, b, c) applied to A (X, Y, 1)."""
        R = self.R
        a, b, c = coeffs
        return _bv_trim([R([c, a]), R([b])])

    def form(self, G):
        """Chart polynomial of a homogeneous model form G (an MPoly in x, y, z)."""
        R = self.R
        K = self.K
        # x, y, z as chart polynomials: rows of A applied to (X, Y, 1)
        lin = []
        for r in self.A:
            lin.append({(1, 0): r[0], (0, 1): r[1], (0, 0): r[2]})
        out = {}
        cache = {}

        def power(i, k):
            if (i, k) not in cache:
                if k == 0:
                    cache[(i, k)] = {(0, 0): K.one}
                else:
                    cache[(i, k)] = _dmul(power(i, k - 1), lin[i])
            return cache[(i, k)]
        for e, c in G.terms.items():
            t = _dmul(_dmul(power(0, e[0]), power(1, e[1])), power(2, e[2]))
            for m, v in t.items():
                out[m] = out[m] + c * v if m in out else c * v
        dY = max((m[1] for m in out), default=-1)
        F = []
        for j in range(dY + 1):
            dX = max((m[0] for m in out if m[1] == j), default=-1)
            F.append(R([out.get((i, j), K.zero) for i in range(dX + 1)]))
        return _bv_trim(F)

    def reduce(self, F):
        """F modulo h (Y-degree below 4)."""
        F = list(F)
        while len(F) > 4:
            c = F.pop()
            for j in range(4):
                F[len(F) - 4 + j] = F[len(F) - 4 + j] - c * self.h[j]
        return _bv_trim(F)

    def at(self, F, X, Y):
        return _bv_at(F, X, Y)

    def on_curve(self, X, Y):
        return _bv_at(self.h, X, Y).is_zero()

    # points
    def to_chart(self, pt):
        x, y, z = pt
        v = [self.Ainv[i][0] * x + self.Ainv[i][1] * y + self.Ainv[i][2] * z
             for i in range(3)]
        if v[2].is_zero():
            raise Degenerate("point on the chart's line at infinity")
        inv = v[2].inverse()
        return v[0] * inv, v[1] * inv

    def to_model(self, X, Y):
        return tuple(r[0] * X + r[1] * Y + r[2] for r in self.A)

    def random_point(self, rng):
        K = self.K
        while True:
            X = K.random(rng)
            hx = self.R([c(X) for c in self.h])
            roots = poly_roots(hx, rng)
            if roots:
                Y = roots[rng.randrange(len(roots))][0]
                return X, Y

    def monomials(self, n):
        return [(i, j) for j in range(min(n, 3) + 1) for i in range(n - j + 1)]

    def mono_poly(self, coeffs, monos):
        """Chart polynomial sum c_m X^i Y^j."""
        R = self.R
        K = self.K
        dY = max(j for _, j in monos)
        cols = [[K.zero] * (max(i for i, jj in monos if jj == j) + 1 if any(jj == j for _, jj in monos) else 0)
                for j in range(dY + 1)]
        for c, (i, j) in zip(coeffs, monos):
            cols[j][i] = cols[j][i] + c
        return _bv_trim([R(c) for c in cols])

    def divisor(self, u, w):
        return QDiv(self, u, w)

    def point_divisor(self, X, Y):
        R = self.R
        return QDiv(self, R([-X, self.K.one]), R([Y]))

    def divisor_from_points(self, pts):
        D = None
        for X, Y in pts:
            P = self.point_divisor(X, Y)
            D = P if D is None else D + P
        return D

    # intersections
    def cut(self, F, n=None):
        """Intersection divisor of the form F (chart polynomial of form degree
        n) with the curve, as (u, w) of degree 4n."""
        F = self.reduce(F)
        if not F:
            raise FormVanishesOnCurve("form is a multiple of the quartic")
        if n is None:
            n = max(c.degree() + j for j, c in enumerate(F))
        R = self.R
        K = self.K
        if len(F) == 2 and F[1].degree() <= 0 and F[0].degree() <= 1:
            # a line Y = -(a + bX)/c
            winv = F[1].coeffs()[0].inverse()
            w = -F[0] * winv
            u = self._norm_of_y(w)
        else:
            N = 4 * n
            xs = [K(i) for i in range(N + 1)]
            ys = []
            for x0 in xs:
                hy = R([c(x0) for c in self.h])
                fy = R([c(x0) for c in F])
                ys.append(resultant(hy, fy) if not fy.is_zero() else K.zero)
            u = interpolate(R, xs, ys)
            if u.is_zero():
                raise FormVanishesOnCurve("resultant vanishes identically")
            w = None
        if u.degree() != 4 * n:
            raise Degenerate("form meets the chart's line at infinity")
        u = u * u.leading_coefficient().inverse()
        if w is None:
            w = self._common_root(F, u)
        return QDiv(self, u, w % u)

    def _norm_of_y(self, w):
        """h(X, w(X)) for a polynomial w."""
        acc = None
        for c in reversed(self.h):
            acc = c if acc is None else acc * w + c
        return acc

    def _common_root(self, F, u):
        """w with Y - w = gcd(h, F) in (K[X]/u)[Y]."""
        A = [c % u for c in self.h]
        B = [c % u for c in F]
        A, B = _ytrim(A), _ytrim(B)
        while len(B) > 2:
            A, B = B, _ymod(A, B, u)
        if len(B) != 2:
            raise Degenerate("no common root over the residue ring")
        g, s, _ = B[1].xgcd(u)
        if g.degree() != 0:
            raise Degenerate("non-invertible leading coefficient")
        inv = s * g.coeffs()[0].inverse()
        return (-B[0] * inv) % u

    # vanishing conditions and Riemann-Roch
    def vanishing_rows(self, monos, D):
        """Linear conditions on coefficients (one column per monomial) for
        F to vanish on the divisor D."""
        if D is None or D.degree == 0:
            return []
        n = D.degree
        K = self.K
        cols = []
        wp = [self.R([K.one])]
        for j in range(4):
            wp.append((wp[-1] * D.w) % D.u)
        xp = {}
        for i, j in monos:
            if i not in xp:
                xp[i] = self.R([K.zero] * i + [K.one]) % D.u
            c = (xp[i] * wp[j]) % D.u
            cc = list(c.coeffs())
            cols.append(cc + [K.zero] * (n - len(cc)))
        return [[cols[m][r] for m in range(len(monos))] for r in range(n)]

    def forms_vanishing_on(self, D, n):
        monos = self.monomials(n)
        rows = self.vanishing_rows(monos, D)
        return [self.mono_poly(v, monos) for v in kernel(rows, self.K, len(monos))]

    def rr_space(self, pos, neg, rng=None, n=None):
        """A basis of L(pos - neg) as (numerators, denominator): functions
        F_i / G with G a form vanishing on pos."""
        rng = rng or random.Random(0)
        dpos = pos.degree if pos is not None else 0
        if n is None:
            n = max(1, (dpos + 2) // 4 + 1)
            if dpos - (neg.degree if neg else 0) + 2 > 4 * n - 2:
                n += 1
        for _ in range(8):
            basis = self.forms_vanishing_on(pos, n)
            if not basis:
                n += 1
                continue
            G = _bv_lincomb([self.K.random(rng) for _ in basis], basis, self.R)
            try:
                divG = self.cut(G, n)
                R = divG - pos if pos is not None else divG
                target = R + neg if neg is not None else R
            except (Degenerate, NonReducedInput):
                continue
            nums = self.forms_vanishing_on(target, n)
            return nums, G, n
        raise Degenerate("no generic denominator found")

    def effective_rep(self, pos, neg, rng=None, allow_special=False):
        """The effective divisor E of degree deg pos - deg neg with
        E ~ pos - neg, assumed unique (l(pos - neg) = 1).

        With allow_special a member of a larger linear system is accepted;
        the return value is then (E, l(pos - neg))."""
        rng = rng or random.Random(0)
        for _ in range(8):
            nums, G, n = self.rr_space(pos, neg, rng)
            if not nums or (len(nums) != 1 and not allow_special):
                raise NonReducedInput(f"l(D) = {len(nums)}, expected 1")
            F = nums[0] if len(nums) == 1 else \
                _bv_lincomb([self.K.random(rng) for _ in nums], nums, self.R)
            try:
                divF = self.cut(F, n)
                divG = self.cut(G, n)
                R = divG - pos if pos is not None else divG
                E = divF - R
                if neg is not None:
                    E = E - neg
                return (E, len(nums)) if allow_special else E
            except (Degenerate, NonReducedInput):
                continue
        raise Degenerate("effective representative not found")


def _dmul(a, b):
    out = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out[k] + c1 * c2 if k in out else c1 * c2
    return out


def _ytrim(A):
    while A and A[-1].is_zero():
        A.pop()
    return A


def _ymod(A, B, u):
    """A mod B in (K[X]/u)[Y]."""
    A = list(A)
    g, s, _ = B[-1].xgcd(u)
    if g.degree() != 0:
        raise Degenerate("non-invertible leading coefficient")
    inv = s * g.coeffs()[0].inverse()
    db = len(B) - 1
    while len(A) - 1 >= db:
        c = (A[-1] * inv) % u
        shift = len(A) - 1 - db
        for j in range(db + 1):
            A[shift + j] = (A[shift + j] - c * B[j]) % u
        A.pop()
        _ytrim(A)
    return A


def _bv_lincomb(cs, Fs, R):
    n = max(len(F) for F in Fs)
    out = [R([])] * n
    for c, F in zip(cs, Fs):
        for j, p in enumerate(F):
            out[j] = out[j] + p * c
    return _bv_trim(out)


# ----------------------------------------------------------------------------
# divisors


class QDiv:
    """Effective divisor (u, w) in a chart."""

    __slots__ = ("chart", "u", "w")

    def __init__(self, chart, u, w):
        self.chart = chart
        self.u = u
        self.w = w % u if u.degree() > 0 else u * 0

    @property
    def degree(self):
        return self.u.degree()

    def check(self):
        return _bv_eval_y(self.chart.h, self.w, self.u).is_zero()

    def key(self):
        return (tuple(tuple(lex_key(c)) for c in self.u.coeffs()),
                tuple(tuple(lex_key(c)) for c in self.w.coeffs()))

    def __eq__(self, other):
        return isinstance(other, QDiv) and self.u == other.u and self.w == other.w

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"QDiv(u={self.u}, w={self.w})"

    def __add__(self, other):
        if self.degree == 0:
            return other
        if other.degree == 0:
            return self
        g = self.u.gcd(other.u)
        if g.degree() > 0:
            return _add_overlap(self, other)
        w = crt_pair(self.w, self.u, other.w, other.u)
        return QDiv(self.chart, self.u * other.u, w)

    def __sub__(self, other):
        """Remove a sub-divisor."""
        if other.degree == 0:
            return self
        q, r = divmod(self.u, other.u)
        if not r.is_zero() or not ((self.w - other.w) % other.u).is_zero():
            raise NonReducedInput("not a sub-divisor")
        return QDiv(self.chart, q, self.w % q if q.degree() > 0 else q * 0)

    def multiple(self, k):
        """k E, by Hensel lifting w to u^k."""
        if k == 1:
            return self
        u = self.u ** k
        w = self.w
        h, hY = self.chart.h, self.chart.hY
        m = 1
        while m < k:
            m = min(2 * m, k)
            um = self.u ** m
            val = _bv_eval_y(h, w, um)
            der = _bv_eval_y(hY, w, um)
            g, s, _ = der.xgcd(um)
            if g.degree() != 0:
                raise Degenerate("vertical tangent in the support")
            w = (w - val * s * g.coeffs()[0].inverse()) % um
        return QDiv(self.chart, u, w)

    def places(self, rng=None):
        """[(irreducible factor of u, w mod factor, multiplicity)]."""
        out = []
        for g, m in poly_factor(self.u, rng):
            out.append((g, self.w % g, m))
        return out

    def points(self, rng=None):
        """The rational points in the support (chart coordinates)."""
        pts = []
        for g, w, m in self.places(rng):
            if g.degree() == 1:
                X = -g.coeffs()[0]
                pts += [(X, w(X))] * m
        return pts

    def model_function_values(self, row):
        """The element a x + b y + c z, divided by z, in K[X]/u, for the
        model linear form with coefficient row (a, b, c)."""
        ch = self.chart
        num = _bv_eval_y(ch.linear([sum((row[k] * ch.A[k][i] for k in range(3)),
                                        ch.K.zero) for i in range(3)]), self.w, self.u)
        den = _bv_eval_y(ch.coord[2], self.w, self.u)
        g, s, _ = den.xgcd(self.u)
        if g.degree() != 0:
            raise Degenerate("point at infinity of the model in the support")
        return (num * s * g.coeffs()[0].inverse()) % self.u

    def cut_cubics(self):
        """The monic polynomials prod (T - x(R_i)) and prod (T - y(R_i)) in
        model affine coordinates x/z, y/z."""
        K = self.chart.K
        xs = self.model_function_values((K.one, K.zero, K.zero))
        ys = self.model_function_values((K.zero, K.one, K.zero))
        return _charpoly(xs, self.u, K), _charpoly(ys, self.u, K)


def _add_overlap(a, b):
    """Sum of divisors with common points: a CRT start on coprime parts is
    Newton-lifted modulo the product (h_Y must be a unit on the support)."""
    ch = a.chart
    g = a.u.gcd(b.u)
    if not ((a.w - b.w) % g).is_zero():
        raise Degenerate("distinct points with the same X-coordinate")
    b1 = b.u
    while True:
        c = b1.gcd(g)
        if c.degree() == 0:
            break
        b1 = b1 // c
    w = a.w if b1.degree() == 0 else crt_pair(a.w, a.u, b.w % b1, b1)
    u = a.u * b.u
    for _ in range(64):
        val = _bv_eval_y(ch.h, w, u)
        if val.is_zero():
            break
        der = _bv_eval_y(ch.hY, w, u)
        gg, s, _ = der.xgcd(u)
        if gg.degree() != 0:
            raise Degenerate("vertical tangent in the support")
        w = (w - val * s * gg.coeffs()[0].inverse()) % u
    res = QDiv(ch, u, w)
    if not res.check() or not ((res.w - b.w) % b.u).is_zero():
        raise Degenerate("overlapping divisors not supported")
    return res


def _charpoly(a, u, K):
    """Characteristic polynomial of multiplication by a in K[X]/u."""
    n = u.degree()
    R = u.context() if hasattr(u, "context") else None
    cols = []
    X = R([K.zero, K.one])
    basis = R([K.one])
    for k in range(n):
        c = list(((basis * a) % u).coeffs())
        cols.append(c + [K.zero] * (n - len(c)))
        basis = (basis * X) % u
    M = [[cols[j][i] for j in range(n)] for i in range(n)]
    # charpoly by interpolation of det(T I - M)
    ts = [K(i) for i in range(n + 1)]
    vals = []
    for t in ts:
        A = [[(t if i == j else K.zero) - M[i][j] for j in range(n)] for i in range(n)]
        vals.append(mat_det(A, K))
    return interpolate(R, ts, vals)


def half_divisor(D):
    """B with D = 2B, for D = (q^2, w) with q squarefree."""
    q = D.u.gcd(D.u.derivative())
    q = q * q.leading_coefficient().inverse()
    if q * q != D.u:
        raise NonReducedInput("divisor is not twice a reduced divisor")
    return QDiv(D.chart, q, D.w % q)


# ----------------------------------------------------------------------------
# the Jacobian


class QJacobian:
    """Degree-0 classes [E - (oo_1) - delta] represented by the effective
    degree-3 divisor E (unique when l(E) = 1).

    ``inf1`` is the point oo_1 (degree-1 QDiv); ``E0`` represents zero,
    i.e. E0 ~ (oo_1) + delta."""

    def __init__(self, chart, inf1, E0, rng=None):
        self.chart = chart
        self.K = chart.K
        self.inf1 = inf1
        self.E0 = E0
        self.rng = rng or random.Random(0)
        self._E0x2 = None

    def zero(self):
        return QClass(self, self.E0)

    def from_effective(self, E):
        if E.degree != 3:
            raise NonReducedInput("expected an effective divisor of degree 3")
        return QClass(self, E)

    def from_points(self, pts):
        """j(R_1, R_2, R_3) for chart points."""
        return self.from_effective(self.chart.divisor_from_points(pts))

    def _rep(self, pos, neg):
        E, l = self.chart.effective_rep(pos, neg, self.rng, allow_special=True)
        return QClass(self, E, l > 1)

    def from_difference(self, pos, neg):
        """The class of pos - neg (degree 0)."""
        if (pos.degree if pos else 0) != (neg.degree if neg else 0):
            raise NonReducedInput("degree-0 difference expected")
        return self._rep(pos + self.E0 if pos else self.E0, neg)

    def add(self, a, b):
        return self._rep(a.E + b.E, self.E0)

    def neg(self, a):
        if self._E0x2 is None:
            self._E0x2 = self.E0.multiple(2)
        return self._rep(self._E0x2, a.E)

    def mul(self, a, n):
        if n < 0:
            return self.mul(self.neg(a), -n)
        out = self.zero()
        base = a
        while n:
            if n & 1:
                out = out + base
            n >>= 1
            if n:
                base = base + base
        return out


class QClass:
    """A point of J_D.  ``special`` marks classes a with l(a + oo_1 + delta) > 1
    (they lie on the theta divisor); their E is one member of the linear
    system, so equality goes through subtraction."""
    __slots__ = ("J", "E", "special")

    def __init__(self, J, E, special=False):
        self.J = J
        self.E = E
        self.special = special

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return self.J.add(self, other)

    def __neg__(self):
        if self.is_zero():
            return self
        return self.J.neg(self)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n):
        return self.J.mul(self, n)

    def __mul__(self, n):
        return self.J.mul(self, n)

    def is_zero(self):
        return not self.special and self.E == self.J.E0

    def __eq__(self, other):
        if not isinstance(other, QClass) or self.special != other.special:
            return False
        if not self.special:
            return self.E == other.E
        return (self - other).is_zero()

    def __hash__(self):
        return 0 if self.special else hash(self.E.key())

    def key(self):
        return self.E.key()

    def __repr__(self):
        return f"QClass({self.E.u})"

    @property
    def degree(self):
        return 3


# ----------------------------------------------------------------------------
# Weil functions on the Jacobian of the quartic


def deform_qdiv(D, direction, prec):
    """Formal curve E(t) = (u + t e, W(t)) through an effective divisor, with
    W Hensel-lifted so that h(X, W) = 0 mod U(t).  Returns (alg, W)."""
    ch = D.chart
    K = ch.K
    R = ch.R
    n = D.degree
    uc = list(D.u.coeffs())
    ec = list(direction) + [K.zero] * (n - len(direction))
    U = [Series(R([uc[i], ec[i]]), prec, 0) for i in range(n)]
    U.append(Series(R([K.one]), 10 ** 6, 0))
    alg = SeriesResidue(U, K)
    W = alg.from_poly(D.w)
    k = 1
    while k < 2 * prec:
        val = _bv_eval_alg(ch.h, alg, W)
        der = _bv_eval_alg(ch.hY, alg, W)
        W = alg.sub(W, alg.mul(val, alg.inv(der)))
        k *= 2
    return alg, W


class QuarticWeilFunction:
    """g_P = (det f^{D_P} / det f^{D_0})^N prod h(z_i) on the quartic's
    Jacobian, with O = oo_1 and theta = E0 - oo_1 (a divisor of class delta).

    D_P = E_P + E0 - oo_1, D_0 = 2 E0 - oo_1 and div h = N (E_P - E0)."""

    def __init__(self, P, N, rng=None):
        J = P.J
        self.J = J
        self.P = P
        self.N = N
        self.K = J.K
        ch = J.chart
        rng = rng or random.Random(1)
        self.trivial = P.is_zero()
        if self.trivial:
            return
        E0, inf1 = J.E0, J.inf1
        self.num_P = ch.rr_space(P.E + E0, inf1, rng)
        self.num_0 = ch.rr_space(E0.multiple(2), inf1, rng)
        if len(self.num_P[0]) != 3 or len(self.num_0[0]) != 3:
            raise Degenerate("unexpected Riemann-Roch dimension")
        self.h = ch.rr_space(E0.multiple(N), P.E.multiple(N), rng)
        if len(self.h[0]) != 1:
            raise Degenerate("h is not unique up to scalars")

    def __repr__(self):
        return f"zeta-type Weil function at level {self.N}"

    def eval(self, z):
        if self.trivial:
            return self.K.one
        try:
            return self._eval_poly(z.E)
        except Degenerate:
            return self.eval_deformed(z.E)

    def _eval_poly(self, E):
        ch = self.J.chart
        u, w = E.u, E.w

        def coeff_det(nums):
            rows = []
            for F in nums:
                c = list(_bv_eval_y(F, w, u).coeffs())
                rows.append(c + [self.K.zero] * (3 - len(c)))
            return mat_det(rows, self.K)

        def norm(F):
            a = _bv_eval_y(F, w, u)
            if a.is_zero():
                raise Degenerate("factor vanishes on the divisor")
            v = resultant(u, a)
            if v.is_zero():
                raise Degenerate("factor vanishes on the divisor")
            return v
        nP, GP, _ = self.num_P
        n0, G0, _ = self.num_0
        d0 = coeff_det(n0)
        if d0.is_zero():
            raise Degenerate("reference determinant vanishes")
        ratio = coeff_det(nP) * norm(G0) / (d0 * norm(GP))
        Fh, Gh = self.h[0][0], self.h[1]
        return ratio ** self.N * norm(Fh) / norm(Gh)

    def eval_deformed(self, E, prec=8, direction=None):
        K = self.K
        if direction is None:
            direction = [K(1), K(3), K(7)]
        while True:
            try:
                alg, W = deform_qdiv(E, direction, prec)
                val = self._eval_residue(alg, W)
                v = val.valuation()
                if v is None:
                    raise InsufficientPrecision("value is O(t^n)")
                if v < 0:
                    raise Degenerate("pole at the divisor")
                return val.coeff(0)
            except (InsufficientPrecision, DivisionByNonUnit):
                if prec >= 64:
                    from .weil import PersistentDegeneracy
                    raise PersistentDegeneracy("deformed evaluation does not settle")
                prec *= 2

    def _eval_residue(self, alg, W):
        from .hypercurve import series_det

        def mat(nums):
            return [alg.coeffs(_bv_eval_alg(F, alg, W)) for F in nums]

        def norm(F):
            s = alg.norm(_bv_eval_alg(F, alg, W))
            alg.check_nonzero(s)
            return s
        nP, GP, _ = self.num_P
        n0, G0, _ = self.num_0
        ratio = series_det(mat(nP)) * norm(G0) / (series_det(mat(n0)) * norm(GP))
        Fh, Gh = self.h[0][0], self.h[1]
        return ratio ** self.N * norm(Fh) / norm(Gh)
