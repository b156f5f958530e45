"""Kummer coordinates on J_D and lifting of Kummer points to classes.

Functions on D^3 are built from the eight functions
    B = {1, x, x^2, y, y^2, xy, u, v} = L(2 oo_1 + 2 K_D)
in the affine model chart z = 1, where u, v are cubics in x, y vanishing to
order two at oo_2.  The 120 symmetrized triple products over B restricted to
the big diagonal span a space of dimension 112; the eight-dimensional kernel
h_1..h_8 gives, after division by omega^2, a basis of the level-2 sections
on J_D through j(R_1, R_2, R_3) = [R_1 + R_2 + R_3 - oo_1 - delta_D].

Lifting a Kummer point x uses a pencil: with Q_2 + Q_3 = B_i the contact
divisor of a bitangent, the function R -> sum mu_k h_k(R, Q_2, Q_3), where
sum mu_k h_k / omega^2 = sum_a x_a X_a, lies in span B and vanishes exactly
on E_{c - t} + E_{-c - t} + 2 B_i with t = L_i - delta_D.
"""
from __future__ import annotations

import itertools
import random

from .linalg import kernel, rref, solve, inverse, transpose, matvec, SingularLinearSystem
from .theta import (squares_to_schrodinger, coords_to_index, two_torsion_translate,
                    proj_equal, bits)
from .quartcurve import QDiv, Degenerate, NonReducedInput


class RankDeficient(ArithmeticError):
    pass


class InconsistentSystem(ArithmeticError):
    pass


class NoConsistentTransform(ArithmeticError):
    pass


class EmptyVariety(ArithmeticError):
    pass


BASIS_NAMES = ("1", "x", "x^2", "y", "y^2", "xy", "u", "v")
# multisets {a <= b <= c} of basis indices
MULTISETS = list(itertools.combinations_with_replacement(range(8), 3))


def _perm3(M):
    """Permanent of a 3x3 matrix."""
    return (M[0][0] * (M[1][1] * M[2][2] + M[1][2] * M[2][1])
            + M[0][1] * (M[1][0] * M[2][2] + M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] + M[1][1] * M[2][0]))


class ModelPoint:
    """A point of D in affine model coordinates (z = 1) with the chart point
    it came from."""
    __slots__ = ("x", "y", "chart_pt")

    def __init__(self, x, y, chart_pt=None):
        self.x = x
        self.y = y
        self.chart_pt = chart_pt


def model_point(chart, X, Y):
    x, y, z = chart.to_model(X, Y)
    if z.is_zero():
        raise Degenerate("point on the line z = 0")
    zi = z.inverse()
    return ModelPoint(x * zi, y * zi, (X, Y))


def cubic_pair(bb):
    """u, v: cubics a x^3 + b x^2 y + c x y^2 + d y^3 vanishing to order two
    at oo_2 (coefficient lists (a, b, c, d))."""
    from .algebra import PolyRing
    from .quartcurve import _bv_eval_y
    ch = bb.chart
    K = ch.K
    ring = PolyRing(K, ["x", "y", "z"])
    x, y, z = ring.gens()
    monos = [x ** 3, x * x * y, x * y * y, y ** 3]
    D = bb.inf2.multiple(2)
    rows = []
    for m in monos:
        c = list(_bv_eval_y(ch.form(m), D.w, D.u).coeffs())
        rows.append(c + [K.zero] * (2 - len(c)))
    # conditions: sum_m coeff_m * rows[m] = 0
    ker = kernel(transpose(rows), K, 4)
    if len(ker) != 2:
        raise RankDeficient("cubics with a double zero at oo_2 do not form a pencil")
    return ker


class Octet:
    """The basis B, the symmetrized products and the kernel h_1..h_8."""

    def __init__(self, bb, uv):
        self.bb = bb
        self.chart = bb.chart
        self.K = bb.chart.K
        self.uv = [list(c) for c in uv]
        self.H = None
        self.rank = None

    def basis_values(self, P):
        x, y = P.x, P.y
        x2, y2, xy = x * x, y * y, x * y
        vals = [self.K.one, x, x2, y, y2, xy]
        cubes = (x2 * x, x2 * y, x * y2, y2 * y)
        for c in self.uv:
            vals.append(c[0] * cubes[0] + c[1] * cubes[1] + c[2] * cubes[2] + c[3] * cubes[3])
        return vals

    def cubic_forms(self):
        """The eight model cubic forms T with t = T / z^3."""
        from .algebra import PolyRing
        ring = PolyRing(self.K, ["x", "y", "z"])
        x, y, z = ring.gens()
        z3 = z ** 3
        out = [z3, x * z * z, x * x * z, y * z * z, y * y * z, x * y * z]
        for c in self.uv:
            out.append(x ** 3 * c[0] + x * x * y * c[1] + x * y * y * c[2] + y ** 3 * c[3])
        return out

    @staticmethod
    def products(v1, v2, v3):
        """The 120 symmetrized products at (R_1, R_2, R_3) from basis values."""
        out = []
        for m in MULTISETS:
            out.append(_perm3([[v1[i], v2[i], v3[i]] for i in m]))
        return out

    def h_values(self, pts):
        vs = [self.basis_values(P) for P in pts]
        pr = self.products(*vs)
        out = []
        for row in self.H:
            s = self.K.zero
            for a, b in zip(row, pr):
                if not a.is_zero():
                    s = s + a * b
            out.append(s)
        return out

    def is_symmetric_in(self, pts):
        return self.h_values(pts) == self.h_values([pts[1], pts[2], pts[0]])


def omega(pts):
    """det [[x_i, y_i, 1]]."""
    (x1, y1), (x2, y2), (x3, y3) = [(P.x, P.y) for P in pts]
    return x1 * (y2 - y3) - y1 * (x2 - x3) + (x2 * y3 - x3 * y2)


def random_model_point(chart, rng):
    while True:
        X, Y = chart.random_point(rng)
        try:
            return model_point(chart, X, Y)
        except Degenerate:
            continue


def build_octet(bb, rng, samples=140, retries=3):
    """Evaluate the 120 products at points (R, R, R') and take the kernel."""
    uv = cubic_pair(bb)
    octet = Octet(bb, uv)
    ch = bb.chart
    n = samples
    for _ in range(retries):
        rows = []
        for _ in range(n):
            R = octet.basis_values(random_model_point(ch, rng))
            R2 = octet.basis_values(random_model_point(ch, rng))
            rows.append(Octet.products(R, R, R2))
        red, piv = rref(rows)
        octet.rank = len(piv)
        if octet.rank == 112:
            octet.H = kernel(red, octet.K, 120)
            return octet
        n += 40
    raise RankDeficient(f"evaluation matrix has rank {octet.rank}, expected 112")


# ----------------------------------------------------------------------------
# Kummer coordinates on J_D


def kummer_coords(zset, z):
    """Schroedinger coordinates of a class from the normalized zeta values."""
    v = [None] * 64
    for c in zset.G.coords():
        v[coords_to_index(c)] = zset.ft(c, z)
    return squares_to_schrodinger(v)


def triple_class(bb, pts):
    return bb.J.from_points([P.chart_pt for P in pts])


def express_octet(octet, zset, rng, n=9, holdout=5):
    """The 8x8 matrix M with h_k / omega^2 = sum_a M[k][a] X_a o j, solved
    from n random triples and validated on holdout more."""
    ch = octet.chart
    K = octet.K
    lhs, rhs = [], []
    while len(lhs) < n + holdout:
        pts = [random_model_point(ch, rng) for _ in range(3)]
        try:
            w = omega(pts)
            if w.is_zero():
                continue
            z = triple_class(octet.bb, pts)
            X = kummer_coords(zset, z)
        except (Degenerate, NonReducedInput, ZeroDivisionError):
            continue
        winv = (w * w).inverse()
        lhs.append([hv * winv for hv in octet.h_values(pts)])
        rhs.append(X)
    M = []
    for k in range(8):
        try:
            row = solve(rhs[:n], [r[k] for r in lhs[:n]], K)
        except SingularLinearSystem as exc:
            raise InconsistentSystem(str(exc)) from None
        for X, L in zip(rhs[n:], lhs[n:]):
            if sum((a * b for a, b in zip(row, X)), K.zero) != L[k]:
                raise InconsistentSystem("holdout triple disagrees")
        M.append(row)
    return M


# ----------------------------------------------------------------------------
# the transform between Kummer coordinates of A and J_D


class KummerTransform:
    """x -> ((-1)^{<c, a>} x_{a + d})_a, a translation by a two-torsion point
    in Schroedinger coordinates, induced by the character chi on J_D[2]."""

    def __init__(self, chi):
        self.chi = tuple(chi)
        self.c = tuple(1 if s == -1 else 0 for s in chi[:3])
        self.d = tuple(1 if s == -1 else 0 for s in chi[3:])

    def __call__(self, x):
        return two_torsion_translate(x, self.d, self.c)

    def matrix(self, K):
        cols = []
        for j in range(8):
            e = [K.one if i == j else K.zero for i in range(8)]
            cols.append(self(e))
        return transpose(cols)

    def to_json(self):
        return {"chi": list(self.chi)}

    @classmethod
    def from_json(cls, d):
        return cls(d["chi"])


def character_from_constants(zset, tsv):
    """chi(E_i) = zeta_{E_i}(0) / xi_{E_i}(0), which must be +-1."""
    z0 = zset.G.zero
    chi = []
    for i in range(6):
        e = tuple(1 if k == i else 0 for k in range(6))
        a = zset.ft(e, z0)
        b = tsv[coords_to_index(e)]
        if a == b:
            chi.append(1)
        elif a == -b:
            chi.append(-1)
        else:
            raise NoConsistentTransform(f"ratio at E_{i + 1} is not +-1")
    return chi


def kummer_transform(zset, tsv):
    """Fast path: S_i-bar = E_i and tau from the character chi."""
    chi = character_from_constants(zset, tsv)
    tau = KummerTransform(chi)
    x0A = squares_to_schrodinger(tsv)
    x0D = kummer_coords(zset, zset.G.zero)
    if not proj_equal(tau(x0A), x0D):
        raise NoConsistentTransform("tau does not send kappa_A(0) to kappa_D(0)")
    return tau


def kummer_transform_search(zset, tsv):
    """Fallback: try all 64 two-torsion twists and keep those sending the 64
    two-torsion Kummer points of A onto those of J_D with the same labels."""
    x0A = squares_to_schrodinger(tsv)
    x0D = kummer_coords(zset, zset.G.zero)
    found = []
    for n in range(64):
        chi = [-1 if (n >> i) & 1 else 1 for i in range(6)]
        tau = KummerTransform(chi)
        if not proj_equal(tau(x0A), x0D):
            continue
        ok = True
        for w in range(64):
            w1, w2 = bits(w >> 3), bits(w & 7)
            a = tau(two_torsion_translate(x0A, w1, w2))
            b = two_torsion_translate(x0D, w1, w2)
            if not proj_equal(a, b):
                ok = False
                break
        if ok:
            found.append(tau)
    if len(found) != 1:
        raise NoConsistentTransform(f"{len(found)} twists fit")
    return found[0]


# ----------------------------------------------------------------------------
# lifting


class Pencil:
    """The pencil through Q_2 + Q_3 = B_i for one bitangent."""

    def __init__(self, lifter, i):
        bb = lifter.bb
        ch = bb.chart
        B = bb.contacts[i]
        self.i = i
        self.lifter = lifter
        self.Q = [model_point(ch, *p) for p in B.points()]
        self.Bvals = [lifter.octet.basis_values(P) for P in self.Q]
        self.t = bb.L_minus_delta(i)
        self.known = B.multiple(2) + bb.inf2.multiple(2)

    def coeffs(self, w):
        """Coefficients c_t over B of R -> sum_m w_m prod_m(R, Q_2, Q_3)."""
        K = self.lifter.K
        q2, q3 = self.Bvals
        c = [K.zero] * 8
        for m, (a, b, cc) in enumerate(MULTISETS):
            if w[m].is_zero():
                continue
            for i, j, k in ((a, b, cc), (b, a, cc), (cc, a, b)):
                c[i] = c[i] + w[m] * (q2[j] * q3[k] + q2[k] * q3[j])
        return c

    def zero_divisor(self, c):
        """E_{c - t} + E_{-c - t} for the pencil member with coefficients c."""
        ch = self.lifter.bb.chart
        F = None
        for a, T in zip(c, self.lifter.forms):
            if a.is_zero():
                continue
            F = T * a if F is None else F + T * a
        if F is None:
            raise EmptyVariety("the pencil function vanishes identically")
        D = ch.cut(ch.form(F), 3)
        return D - self.known

    def candidates(self, w):
        """Classes a + t over all splittings E6 = E_a + E_b; contains +-c."""
        E6 = self.zero_divisor(self.coeffs(w))
        J = self.lifter.bb.J
        ch = self.lifter.bb.chart
        places = E6.places()
        out = set()
        for ks in itertools.product(*[range(m + 1) for (_, _, m) in places]):
            if sum(k * g.degree() for k, (g, _, _) in zip(ks, places)) != 3:
                continue
            ua = ch.R([ch.K.one])
            for k, (g, _, _) in zip(ks, places):
                ua = ua * g ** k
            a = J.from_effective(QDiv(ch, ua, E6.w % ua))
            out.add(a + self.t)
        return out


class Lifter:
    """Everything needed to lift Kummer points of J_D: the octet, the matrix
    expressing it in Schroedinger coordinates and two bitangent pencils.

    Each pencil yields the pair {c - t_i, -c - t_i} only as a splitting of a
    degree-6 divisor, so candidates from two pencils are intersected."""

    def __init__(self, bb, octet, M, bitangents=None):
        self.bb = bb
        self.octet = octet
        self.M = M
        self.K = bb.chart.K
        self.Minv_t = inverse(transpose(M), self.K)
        self.forms = octet.cubic_forms()
        idx = bitangents if bitangents is not None else self._pick_bitangents()
        self.pencils = [Pencil(self, i) for i in idx]

    def _pick_bitangents(self):
        ch = self.bb.chart
        out = []
        for i in (3, 4, 5, 6):
            pts = self.bb.contacts[i].points()
            if len(pts) == 2:
                try:
                    [model_point(ch, *p) for p in pts]
                except Degenerate:
                    continue
                out.append(i)
        if len(out) < 2:
            raise EmptyVariety("fewer than two bitangents with rational affine contacts")
        return out[:3]

    def mu(self, xD):
        return matvec(self.Minv_t, xD)

    def weights(self, mu):
        """sum_k mu_k h_k as a combination of the 120 products."""
        K = self.K
        H = self.octet.H
        w = [K.zero] * 120
        for k in range(8):
            if mu[k].is_zero():
                continue
            for m in range(120):
                if not H[k][m].is_zero():
                    w[m] = w[m] + mu[k] * H[k][m]
        return w

    def lift(self, xD):
        """The pair (c, -c) of classes with Kummer coordinates xD."""
        w = self.weights(self.mu(xD))
        common = None
        for p in self.pencils:
            cand = p.candidates(w)
            common = cand if common is None else common & cand
            if len(common) <= 2:
                break
        if not common:
            raise EmptyVariety("pencils have no common candidate")
        if len(common) > 2:
            raise EmptyVariety(f"{len(common)} candidates survive all pencils")
        a = next(iter(common))
        return a, -a


def lift_point(lifter, xD):
    return lifter.lift(xD)


def image_point(qt, tau, lifter, P):
    """{psi(P), -psi(P)} for a class P on J_C.

    The theta quotients are evaluated at P + S_delta + v; the first v in V
    that avoids a degenerate configuration is used."""
    last = None
    for v in qt.v_elements():
        try:
            xA = qt.kummer_image(P, v)
        except (Degenerate, ArithmeticError) as e:
            last = e
            continue
        return lifter.lift(tau(xA))
    raise Degenerate(f"no usable offset in V: {last}")
