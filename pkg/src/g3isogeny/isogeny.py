"""The rational map F: C -> J_D, P -> psi([P - oo]), by differential equations.

Divisors on D are handled in the affine model chart z = 1 as pairs (u, w):
u the monic cubic with roots x(R_i) and y(R_i) = w(x(R_i)).  Along a formal
point P(t) = (x_0 + t, V(t)) these become series in t.  Sums over the three
points of a divisor use the Euler-Jacobi identity: for deg r < 3,
sum_i r(X_i) / u'(X_i) is the x^2 coefficient of r.  Since X_i' = -u_t/u_x at
X_i, the left-hand side of the differential system for the form g dx / h_y is
    sum_i g(R_i) X_i' / h_y(R_i) = -[x^2] (g u_t / h_y mod u).
"""
from __future__ import annotations

from .field import Series, pade_reconstruct, ReconstructionFailure, InsufficientPrecision
from .hypercurve import SeriesResidue, formal_point, Degenerate
from .linalg import solve, inverse, matvec, transpose, SingularLinearSystem
from .quartcurve import _bv_eval_alg
from .theta import squares_to_schrodinger


class SingularStep(ArithmeticError):
    pass


class DenominatorVanishes(ArithmeticError):
    pass


BIG = 10 ** 6


# ----------------------------------------------------------------------------
# the model in the affine chart z = 1


def _ylist(F, K):
    """A form in x, y, z as a list (index = power of y) of polynomials in x,
    with z = 1."""
    deg = max((e[1] for e in F.terms), default=0)
    cols = [[K.zero] * 5 for _ in range(deg + 1)]
    for (i, j, _), c in F.terms.items():
        if i >= len(cols[j]):
            cols[j] += [K.zero] * (i + 1 - len(cols[j]))
        cols[j][i] = cols[j][i] + c
    return [K.poly(c) for c in cols]


class AffineModel:
    """h(x, y) = Q(x, y, 1) with its y-derivative, plus the pencil cubics."""

    def __init__(self, quartic, forms=None):
        K = quartic.K
        self.K = K
        self.h = _ylist(quartic.to_mpoly(), K)
        self.hy = [self.h[j] * K(j) for j in range(1, len(self.h))]
        self.forms = [_ylist(F, K) for F in (forms or [])]

    def at(self, x, y):
        return sum((c(x) * y ** j for j, c in enumerate(self.h)), self.K.zero)


def model_divisor(E):
    """(u, w) in model coordinates for an effective degree-3 QDiv: u monic
    with roots x(R_i), y(R_i) = w(x(R_i))."""
    K = E.chart.K
    xs = E.model_function_values((K.one, K.zero, K.zero))
    ys = E.model_function_values((K.zero, K.one, K.zero))
    u, _ = E.cut_cubics()
    if u.gcd(u.derivative()).degree() > 0:
        raise Degenerate("repeated x-coordinate in the divisor")
    # ys = w0 + w1 xs + w2 xs^2 in K[X]/E.u
    cols = []
    pw = E.chart.R([K.one])
    for _ in range(3):
        c = list(pw.coeffs()) + [K.zero] * 3
        cols.append(c[:3])
        pw = (pw * xs) % E.u
    yc = list(ys.coeffs()) + [K.zero] * 3
    try:
        w = solve(transpose(cols), yc[:3], K)
    except SingularLinearSystem:
        raise Degenerate("x does not generate the residue algebra") from None
    uc = list(u.coeffs())
    return uc[:3], w


# ----------------------------------------------------------------------------
# series helpers


def _series(K, coeffs, prec):
    return Series(K.R(list(coeffs[:prec])), prec, 0)


def _state_series(K, state, prec):
    """state: 6 coefficient lists (u0, u1, u2, w0, w1, w2)."""
    return [_series(K, c, prec) for c in state]


def _residue(K, S):
    one = Series(K.R([K.one]), BIG, 0)
    alg = SeriesResidue(S[:3] + [one], K)
    return alg, alg.from_poly(S[3:])


def _scale(alg, a, s):
    return [s * c for c in alg.coeffs(a)]


def _coeff(s, k):
    return s.coeff(k)


# ----------------------------------------------------------------------------
# formal lift of the image along P(t) through the pencil


def pencil_linear_map(lifter, pencil):
    """Matrix L with pencil coefficients = L x_D, for Kummer coordinates x_D."""
    K = lifter.K
    cols = []
    for j in range(8):
        e = [K.one if i == j else K.zero for i in range(8)]
        cols.append(pencil.coeffs(lifter.weights(lifter.mu(e))))
    return transpose(cols)


class FormalImage:
    """Pencil coefficients c(t) whose member cuts E_{psi(P(t)) - t_i} +
    E_{-psi(P(t)) - t_i} + 2 B_i + 2 oo_2, from the theta series along P(t).

    Kummer coordinates are even, so the same c(t) serves the mirrored point
    (x_0 + t, -V(t)); only the starting component differs."""

    def __init__(self, qt, tau, lifter, point, v, prec=4, pencil=0):
        K = lifter.K
        self.K = K
        self.prec = prec
        fp = formal_point(qt.C, point, K.one, prec)
        self.fp = fp
        xD = tau(squares_to_schrodinger(qt.xi_formal(fp, v)))
        self.pencil = lifter.pencils[pencil]
        self.c = matvec(pencil_linear_map(lifter, self.pencil), xD)

    def residual(self, model, S):
        alg, W = _residue(self.K, S)
        hv = _bv_eval_alg(model.h, alg, W)
        nv = None
        for cs, T in zip(self.c, model.forms):
            term = _scale(alg, _bv_eval_alg(T, alg, W), cs)
            nv = term if nv is None else [a + b for a, b in zip(nv, term)]
        return alg.coeffs(hv) + nv

    def lift(self, model, start):
        """Newton lift of the model divisor start = (u, w) at t = 0."""
        K = self.K
        u0, w0 = start
        state = [[c] for c in list(u0) + list(w0)]
        r0 = self.residual(model, _state_series(K, state, 1))
        if any(not _coeff(r, 0).is_zero() for r in r0):
            raise Degenerate("start divisor is not on the pencil member")
        # the order-k linear part is constant: probe it at order 1
        base = [s + [K.zero] for s in state]
        rb = self.residual(model, _state_series(K, base, 2))
        cols = []
        for j in range(6):
            pr = [list(s) for s in base]
            pr[j][1] = K.one
            rj = self.residual(model, _state_series(K, pr, 2))
            cols.append([_coeff(a, 1) - _coeff(b, 1) for a, b in zip(rj, rb)])
        try:
            Jinv = inverse(transpose(cols), K)
        except SingularLinearSystem:
            raise SingularStep("pencil intersection is not transversal") from None
        for k in range(1, self.prec):
            trial = [s + [K.zero] for s in state]
            r = self.residual(model, _state_series(K, trial, k + 1))
            delta = matvec(Jinv, [-_coeff(a, k) for a in r])
            state = [s + [d] for s, d in zip(state, delta)]
        return state


# ----------------------------------------------------------------------------
# the differential system


def _lhs(K, S, model):
    """[-x^2 (g u_t / h_y mod u)] for g = 1, x, y: three series."""
    alg, W = _residue(K, S)
    Ut = alg.from_poly([s.derivative() for s in S[:3]])
    hy = _bv_eval_alg(model.hy, alg, W)
    base = alg.mul(Ut, alg.inv(hy))
    X = alg.from_poly(K.R([K.zero, K.one]))
    out = []
    for g in (None, X, W):
        v = base if g is None else alg.mul(base, g)
        out.append(-alg.coeffs(v)[2])
    return out, alg, W


def pullback_from_state(K, model, state, x0, V):
    """m with sum g_j(R_i) X_i'/h_y = (m_j1 + m_j2 U + m_j3 U^2) / V at t^0..t^2."""
    S = _state_series(K, state, 4)
    lhs, _, _ = _lhs(K, S, model)
    rows = [[K.one, x0, x0 * x0], [K.zero, K.one, K(2) * x0], [K.zero, K.zero, K.one]]
    m = []
    for L in lhs:
        lv = L * V
        try:
            m.append(solve(rows, [lv.coeff(n) for n in range(3)], K))
        except SingularLinearSystem:
            raise SingularStep("pullback system is singular") from None
    return m


def _rhs(K, m, x0, V, prec):
    U = Series(K.R([x0, K.one]), prec, 0)
    Vinv = V.inverse()
    out = []
    for row in m:
        out.append((U * U * row[2] + U * row[1] + row[0]) * Vinv)
    return out


def continue_series(K, model, start, m, x0, V, prec):
    """Solve the differential system order by order from (u, w) at t = 0."""
    u0, w0 = start
    state = [[c] for c in list(u0) + list(w0)]

    def residual(st, p):
        S = _state_series(K, st, p)
        lhs, alg, W = _lhs(K, S, model)
        hv = alg.coeffs(_bv_eval_alg(model.h, alg, W))
        rhs = _rhs(K, m, x0, V, p)
        return hv, [a - b for a, b in zip(lhs, rhs)]

    # the linear part of order k: [A; k B], probed at k = 1
    base = [s + [K.zero] for s in state]
    hb, ob = residual(base, 2)
    if any(not _coeff(o, 0).is_zero() for o in ob):
        pass  # order-0 equations involve the order-1 unknowns; handled below
    cols = []
    for j in range(6):
        pr = [list(s) for s in base]
        pr[j][1] = K.one
        hj, oj = residual(pr, 2)
        cols.append([_coeff(a, 1) - _coeff(b, 1) for a, b in zip(hj, hb)]
                    + [_coeff(a, 0) - _coeff(b, 0) for a, b in zip(oj, ob)])
    JA = [[cols[j][i] for j in range(6)] for i in range(3)]
    JB = [[cols[j][i] for j in range(6)] for i in range(3, 6)]
    for k in range(1, prec):
        Jk = JA + [[x * K(k) for x in r] for r in JB]
        try:
            Jinv = inverse(Jk, K)
        except SingularLinearSystem:
            raise SingularStep(f"step {k} is singular") from None
        trial = [s + [K.zero] for s in state]
        hv, ov = residual(trial, k + 1)
        r = [_coeff(a, k) for a in hv] + [_coeff(a, k - 1) for a in ov]
        delta = matvec(Jinv, [-x for x in r])
        state = [s + [d] for s, d in zip(state, delta)]
    return state


def check_state(K, model, state, m, x0, V):
    """Residuals of the curve equations and of the differential system."""
    p = len(state[0])
    S = _state_series(K, state, p)
    lhs, alg, W = _lhs(K, S, model)
    hv = alg.coeffs(_bv_eval_alg(model.h, alg, W))
    rhs = _rhs(K, m, x0, V, p)
    ok_h = all(s.valuation() is None for s in hv)
    ok_o = all((a - b).valuation() is None for a, b in zip(lhs, rhs))
    return ok_h, ok_o


def symmetric_functions(K, state):
    """p_1..p_6 as series from a state (u, w)."""
    p = len(state[0])
    S = _state_series(K, state, p)
    alg, W = _residue(K, S)
    u0, u1, u2 = S[:3]
    s = [Series(K.R([K(3)]), BIG, 0), -u2, u2 * u2 - u1 * 2]

    def tr(a):
        c = alg.coeffs(a)
        return c[0] * s[0] + c[1] * s[1] + c[2] * s[2]
    W2 = alg.mul(W, W)
    W3 = alg.mul(W2, W)
    P1, P2, P3 = tr(W), tr(W2), tr(W3)
    e1 = P1
    e2 = (e1 * e1 - P2) * K(2).inverse()
    e3 = (P3 - e1 * P2 + e2 * P1) * K(3).inverse()
    return [-u2, u1, -u0, e1, e2, e3]


# ----------------------------------------------------------------------------
# reconstruction


def _shift_poly(R, f, x0):
    """f(x - x0) for a polynomial f in t."""
    out = R([])
    sub = R([-x0, 1])
    for c in reversed(f.coeffs()):
        out = out * sub + c
    return out


class IsogenyMap:
    """C_i = (A_i(x) + B_i(x) y) / p(x), i = 1..6 (p_1..p_6 of the image)."""

    def __init__(self, K, p, A, B, m):
        self.K = K
        self.p = p
        self.A = A
        self.B = B
        self.m = m

    def values(self, x, y):
        d = self.p(x)
        if d.is_zero():
            raise DenominatorVanishes("p(x_0) = 0")
        di = d.inverse()
        return [(a(x) + b(x) * y) * di for a, b in zip(self.A, self.B)]

    def cubics(self, x, y):
        """X^3 - C_1 X^2 + C_2 X - C_3 and Y^3 - C_4 Y^2 + C_5 Y - C_6."""
        K = self.K
        C = self.values(x, y)
        one = K.one
        return (K.poly([-C[2], C[1], -C[0], one]), K.poly([-C[5], C[4], -C[3], one]))

    def degrees(self):
        return {"p": self.p.degree(),
                "A": [a.degree() for a in self.A], "B": [b.degree() for b in self.B]}

    def to_json(self):
        K = self.K
        enc = lambda f: [K.to_ints(c) for c in f.coeffs()]  # noqa: E731
        return {"p": enc(self.p), "A": [enc(a) for a in self.A],
                "B": [enc(b) for b in self.B],
                "m": [[K.to_ints(c) for c in r] for r in self.m]}

    @classmethod
    def from_json(cls, K, d):
        dec = lambda c: K.poly([K.from_ints(x) for x in c])  # noqa: E731
        return cls(K, dec(d["p"]), [dec(a) for a in d["A"]], [dec(b) for b in d["B"]],
                   [[K.from_ints(x) for x in r] for r in d["m"]])


def _pade_adaptive(s, margin):
    """Smallest balanced Pade approximant that is confirmed by ``margin``
    extra coefficients."""
    N = s.abs_prec
    d = 0
    while 2 * d + 1 + margin <= N:
        try:
            return pade_reconstruct(s, d, d)
        except ReconstructionFailure:
            d += 1
    raise InsufficientPrecision(f"no rational function confirmed with {N} terms")


def reconstruct_maps(K, fwd, mir, x0, V, margin=8):
    """p(x), A_i(x), B_i(x) from the symmetric functions along P(t) and along
    its mirror image; the even and odd parts are Pade-reconstructed in t and
    shifted back to x = x_0 + t."""
    R = K.R
    pf = symmetric_functions(K, fwd)
    pm = symmetric_functions(K, mir)
    N = min(len(fwd[0]), len(mir[0])) - 1
    half = K(2).inverse()
    Vinv = V.inverse()
    nums, dens = [], []
    for a, b in zip(pf, pm):
        for s in ((a + b) * half, (a - b) * half * Vinv):
            num, den = _pade_adaptive(s.truncate(N), margin)
            num, den = _shift_poly(R, num, x0), _shift_poly(R, den, x0)
            lc = den.leading_coefficient().inverse()
            nums.append(num * lc)
            dens.append(den * lc)
    p = R([K.one])
    for d in dens:
        p = p * (d // p.gcd(d))
    full = [n * (p // d) for n, d in zip(nums, dens)]
    return p, full[0::2], full[1::2]


class IsogenyBuilder:
    """Series continuation and reconstruction from a base point P = (x0, y0)
    with known image E_{psi(P)} and pullback matrix m."""

    def __init__(self, K, curve, model, m, x0, y0):
        self.K = K
        self.curve = curve
        self.model = model
        self.m = m
        self.x0 = x0
        self.y0 = y0

    def build(self, start, start_mirror, prec=80, margin=8, max_prec=640):
        K = self.K
        while True:
            fp = formal_point(self.curve, (self.x0, self.y0), K.one, prec + 2)
            V = fp.Y
            fwd = continue_series(K, self.model, start, self.m, self.x0, V, prec)
            mir = continue_series(K, self.model, start_mirror, self.m, self.x0, -V, prec)
            self.states, self.V = (fwd, mir), V
            try:
                p, A, B = reconstruct_maps(K, fwd, mir, self.x0, V, margin)
            except InsufficientPrecision:
                if 2 * prec > max_prec:
                    raise
                prec *= 2
                continue
            return IsogenyMap(K, p, A, B, self.m)


# ----------------------------------------------------------------------------
# the three steps, and evaluation


def pullback_matrix(qt, tau, lifter, model, point, psi, v, pencil=0, prec=4):
    """(m, m_bar) at the base point P = (x_0, y_0) with psi = psi([P - oo]).

    m comes from the family E_{psi(P(t)) - t_i}; m_bar is solved separately
    from the family E_{-psi(P(t)) - t_i} over the mirrored point, written with
    the same V(t), so that m_bar = -m is a genuine check."""
    K = lifter.K
    x0, y0 = point
    if y0.is_zero():
        raise Degenerate("base point is a Weierstrass point")
    fi = FormalImage(qt, tau, lifter, point, v, prec, pencil)
    t = fi.pencil.t
    fwd = fi.lift(model, model_divisor((psi - t).E))
    mir = fi.lift(model, model_divisor((-psi - t).E))
    V = fi.fp.Y
    m = pullback_from_state(K, model, fwd, x0, V)
    m_bar = pullback_from_state(K, model, mir, x0, V)
    return m, m_bar


def isogeny_eval(F, P):
    """The x- and y-cubics of F(P) for an affine point P = (x, y)."""
    return F.cubics(*P)


def cubics_to_divisor(chart, cx, cy):
    """The degree-3 divisor on D cut out by the two model cubics."""
    from .algebra import PolyRing
    K = chart.K
    x, y, z = PolyRing(K, ["x", "y", "z"]).gens()

    def hom(f, v):
        c = list(f.coeffs()) + [K.zero] * 4
        return (v * v * v * c[3] + v * v * z * c[2] + v * z * z * c[1]
                + z * z * z * c[0])
    A = chart.cut(chart.form(hom(cx, x)), 3)
    B = chart.cut(chart.form(hom(cy, y)), 3)
    g = A.u.gcd(B.u)
    g = g.gcd((A.w - B.w) % g) if g.degree() > 0 else g
    g = g * g.leading_coefficient().inverse()
    if g.degree() != 3:
        raise Degenerate("the two cubics do not cut a single degree-3 divisor")
    from .quartcurve import QDiv
    return QDiv(chart, g, A.w % g)


def image_class(J, F, P):
    """F(P) as a class on J_D."""
    cx, cy = F.cubics(*P)
    return J.from_effective(cubics_to_divisor(J.chart, cx, cy))
