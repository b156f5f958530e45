"""From quotient theta constants to a plane quartic model of the codomain.

The seven Aronhold bitangents are x, y, z, x+y+z and three lines whose
coefficients alpha_ij are ratios of theta constants.  Only squares of theta
constants are known, so the alpha_ij are recovered from alpha_i1^2 and the
products alpha_i1 alpha_ij, both of which are rational in the squares.
"""
from __future__ import annotations

from .field import elem_sqrt, NotASquare
from .linalg import solve, SingularLinearSystem
from .theta import RELATIONS, check_relations


class RelationViolated(ArithmeticError):
    pass


class RootNotInField(ArithmeticError):
    pass


class SingularSystem(ArithmeticError):
    pass


class InconsistentMatrix(ArithmeticError):
    pass


def _prod(vals):
    out = vals[0]
    for v in vals[1:]:
        out = out * v
    return out


class AronholdSystem:
    """The matrix alpha (3x3) of the three non-trivial Aronhold lines."""

    def __init__(self, K, alpha):
        self.K = K
        self.alpha = [list(r) for r in alpha]

    def lines(self):
        """The seven bitangents as coefficient triples (a, b, c) of ax+by+cz."""
        o, z = self.K.one, self.K.zero
        fixed = [(o, z, z), (z, o, z), (z, z, o), (o, o, o)]
        return fixed + [tuple(r) for r in self.alpha]

    def to_json(self):
        return {"alpha": [[self.K.to_ints(a) for a in r] for r in self.alpha]}

    @classmethod
    def from_json(cls, K, d):
        return cls(K, [[K.from_ints(a) for a in r] for r in d["alpha"]])


def _sqrt(x):
    try:
        return elem_sqrt(x)
    except NotASquare as exc:
        raise RootNotInField(str(exc)) from None


def aronhold(tsv, K, take_root=False):
    """Aronhold matrix from the 64 squared theta constants (tsv[i] stands for
    theta_i^2 / theta_0^2).

    Row i is obtained from alpha_i1^2 and the two products alpha_i1 alpha_ij,
    which are read off from the i-th quartic relation A - B -+ C = 0 via
    A B = (A^2 + B^2 - C^2)/2 style identities.

    With take_root the rows are divided by a square root of alpha_i1^2
    (RootNotInField when it is not a square); otherwise each row is returned
    multiplied by alpha_i1, which needs no root and describes the same line."""
    if not all(check_relations(tsv)):
        raise RelationViolated("theta relations fail on the input")
    t = tsv
    two_inv = K(2).inverse()

    # row 1: A = t5 t12 t33 t40, B = t21 t28 t49 t56, C = t42 t35 t14 t7, A = B + C
    A2, B2, C2 = [_prod([t[i] for i in q]) for q in RELATIONS[0]]
    a11_sq = t[5] * t[12] / (t[33] * t[40])
    a11a12 = (A2 + B2 - C2) * two_inv / _prod([t[33], t[40], t[49], t[56]])
    a11a13 = (A2 + C2 - B2) * two_inv / _prod([t[33], t[40], t[35], t[42]])

    # row 2: A' = t49 t47 t28 t2, B' = t54 t40 t27 t5, C' = t61 t35 t16 t14, A' = B' + C'
    A2, B2, C2 = [_prod([t[i] for i in q]) for q in RELATIONS[1]]
    a21_sq = t[5] * t[27] / (t[40] * t[54])
    a21a22 = (A2 + B2 - C2) * two_inv / _prod([t[40], t[54], t[47], t[49]])
    a21a23 = (A2 - B2 - C2) * two_inv / _prod([t[40], t[54], t[35], t[61]])

    # row 3: A'' = t54 t33 t27 t12, B'' = t56 t47 t21 t2, C'' = t61 t42 t16 t7,
    # A'' - B'' + C'' = 0; alpha_31 carries a minus sign
    A2, B2, C2 = [_prod([t[i] for i in q]) for q in RELATIONS[2]]
    a31_sq = t[12] * t[27] / (t[33] * t[54])
    a31a32 = -(A2 + B2 - C2) * two_inv / _prod([t[33], t[54], t[47], t[56]])
    a31a33 = -(B2 - A2 - C2) * two_inv / _prod([t[33], t[54], t[42], t[61]])

    alpha = []
    for sq, p2, p3 in ((a11_sq, a11a12, a11a13), (a21_sq, a21a22, a21a23),
                       (a31_sq, a31a32, a31a33)):
        if take_root:
            r = _sqrt(sq)
            rinv = r.inverse()
            alpha.append([r, p2 * rinv, p3 * rinv])
        else:
            # the row scaled by alpha_i1: same line, and the Riemann model is
            # invariant under row scalings, so no square root is needed
            alpha.append([sq, p2, p3])
    return AronholdSystem(K, alpha)


# ----------------------------------------------------------------------------
# Riemann's model


class RiemannModel:
    """Quartic (x xi1 + y xi2 - z xi3)^2 - 4 x y xi1 xi2 with its data.

    xi[i] is a coefficient triple (of x, y, z)."""

    def __init__(self, aron, u, k, xi, quartic):
        self.aron = aron
        self.u = u
        self.k = k
        self.xi = xi
        self.quartic = quartic


def _linform(ring, c):
    x, y, z = ring.gens()
    return x * c[0] + y * c[1] + z * c[2]


def riemann_model(aron):
    """Quartic model attached to an Aronhold system."""
    from .algebra import PolyRing
    from .quartcurve import PlaneQuartic, SingularQuartic  # noqa: F401
    K = aron.K
    a = aron.alpha
    one = K.one
    try:
        inv = [[a[i][j].inverse() for j in range(3)] for i in range(3)]
    except ZeroDivisionError:
        raise SingularSystem("an Aronhold coefficient vanishes") from None
    minus = [-one] * 3
    try:
        # sum_i u_i / alpha_ij = -1 for j = 1..3
        u = solve([[inv[i][j] for i in range(3)] for j in range(3)], minus, K)
        # sum_i k_i u_i alpha_ij = -1
        k = solve([[u[i] * a[i][j] for i in range(3)] for j in range(3)], minus, K)
        # rows (1,1,1), (1/alpha_i1, ...) applied to xi equal -(1,1,1), -k_i alpha_i
        M = [[one, one, one]] + [inv[i] for i in range(3)]
        R = [[one, one, one]] + [[k[i] * a[i][j] for j in range(3)] for i in range(3)]
        xi_cols = []
        for var in range(3):
            xi_cols.append(solve(M, [-r[var] for r in R], K))
    except SingularLinearSystem as exc:
        raise SingularSystem(str(exc)) from None
    xi = [tuple(xi_cols[var][i] for var in range(3)) for i in range(3)]
    ring = PolyRing(K, ["x", "y", "z"])
    x, y, z = ring.gens()
    l1, l2, l3 = (_linform(ring, c) for c in xi)
    F = (x * l1 + y * l2 - z * l3) ** 2 - x * y * l1 * l2 * K(4)
    Q = PlaneQuartic.from_mpoly(F)
    return RiemannModel(aron, u, k, xi, Q)


# ----------------------------------------------------------------------------
# bitangents, two-torsion and the level-2 Weil set on J_D

# columns: reduced characteristics of L_1..L_7 - delta over E_1..E_6
ARONHOLD_MATRIX = (
    (1, 0, 0, 1, 1, 1, 0),
    (1, 0, 1, 0, 0, 1, 1),
    (1, 1, 1, 1, 0, 0, 0),
    (1, 0, 0, 1, 1, 0, 1),
    (1, 1, 0, 0, 0, 1, 1),
    (1, 1, 1, 0, 1, 0, 0),
)


def _f2_right_inverse(M):
    """N (7x6 over F_2) with M N = I, using the first six columns of M."""
    n = len(M)
    A = [[M[i][j] for j in range(n)] + [1 if k == i else 0 for k in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            raise InconsistentMatrix("matrix has no right inverse over F_2")
        A[col], A[piv] = A[piv], A[col]
        for r in range(n):
            if r != col and A[r][col]:
                A[r] = [x ^ y for x, y in zip(A[r], A[col])]
    inv = [row[n:] for row in A]  # inverse of the leading 6x6 block
    return [inv[i] for i in range(n)] + [[0] * n]


def model_point_key(pt, K):
    """Sort key of a projective model point, scaled to first nonzero = 1."""
    i0 = next(i for i in range(3) if not pt[i].is_zero())
    inv = pt[i0].inverse()
    return tuple(K.to_ints(c * inv) for c in pt)


def d_double_prime(a, b):
    """-1 exactly on the pairs (E_i, E_{i+3}), bilinearly extended."""
    return -1 if sum(a[i] * b[i + 3] for i in range(3)) % 2 else 1


class BitangentBasis:
    """The Jacobian of the model with its bitangent data.

    contacts[i] is the degree-2 divisor B_i with 2 B_i cut by the i-th
    Aronhold line; L_i is its class; delta_D ~ B_1 + ... + B_7 - 3K and the
    zero class is represented by E0 ~ oo_1 + delta_D."""

    def __init__(self, model, chart, contacts, inf1, inf2, J, N):
        self.model = model
        self.chart = chart
        self.contacts = contacts
        self.inf1 = inf1
        self.inf2 = inf2
        self.J = J
        self.N = N
        self._cache = {}
        self.E = [self.two_torsion(tuple(1 if k == j else 0 for k in range(6)))
                  for j in range(6)]

    def subset(self, c):
        """Even subset s of {0..6} with sum_j c_j E_j = sum_{i in s} (L_i - delta)."""
        s = [sum(self.N[i][j] * c[j] for j in range(6)) % 2 for i in range(7)]
        if sum(s) % 2:
            s = [1 - x for x in s]
        return s

    def canonical(self):
        # the bitangent z = 0 cuts K_D = 2 oo_1 + 2 oo_2
        return self.contacts[2].multiple(2)

    def two_torsion(self, c):
        """sum c_j E_j as a class: sum_{i in s} B_i - (|s|/2) K."""
        c = tuple(c)
        if c in self._cache:
            return self._cache[c]
        s = self.subset(c)
        if not any(s):
            P = self.J.zero()
        else:
            pos = None
            for i in range(7):
                if s[i]:
                    pos = self.contacts[i] if pos is None else pos + self.contacts[i]
            Kd = self.canonical()
            neg = Kd
            for _ in range(sum(s) // 2 - 1):
                neg = neg + Kd
            P = self.J.from_difference(pos, neg)
        self._cache[c] = P
        return P

    def L_minus_delta(self, i):
        """The two-torsion class L_i - delta = [B_i + oo_1 - E0]."""
        return self.J.from_difference(self.contacts[i] + self.inf1, self.J.E0)


def bitangent_basis(model, rng):
    """Chart, contact divisors, oo_1, the Jacobian and the E-basis."""
    from .algebra import PolyRing
    from .quartcurve import Chart, half_divisor, QJacobian, NonReducedInput
    aron = model.aron
    K = aron.K
    ch = Chart.random(model.quartic, rng)
    ring = PolyRing(K, ["x", "y", "z"])
    contacts = []
    for line in aron.lines():
        D = ch.cut(ch.form(_linform(ring, line)), 1)
        try:
            contacts.append(half_divisor(D))
        except NonReducedInput:
            raise InconsistentMatrix("an Aronhold line is not a bitangent") from None
    pts = contacts[2].points(rng)
    if len(pts) != 2:
        raise InconsistentMatrix("contact points of z = 0 are not rational")
    pts.sort(key=lambda p: model_point_key(ch.to_model(*p), K))
    inf1 = ch.point_divisor(*pts[0])
    inf2 = ch.point_divisor(*pts[1])
    # E0 ~ oo_1 + sum B_i - 3K
    pos = inf1
    for b in contacts:
        pos = pos + b
    neg = None
    for _ in range(3):
        L = ch.cut(ch.linear([K.random(rng) for _ in range(3)]), 1)
        neg = L if neg is None else neg + L
    E0 = ch.effective_rep(pos, neg, rng)
    J = QJacobian(ch, inf1, E0, rng)
    N = _f2_right_inverse(ARONHOLD_MATRIX)
    return BitangentBasis(model, ch, contacts, inf1, inf2, J, N)


def zeta_set(bb, rng):
    """Normal Weil set {zeta_P} on J_D[2] with respect to d''."""
    from .weil import TorsionGroup, WeilSet
    from .quartcurve import QuarticWeilFunction
    from .theta import PairingSign
    J = bb.J
    K = J.K
    G = TorsionGroup(bb.E, 2, J.zero())
    ch = bb.chart

    def sample(r):
        return J.from_points([ch.random_point(r) for _ in range(3)])

    def func(P, c):
        return QuarticWeilFunction(-P, 2, rng)
    ws = WeilSet(G, func, sample, d=PairingSign(K, d_double_prime))
    ws.normalize_recurrence(rng)
    return ws
