"""Level-2 theta bookkeeping and the theta constants of the quotient J_C/V.

Conventions.  A characteristic is a pair (a, b) of bit-vectors of length 3
(top and bottom halves times 2).  Its linear index is
i = sum c_j 2^j with bottom = (c_0, c_1, c_2) and top = (c_3, c_4, c_5).  A
two-torsion point S = sum a_k S_k over a symplectic basis S_1..S_6 carries the
characteristic top = (a_1, a_2, a_3), bottom = (a_4, a_5, a_6).  Schroedinger
coordinates X_{i1 i2 i3} are stored at position 4 i1 + 2 i2 + i3.

All exponential factors in the conversion formulas reduce to signs
(-1)^{<beta, a>} on bit-vectors.
"""
from __future__ import annotations

import itertools

from .field import Series
from .hypercurve import (Degenerate, FormalClass, two_torsion,
                         two_torsion_pairing_combinatorial)
from .weil import (TorsionGroup, WeilSet, HyperWeilFunction, PersistentDegeneracy,
                   hyper_weil_set)


class InvalidSubset(ValueError):
    pass


class NoSolution(ArithmeticError):
    pass


class ThetaTildeVanishes(ArithmeticError):
    pass


class HyperellipticCodomain(ArithmeticError):
    pass


class DegenerateOffset(ArithmeticError):
    pass


class ZeroNormalizer(ArithmeticError):
    pass


class InconsistentInput(ArithmeticError):
    pass


# ----------------------------------------------------------------------------
# characteristic indexing


def bits(n, k=3):
    return tuple((n >> (k - 1 - i)) & 1 for i in range(k))


def from_bits(t):
    n = 0
    for b in t:
        n = 2 * n + b
    return n


def char_index(top, bottom):
    """Linear index of the characteristic [top; bottom] (3-bit tuples)."""
    c = list(bottom) + list(top)
    return sum(v << j for j, v in enumerate(c))


def char_of_index(i):
    c = [(i >> j) & 1 for j in range(6)]
    return tuple(c[3:]), tuple(c[:3])


def coords_to_index(a):
    """Index of the characteristic of S = sum a_k S_k."""
    return char_index(a[:3], a[3:])


def index_to_coords(i):
    top, bottom = char_of_index(i)
    return top + bottom


def char_parity(i):
    top, bottom = char_of_index(i)
    return sum(x * y for x, y in zip(top, bottom)) % 2


EVEN = [i for i in range(64) if char_parity(i) == 0]
ODD = [i for i in range(64) if char_parity(i) == 1]


def dot(a, b):
    return sum(x * y for x, y in zip(a, b)) % 2


# ----------------------------------------------------------------------------
# theta characteristics of the hyperelliptic curve


def parity(T, g=3):
    """Parity of theta_T for a set T of branch points (8-bit mask, bit 7 is
    oo): 'even' iff #T = g + 1 mod 4."""
    n = bin(T & 0xFF).count("1")
    if n % 2 != (g + 1) % 2:
        raise InvalidSubset(T)
    return "even" if n % 4 == (g + 1) % 4 else "odd"


# even affine subsets forming a symplectic basis for (-1)^{#(A & B)}:
# S_1..S_3 against S_4..S_6
SYMPLECTIC_MASKS = (0b0000011, 0b0001111, 0b0111111,
                    0b0000110, 0b0011000, 0b1100000)


def symplectic_basis(curve, masks=SYMPLECTIC_MASKS):
    for i in range(6):
        for j in range(6):
            want = -1 if abs(i - j) == 3 else 1
            if two_torsion_pairing_combinatorial(masks[i], masks[j]) != want:
                raise NoSolution("masks are not a symplectic basis")
    return [two_torsion(curve, m) for m in masks]


def compute_S_delta(masks, g=3):
    """All eps in {0,1}^{2g} with
    (#T_i - (g+1))/2 = eps_{g+i} + sum_j eps_j eps_{g+j}   (i <= g)
    (#T_i - (g+1))/2 = eps_{i-g} + sum_j eps_j eps_{g+j}   (i > g).
    Returns the list of solutions as tuples (possibly several)."""
    rhs = [((bin(m).count("1") - (g + 1)) // 2) % 2 for m in masks]
    out = []
    for eps in itertools.product((0, 1), repeat=2 * g):
        q = sum(eps[j] * eps[g + j] for j in range(g)) % 2
        ok = True
        for i in range(2 * g):
            lin = eps[g + i] if i < g else eps[i - g]
            if (lin + q) % 2 != rhs[i]:
                ok = False
                break
        if ok:
            out.append(eps)
    if not out:
        raise NoSolution("no S_delta for this basis")
    return out


def d_prime(a, b, g=3):
    """-1 on the pairs (S_i, S_{g+i}), bilinear: (-1)^{sum a_i b_{g+i}}."""
    return -1 if sum(a[i] * b[g + i] for i in range(g)) % 2 else 1


# ----------------------------------------------------------------------------
# Schroedinger coordinates


def squares_to_schrodinger(v):
    """Kummer coordinates X_a from the 64 values v[a;b] ~ theta[a;b](z)^2:
    X_a proportional to sum_beta (-1)^{<beta,a>} v[a;beta]."""
    out = []
    for a_n in range(8):
        a = bits(a_n)
        s = None
        for b_n in range(8):
            beta = bits(b_n)
            t = v[char_index(a, beta)]
            t = -t if dot(a, beta) else t
            s = t if s is None else s + t
        out.append(s)
    return out


def schrodinger_to_squares(x, theta0):
    """theta[a;b](z)^2 = sum_beta (-1)^{<beta,b>} X_beta(z) X_{beta+a}(0),
    normalized so the [0;0] entry is 1."""
    v = [None] * 64
    for i in range(64):
        a, b = char_of_index(i)
        s = None
        for beta_n in range(8):
            beta = bits(beta_n)
            ab = tuple(p ^ q for p, q in zip(beta, a))
            t = x[beta_n] * theta0[from_bits(ab)]
            t = -t if dot(beta, b) else t
            s = t if s is None else s + t
        v[i] = s
    if v[0].is_zero():
        raise ZeroNormalizer("theta[0;0](z) vanishes")
    inv = v[0].inverse()
    return [e * inv for e in v]


def two_torsion_translate(x, w1, w2):
    """Kummer coordinates of a + w from those of a, for w = (w1, w2) in
    {0,1}^3 x {0,1}^3: entry P becomes (-1)^{<P, w2>} X_{P + w1}."""
    out = []
    for p_n in range(8):
        P = bits(p_n)
        src = from_bits(tuple(p ^ q for p, q in zip(P, w1)))
        t = x[src]
        out.append(-t if dot(P, w2) else t)
    return out


def proj_equal(a, b):
    """Projective equality of two coordinate vectors."""
    n = len(a)
    i0 = next((i for i in range(n) if not a[i].is_zero()), None)
    if i0 is None or b[i0].is_zero():
        return False
    lam = b[i0] / a[i0]
    return all(a[i] * lam == b[i] for i in range(n))


def proj_normalize(a):
    i0 = next(i for i in range(len(a)) if not a[i].is_zero())
    inv = a[i0].inverse()
    return [x * inv for x in a]


class PairingSign:
    """A +-1 valued pairing on coordinate tuples, returned as field elements."""

    def __init__(self, K, fn):
        self.K = K
        self.fn = fn

    def __call__(self, a, b):
        return self.K(self.fn(a, b))


# ----------------------------------------------------------------------------
# theta-tilde and the quotient theta constants


class QuotientTheta:
    """Data attached to J_C -> A = J_C/V for V maximal isotropic in J_C[ell].

    Holds the symmetric normal Weil set on V, theta~ = sum_{P in V} f~_P, the
    level-2 Weil set {eta_S} on J_C[2] with its normalization beta (for the
    pushed-forward functions g_S), the symplectic basis and S_delta.
    """

    def __init__(self, curve, gens, ell, rng, masks=SYMPLECTIC_MASKS):
        self.C = curve
        self.K = curve.K
        self.ell = ell
        self.rng = rng
        self.V = hyper_weil_set(gens, ell, curve)
        self.V.normalize_symmetric(rng)
        self.masks = masks
        self.S = symplectic_basis(curve, masks)
        self.two = hyper_weil_set(self.S, 2, curve,
                                  d=PairingSign(self.K, d_prime), power=ell)
        self.two.normalize_recurrence(rng)
        self.delta_candidates = compute_S_delta(masks)
        self.delta = None
        self.v0 = None
        self.tsv = None

    # theta~ on J_C
    def theta_tilde(self, z):
        s = None
        for c in self.V.G.coords():
            t = self.V.ft(c, z)
            s = t if s is None else s + t
        return s

    def two_point(self, a):
        return self.two.G[a]

    def v_elements(self):
        return [c for c in sorted(self.V.G.coords()) if any(c)]

    def xi_values(self, z, shift=None):
        """The 64 values beta_S eta_S^ell(z) theta~^2(z + S) / theta~^2(z),
        indexed by characteristic index; z = P + S_delta (+ element of V).

        ``shift(S)`` returns z + S (class addition by default)."""
        shift = shift or (lambda S: z + S)
        t0 = self.theta_tilde(z)
        if isinstance(t0, Series):
            if t0.valuation() != 0:
                raise ThetaTildeVanishes("theta~ vanishes at the base point")
        elif t0.is_zero():
            raise ThetaTildeVanishes("theta~ vanishes at the base point")
        inv0 = (t0 * t0) ** -1 if isinstance(t0, Series) else (t0 * t0).inverse()
        out = [None] * 64
        G2 = self.two.G
        for a in G2.coords():
            ts = self.theta_tilde(shift(G2[a]))
            if any(a):
                # ft includes beta_S eta_S(z); eta is raised to ell
                val = self.two.alpha[a] * self.two.f(a, z) ** self.ell
                out[coords_to_index(a)] = val * ts * ts * inv0
            else:
                out[coords_to_index(a)] = ts * ts * inv0
        return out

    def offset(self, v=None):
        Sd = self.C.zero()
        for e, S in zip(self.delta, self.S):
            if e:
                Sd = Sd + S
        return Sd if v is None else Sd + self.V.G[v]

    def xi_formal(self, fp, v):
        """xi values along the formal class [P(t) - oo] + S_delta + v."""
        base = self.offset(v)
        z = FormalClass(self.C, fp, base)
        return self.xi_values(z, lambda S: FormalClass(self.C, fp, base + S))

    def constants(self, delta=None, v0_list=None):
        """Quotient theta constants at S_delta + v0 for the first admissible
        v0 in V; returns the 64-vector."""
        cands = [delta] if delta else self.delta_candidates
        errs = []
        for eps in cands:
            Sd = self.C.zero()
            for e, S in zip(eps, self.S):
                if e:
                    Sd = Sd + S
            for v in (v0_list or self.v_elements()):
                z = Sd + self.V.G[v]
                try:
                    tsv = self.xi_values(z)
                except (Degenerate, ThetaTildeVanishes, ZeroDivisionError) as exc:
                    errs.append(exc)
                    continue
                if all(tsv[i].is_zero() for i in ODD) and \
                        not any(tsv[i].is_zero() for i in EVEN):
                    self.delta, self.v0, self.tsv = eps, v, tsv
                    return tsv
                errs.append(ValueError(f"vanishing pattern failed for eps={eps}"))
                break
        raise DegenerateOffset(f"no admissible (S_delta, v0): {errs[-3:]}")

    def kummer_zero(self):
        return squares_to_schrodinger(self.tsv)

    def image_xi(self, P, v=None):
        """xi values at psi(P): evaluated at P + S_delta + v, v in V."""
        return self.xi_values(P + self.offset(v))

    def kummer_image(self, P, v=None):
        """Schroedinger coordinates of kappa_A(psi(P))."""
        return squares_to_schrodinger(self.image_xi(P, v))


# ----------------------------------------------------------------------------
# quartic relations among theta constants


RELATIONS = (
    ((5, 12, 33, 40), (21, 28, 49, 56), (42, 35, 14, 7)),
    ((49, 47, 28, 2), (54, 40, 27, 5), (61, 35, 16, 14)),
    ((54, 33, 27, 12), (56, 47, 21, 2), (61, 42, 16, 7)),
)


def relation_squares(tsv, rel):
    """(A^2, B^2, C^2) for the three four-fold products in a relation."""
    out = []
    for quad in rel:
        p = tsv[0] ** 0
        for i in quad:
            p = p * tsv[i]
        out.append(p)
    return out


def check_relations(tsv):
    """Each relation A - B -+ C = 0 among theta products implies, after
    squaring out the unknown signs, (A^2 + B^2 - C^2)^2 = 4 A^2 B^2."""
    ok = []
    for rel in RELATIONS:
        A2, B2, C2 = relation_squares(tsv, rel)
        lhs = (A2 + B2 - C2) ** 2
        ok.append(lhs == 4 * A2 * B2)
    return ok
