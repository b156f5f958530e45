"""Exact arithmetic in F_p and F_{p^k}.

Elements and univariate polynomials are python-flint ``fq_default`` and
``fq_default_poly`` objects; this module wraps them with the operations the
rest of the package relies on: deterministic square roots, seeded
factorization (distinct-degree + equal-degree splitting), truncated power
series with explicit precision, and Pade reconstruction by continued
fractions.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import flint


class FieldError(ArithmeticError):
    pass


class NotPrime(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class NotASquare(FieldError):
    pass


class ZeroPolynomial(FieldError):
    pass


class InsufficientPrecision(FieldError):
    pass


class DivisionByNonUnit(FieldError):
    pass


class ReconstructionFailure(FieldError):
    pass


def _is_prime(n):
    return n > 1 and bool(flint.fmpz(n).is_prime())


# flint contexts are shared and never released: the cycle collector may
# otherwise free a context before the elements that point into it
_CONTEXTS = {}


class ExtField:
    """The field F_p[b]/(modulus).

    ``modulus`` is a coefficient list, constant term first, monic of degree k.
    """

    def __init__(self, p, k, modulus=None):
        if not _is_prime(p):
            raise NotPrime(p)
        if p == 2:
            raise NotPrime("characteristic 2 is not supported")
        self.p = p
        self.k = k
        if modulus is None:
            ctx = flint.fq_default_ctx(p, k)
            modulus = [int(c) for c in ctx.modulus().coeffs()]
        else:
            modulus = [int(c) % p for c in modulus]
            while modulus and modulus[-1] == 0:
                modulus.pop()
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree k")
        key = (p, k, tuple(modulus))
        if key not in _CONTEXTS:
            mp = flint.fmpz_mod_poly_ctx(p)(modulus)
            if not mp.is_irreducible():
                raise ReducibleModulus(modulus)
            ctx = flint.fq_default_ctx(p, k, modulus=mp)
            _CONTEXTS[key] = (ctx, flint.fq_default_poly_ctx(ctx), mp)
        self.ctx, self.R, _ = _CONTEXTS[key]
        self.modulus = modulus
        self.q = p ** k
        self.zero = self.ctx.zero()
        self.one = self.ctx.one()

    def __repr__(self):
        return f"ExtField(p={self.p}, k={self.k})"

    def __eq__(self, other):
        return isinstance(other, ExtField) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, tuple(self.modulus)))

    def __call__(self, x):
        if isinstance(x, (list, tuple)):
            return self.ctx([int(c) for c in x])
        return self.ctx(x)

    def gen(self):
        return self.ctx.gen()

    def b_pow(self, e):
        """The element b^e, with b the generator of the tower."""
        return elem_pow(self.ctx.gen(), e)

    def random(self, rng):
        return self.ctx([rng.randrange(self.p) for _ in range(self.k)])

    def random_nonzero(self, rng):
        while True:
            x = self.random(rng)
            if not x.is_zero():
                return x

    def to_ints(self, x):
        c = [int(v) for v in x.to_list()]
        return c + [0] * (self.k - len(c))

    def from_ints(self, c):
        if len(c) != self.k or any(not 0 <= int(v) < self.p for v in c):
            raise ValueError(f"bad element encoding {c!r}")
        return self.ctx([int(v) for v in c])

    def poly(self, coeffs):
        return self.R([self.ctx(c) if not isinstance(c, flint.fq_default) else c
                       for c in coeffs])

    def x(self):
        return self.R([self.zero, self.one])

    def to_json(self):
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d):
        return cls(int(d["p"]), int(d["k"]), [int(c) for c in d["modulus"]])


def field_build(p, k, modulus):
    """Build F_{p^k}; ``modulus`` is a coefficient list (constant first)."""
    return ExtField(p, k, modulus)


def elem_pow(x, e):
    if e < 0:
        return (x ** (-e)).inverse()
    return x ** e


def lex_key(x):
    return [int(v) for v in x.to_list()]


def elem_sqrt(x):
    """A square root of x; the root with the smaller coefficient vector
    (compared constant term first) is returned."""
    if x.is_zero():
        return x
    if not x.is_square():
        raise NotASquare(str(x))
    r = x.sqrt()
    k = len(r.to_list())
    a = lex_key(r)
    b = lex_key(-r)
    a += [0] * (k - len(a))
    b += [0] * (k - len(b))
    return r if a <= b else -r


def is_square(x):
    return x.is_zero() or x.is_square()


# ----------------------------------------------------------------------------
# polynomials


def poly_coeffs(f, n=None):
    """Coefficient list of f (constant term first), padded to length n."""
    c = list(f.coeffs())
    if n is not None:
        if len(c) > n:
            raise ValueError("polynomial longer than requested length")
        z = f.context().base_field().zero() if hasattr(f.context(), "base_field") else 0
        c += [z] * (n - len(c))
    return c


def _frob_power(f, q, modulus):
    x = modulus.context().gen()
    return x.pow_mod(q, modulus) if f is None else f.pow_mod(q, modulus)


def squarefree_decomposition(f):
    """Yun's algorithm; returns [(g_i, i)] with f = lc * prod g_i^i."""
    F = f.context()
    f = f.monic()
    out = []
    if f.degree() <= 0:
        return out
    df = f.derivative()
    if df.is_zero():
        # f = g(x^p)
        p = F.base_field().characteristic()
        c = f.coeffs()
        g = F([c[i].pth_root() for i in range(0, len(c), p)])
        return [(h, m * p) for h, m in squarefree_decomposition(g)]
    a = f.gcd(df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    i = 1
    while b.degree() > 0:
        a = b.gcd(d)
        b = b // a
        c = d // a
        d = c - b.derivative()
        if a.degree() > 0:
            out.append((a.monic(), i))
        i += 1
    # leftover p-th power part
    rest = f
    for g, m in out:
        for _ in range(m):
            rest = rest // g
    if rest.degree() > 0:
        out.extend(squarefree_decomposition(rest))
        merged = {}
        for g, m in out:
            key = str(g)
            merged.setdefault(key, [g, 0])[1] += m
        out = [(g, m) for g, m in merged.values()]
    return out


def distinct_degree(f, q):
    """Split a squarefree monic f into [(g_d, d)], g_d the product of the
    degree-d irreducible factors."""
    F = f.context()
    x = F.gen()
    out = []
    h = x
    d = 0
    while f.degree() >= 2 * (d + 1):
        d += 1
        h = h.pow_mod(q, f)
        g = f.gcd(h - x)
        if g.degree() > 0:
            out.append((g.monic(), d))
            f = f // g
            h = h % f
    if f.degree() > 0:
        out.append((f.monic(), f.degree()))
    return out


def equal_degree(f, d, q, rng):
    """Split f, a product of distinct degree-d irreducibles, completely."""
    n = f.degree()
    if n == d:
        return [f.monic()]
    F = f.context()
    K = F.base_field()
    p = K.characteristic()
    kdeg = K.degree()
    e = (q ** d - 1) // 2
    while True:
        a = F([K([rng.randrange(p) for _ in range(kdeg)]) for _ in range(n)])
        if a.degree() <= 0:
            continue
        g = f.gcd(a)
        if 0 < g.degree() < n:
            break
        b = a.pow_mod(e, f) - 1
        g = f.gcd(b)
        if 0 < g.degree() < n:
            break
    g = g.monic()
    return equal_degree(g, d, q, rng) + equal_degree(f // g, d, q, rng)


def poly_factor(f, rng=None, q=None):
    """Factor f into monic irreducibles; returns [(g, multiplicity)].

    q is the field order (read from f's context when omitted).
    """
    if f.is_zero():
        raise ZeroPolynomial()
    if rng is None:
        rng = random.Random(0)
    K = f.context().base_field()
    if q is None:
        q = K.characteristic() ** K.degree()
    out = []
    for g, m in squarefree_decomposition(f):
        for h, d in distinct_degree(g, q):
            for irr in equal_degree(h, d, q, rng):
                out.append((irr, m))
    out.sort(key=lambda t: (t[0].degree(), [lex_key(c) for c in t[0].coeffs()]))
    return out


def poly_roots(f, rng=None):
    """Roots of f in its coefficient field, with multiplicity."""
    return [(-g.coeffs()[0], m) for g, m in poly_factor(f, rng) if g.degree() == 1]


def resultant(f, g):
    """Resultant of two univariate polynomials over a field (Euclid)."""
    K = f.context().base_field()
    one = K.one()
    if f.is_zero() or g.is_zero():
        return K.zero()
    res = one
    while True:
        m, n = f.degree(), g.degree()
        if n == 0:
            return res * g.leading_coefficient() ** m
        r = f % g
        if r.is_zero():
            return K.zero()
        if (m * n) % 2:
            res = -res
        res = res * g.leading_coefficient() ** (m - r.degree())
        f, g = g, r


def interpolate(R, xs, ys):
    """Lagrange interpolation (Newton form) over the polynomial ring R."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    X = R.gen()
    out = R([coef[-1]])
    for i in range(n - 2, -1, -1):
        out = out * (X - xs[i]) + coef[i]
    return out


def crt_pair(a1, m1, a2, m2):
    """The b mod m1*m2 with b = a1 mod m1, b = a2 mod m2 (coprime moduli)."""
    g, s, t = m1.xgcd(m2)
    if g.degree() != 0:
        raise ValueError("moduli are not coprime")
    s = s / g.coeffs()[0]
    return (a1 + (a2 - a1) * s * m1) % (m1 * m2)


# ----------------------------------------------------------------------------
# truncated power series


@dataclass(frozen=True)
class Series:
    """t^val * (c_0 + c_1 t + ... + O(t^prec)); ``prec`` is relative.

    ``c`` is a polynomial over the coefficient field, kept truncated below
    t^prec.
    """

    c: object
    prec: int
    val: int = 0

    @classmethod
    def from_poly(cls, f, prec, val=0):
        return cls(f.truncate(prec) if prec > 0 else f * 0, prec, val)

    @property
    def abs_prec(self):
        return self.val + self.prec

    def coeff(self, i):
        """Coefficient of t^i (absolute exponent)."""
        j = i - self.val
        if j < 0:
            return self.c.context().base_field().zero()
        if j >= self.prec:
            raise InsufficientPrecision(i)
        return self.c[j]

    def normalized(self):
        """Shift out leading zero coefficients (lowers relative precision)."""
        c = self.c
        if c.is_zero():
            return self
        coeffs = c.coeffs()
        k = 0
        while coeffs[k].is_zero():
            k += 1
        if k == 0:
            return self
        return Series(c.right_shift(k), self.prec - k, self.val + k)

    def valuation(self):
        s = self.normalized()
        if s.c.is_zero():
            return None
        return s.val

    def _align(self, other):
        v = min(self.val, other.val)
        ap = min(self.abs_prec, other.abs_prec)
        a = self.c.left_shift(self.val - v)
        b = other.c.left_shift(other.val - v)
        return a, b, v, ap - v

    def __add__(self, other):
        if not isinstance(other, Series):
            other = self._const(other)
        a, b, v, p = self._align(other)
        return Series((a + b).truncate(max(p, 0)), p, v)

    __radd__ = __add__

    def __neg__(self):
        return Series(-self.c, self.prec, self.val)

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = self._const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _const(self, x):
        R = self.c.context()
        return Series(R([x]), self.abs_prec + 1 if self.abs_prec >= 0 else 1, 0)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return Series(self.c * other, self.prec, self.val)
        p = min(self.prec, other.prec)
        return Series(self.c.mul_low(other.c, p) if p > 0 else self.c * 0, p,
                      self.val + other.val)

    __rmul__ = __mul__

    def inverse(self):
        s = self.normalized()
        if s.c.is_zero() or s.prec <= 0:
            raise DivisionByNonUnit("series has no known unit part")
        return Series(s.c.inverse_series_trunc(s.prec), s.prec, -s.val)

    def __truediv__(self, other):
        if not isinstance(other, Series):
            return Series(self.c / other, self.prec, self.val)
        o = other.normalized()
        if o.c.is_zero() or o.c[0].is_zero():
            raise DivisionByNonUnit("denominator is not a unit")
        return self * o.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        R = self.c.context()
        out = Series(R([1]), self.prec, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sqrt(self):
        """Square root by Newton iteration (lexicographically smaller root of
        the leading coefficient)."""
        s = self.normalized()
        if s.c.is_zero():
            return s
        if s.val % 2:
            raise NotASquare("odd valuation")
        r0 = elem_sqrt(s.c[0])
        R = s.c.context()
        r = R([r0])
        n = 1
        while n < s.prec:
            n = min(2 * n, s.prec)
            # r <- (r + s/r) / 2
            inv = r.inverse_series_trunc(n)
            r = (r + s.c.truncate(n).mul_low(inv, n)) * (R([2]).coeffs()[0].inverse())
            r = r.truncate(n)
        return Series(r, s.prec, s.val // 2)

    def derivative(self):
        if self.val < 0:
            raise NotImplementedError("Laurent derivative")
        full = self.c.left_shift(self.val)
        return Series(full.derivative(), self.abs_prec - 1, 0)

    def truncate(self, prec):
        p = min(prec - self.val, self.prec)
        return Series(self.c.truncate(max(p, 0)), p, self.val)

    def to_poly(self):
        """The known part as a polynomial in t (requires val >= 0)."""
        if self.val < 0:
            raise ValueError("negative valuation")
        return self.c.left_shift(self.val)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        a, b, v, p = self._align(other)
        return (a - b).truncate(max(p, 0)).is_zero()

    def __hash__(self):
        return id(self)


def series(field, coeffs, prec=None, val=0):
    c = field.poly(coeffs)
    prec = len(coeffs) if prec is None else prec
    return Series.from_poly(c, prec, val)


def poly_at_series(f, s):
    """Evaluate a univariate polynomial at a series by Horner."""
    coeffs = f.coeffs()
    R = s.c.context()
    if not coeffs:
        return Series(R([]), s.abs_prec if s.val >= 0 else s.prec, 0)
    out = Series(R([coeffs[-1]]), max(s.abs_prec, s.prec) + 1, 0)
    for c in reversed(coeffs[:-1]):
        out = out * s + c
    return out


# ----------------------------------------------------------------------------
# rational reconstruction


def pade_reconstruct(s, dmax_num, dmax_den):
    """Rational function A/B with deg A <= dmax_num, deg B <= dmax_den and
    A/B = s to the precision of s.

    B is normalized to B(0) = 1.  Uses the extended Euclidean algorithm on
    (t^N, s), i.e. continued fraction convergents.
    """
    if s.val < 0:
        raise ValueError("Laurent series are not supported")
    N = s.abs_prec
    if N < dmax_num + dmax_den + 1:
        raise InsufficientPrecision(
            f"need {dmax_num + dmax_den + 1} coefficients, have {N}")
    R = s.c.context()
    S = s.to_poly().truncate(N)
    r0, r1 = R.gen() ** N, S
    t0, t1 = R([]), R([1])
    while not r1.is_zero() and r1.degree() > dmax_num:
        qt, r = divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 - qt * t1
    A, B = r1, t1
    if B.is_zero() or B.degree() > dmax_den or B[0].is_zero():
        raise ReconstructionFailure("no rational function within the bounds")
    c = B[0]
    A, B = A / c, B / c
    if not (B.mul_low(S, N) - A).truncate(N).is_zero():
        raise ReconstructionFailure("convergent does not match the series")
    g = A.gcd(B) if not A.is_zero() else B.monic()
    if g.degree() > 0:
        A, B = A // g, B // g
        c = B[0]
        A, B = A / c, B / c
    return A, B
