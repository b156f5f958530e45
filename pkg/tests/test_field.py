import random

import pytest
from hypothesis import given, strategies as st

from g3isogeny import example_data as ex
from g3isogeny.field import (ExtField, field_build, elem_pow, elem_sqrt, poly_factor,
                             pade_reconstruct, series, Series, NotPrime, ReducibleModulus,
                             NotASquare, ZeroPolynomial, ReconstructionFailure,
                             InsufficientPrecision, DivisionByNonUnit, poly_at_series)

F257 = ExtField(257, 1, [0, 1])
K6 = ExtField(ex.P, ex.K_DEG, ex.MODULUS)


def rand_poly(K, rng, deg):
    return K.poly([K.random(rng) for _ in range(deg)] + [K.random_nonzero(rng)])


# field_build

def test_reference_field_accepted():
    K = field_build(257, 6, ex.MODULUS)
    assert K.q == 257 ** 6


def test_degree_one_is_prime_field():
    K = field_build(257, 1, [0, 1])
    assert K(256) + K(1) == K(0)
    assert K.q == 257


def test_f121_accepted_since_minus_one_nonsquare():
    # exhaustive: no x in F_11 with x^2 = -1
    assert all((x * x + 1) % 11 for x in range(11))
    K = field_build(11, 2, [1, 0, 1])
    i = K.gen()
    assert i * i == K(-1)


def test_rejects_reducible_and_composite():
    with pytest.raises(ReducibleModulus):
        field_build(13, 2, [1, 0, 1])       # 13 = 1 mod 4, x^2 + 1 splits
    with pytest.raises(NotPrime):
        field_build(15, 1, [0, 1])


# elem_pow

def test_pow_examples():
    b = K6.gen()
    assert elem_pow(b, 257 ** 6 - 1) == K6.one
    assert elem_pow(F257(3), 5) == F257(243)
    assert elem_pow(F257(3), 0) == F257.one


def test_pow_materializes_published_coefficient(ref_data):
    K, C, T = ref_data
    # x^2 coefficient of u(T_2)
    assert T[1].u.coeffs()[2] == K.b_pow(41470257160332)


@given(st.integers(0, 2 ** 32), st.integers(0, 2 ** 32), st.integers(0, 2 ** 30))
def test_pow_composes(a, b, seed):
    x = K6.random_nonzero(random.Random(seed))
    assert elem_pow(elem_pow(x, a), b) == elem_pow(x, a * b)


@given(st.integers(0, 2 ** 30))
def test_inverse(seed):
    x = K6.random_nonzero(random.Random(seed))
    assert x * x.inverse() == K6.one


# elem_sqrt

def test_sqrt_examples():
    assert elem_sqrt(F257(49)) == F257(7)
    assert elem_sqrt(F257(0)) == F257(0)
    # brute force over F_257: the roots of 2 are 60 and 197
    roots = [x for x in range(257) if x * x % 257 == 2]
    assert roots == [60, 197]
    assert elem_sqrt(F257(2)) == F257(60)


def test_sqrt_nonresidue():
    with pytest.raises(NotASquare):
        elem_sqrt(F257(3))   # 257 = 1 mod 4 and 3 is a non-residue mod 257


def test_sqrt_of_squares():
    rng = random.Random(7)
    for _ in range(1000):
        y = K6.random(rng)
        r = elem_sqrt(y * y)
        assert r == y or r == -y


def test_sqrt_is_deterministic_choice():
    rng = random.Random(8)
    for _ in range(50):
        y = K6.random_nonzero(rng)
        assert elem_sqrt(y * y) == elem_sqrt((-y) * (-y))


# poly_factor

def test_factor_x2_minus_1():
    x = F257.x()
    fac = poly_factor(x * x - 1)
    assert sorted(str(g) for g, _ in fac) == sorted([str(x + 1), str(x - 1)])


def test_factor_curve_polynomial_roots():
    K = K6
    f = K.poly([K(c) for c in ex.F_COEFFS])
    fac = poly_factor(f)
    assert sum(g.degree() * m for g, m in fac) == 7
    roots = [(-g.coeffs()[0]) for g, m in fac if g.degree() == 1]
    assert len(roots) == 7        # f splits over F_{257^6}
    assert all(f(r).is_zero() for r in roots)


def test_irreducible_cubic_over_f11():
    K = ExtField(11, 1, [0, 1])
    # x^3 + 4x + 1: exhaustive root check over F_11
    assert all((x ** 3 + 4 * x + 1) % 11 for x in range(11))
    f = K.poly([1, 4, 0, 1])
    assert [(str(g), m) for g, m in poly_factor(f)] == [(str(f), 1)]


def test_factor_zero():
    with pytest.raises(ZeroPolynomial):
        poly_factor(F257.poly([]))


@pytest.mark.parametrize("K", [F257, K6], ids=["F257", "F257^6"])
def test_factor_remultiplies(K):
    rng = random.Random(3)
    for _ in range(200 if K is F257 else 40):
        f = rand_poly(K, rng, rng.randrange(1, 13))
        fac = poly_factor(f, rng)
        prod = K.poly([f.leading_coefficient()])
        for g, m in fac:
            prod = prod * g ** m
        assert prod == f


# pade_reconstruct

def test_pade_geometric():
    s = series(F257, [1] * 10)
    A, B = pade_reconstruct(s, 0, 1)
    assert A == F257.poly([1]) and B == F257.poly([1, -1])


def test_pade_bound_violation():
    s = series(F257, [0, 1, 0, 1, 0, 0, 0, 0])
    with pytest.raises(ReconstructionFailure):
        pade_reconstruct(s, 1, 0)


def test_pade_needs_precision():
    with pytest.raises(InsufficientPrecision):
        pade_reconstruct(series(F257, [1, 2]), 1, 1)


def test_pade_roundtrip_random():
    rng = random.Random(11)
    K = K6
    for _ in range(100):
        dn, dd = rng.randrange(0, 6), rng.randrange(0, 6)
        A = rand_poly(K, rng, dn)
        B = K.poly([K.one] + [K.random(rng) for _ in range(dd)])
        g = A.gcd(B)
        if g.degree() > 0:
            continue
        N = dn + dd + 4
        s = Series.from_poly(A.mul_low(B.inverse_series_trunc(N), N), N)
        A2, B2 = pade_reconstruct(s, dn, dd)
        assert A2 * B == A * B2


# series

def test_series_examples():
    a = series(F257, [1, 1], 3)
    b = series(F257, [1, -1], 3)
    assert a * b == series(F257, [1, 0, -1])
    inv = series(F257, [1, 1], 3).inverse()
    assert inv == series(F257, [1, -1, 1])


def test_series_division_by_nonunit():
    with pytest.raises(DivisionByNonUnit):
        series(F257, [1, 2]) / series(F257, [0, 0])
    # dividing by t is allowed and gives a Laurent series
    q = series(F257, [1, 2]) / series(F257, [0, 1])
    assert q.val == -1


def test_series_precision_never_grows():
    a = series(F257, [1, 2, 3, 4], 4)
    b = series(F257, [5, 6], 2)
    assert (a + b).prec == 2
    assert (a * b).prec == 2


def test_series_sqrt_of_curve_polynomial():
    rng = random.Random(4)
    K = K6
    f = K.poly([K(c) for c in ex.F_COEFFS])
    while True:
        x0 = K.random(rng)
        if f(x0).is_square() and not f(x0).is_zero():
            break
    X = Series.from_poly(K.poly([x0, 1]), 8)
    F = poly_at_series(f, X)
    r = F.sqrt()
    assert r * r == F and r.prec == 8
