import json
import random

import pytest

from g3isogeny.field import ExtField, Series, interpolate, InsufficientPrecision
from g3isogeny.hypercurve import Degenerate
from g3isogeny.isogeny import (IsogenyMap, _pade_adaptive, check_state, cubics_to_divisor,
                               image_class, isogeny_eval, symmetric_functions)

F257 = ExtField(257, 1, [0, 1])


def series_of_ratio(K, A, B, N):
    """Power series of A/B to N terms, B(0) = 1."""
    a = list(A.coeffs()) + [K.zero] * N
    b = list(B.coeffs()) + [K.zero] * N
    out = []
    for n in range(N):
        c = a[n] - sum((b[k] * out[n - k] for k in range(1, n + 1)), K.zero)
        out.append(c)
    return Series(K.R(out), N, 0)


# building blocks

def test_symmetric_functions_of_constant_divisor():
    K = F257
    rng = random.Random(1)
    X = [K(3), K(10), K(77)]
    Y = [K.random(rng) for _ in range(3)]
    u = K.poly([K.one])
    for x in X:
        u = u * K.poly([-x, K.one])
    w = interpolate(K.R, X, Y)
    uc = list(u.coeffs())
    wc = list(w.coeffs()) + [K.zero] * 3
    state = [[c, K.zero, K.zero] for c in uc[:3] + wc[:3]]
    p = [s.coeff(0) for s in symmetric_functions(K, state)]
    assert p[0] == sum(X, K.zero)
    assert p[1] == X[0] * X[1] + X[0] * X[2] + X[1] * X[2]
    assert p[2] == X[0] * X[1] * X[2]
    assert p[3] == sum(Y, K.zero)
    assert p[4] == Y[0] * Y[1] + Y[0] * Y[2] + Y[1] * Y[2]
    assert p[5] == Y[0] * Y[1] * Y[2]


def test_pade_recovers_rational_function():
    K = F257
    rng = random.Random(2)
    for d in (1, 3, 5):
        A = K.poly([K.random(rng) for _ in range(d + 1)])
        B = K.poly([K.one] + [K.random(rng) for _ in range(d)])
        if A.gcd(B).degree() > 0:
            continue
        s = series_of_ratio(K, A, B, 2 * d + 1 + 8)
        num, den = _pade_adaptive(s, 8)
        assert num == A and den == B


def test_pade_needs_margin():
    K = F257
    rng = random.Random(3)
    A = K.poly([K.random(rng) for _ in range(6)])
    B = K.poly([K.one] + [K.random(rng) for _ in range(5)])
    with pytest.raises(InsufficientPrecision):
        _pade_adaptive(series_of_ratio(K, A, B, 12), 8)


# the reference map

def test_map_shape(reference):
    F = reference.F
    deg = F.degrees()
    assert deg["p"] > 0
    assert len(deg["A"]) == len(deg["B"]) == 6


def test_pullback_mirror(reference):
    assert reference.m_bar == [[-c for c in r] for r in reference.m]


def test_series_residuals(reference):
    ctx = reference
    (x0, _), _ = ctx.anchor
    fwd, mir = ctx.builder.states
    V = ctx.builder.V
    assert all(check_state(ctx.K, ctx.affine, fwd, ctx.m, x0, V))
    assert all(check_state(ctx.K, ctx.affine, mir, ctx.m, x0, -V))


def test_anchor_image(reference):
    (x0, y0), psi = reference.anchor
    assert image_class(reference.bb.J, reference.F, (x0, y0)) == psi


def test_conjugate_points_cancel(reference):
    ctx = reference
    J = ctx.bb.J
    rng = random.Random(4)
    for _ in range(10):
        x, y = ctx.C.random_point(rng)
        assert (image_class(J, ctx.F, (x, y)) + image_class(J, ctx.F, (x, -y))).is_zero()


def test_matches_per_point_lift(reference):
    ctx = reference
    J = ctx.bb.J
    rng = random.Random(5)
    for _ in range(5):
        x, y = ctx.C.random_point(rng)
        c = image_class(J, ctx.F, (x, y))
        a, b = ctx.image_pair(ctx.C.point_divisor(x, y))
        assert c in (a, b)


def test_homomorphism_on_multiples(reference):
    ctx = reference
    J = ctx.bb.J
    rng = random.Random(6)
    x, y = ctx.C.random_point(rng)
    n = rng.getrandbits(20) | 1
    lhs = image_class(J, ctx.F, (x, y)) * n
    a, b = ctx.image_pair(ctx.C.point_divisor(x, y) * n)
    assert lhs in (a, b)


def test_cubics_cut_the_image(reference):
    ctx = reference
    J = ctx.bb.J
    x, y = ctx.C.random_point(random.Random(7))
    cx, cy = isogeny_eval(ctx.F, (x, y))
    assert cx.degree() == 3 and cy.degree() == 3
    E = cubics_to_divisor(J.chart, cx, cy)
    assert E.degree == 3
    assert J.from_effective(E) == image_class(J, ctx.F, (x, y))


def test_cubics_must_agree(reference):
    ctx = reference
    rng = random.Random(8)
    x, y = ctx.C.random_point(rng)
    cx, _ = isogeny_eval(ctx.F, (x, y))
    x2, y2 = ctx.C.random_point(rng)
    _, cy = isogeny_eval(ctx.F, (x2, y2))
    with pytest.raises(Degenerate):
        cubics_to_divisor(ctx.bb.chart, cx, cy)


def test_map_json_roundtrip(reference):
    F = reference.F
    K = reference.K
    G = IsogenyMap.from_json(K, json.loads(json.dumps(F.to_json())))
    x, y = reference.C.random_point(random.Random(9))
    assert G.values(x, y) == F.values(x, y)
    assert G.m == F.m
