import itertools
import random

import pytest
from hypothesis import given, strategies as st

from g3isogeny.field import ExtField
from g3isogeny.hypercurve import two_torsion_pairing_combinatorial
from g3isogeny.theta import (EVEN, ODD, QuotientTheta, RELATIONS, SYMPLECTIC_MASKS, InvalidSubset,
                             NoSolution, bits, char_index, char_of_index, char_parity,
                             check_relations, compute_S_delta, coords_to_index, d_prime,
                             index_to_coords, parity, proj_equal, schrodinger_to_squares,
                             squares_to_schrodinger, symplectic_basis, two_torsion_translate)

F257 = ExtField(257, 1, [0, 1])
W = list(itertools.product((0, 1), repeat=3))


@pytest.fixture(scope="module")
def qt(ref_data):
    K, C, T = ref_data
    q = QuotientTheta(C, T, 3, random.Random(5))
    q.constants()
    return q


# characteristic bookkeeping

def test_even_odd_split():
    assert len(EVEN) == 36 and len(ODD) == 28
    assert char_parity(0) == 0


def test_index_roundtrips():
    for i in range(64):
        top, bottom = char_of_index(i)
        assert char_index(top, bottom) == i
        assert coords_to_index(index_to_coords(i)) == i
    assert [bits(n) for n in range(8)] == W


def test_branch_subset_parity_counts():
    # even subsets of the 8 branch points modulo complement: 36 even, 28 odd
    seen = {}
    for T in range(256):
        if bin(T).count("1") % 2:
            with pytest.raises(InvalidSubset):
                parity(T)
            continue
        key = min(T, T ^ 0xFF)
        seen[key] = parity(T)
        assert parity(T) == parity(T ^ 0xFF)
    vals = list(seen.values())
    assert vals.count("even") == 36 and vals.count("odd") == 28


def test_symplectic_basis_masks(ref_data):
    K, C, T = ref_data
    e = two_torsion_pairing_combinatorial
    for i, j in itertools.product(range(6), repeat=2):
        want = -1 if abs(i - j) == 3 else 1
        assert e(SYMPLECTIC_MASKS[i], SYMPLECTIC_MASKS[j]) == want
    assert len(symplectic_basis(C)) == 6
    with pytest.raises(NoSolution):
        symplectic_basis(C, (0b11,) * 6)


def test_s_delta_solutions_satisfy_system():
    sols = compute_S_delta(SYMPLECTIC_MASKS)
    assert sols
    for eps in sols:
        q = sum(eps[j] * eps[3 + j] for j in range(3))
        for i, m in enumerate(SYMPLECTIC_MASKS):
            lin = eps[3 + i] if i < 3 else eps[i - 3]
            assert (lin + q - (bin(m).count("1") - 4) // 2) % 2 == 0


def test_d_prime_matches_pairing():
    # d'(a, b) / d'(b, a) is the Weil pairing of the corresponding classes
    coords = list(itertools.product((0, 1), repeat=6))
    rng = random.Random(1)
    for _ in range(200):
        a, b = rng.choice(coords), rng.choice(coords)
        ma = mb = 0
        for k in range(6):
            ma ^= SYMPLECTIC_MASKS[k] if a[k] else 0
            mb ^= SYMPLECTIC_MASKS[k] if b[k] else 0
        assert d_prime(a, b) * d_prime(b, a) == two_torsion_pairing_combinatorial(ma, mb)


# Schroedinger coordinates

vec8 = st.lists(st.integers(0, 256), min_size=8, max_size=8)


@given(vec8, st.sampled_from(W), st.sampled_from(W), st.sampled_from(W), st.sampled_from(W))
def test_translation_is_projective_action(x, a1, a2, b1, b2):
    x = [F257(c) for c in x]
    if all(c.is_zero() for c in x):
        return
    twice = two_torsion_translate(two_torsion_translate(x, a1, a2), b1, b2)
    once = two_torsion_translate(x, tuple(p ^ q for p, q in zip(a1, b1)),
                                 tuple(p ^ q for p, q in zip(a2, b2)))
    assert proj_equal(twice, once)


def test_translation_by_zero_is_identity():
    x = [F257(c + 1) for c in range(8)]
    assert two_torsion_translate(x, (0, 0, 0), (0, 0, 0)) == x


# the quotient theta constants

def test_vanishing_pattern(qt):
    tsv = qt.tsv
    assert sum(tsv[i].is_zero() for i in ODD) == 28
    assert not any(tsv[i].is_zero() for i in EVEN)
    assert qt.delta in compute_S_delta(SYMPLECTIC_MASKS)


def test_quartic_relations(qt):
    assert check_relations(qt.tsv) == [True, True, True]
    assert all(i in EVEN for rel in RELATIONS for quad in rel for i in quad)
    bad = list(qt.tsv)
    bad[RELATIONS[0][0][0]] = bad[RELATIONS[0][0][0]] * 2
    assert not check_relations(bad)[0]


def test_constants_independent_of_v0(qt):
    for v in qt.v_elements()[:4]:
        assert proj_equal(qt.xi_values(qt.offset(v)), qt.tsv)


def test_schrodinger_roundtrip_at_zero(qt):
    x0 = qt.kummer_zero()
    assert proj_equal(schrodinger_to_squares(x0, x0), qt.tsv)


def test_schrodinger_roundtrip_at_images(qt, ref_data):
    K, C, T = ref_data
    x0 = qt.kummer_zero()
    rng = random.Random(2)
    for _ in range(3):
        xi = qt.image_xi(C.random_divisor(rng))
        assert proj_equal(schrodinger_to_squares(squares_to_schrodinger(xi), x0), xi)


def test_kummer_image_is_even(qt, ref_data):
    K, C, T = ref_data
    P = C.random_divisor(random.Random(3))
    assert proj_equal(qt.kummer_image(P), qt.kummer_image(-P))


def test_kernel_collapses(qt, ref_data):
    K, C, T = ref_data
    P = C.random_divisor(random.Random(4))
    x = qt.kummer_image(P)
    for v in qt.v_elements()[:6]:
        assert proj_equal(qt.kummer_image(P + qt.V.G[v]), x)


def test_two_torsion_acts_by_translation(qt, ref_data):
    # translating by the class with symplectic coordinates a moves Kummer
    # coordinates by two_torsion_translate(., a[:3], a[3:])
    K, C, T = ref_data
    P = C.random_divisor(random.Random(5))
    x = qt.kummer_image(P)
    G2 = qt.two.G
    for a in G2.coords():
        y = qt.kummer_image(P + G2[a])
        hits = [(w1, w2) for w1 in W for w2 in W
                if proj_equal(two_torsion_translate(x, w1, w2), y)]
        assert hits == [(a[:3], a[3:])]
