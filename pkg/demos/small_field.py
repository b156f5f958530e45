"""Cantor arithmetic and a Weil pairing on y^2 = x^7 + x + 3 over F_11 and
over F_{11^6}, where all 2-torsion is rational."""
import random

from g3isogeny.field import ExtField
from g3isogeny.hypercurve import HyperCurve, two_torsion
from g3isogeny.weil import weil_pairing

F = [3, 1, 0, 0, 0, 0, 0, 1]
K = ExtField(11, 1, [0, 1])
C = HyperCurve(K, [K(c) for c in F])
rng = random.Random(0)
a, b = C.random_divisor(rng), C.random_divisor(rng)
print("a =", a)
print("a + b =", a + b)
print("2184 a = 0:", (2184 * a).is_zero())

L = ExtField(11, 6)
D = HyperCurve(L, [L(c) for c in F])
S1, S2, S3 = (two_torsion(D, m) for m in (0b011, 0b110, 0b1100))
print("e_2(S1, S2) =", weil_pairing(S1, S2, 2, rng))
print("e_2(S1, S3) =", weil_pairing(S1, S3, 2, rng))
