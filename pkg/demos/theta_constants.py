"""Theta constants of the quotient and the quartic read off from them."""
import random

from g3isogeny.example_data import build
from g3isogeny.quartic_build import aronhold, riemann_model
from g3isogeny.theta import EVEN, ODD, QuotientTheta, check_relations

K, C, T = build()
qt = QuotientTheta(C, T, 3, random.Random(1))
tsv = qt.constants()

print("zero at odd characteristics:", sum(tsv[i].is_zero() for i in ODD), "of", len(ODD))
print("nonzero at even ones:", sum(not tsv[i].is_zero() for i in EVEN), "of", len(EVEN))
print("quartic relations:", check_relations(tsv))

model = riemann_model(aronhold(tsv, K))
print("smooth:", model.quartic.is_smooth())
for line in model.aron.lines():
    print("  bitangent", [str(c) for c in line])
