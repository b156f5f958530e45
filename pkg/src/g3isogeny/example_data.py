"""The reference instance over F_257: curve, 3-torsion kernel and DLP pair.

Elements of F_{257^6} are written as powers of the generator b, exactly as
they are usually published for this instance.
"""

P = 257
K_DEG = 6
# b^6 + 3b^4 + 62b^3 + 18b^2 + 138b + 3, constant term first
MODULUS = [3, 138, 18, 62, 3, 0, 1]
F_COEFFS = [167, 104, 125, 138, 6, 13, 0, 1]

# Mumford pairs (u, v), coefficients constant term first; ints are F_257
# elements, ("b", e) means b^e
T1 = ([57, 224, 15, 1], [53, 119, 168])
T2 = ([("b", 186444594999936), ("b", 226656780125958), ("b", 41470257160332), 1],
      [("b", 155385077009526), ("b", 214167145454262), ("b", 111992175485190)])
T3 = ([("b", 131411603284416), ("b", 95549446438992), ("b", 79934907834054), 1],
      [("b", 104379562339416), ("b", 87544041188058), ("b", 60233090689044)])

ELL = 3
P1 = (2, 7)
P2 = (121, 5)
DLP_M = 86241

# published cut cubics of F(P1) and F(P2) on the reduced model over F_257;
# kept for documentation, our codomain model lives over F_{257^6}
CUT_P1 = ([90, 77, 239, 1], [132, 61, 101, 1])
CUT_P2 = ([107, 59, 90, 1], [192, 231, 59, 1])
P_DEGREE = 34


def element(K, c):
    if isinstance(c, tuple):
        return K.b_pow(c[1])
    return K(c)


def build():
    """(K, curve, [T1, T2, T3]) for the reference instance."""
    from .field import ExtField
    from .hypercurve import HyperCurve
    K = ExtField(P, K_DEG, MODULUS)
    C = HyperCurve(K, [K(c) for c in F_COEFFS])
    gens = []
    for u, v in (T1, T2, T3):
        gens.append(C.mumford(K.poly([element(K, c) for c in u]),
                              K.poly([element(K, c) for c in v])))
    return K, C, gens
