"""Build F: C -> J_D on the reference instance and carry the discrete-log
relation 86241 [P1 - oo] = [P2 - oo] over to the quartic side."""
import logging
import time

from g3isogeny import example_data as ex
from g3isogeny.pipeline import RunConfig, RunContext, translate_dlp

logging.basicConfig(level=logging.INFO, format="  %(message)s")

t = time.time()
ctx = RunContext(RunConfig.reference()).run()
print(f"pipeline done in {time.time() - t:.0f}s")
print("quartic D:", ctx.model.quartic.to_mpoly())
print("deg p(x) =", ctx.F.p.degree())

K, C = ctx.K, ctx.C
P1 = tuple(K(c) for c in ex.P1)
P2 = tuple(K(c) for c in ex.P2)
m = ex.DLP_M
F1, F2 = ctx.image(P1), ctx.image(P2)
print("x-cubic of F(P1):", ctx.F.cubics(*P1)[0])
if m * F1 == F2:
    m_prime = m
elif m * F1 == -F2:
    m_prime = -m
else:
    raise SystemExit("relation not transported")
print("on J_D: F(P2) = m' F(P1) with m' =", m_prime)
print("back on J_C: m =", translate_dlp(C.point_divisor(*P1), C.point_divisor(*P2), m_prime))
for k, v in ctx.report.items():
    print(f"  {k:20s} {v}")
