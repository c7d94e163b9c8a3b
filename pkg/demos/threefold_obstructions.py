"""
Balanced threefolds with constant HSC
=====================================

Replay the three balanced BTP threefold types (B-rank 3, 1 and 2) against
the constant-HSC reconstructions and print the derivation traces.
"""

import numpy as np
import sympy as sp

from hermlab import analysis as an
from hermlab import catalog
from hermlab import tensors as tz

models = {
    "so3c (rank 3)": catalog.build("so3c"),
    "wallach (rank 1)": catalog.build("wallach", b=0.2, t=0.1, s=0),
    "middle (rank 2)": catalog.build("middle", x=0, y=1),
}

for label, model in models.items():
    print("=" * 70)
    print(label)
    for connection, t in [("riemannian", None), ("gauduchon", sp.Rational(1, 2)),
                          ("gauduchon", 0), ("gauduchon", 1)]:
        v = an.threefold_probe(model, connection, t)
        flag = " (consistent)" if v.consistent else ""
        print(f"  {v.connection:>22}: {v.verdict}{flag}")
    for line in an.threefold_probe(model, "riemannian").trace:
        print("    |", line)

# %%
# The middle type at t = 1: after c = 0 and x = 0, the quartic form
# 2q(q - iyp) takes values -8(1+y) and 8y - 8 at X = (1, +-i, 0), and the two
# cannot vanish together.
Rb = catalog.curvature_model_bismut(catalog.build("middle", x=0, y=1))
stats = an.hsc_scan(Rb, samples=512, seed=1)
print("middle x=0, y=1: H^b in", (round(stats.min, 6), round(stats.max, 6)))
print("at (1, i, 0):", tz.hsc_value(Rb, np.array([1, 1j, 0])).real)
