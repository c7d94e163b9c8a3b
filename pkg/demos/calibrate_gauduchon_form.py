"""
Calibrating the torsion 1-form
==============================

The Gauduchon torsion 1-form is defined only implicitly, by
``d(omega^{n-1}) = -eta ^ omega^{n-1}``.  The library computes it from the
Chern torsion as ``eta_i = kappa * sum_k T^k_{ki}``.  This script fixes the
constant ``kappa`` by evaluating both sides of the defining relation with
exterior algebra on the Hopf chart metric.
"""

import numpy as np

from hermlab import analysis as an
from hermlab import catalog
from hermlab import geometry as geo

# The Hopf metric delta_ij / |z|^2 is non-balanced everywhere, so the
# relation pins kappa down at any point.  Only the (n, n-1) part of
# d(omega^{n-1}) can be nonzero against eta ^ omega^{n-1}; the calibration
# solves for the single scalar in least squares.
for n in (2, 3):
    model = catalog.build("hopf", n=n)
    for point in [(1,) + (0,) * (n - 1), tuple(np.linspace(0.3, 0.9, n) + 0.2j)]:
        jet = geo.metric_jet(model, point)
        kappa = an.calibrate_gauduchon_kappa(jet)
        print(f"n={n} point={np.round(point, 3)} kappa={kappa:.15f}")

# kappa = 1 everywhere; the residual of the relation with that value:
jet = geo.metric_jet(catalog.build("hopf", n=2), (1, 0))
print("residual with kappa=1:", an.exterior_gauduchon_residual(jet, kappa=1))
print("residual with kappa=2:", an.exterior_gauduchon_residual(jet, kappa=2))

# Random non-balanced chart metrics give the same value, a check that the
# constant does not depend on the Hopf structure.
from hermlab import families

rng = np.random.default_rng(0)
for seed in range(5):
    m = families.random_chart_model(seed, 3)
    jet = geo.metric_jet(m, families.random_point(rng, 3))
    print(f"random chart {seed}: kappa={an.calibrate_gauduchon_kappa(jet):.12f}")
