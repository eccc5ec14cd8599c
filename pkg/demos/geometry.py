"""Cell geometry: where antennas and users sit, and how far apart they are.

Draws a distributed layout, then checks the closed-form distance laws
against sampled distances with a Kolmogorov-Smirnov statistic.
"""
import numpy as np
from scipy import stats

from dasmimo import PolarPoint, SystemParams, sample_layout
from dasmimo.geometry import (CELL_CENTERS_XY, min_access_distance_cdf,
                              neighbor_cell_distance_cdf, own_cell_distance_cdf, sample_disk)

rng = np.random.default_rng(1)
params = SystemParams(L=8, N=2)
layout = sample_layout("da", params, rng)
print("cluster layout array:", layout.clusters.shape, "(cell, cluster, xy)")
print("cell-0 clusters:\n", np.round(layout.clusters[0], 3))

user = PolarPoint(0.6, 0.3)
n = 50_000
own = np.linalg.norm(sample_disk(rng, n) - user.xy, axis=-1)
nbr = np.linalg.norm(sample_disk(rng, n) + CELL_CENTERS_XY[1] - user.xy, axis=-1)
near = np.linalg.norm(sample_disk(rng, (n, 8)) - user.xy, axis=-1).min(axis=1)

for label, d, cdf in [
    ("own cell", own, lambda x: own_cell_distance_cdf(x, user.rho)),
    ("neighbour cell 1", nbr, lambda x: neighbor_cell_distance_cdf(x, user.rho, user.theta, 1)),
    ("nearest of 8", near, lambda x: min_access_distance_cdf(x, user.rho, 8)),
]:
    print(f"{label:>17}: mean distance {d.mean():.4f}, KS vs closed form "
          f"{stats.kstest(d, cdf).statistic:.4f}")
