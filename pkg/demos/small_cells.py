"""Small cells versus jointly processed distributed antennas.

At a fixed ratio L/K = 5, a small-cell user at the cell centre sees no
rate growth with L, while the jointly processed layout keeps improving.
"""
from dasmimo import PolarPoint, SystemParams, average_rate
from dasmimo import asymptotics as asy

centre = PolarPoint(0.0, 0.0)
for L in (10, 20, 40, 80):
    p = SystemParams(K=L // 5, L=L)
    sc = average_rate("smallcell", p, 20, 20, 2, seed=6, user=centre)
    da = average_rate("da", p, 10, 10, 2, seed=6)
    print(f"L={L:3d} K={p.K:2d}: small cells {sc.mean:.3f} "
          f"(bound {asy.sc_avg_lb(L, p.K, p).value:.3f}), distributed {da.mean:.3f}")
