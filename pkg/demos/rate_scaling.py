"""Average per-antenna rate against the number of antenna clusters.

Single user: co-located antennas gain about 1 bit per doubling of L,
distributed antennas about 2 (path-loss factor 4).  Small Monte Carlo
budgets keep this quick; the acceptance suite uses 100 x 100 draws.
"""
import warnings

import numpy as np

from dasmimo import SystemParams, average_rate
from dasmimo import asymptotics as asy

# the asymptotic forms warn below L ~ 64; the comparison is still informative
warnings.filterwarnings("ignore", message=".*large-L regime")

Ls = [8, 16, 32, 64]
for kind, asym in [("ca", asy.ca_su_avg), ("da", asy.da_su_avg_lb)]:
    rates = [average_rate(kind, SystemParams(L=L), 30, 30, 2, seed=4) for L in Ls]
    for L, r in zip(Ls, rates):
        lo, hi = r.interval
        print(f"{kind} L={L:3d}: {r.mean:6.3f}  95% CI [{lo:.3f}, {hi:.3f}]  "
              f"asymptotic {asym(L, SystemParams(L=L)).value:6.3f}")
    slope = np.polyfit(np.log2(Ls), [r.mean for r in rates], 1)[0]
    print(f"{kind}: {slope:.2f} bits per doubling of L\n")
