"""Layout constants and the eigenvalue law behind the asymptotic rates."""
import numpy as np
from scipy import stats

from dasmimo import asymptotics as asy
from dasmimo.channel import sample_small_scale

for a in (3.0, 4.0, 5.0):
    print(f"alpha={a}: psi_c={asy.psi_c(a):.4f}  psi_d={asy.psi_d(a):.4f}  "
          f"upsilon={asy.upsilon(a):.5f}")

rng = np.random.default_rng(5)
N = 64
for L in (1, 4):
    H = sample_small_scale(N, L * N, rng, 10)
    eigs = np.linalg.eigvalsh(H @ np.swapaxes(H, -1, -2).conj() / (L * N)).ravel()
    ks = stats.kstest(eigs, lambda x: asy.mp_cdf(x, L)).statistic
    print(f"Wishart eigenvalues, M/N={L}: mean {eigs.mean():.3f} "
          f"(limit {asy.mp_mean(L):.3f}), KS vs limiting law {ks:.4f}")
