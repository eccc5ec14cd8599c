"""Precoding: SVD water-filling for one user, block diagonalization for many.

Shows that BD removes intra-cell interference exactly and that with a
single user it reduces to the SVD precoder.
"""
import numpy as np

from dasmimo import SystemParams, sample_layout
from dasmimo.channel import compose_channel
from dasmimo.geometry import sample_user_position
from dasmimo.precoding import bd_precoder, precoded_rate, svd_precoder, waterfill

powers, level = waterfill([2.0, 1.0, 0.1], budget=3.0)
print("water-filling over gains [2, 1, 0.1] with budget 3:", np.round(powers, 4),
      "level", round(level, 4))

rng = np.random.default_rng(2)
params = SystemParams(K=3, L=6, N=2)
layout = sample_layout("da", params, rng)
chans = [compose_channel(layout, sample_user_position(rng), params, rng) for _ in range(params.K)]
res = bd_precoder(chans, params.per_user_power)
for k in range(params.K):
    leak = max(np.linalg.norm(chans[j].G_tilde @ res[k].W) for j in range(params.K) if j != k)
    rate = precoded_rate(chans[k].G_tilde, res[k].W, params.per_user_power * chans[k].gain)
    print(f"user {k}: per-antenna rate {rate:.3f} bit/s/Hz, leakage into others {leak:.1e}")

single = chans[:1]
bd = bd_precoder(single, params.snr)[0]
svd = svd_precoder(single[0], params.snr)
sinr = params.snr * single[0].gain
print("one user, BD vs SVD rate:", precoded_rate(single[0].G_tilde, bd.W, sinr),
      precoded_rate(single[0].G_tilde, svd.W, sinr))
