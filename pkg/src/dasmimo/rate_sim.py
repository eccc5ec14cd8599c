"""Monte Carlo estimation of per-antenna ergodic rates.

Rates are in bits/s/Hz per user antenna.  Noise power is the unit of power,
so the per-user transmit power is ``snr / K``.

Averaged rates are nested Monte Carlo estimates: user positions form the
outer loop, cluster layouts (DA and small cells) the middle loop and
small-scale fading the inner loop.  Every outer position index owns a
fixed random substream derived from ``(seed, index)``, so an estimate does
not depend on how the positions are split across worker processes, and two
runs that differ only in ``L`` or ``snr`` see the same user positions.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import CoincidentPositionError, cluster_distances, sample_small_scale
from .geometry import LayoutRealization, PolarPoint, sample_disk, sample_layout
from .interference import intercell_power
from .params import LayoutKind, SystemParams
from .precoding import (
    InfeasibleConfigurationError, bd_effective_eigenvalues, equal_power_rate, waterfill_batch,
    waterfill_rate,
)

__all__ = [
    "RateEstimate", "RateChain", "cell_gains", "single_user_rate_samples",
    "single_user_capacity", "single_user_rate_chain", "bd_rate_samples",
    "bd_per_antenna_rate", "assign_small_cells", "small_cell_rate_samples",
    "small_cell_rate", "average_rate", "outer_seed",
]

Z95 = 1.959963984540054


@dataclass(frozen=True)
class RateEstimate:
    """Monte Carlo mean with a 95% normal-approximation half-width.

    ``trials`` counts draws per averaging level (``positions``, ``layouts``,
    ``channels``).  ``samples`` holds the independent values the interval
    was computed from.
    """

    mean: float
    half_width: float
    trials: dict
    config: dict
    samples: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def interval(self) -> tuple[float, float]:
        return self.mean - self.half_width, self.mean + self.half_width


def _summarize(samples, trials: dict, config: dict) -> RateEstimate:
    x = np.asarray(samples, dtype=float).ravel()
    hw = Z95 * x.std(ddof=1) / np.sqrt(x.size) if x.size > 1 else 0.0
    return RateEstimate(float(x.mean()), float(hw), dict(trials), dict(config), x)


def _config(params: SystemParams, kind, scheme: str) -> dict:
    return {"alpha": params.alpha, "snr": params.snr, "K": params.K, "L": params.L,
            "N": params.N, "layout": LayoutKind(kind).value, "scheme": scheme}


def _xy(users) -> np.ndarray:
    if isinstance(users, PolarPoint):
        return users.xy[None]
    users = list(users) if not isinstance(users, np.ndarray) else users
    if isinstance(users, np.ndarray):
        return np.atleast_2d(users).astype(float)
    return np.array([u.xy if isinstance(u, PolarPoint) else u for u in users], dtype=float)


def cell_gains(layout: LayoutRealization, users, alpha: float) -> np.ndarray:
    """Large-scale coefficients from cell 0's antennas, shape ``(K, M)``.

    Antenna order is cluster-major, matching :func:`compose_channel`.
    """
    xy = _xy(users)
    d = np.linalg.norm(layout.clusters[0][None] - xy[:, None], axis=-1)
    if np.any(d == 0.0):
        raise CoincidentPositionError("a user coincides with an antenna cluster")
    return np.repeat(d ** (-alpha / 2), layout.antennas_per_cluster, axis=1)


def _normalized(gamma: np.ndarray, H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(G_tilde, ||gamma||^2)`` for gains ``(..., M)`` and fading ``(..., N, M)``."""
    gain = np.sum(gamma ** 2, axis=-1)
    beta = gamma / np.sqrt(gain)[..., None]
    return beta[..., None, :] * H, gain


def _gram_eigs(A: np.ndarray) -> np.ndarray:
    return np.clip(np.linalg.eigvalsh(A @ np.swapaxes(A, -1, -2).conj()), 0.0, None)


# ---------------------------------------------------------------- single user

def single_user_rate_samples(user, layout: LayoutRealization, params: SystemParams,
                             trials: int, rng: np.random.Generator) -> np.ndarray:
    """SVD + water-filling rate for ``trials`` independent fading draws.

    Interference is ignored; the user gets the full transmit power.
    """
    gamma = cell_gains(layout, user, params.alpha)[0]
    H = sample_small_scale(params.N, params.M, rng, trials)
    Gt, gain = _normalized(gamma, H)
    return waterfill_rate(_gram_eigs(Gt), params.snr * gain, params.noise)


def single_user_capacity(user, layout: LayoutRealization, params: SystemParams,
                         trials: int, rng: np.random.Generator) -> RateEstimate:
    """Ergodic single-user capacity at a fixed position and layout.

    The half-width reflects small-scale fading only.
    """
    if params.K != 1:
        raise ValueError("single-user capacity needs K = 1")
    x = single_user_rate_samples(user, layout, params, trials, rng)
    return _summarize(x, {"positions": 1, "layouts": 1, "channels": trials},
                      _config(params, layout.kind, "su"))


@dataclass(frozen=True)
class RateChain:
    """Rates of one fading realization under decreasing transmit effort."""

    waterfilled: np.ndarray
    equal_power: np.ndarray
    nearest_cluster: np.ndarray


def single_user_rate_chain(user, layout: LayoutRealization, params: SystemParams,
                           H: np.ndarray) -> RateChain:
    """Per-realization rates of SVD water-filling, equal power over all
    antennas, and equal power from the nearest cluster alone.

    ``H`` has shape ``(..., N, M)``.  The three rates are non-increasing in
    that order for every realization.
    """
    gamma = cell_gains(layout, user, params.alpha)[0]
    Gt, gain = _normalized(gamma, H)
    full = waterfill_rate(_gram_eigs(Gt), params.snr * gain, params.noise)
    equal = equal_power_rate(gamma * H, params.snr, params.noise)
    N = params.N
    if layout.antennas_per_cluster != N:
        raise ValueError("nearest-cluster rate needs N antennas per cluster")
    c = int(np.argmax(gamma[::N]))
    near = equal_power_rate(gamma[c * N] * H[..., c * N:(c + 1) * N], params.snr, params.noise)
    return RateChain(np.asarray(full), np.asarray(equal), np.asarray(near))


# ------------------------------------------------------------------ multi user

def bd_rate_samples(user_index: int, users, layout: LayoutRealization, params: SystemParams,
                    trials: int, rng: np.random.Generator, p_int: float | None = None,
                    aware_waterfilling: bool = False) -> np.ndarray:
    """BD rate of one user for ``trials`` fading draws of all ``K`` users.

    Parameters
    ----------
    user_index : int
        Target user within ``users``.
    users : sequence of PolarPoint or array (K, 2)
        Positions of the ``K`` users of cell 0.
    p_int : float, optional
        Normalized inter-cell power; computed from ``layout`` when omitted.
        Pass 0 to switch inter-cell interference off.
    aware_waterfilling : bool
        Water-fill against noise plus interference instead of noise alone.
        Either way the achieved rate is evaluated against noise plus
        interference.
    """
    xy = _xy(users)
    K = xy.shape[0]
    if K != params.K:
        raise ValueError(f"expected {params.K} users, got {K}")
    if params.M < K * params.N:
        raise InfeasibleConfigurationError(
            f"BD needs M >= K N, got M={params.M}, K={K}, N={params.N}")
    if p_int is None:
        p_int = intercell_power(PolarPoint.from_xy(*xy[user_index]), layout, params.alpha)
    gamma = cell_gains(layout, xy, params.alpha)
    H = sample_small_scale(K * params.N, params.M, rng, trials).reshape(
        trials, K, params.N, params.M)
    Gt, gain = _normalized(gamma, H)
    others = np.delete(Gt, user_index, axis=1).reshape(trials, (K - 1) * params.N, params.M)
    eigs = bd_effective_eigenvalues(Gt[:, user_index], others if K > 1 else None)
    impaired = params.noise + params.snr * p_int
    budget = params.per_user_power * gain[user_index]
    powers, _ = waterfill_batch(eigs, budget, impaired if aware_waterfilling else params.noise)
    return np.mean(np.log2(1.0 + eigs * powers / impaired), axis=-1)


def bd_per_antenna_rate(user_index: int, all_users, layout: LayoutRealization,
                        params: SystemParams, trials: int, rng: np.random.Generator,
                        p_int: float | None = None,
                        aware_waterfilling: bool = False) -> RateEstimate:
    """Ergodic BD rate of ``all_users[user_index]`` at fixed positions and
    layout, with the inter-cell power of the layout in the SINR."""
    x = bd_rate_samples(user_index, all_users, layout, params, trials, rng, p_int,
                        aware_waterfilling)
    return _summarize(x, {"positions": 1, "layouts": 1, "channels": trials},
                      _config(params, layout.kind, "bd"))


# ----------------------------------------------------------------- small cells

def assign_small_cells(users, stations) -> np.ndarray:
    """Greedy nearest-available assignment, users in the given order.

    Each station serves at most one user; ties go to the lowest station
    index.  Returns the station index for every user.
    """
    u = _xy(users)
    s = np.asarray(stations, dtype=float)
    if u.shape[0] > s.shape[0]:
        raise ValueError(f"{u.shape[0]} users exceed {s.shape[0]} small cells")
    d = np.linalg.norm(u[:, None] - s[None], axis=-1)
    taken = np.zeros(s.shape[0], dtype=bool)
    out = np.empty(u.shape[0], dtype=int)
    for k in range(u.shape[0]):
        row = np.where(taken, np.inf, d[k])
        out[k] = int(np.argmin(row))
        taken[out[k]] = True
    return out


def small_cell_interference(user_index: int, assignments, users,
                            layout: LayoutRealization, params: SystemParams) -> float:
    """Interference-to-noise ratio of a small-cell user.

    Co-channel users of cell 0 contribute through the stations serving them.
    In each neighbour cell the first ``K`` stations are taken as active;
    stations are i.i.d. uniform, so this is a uniformly random active set.
    """
    xy = _xy(users)
    me = xy[user_index]
    own = layout.clusters[0][np.delete(np.asarray(assignments), user_index)]
    d_own = np.linalg.norm(own - me, axis=-1)
    d_nb = cluster_distances(layout, me)[1:, :params.K]
    if np.any(d_own == 0.0):
        raise CoincidentPositionError("a user coincides with an interfering station")
    total = np.sum(d_own ** (-params.alpha)) + np.sum(d_nb ** (-params.alpha))
    return params.per_user_power * float(total)


def small_cell_rate_samples(user_index: int, assignments, users, layout: LayoutRealization,
                            params: SystemParams, trials: int, rng: np.random.Generator,
                            aware_waterfilling: bool = False) -> np.ndarray:
    """Rate of a user served alone by its small-cell station (SVD with
    water-filling over ``N x N``) against noise plus small-cell interference."""
    xy = _xy(users)
    N = params.N
    station = layout.clusters[0][assignments[user_index]]
    d = float(np.linalg.norm(station - xy[user_index]))
    if d == 0.0:
        raise CoincidentPositionError("user coincides with its serving station")
    impaired = params.noise + small_cell_interference(user_index, assignments, xy, layout, params)
    gain = N * d ** (-params.alpha)
    H = sample_small_scale(N, N, rng, trials)
    eigs = _gram_eigs(H) / N
    budget = params.per_user_power * gain
    powers, _ = waterfill_batch(eigs, budget, impaired if aware_waterfilling else params.noise)
    return np.mean(np.log2(1.0 + eigs * powers / impaired), axis=-1)


def small_cell_rate(user_index: int, assignments, users, layout: LayoutRealization,
                    params: SystemParams, trials: int, rng: np.random.Generator,
                    aware_waterfilling: bool = False) -> RateEstimate:
    if len(assignments) > layout.clusters_per_cell:
        raise ValueError("more users than small cells")
    x = small_cell_rate_samples(user_index, assignments, users, layout, params, trials, rng,
                                aware_waterfilling)
    return _summarize(x, {"positions": 1, "layouts": 1, "channels": trials},
                      _config(params, LayoutKind.SMALL_CELL, "sc"))


# --------------------------------------------------------------- nested average

def outer_seed(entropy: int, index: int, *path: int) -> np.random.Generator:
    """Generator for substream ``path`` of outer position ``index``."""
    return np.random.default_rng(np.random.SeedSequence(entropy, spawn_key=(index, *path)))


def _default_scheme(kind: LayoutKind, K: int) -> str:
    if kind is LayoutKind.SMALL_CELL:
        return "sc"
    return "su" if K == 1 else "bd"


def _sample_users(entropy, index, K, user):
    # The target has its own substream so its position does not depend on K.
    target = _xy(user)[0] if user is not None else sample_disk(outer_seed(entropy, index, 0))
    others = sample_disk(outer_seed(entropy, index, 3), K - 1)
    return np.vstack([target[None], others])


def _position_task(args) -> np.ndarray:
    """Layout-level rate means for one outer position index."""
    kind, params, entropy, index, n_layouts, n_chan, scheme, user, aware = args
    users = _sample_users(entropy, index, params.K, user)
    out = np.empty(n_layouts)
    for j in range(n_layouts):
        lrng = outer_seed(entropy, index, 1, j)
        crng = outer_seed(entropy, index, 2, j)
        layout = sample_layout(kind, params, lrng)
        if scheme == "su":
            x = single_user_rate_samples(users[0], layout, params, n_chan, crng)
        elif scheme == "bd":
            x = bd_rate_samples(0, users, layout, params, n_chan, crng,
                                aware_waterfilling=aware)
        else:
            assignments = assign_small_cells(users, layout.clusters[0])
            x = small_cell_rate_samples(0, assignments, users, layout, params, n_chan, crng,
                                        aware_waterfilling=aware)
        out[j] = x.mean()
    return out


def _entropy(seed) -> int:
    if isinstance(seed, np.random.Generator):
        return int(seed.integers(2 ** 63))
    if isinstance(seed, np.random.SeedSequence):
        return int(seed.generate_state(2, np.uint64)[0])
    return int(seed)


def average_rate(kind, params: SystemParams, position_draws: int = 100,
                 layout_draws: int = 100, channel_draws: int = 200, seed=0,
                 scheme: str | None = None, user: PolarPoint | None = None,
                 workers: int = 1, aware_waterfilling: bool = False) -> RateEstimate:
    """Average per-antenna rate of a cell-0 user over positions, layouts
    and fading.

    Parameters
    ----------
    kind : LayoutKind or str
    params : SystemParams
    position_draws, layout_draws, channel_draws : int
        Draw counts per nesting level.  Co-located layouts are
        deterministic, so ``layout_draws`` is ignored for them.
    seed : int, SeedSequence or Generator
    scheme : {"su", "bd", "sc"}, optional
        Defaults to single-user for ``K = 1``, BD otherwise, and the
        small-cell model for small-cell layouts.
    user : PolarPoint, optional
        Pin the target user (the other ``K - 1`` users stay random).
    workers : int
        Processes to spread position draws over.  The result does not
        depend on this value.

    Returns
    -------
    RateEstimate
        The half-width uses the spread of per-position means, or of
        per-layout means when there is a single position draw.
    """
    kind = LayoutKind(kind)
    for name, v in (("position_draws", position_draws), ("layout_draws", layout_draws),
                    ("channel_draws", channel_draws)):
        if v < 1:
            raise ValueError(f"{name} must be >= 1, got {v}")
    scheme = scheme or _default_scheme(kind, params.K)
    if scheme == "su" and params.K != 1:
        raise ValueError("single-user scheme needs K = 1")
    if scheme == "sc" and kind is not LayoutKind.SMALL_CELL:
        raise ValueError("small-cell scheme needs a small-cell layout")
    if scheme == "bd" and params.M < params.K * params.N:
        raise InfeasibleConfigurationError("BD needs M >= K N")
    n_layouts = 1 if kind is LayoutKind.CA else layout_draws
    n_pos = 1 if (user is not None and params.K == 1) else position_draws
    entropy = _entropy(seed)
    tasks = [(kind, params, entropy, i, n_layouts, channel_draws, scheme, user,
              aware_waterfilling) for i in range(n_pos)]
    if workers > 1 and n_pos > 1:
        with ProcessPoolExecutor(workers) as pool:
            per_pos = list(pool.map(_position_task, tasks, chunksize=max(1, n_pos // (4 * workers))))
    else:
        per_pos = [_position_task(t) for t in tasks]
    per_pos = np.array(per_pos)
    samples = per_pos.mean(axis=1) if n_pos > 1 else per_pos[0]
    trials = {"positions": n_pos, "layouts": n_layouts, "channels": channel_draws}
    return _summarize(samples, trials, _config(params, kind, scheme))
