"""Normalized inter-cell interference power and its moments.

The normalized power is the average of the squared large-scale gains from
the six neighbour cells' antennas.  With distributed clusters its moments
diverge for users on the cell edge, so Monte Carlo moment estimates are
reported together with convergence diagnostics rather than as bare numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import cluster_distances
from .geometry import CELL_CENTERS_XY, NEIGHBOR_ANGLES, LayoutRealization, PolarPoint, sample_disk
from .params import LayoutKind, SystemParams

__all__ = [
    "InterferenceSample", "MomentDiagnostics", "intercell_power_ca",
    "intercell_power_da", "intercell_power", "sample_intercell_power_da",
    "intercell_moment_mc", "intercell_covariance", "hill_tail_index",
]


@dataclass(frozen=True)
class InterferenceSample:
    p_int: float
    layout_kind: LayoutKind
    user: PolarPoint


@dataclass(frozen=True)
class MomentDiagnostics:
    """Monte Carlo estimate of ``E[P_int ** n]`` with convergence diagnostics.

    ``running_mean[j]`` is the mean of the first ``j + 1`` samples.
    ``final_decade_drift`` is ``|m(T) - m(T/10)| / |m(T)|``; it stays small
    when the moment exists and does not shrink when it is infinite.
    ``tail_index`` is the Hill estimate for the sample tail; a value below 1
    means the sample mean has no finite expectation to converge to.
    """

    estimate: float
    running_mean: np.ndarray
    final_decade_drift: float
    tail_index: float

    @property
    def trials(self) -> int:
        return self.running_mean.size


def intercell_power_ca(user: PolarPoint, alpha: float) -> float:
    rho, theta = user.rho, user.theta
    d2 = rho * rho + 4 - 4 * rho * np.cos(theta - NEIGHBOR_ANGLES)
    return float(np.sum(d2 ** (-alpha / 2)))


def intercell_power_da(user: PolarPoint, layout: LayoutRealization, alpha: float) -> float:
    """``(1/C) sum_i sum_l d_{l,i} ** -alpha`` over neighbour cells' clusters."""
    d = cluster_distances(layout, user)[1:]
    return float(np.sum(d ** (-alpha)) / layout.clusters_per_cell)


def intercell_power(user: PolarPoint, layout: LayoutRealization, alpha: float) -> float:
    if layout.kind is LayoutKind.CA:
        return intercell_power_ca(user, alpha)
    return intercell_power_da(user, layout, alpha)


def sample_intercell_power_da(user: PolarPoint, alpha: float, L: int, n_layouts: int,
                              rng: np.random.Generator, chunk: int = 2_000_000) -> np.ndarray:
    """Draw ``n_layouts`` independent neighbour-cell cluster layouts and
    return the normalized inter-cell power for each.

    Only the six neighbour cells are sampled.  Layouts that put a cluster
    exactly on the user are redrawn.
    """
    u = user.xy
    per = max(1, chunk // (6 * L))
    out = np.empty(n_layouts)
    start = 0
    while start < n_layouts:
        m = min(per, n_layouts - start)
        pts = sample_disk(rng, (m, 6, L)) + CELL_CENTERS_XY[1:, None, :]
        d2 = np.sum((pts - u) ** 2, axis=-1)
        d2 = d2[~np.any(d2 == 0.0, axis=(1, 2))]
        m = d2.shape[0]
        out[start:start + m] = np.sum(d2 ** (-alpha / 2), axis=(1, 2)) / L
        start += m
    return out


def hill_tail_index(samples: np.ndarray, k: int | None = None) -> float:
    x = np.sort(np.asarray(samples, dtype=float))[::-1]
    if k is None:
        k = max(10, int(np.sqrt(x.size)))
    k = min(k, x.size - 1)
    xi = np.mean(np.log(x[:k]) - np.log(x[k]))
    return float(1.0 / xi) if xi > 0 else np.inf


def intercell_moment_mc(user: PolarPoint, n: int, params: SystemParams, trials: int,
                        rng: np.random.Generator) -> MomentDiagnostics:
    """Estimate ``E[(P_int) ** n]`` for a distributed layout by drawing
    ``trials`` layouts of ``params.L`` clusters per cell."""
    if n < 1:
        raise ValueError(f"moment order must be >= 1, got {n}")
    x = sample_intercell_power_da(user, params.alpha, params.L, trials, rng) ** n
    running = np.cumsum(x) / np.arange(1, trials + 1)
    final = running[-1]
    earlier = running[max(0, trials // 10 - 1)]
    drift = abs(final - earlier) / abs(final)
    return MomentDiagnostics(float(final), running, float(drift), hill_tail_index(x))


def intercell_covariance(user: PolarPoint, layout: LayoutRealization,
                         params: SystemParams) -> np.ndarray:
    """Inter-cell interference covariance ``P_t * P_int * I_N`` (noise units)."""
    p = intercell_power(user, layout, params.alpha)
    return params.snr * p * np.eye(params.N)
