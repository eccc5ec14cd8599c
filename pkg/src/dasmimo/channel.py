"""Large-scale and small-scale fading, and composite channel matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import NEIGHBOR_ANGLES, LayoutRealization, PolarPoint
from .params import LayoutKind, SystemParams

__all__ = [
    "SystemParams", "ChannelRealization", "CoincidentPositionError",
    "large_scale_fading", "ca_large_scale_vector", "sample_small_scale",
    "cluster_distances", "compose_channel",
]


class CoincidentPositionError(ValueError):
    """A user sits exactly on an antenna; the caller must resample.

    Distances are never clamped, the unbounded path loss is part of the model.
    """


@dataclass(frozen=True)
class ChannelRealization:
    """One user's channel to the ``M`` antennas of cell 0.

    Antenna ordering is cluster-major: antenna ``m = l * N + n`` is antenna
    ``n`` of cluster ``l``.  ``G`` and ``G_tilde`` are the row-wise products
    of ``gamma`` and ``beta`` with ``H``; the ``N x M`` large-scale matrix
    with identical rows is never materialised.
    """

    gamma: np.ndarray
    beta: np.ndarray
    H: np.ndarray
    G: np.ndarray
    G_tilde: np.ndarray

    @property
    def gain(self) -> float:
        """``||gamma||^2``."""
        return float(np.sum(self.gamma ** 2))


def _xy(p) -> np.ndarray:
    return p.xy if isinstance(p, PolarPoint) else np.asarray(p, dtype=float)


def large_scale_fading(user, antenna, alpha: float) -> float:
    """``distance ** (-alpha / 2)`` between two positions (PolarPoint or xy)."""
    d = float(np.linalg.norm(_xy(antenna) - _xy(user)))
    if d == 0.0:
        raise CoincidentPositionError("user and antenna positions coincide")
    return d ** (-alpha / 2)


def ca_large_scale_vector(user: PolarPoint, alpha: float, M: int | None = None) -> np.ndarray:
    """Per-cell large-scale coefficients with co-located antennas.

    Returns shape ``(7,)``, entry 0 for the own cell and entry ``i`` for
    neighbour cell ``i``; with ``M`` given, each entry is repeated to shape
    ``(7, M)``.
    """
    rho, theta = user.rho, user.theta
    if rho == 0.0:
        raise CoincidentPositionError("user at the cell centre has infinite own-cell gain")
    neigh = (rho * rho + 4 - 4 * rho * np.cos(theta - NEIGHBOR_ANGLES)) ** (-alpha / 4)
    vec = np.concatenate([[rho ** (-alpha / 2)], neigh])
    if M is None:
        return vec
    return np.repeat(vec[:, None], M, axis=1)


def sample_small_scale(N: int, M: int, rng: np.random.Generator, size=()) -> np.ndarray:
    """i.i.d. CN(0, 1) entries: real and imaginary parts N(0, 1/2)."""
    shape = (size,) if isinstance(size, (int, np.integer)) else tuple(size)
    z = rng.standard_normal(shape + (N, M, 2))
    return (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5)


def cluster_distances(layout: LayoutRealization, user) -> np.ndarray:
    """Distances from ``user`` to every cluster, shape ``(7, C)``."""
    d = np.linalg.norm(layout.clusters - _xy(user), axis=-1)
    if np.any(d == 0.0):
        raise CoincidentPositionError("user coincides with an antenna cluster")
    return d


def compose_channel(layout: LayoutRealization, user: PolarPoint, params: SystemParams,
                    rng: np.random.Generator, H: np.ndarray | None = None) -> ChannelRealization:
    """Draw ``H`` (unless given) and build the cell-0 channel of ``user``."""
    if layout.antennas_per_cell != params.M:
        raise ValueError(
            f"layout has {layout.antennas_per_cell} antennas per cell, params expect {params.M}")
    if layout.kind is LayoutKind.CA:
        g = ca_large_scale_vector(user, params.alpha)[0]
        gamma = np.full(params.M, g)
    else:
        d0 = cluster_distances(layout, user)[0]
        gamma = np.repeat(d0 ** (-params.alpha / 2), layout.antennas_per_cluster)
    beta = gamma / np.linalg.norm(gamma)
    if H is None:
        H = sample_small_scale(params.N, params.M, rng)
    return ChannelRealization(gamma, beta, H, gamma * H, beta * H)
