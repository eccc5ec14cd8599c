"""1-tier hexagonal 7-cell geometry and access-distance distributions.

Every cell's inscribed circle has radius 1.  Cell 0 is centred at the
origin and cell ``i`` (1..6) at polar position ``(2, i*pi/3 - pi/6)``.
Users and antenna clusters are placed uniformly in the inscribed circles;
hexagon corners are never populated.

Distances here are always Euclidean distances in units of the inscribed
radius.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import LayoutKind, SystemParams

__all__ = [
    "PolarPoint", "CellIndex", "LayoutRealization", "NEIGHBOR_ANGLES",
    "CELL_CENTERS_XY", "cell_center", "sample_disk", "sample_user_position",
    "sample_layout", "own_cell_distance_cdf", "own_cell_distance_pdf",
    "neighbor_center_distance", "neighbor_cell_distance_cdf",
    "neighbor_cell_distance_pdf", "disk_distance_cdf", "disk_distance_pdf",
    "min_access_distance_cdf", "min_access_distance_pdf",
]

# Angular coordinate of the centre of neighbour cell i, i = 1..6.
NEIGHBOR_ANGLES = np.arange(1, 7) * np.pi / 3 - np.pi / 6

CELL_CENTERS_XY = np.vstack([
    np.zeros((1, 2)),
    2.0 * np.column_stack([np.cos(NEIGHBOR_ANGLES), np.sin(NEIGHBOR_ANGLES)]),
])


@dataclass(frozen=True)
class PolarPoint:
    rho: float
    theta: float = 0.0

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError(f"radial coordinate must be >= 0, got {self.rho}")

    @property
    def xy(self) -> np.ndarray:
        return np.array([self.rho * np.cos(self.theta), self.rho * np.sin(self.theta)])

    @classmethod
    def from_xy(cls, x: float, y: float) -> "PolarPoint":
        return cls(float(np.hypot(x, y)), float(np.arctan2(y, x) % (2 * np.pi)))


@dataclass(frozen=True)
class CellIndex:
    i: int

    def __post_init__(self):
        if self.i not in range(7):
            raise ValueError(f"cell index must be in 0..6, got {self.i}")

    @property
    def center(self) -> PolarPoint:
        return cell_center(self.i)


def cell_center(i: int) -> PolarPoint:
    if i == 0:
        return PolarPoint(0.0, 0.0)
    if i not in range(1, 7):
        raise ValueError(f"cell index must be in 0..6, got {i}")
    return PolarPoint(2.0, i * np.pi / 3 - np.pi / 6)


@dataclass(frozen=True)
class LayoutRealization:
    """Antenna cluster positions in all seven cells.

    ``clusters`` holds global cartesian coordinates with shape ``(7, C, 2)``,
    where ``C`` is ``L`` for DA/small-cell layouts and 1 for CA (the cell
    centre).  ``antennas_per_cluster`` is ``N`` or ``M`` respectively.
    """

    kind: LayoutKind
    clusters: np.ndarray
    antennas_per_cluster: int

    @property
    def clusters_per_cell(self) -> int:
        return self.clusters.shape[1]

    @property
    def antennas_per_cell(self) -> int:
        return self.clusters_per_cell * self.antennas_per_cluster

    def cluster_points(self, cell: int) -> list[PolarPoint]:
        return [PolarPoint.from_xy(x, y) for x, y in self.clusters[cell]]


def sample_disk(rng: np.random.Generator, size=None) -> np.ndarray:
    """Uniform points in the unit disk, cartesian, shape ``size + (2,)``.

    The radius is drawn as ``sqrt(u)`` so its density is exactly ``2x``.
    Each point consumes two consecutive uniforms, so the first ``n`` points
    of a larger draw equal a draw of ``n`` points from the same stream.
    """
    shape = () if size is None else (size if isinstance(size, tuple) else (size,))
    u = rng.random(shape + (2,))
    r = np.sqrt(u[..., 0])
    t = 2 * np.pi * u[..., 1]
    return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)


def sample_user_position(rng: np.random.Generator) -> PolarPoint:
    r = np.sqrt(rng.random())
    t = 2 * np.pi * rng.random()
    return PolarPoint(float(r), float(t))


def sample_layout(kind: LayoutKind | str, params: SystemParams,
                  rng: np.random.Generator | None = None) -> LayoutRealization:
    kind = LayoutKind(kind)
    if kind is LayoutKind.CA:
        return LayoutRealization(kind, CELL_CENTERS_XY[:, None, :].copy(), params.M)
    if rng is None:
        raise ValueError("a random generator is required for distributed layouts")
    # cluster-major draw: the first L clusters of every cell do not depend
    # on how many clusters are drawn in total
    pts = np.swapaxes(sample_disk(rng, (params.L, 7)), 0, 1) + CELL_CENTERS_XY[:, None, :]
    return LayoutRealization(kind, pts, params.N)


def _check_radius(y):
    y = np.asarray(y, dtype=float)
    if np.any((y < 0) | (y > 1)):
        raise ValueError("user radial coordinate must lie in [0, 1]")
    return y


def _safe_acos(a):
    return np.arccos(np.clip(a, -1.0, 1.0))


def own_cell_distance_cdf(x, y):
    """Cdf of the distance from a user at radius ``y`` to a uniform point of
    its own cell's unit disk."""
    y = _check_radius(y)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), y)
    out = np.where(x >= 1 + y, 1.0, 0.0)
    inner = (x > 0) & (x <= 1 - y)
    out = np.where(inner, x * x, out)
    lens = (x > 1 - y) & (x < 1 + y) & (y > 0)
    if np.any(lens):
        xs, ys = x[lens], y[lens]
        s = (1 + xs + ys) / 2
        s_delta = np.sqrt(np.maximum(s * (s - 1) * (s - xs) * (s - ys), 0.0))
        val = (xs * xs * (1 - _safe_acos((1 - xs * xs - ys * ys) / (2 * xs * ys)) / np.pi)
               + _safe_acos((1 - xs * xs + ys * ys) / (2 * ys)) / np.pi
               - 2 * s_delta / np.pi)
        out = out.copy()
        out[lens] = np.clip(val, 0.0, 1.0)
    return out[()] if out.ndim == 0 else out


def own_cell_distance_pdf(x, y):
    y = _check_radius(y)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), y)
    out = np.where((x >= 0) & (x <= 1 - y), 2 * x, 0.0)
    lens = (x > 1 - y) & (x <= 1 + y) & (y > 0)
    if np.any(lens):
        xs, ys = x[lens], y[lens]
        out = out.copy()
        out[lens] = 2 * xs / np.pi * _safe_acos((xs * xs + ys * ys - 1) / (2 * xs * ys))
    return out[()] if out.ndim == 0 else out


def neighbor_center_distance(y, z, i):
    """Distance from the user at ``(y, z)`` to the centre of neighbour cell ``i``."""
    return np.sqrt(y * y + 4 - 4 * y * np.cos(z - (i * np.pi / 3 - np.pi / 6)))


def disk_distance_cdf(x, D):
    """Cdf of the distance from a point at distance ``D >= 1`` from a unit
    disk's centre to a uniform point of that disk (lens area over pi)."""
    x, D = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(D, dtype=float))
    out = np.where(x >= D + 1, 1.0, 0.0)
    band = (x > D - 1) & (x < D + 1) & (x > 0)
    if np.any(band):
        xs, Ds = x[band], D[band]
        psi1 = _safe_acos((xs * xs + Ds * Ds - 1) / (2 * xs * Ds))
        psi2 = _safe_acos((1 + Ds * Ds - xs * xs) / (2 * Ds))
        overlap = psi1 * xs * xs + psi2 - xs * Ds * np.sin(psi1)
        out = out.copy()
        out[band] = np.clip(overlap / np.pi, 0.0, 1.0)
    return out[()] if out.ndim == 0 else out


def disk_distance_pdf(x, D):
    x, D = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(D, dtype=float))
    band = (x >= D - 1) & (x <= D + 1) & (x > 0)
    out = np.zeros(x.shape)
    if np.any(band):
        xs, Ds = x[band], D[band]
        out[band] = 2 * xs / np.pi * _safe_acos((xs * xs + Ds * Ds - 1) / (2 * xs * Ds))
    return out[()] if out.ndim == 0 else out


def _check_neighbor(i):
    if int(i) != i or not 1 <= i <= 6:
        raise ValueError(f"neighbour cell index must be in 1..6, got {i}")


def neighbor_cell_distance_cdf(x, y, z, i):
    _check_neighbor(i)
    y = _check_radius(y)
    return disk_distance_cdf(x, neighbor_center_distance(y, z, i))


def neighbor_cell_distance_pdf(x, y, z, i):
    """Density of the distance from a cell-0 user at ``(y, z)`` to a uniform
    antenna cluster of neighbour cell ``i``.

    Supported on ``[D - 1, D + 1]`` with ``D`` the user-to-cell-centre
    distance.
    """
    _check_neighbor(i)
    y = _check_radius(y)
    return disk_distance_pdf(x, neighbor_center_distance(y, z, i))


def _check_count(n):
    if n < 1:
        raise ValueError(f"number of clusters must be >= 1, got {n}")


def min_access_distance_cdf(x, y, n_clusters: int):
    _check_count(n_clusters)
    return 1.0 - (1.0 - own_cell_distance_cdf(x, y)) ** n_clusters


def min_access_distance_pdf(x, y, n_clusters: int):
    """Density of the minimum of ``n_clusters`` i.i.d. own-cell distances.

    With ``n_clusters = L - K + 1`` this is the distribution of the nearest
    cluster left over after block diagonalization.
    """
    _check_count(n_clusters)
    surv = 1.0 - own_cell_distance_cdf(x, y)
    return n_clusters * surv ** (n_clusters - 1) * own_cell_distance_pdf(x, y)
