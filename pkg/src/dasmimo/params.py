"""System-wide scalar parameters shared by every module."""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass


class LayoutKind(str, enum.Enum):
    """Base-station antenna layout."""

    CA = "ca"
    DA = "da"
    SMALL_CELL = "smallcell"


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Global scalars of the 7-cell network.

    Working units put the noise power at ``N0 = 1``, so ``snr`` is the
    per-cell transmit power ``P_t`` itself and each user gets ``snr / K``.

    Parameters
    ----------
    alpha : float
        Path-loss factor, must exceed 2.
    snr : float
        Linear ``P_t / N0``.
    K : int
        Users per cell.
    L : int
        Antenna clusters per cell (``M / N``).
    N : int
        Antennas per user, which is also the antennas per cluster.
    """

    alpha: float = 4.0
    snr: float = 10.0
    K: int = 1
    L: int = 1
    N: int = 2

    def __post_init__(self):
        if not self.alpha > 2:
            raise ValueError(f"path-loss factor must exceed 2, got {self.alpha}")
        if self.snr <= 0:
            raise ValueError(f"snr must be positive, got {self.snr}")
        if self.K < 1 or self.L < 1 or self.N < 1:
            raise ValueError(f"K, L, N must be >= 1, got K={self.K} L={self.L} N={self.N}")
        if self.L < self.K:
            raise ValueError(
                f"block diagonalization needs L >= K (M >= KN), got L={self.L} K={self.K}")

    @classmethod
    def from_db(cls, snr_db: float, **kwargs) -> "SystemParams":
        return cls(snr=db_to_linear(snr_db), **kwargs)

    @property
    def M(self) -> int:
        return self.L * self.N

    @property
    def noise(self) -> float:
        return 1.0

    @property
    def per_user_power_fraction(self) -> float:
        return 1.0 / self.K

    @property
    def per_user_power(self) -> float:
        """``P_t / K`` in units of ``N0``."""
        return self.snr / self.K

    def replace(self, **changes) -> "SystemParams":
        d = asdict(self)
        d.update(changes)
        return SystemParams(**d)
