"""SVD transmission with water-filling, and block diagonalization (BD).

Throughout, eigenvalues are those of ``G_tilde @ G_tilde^H`` for the
normalized channel (unit-norm large-scale vector), so a user with per-user
power ``P`` water-fills a total of ``P * ||gamma||^2``.  With that
convention the resulting precoder has unit trace whenever the full budget
is allocated, which water-filling always does.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import ChannelRealization

__all__ = [
    "RankZeroChannelError", "RankDeficientError", "InfeasibleConfigurationError",
    "PrecodeResult", "waterfill", "waterfill_batch", "waterfill_rate",
    "svd_precoder", "null_space_basis", "bd_precoder", "bd_effective_eigenvalues",
    "precoded_rate", "equal_power_rate",
]


class RankZeroChannelError(ValueError):
    pass


class RankDeficientError(np.linalg.LinAlgError):
    def __init__(self, rank: int, rows: int):
        super().__init__(f"stacked channel is rank deficient: rank {rank} < {rows} rows")
        self.rank = rank


class InfeasibleConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class PrecodeResult:
    """Precoder ``W`` (M x N), water-filled powers, water level and the
    eigenvalues of the (effective) normalized channel, descending."""

    W: np.ndarray
    powers: np.ndarray
    water_level: float
    effective_eigs: np.ndarray

    @property
    def radiated_fraction(self) -> float:
        """``Tr(W W^H)``."""
        return float(np.real(np.vdot(self.W, self.W)))


def waterfill(eigs, budget: float, noise: float = 1.0) -> tuple[np.ndarray, float]:
    """Water-filling powers ``(zeta - noise / eig)^+`` summing to ``budget``.

    The active set is found by sorting the eigenvalues and scanning, which
    gives the water level in closed form.  A channel exactly at the cutoff
    (``zeta == noise / eig``) is left inactive.

    Returns
    -------
    powers : ndarray
        Powers in the order of ``eigs``.
    water_level : float
    """
    eigs = np.asarray(eigs, dtype=float)
    if budget <= 0:
        raise ValueError(f"power budget must be positive, got {budget}")
    if not np.any(eigs > 0):
        raise RankZeroChannelError("rank-zero channel")
    powers, level = waterfill_batch(eigs, budget, noise)
    return powers, float(level)


def waterfill_batch(eigs: np.ndarray, budget, noise=1.0):
    """Vectorized :func:`waterfill` over all leading axes of ``eigs``.

    ``budget`` and ``noise`` broadcast against ``eigs.shape[:-1]``.  Rows
    without a positive eigenvalue get zero power and a NaN level.
    """
    eigs = np.asarray(eigs, dtype=float)
    budget = np.asarray(budget, dtype=float)
    noise = np.asarray(noise, dtype=float)
    order = np.argsort(-eigs, axis=-1)
    lam = np.take_along_axis(eigs, order, axis=-1)
    with np.errstate(divide="ignore"):
        inv = np.where(lam > 0, noise[..., None] / np.where(lam > 0, lam, 1.0), np.inf)
    n = eigs.shape[-1]
    levels = (budget[..., None] + np.cumsum(inv, axis=-1)) / np.arange(1, n + 1)
    valid = levels > inv
    k = n - 1 - np.argmax(valid[..., ::-1], axis=-1)
    level = np.take_along_axis(levels, k[..., None], axis=-1)[..., 0]
    level = np.where(valid.any(axis=-1), level, np.nan)
    sorted_p = np.where(np.arange(n) <= k[..., None], level[..., None] - inv, 0.0)
    sorted_p = np.nan_to_num(np.maximum(sorted_p, 0.0))
    powers = np.empty_like(sorted_p)
    np.put_along_axis(powers, order, sorted_p, axis=-1)
    return powers, level


def waterfill_rate(eigs: np.ndarray, budget, noise=1.0) -> np.ndarray:
    """Per-antenna rate ``(1/N) sum log2(1 + eig * p / noise)`` under
    water-filling, batched over leading axes; ``N = eigs.shape[-1]``."""
    eigs = np.asarray(eigs, dtype=float)
    powers, _ = waterfill_batch(eigs, budget, noise)
    noise = np.asarray(noise, dtype=float)[..., None]
    return np.mean(np.log2(1.0 + eigs * powers / noise), axis=-1)


def equal_power_rate(G: np.ndarray, power, noise=1.0) -> np.ndarray:
    """``(1/N) log2 det(I + power / (N noise) G G^H)``, batched."""
    N = G.shape[-2]
    scale = np.asarray(power / (N * np.asarray(noise, dtype=float)))[..., None, None]
    A = np.eye(N) + scale * (G @ np.swapaxes(G, -1, -2).conj())
    sign, logdet = np.linalg.slogdet(A)
    return logdet / np.log(2) / N


def precoded_rate(G_tilde: np.ndarray, W: np.ndarray, sinr: float) -> float:
    """``(1/N) log2 det(I + sinr * G_tilde W W^H G_tilde^H)``, evaluated
    directly from the matrices."""
    N = G_tilde.shape[0]
    E = G_tilde @ W
    _, logdet = np.linalg.slogdet(np.eye(N) + sinr * (E @ E.conj().T))
    return float(logdet / np.log(2) / N)


def _precode_from_svd(V: np.ndarray, s: np.ndarray, budget: float, noise: float) -> PrecodeResult:
    lam = s ** 2
    powers, level = waterfill(lam, budget, noise)
    omega = np.sqrt(powers / budget)
    return PrecodeResult(V * omega, powers, level, lam)


def svd_precoder(chan: ChannelRealization, budget: float, noise: float = 1.0) -> PrecodeResult:
    """Single-user SVD precoder ``W = V Omega``.

    Parameters
    ----------
    chan : ChannelRealization
    budget : float
        Per-user transmit power ``P``; water-filling distributes
        ``P * ||gamma||^2`` over the eigenvalues of ``G_tilde G_tilde^H``.
    noise : float
    """
    _, s, Vh = np.linalg.svd(chan.G_tilde, full_matrices=False)
    N = chan.G_tilde.shape[0]
    s = np.pad(s, (0, N - s.size))
    V = Vh.conj().T
    if V.shape[1] < N:
        V = np.pad(V, ((0, 0), (0, N - V.shape[1])))
    return _precode_from_svd(V, s, budget * chan.gain, noise)


def null_space_basis(X: np.ndarray, M: int | None = None) -> np.ndarray:
    """Orthonormal basis (M x (M - rank)) of the null space of ``X``.

    Singular values below ``max(X.shape) * eps * s_max`` count as zero.  A
    rank below the number of rows raises :class:`RankDeficientError`.  An
    empty ``X`` (no interfering users) yields the identity.
    """
    X = np.asarray(X)
    if M is None:
        M = X.shape[1]
    if X.shape[0] == 0:
        return np.eye(M, dtype=complex)
    if X.shape[0] >= M:
        raise InfeasibleConfigurationError(
            f"{X.shape[0]} interfering rows leave no null space in {M} dimensions")
    _, s, Vh = np.linalg.svd(X, full_matrices=True)
    tol = max(X.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol))
    if rank < X.shape[0]:
        raise RankDeficientError(rank, X.shape[0])
    return Vh[rank:].conj().T


def bd_precoder(chans: Sequence[ChannelRealization], budget: float,
                noise: float | Sequence[float] = 1.0) -> list[PrecodeResult]:
    """Block-diagonalization precoders for the ``K`` users of one cell.

    Each user's signal is projected onto the null space of the other users'
    normalized channels, and the resulting effective channel is decomposed
    by SVD with water-filling over its ``N`` eigenvalues.

    Parameters
    ----------
    chans : sequence of ChannelRealization
        All ``K`` users' channels to the same ``M`` antennas.
    budget : float
        Per-user power ``P_t / K``.
    noise : float or sequence of float
        Noise (or interference-plus-noise) level used in each user's
        water-filling.
    """
    K = len(chans)
    N, M = chans[0].G_tilde.shape
    if M < K * N:
        raise InfeasibleConfigurationError(f"BD needs M >= K N, got M={M}, K={K}, N={N}")
    noise = np.broadcast_to(np.asarray(noise, dtype=float), (K,))
    out = []
    for k in range(K):
        X = np.vstack([c.G_tilde for j, c in enumerate(chans) if j != k] or [np.zeros((0, M))])
        V0 = null_space_basis(X, M)
        _, s, Vh = np.linalg.svd(chans[k].G_tilde @ V0, full_matrices=False)
        V = V0 @ Vh.conj().T
        out.append(_precode_from_svd(V, s, budget * chans[k].gain, float(noise[k])))
    return out


def bd_effective_eigenvalues(G_target: np.ndarray, G_others: np.ndarray | None) -> np.ndarray:
    """Eigenvalues of ``X X^H`` with ``X = G_target V0``, batched.

    ``V0`` spans the null space of ``G_others``; the projection is applied
    through a QR factorisation of ``G_others^H`` instead of an explicit
    basis, which gives the same eigenvalues at lower cost.  Works for
    normalized or unnormalized channels (row scaling leaves the null space
    unchanged).  Returns shape ``(..., N)``, descending.
    """
    Gh = np.swapaxes(G_target, -1, -2).conj()
    if G_others is not None and G_others.shape[-2] > 0:
        Q, _ = np.linalg.qr(np.swapaxes(G_others, -1, -2).conj())
        Gh = Gh - Q @ (np.swapaxes(Q, -1, -2).conj() @ Gh)
    s = np.linalg.svd(Gh, compute_uv=False)
    return s ** 2
