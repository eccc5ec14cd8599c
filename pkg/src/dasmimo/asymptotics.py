"""Closed-form and quadrature values of the large-antenna asymptotics.

Large-``L`` approximations (``*_approx``) are kept apart from the forms they
approximate so that approximation gaps can be measured.  All integrals use
adaptive quadrature (``scipy.integrate``) with absolute tolerance 1e-8 or
tighter.

``params.snr`` is ``P_t / N0`` and the per-user SNR is ``snr / K``.
"""

from __future__ import annotations

import enum
import functools
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, interpolate

from .geometry import NEIGHBOR_ANGLES, PolarPoint, disk_distance_pdf, own_cell_distance_cdf
from .interference import intercell_power_ca
from .params import SystemParams

__all__ = [
    "AsymptoticKind", "AsymptoticValue", "mp_density", "mp_cdf", "mp_mean", "phi",
    "ca_su_rate", "ca_su_avg", "ca_su_avg_approx", "da_su_lb", "da_su_lb_approx",
    "da_su_avg_lb", "ca_mu_rate", "psi_c", "ca_mu_avg", "ca_mu_avg_approx",
    "da_mu_lb", "da_mu_lb_approx", "da_mu_avg_lb", "psi_d", "upsilon",
    "neighbor_inverse_moment", "expected_log_min_distance", "sc_avg_lb",
    "sc_avg_lb_exact",
]

LOG2E = np.log2(np.e)
_QUAD = dict(epsabs=1e-10, epsrel=1e-10, limit=200)


class AsymptoticKind(str, enum.Enum):
    EXACT_ASYMPTOTIC = "exact_asymptotic"
    LOWER_BOUND = "lower_bound"
    APPROXIMATION = "approximation"


@dataclass(frozen=True)
class AsymptoticValue:
    value: float
    kind: AsymptoticKind
    formula_id: str

    def __float__(self):
        return float(self.value)


def _quad(f, a, b, **kw):
    opts = dict(_QUAD)
    opts.update(kw)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(f, a, b, **opts)[0]


# -- Marchenko-Pastur ---------------------------------------------------------

def _mp_edges(ratio: float, users: int):
    eff = ratio - users + 1
    if eff < 1:
        raise ValueError(f"effective antenna ratio must be >= 1, got {eff}")
    return (np.sqrt(eff) - 1) ** 2, (np.sqrt(eff) + 1) ** 2


def mp_density(x, ratio: float, users: int = 1):
    """Limiting eigenvalue density of ``W_N(M - (users-1) N, I/M)`` with
    ``M / N = ratio``.

    ``users = 1`` gives the plain Wishart law, supported on
    ``[x_-/ratio, x_+/ratio]`` with ``x_pm = (sqrt(ratio) pm 1)**2``; the
    block-diagonalized channel uses ``ratio - users + 1`` in the edges.
    """
    lo, hi = _mp_edges(ratio, users)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sqrt(np.maximum((hi - ratio * x) * (ratio * x - lo), 0.0)) / (2 * np.pi * x)
    out = np.where((x > 0) & (x >= lo / ratio) & (x <= hi / ratio), val, 0.0)
    return out[()] if out.ndim == 0 else out


@functools.lru_cache(maxsize=32)
def _mp_cdf_table(ratio: float, users: int, nodes: int = 4097):
    # With x = a + (b - a)(1 - cos t)/2 the density times dx/dt is smooth on
    # [0, pi], including the 1/sqrt(x) edge at a = 0.
    lo, hi = _mp_edges(ratio, users)
    a, b = lo / ratio, hi / ratio
    t = np.linspace(0.0, np.pi, nodes)
    c = np.cos(t)
    if a == 0.0:
        g = ratio * b * (1 + c) / (4 * np.pi)
    else:
        x = a + (b - a) * (1 - c) / 2
        g = ratio * (b - a) ** 2 * np.sin(t) ** 2 / (8 * np.pi * x)
    F = integrate.cumulative_simpson(g, x=t, initial=0.0)
    return a, b, interpolate.CubicSpline(t, F / F[-1])


def mp_cdf(x, ratio: float, users: int = 1):
    """Distribution function matching :func:`mp_density`."""
    a, b, spline = _mp_cdf_table(float(ratio), int(users))
    x = np.asarray(x, dtype=float)
    t = np.arccos(np.clip(1 - 2 * (x - a) / (b - a), -1.0, 1.0))
    out = np.clip(spline(t), 0.0, 1.0)
    out = np.where(x <= a, 0.0, np.where(x >= b, 1.0, out))
    return out[()] if out.ndim == 0 else out


def mp_mean(ratio: float, users: int = 1) -> float:
    return (ratio - users + 1) / ratio


# -- Phi ----------------------------------------------------------------------

def phi(x):
    """Per-antenna capacity under the quarter-circle eigenvalue law at
    effective SNR ``x``.

    Evaluated in the cancellation-free form
    ``2 log2((1 + s) / 2) - 4 x log2(e) / (1 + s)**2`` with ``s = sqrt(1+4x)``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("Phi is defined for positive arguments only")
    s = np.sqrt(1 + 4 * x)
    out = 2 * np.log2((1 + s) / 2) - 4 * x * LOG2E / (1 + s) ** 2
    return out[()] if out.ndim == 0 else out


# -- single user --------------------------------------------------------------

def _su_snr(params: SystemParams) -> float:
    return params.snr / params.K


def _warn_small_L(L):
    if L < 10:
        warnings.warn(f"L={L} is outside the large-L regime; asymptotic values are loose",
                      stacklevel=3)


def ca_su_rate(rho: float, L: float, params: SystemParams) -> AsymptoticValue:
    v = np.log2(1 + L * _su_snr(params) * rho ** (-params.alpha))
    return AsymptoticValue(float(v), AsymptoticKind.APPROXIMATION, "ca_su_rate")


def ca_su_avg(L: float, params: SystemParams) -> AsymptoticValue:
    """Position average of :func:`ca_su_rate` (radius density ``2x``)."""
    _warn_small_L(L)
    c, a = L * _su_snr(params), params.alpha
    # log2(1 + c x^-a) = log2(x^a + c) - a log2 x, finite integrand at 0
    v = _quad(lambda x: 2 * x * (np.log2(x ** a + c) - a * np.log2(x)), 0, 1)
    return AsymptoticValue(v, AsymptoticKind.EXACT_ASYMPTOTIC, "ca_su_avg")


def ca_su_avg_approx(L: float, params: SystemParams) -> AsymptoticValue:
    v = np.log2(_su_snr(params)) + params.alpha / np.log(4) + np.log2(L)
    return AsymptoticValue(float(v), AsymptoticKind.APPROXIMATION, "ca_su_avg_approx")


def da_su_lb(d_min: float, params: SystemParams) -> AsymptoticValue:
    v = phi(_su_snr(params) * d_min ** (-params.alpha))
    return AsymptoticValue(float(v), AsymptoticKind.LOWER_BOUND, "da_su_lb")


def da_su_lb_approx(d_min: float, params: SystemParams) -> AsymptoticValue:
    v = np.log2(_su_snr(params) * d_min ** (-params.alpha)) - LOG2E
    return AsymptoticValue(float(v), AsymptoticKind.APPROXIMATION, "da_su_lb_approx")


@functools.lru_cache(maxsize=256)
def expected_log_min_distance(n_clusters: int) -> float:
    """``E[ln d_min]`` for a uniform user and ``n_clusters`` uniform clusters,
    where ``d_min`` is the nearest-cluster distance in the user's own cell.

    Uses ``E[ln d] = ln(1 + y) - int (1 - S(e^u)) du`` with ``S`` the
    survival function of ``d_min``; in ``u = ln x`` the integrand is a smooth
    step located near ``-ln(n) / 2``.
    """
    n = int(n_clusters)
    if n < 1:
        raise ValueError(f"number of clusters must be >= 1, got {n}")
    lo = np.log(1e-9 / np.sqrt(n))
    c = -0.5 * np.log(n)
    # below lo, 1 - S(x) = n x^2 to double precision
    tail = n * np.exp(2 * lo) / 2

    def inner(y):
        hi = np.log1p(y)
        cand = [c - 1.5, c, c + 1.5] + ([np.log1p(-y)] if y < 1 else [])
        pts = sorted(p for p in cand if lo < p < hi)
        step = lambda u: 1.0 - (1.0 - own_cell_distance_cdf(np.exp(u), y)) ** n
        return hi - _quad(step, lo, hi, points=pts or None, epsabs=1e-11, epsrel=1e-11) - tail

    return _quad(lambda y: 2 * y * inner(y), 0, 1, epsabs=1e-10, epsrel=1e-10)


def da_su_avg_lb(L: int, params: SystemParams) -> AsymptoticValue:
    """Position- and layout-averaged single-user lower bound with ``L``
    distributed clusters (large-SNR log form)."""
    _warn_small_L(L)
    e_log2 = expected_log_min_distance(int(L)) / np.log(2)
    v = -params.alpha * e_log2 + np.log2(_su_snr(params)) - LOG2E
    return AsymptoticValue(float(v), AsymptoticKind.LOWER_BOUND, "da_su_avg_lb")


# -- multi user, co-located ---------------------------------------------------

def ca_mu_rate(rho: float, theta: float, L: int, K: int, params: SystemParams) -> AsymptoticValue:
    p_int = intercell_power_ca(PolarPoint(rho, theta), params.alpha)
    sinr = (L - K + 1) / K * rho ** (-params.alpha) / (1 / params.snr + p_int)
    return AsymptoticValue(float(np.log2(1 + sinr)), AsymptoticKind.APPROXIMATION, "ca_mu_rate")


def _p_int_ca_grid(x, y, alpha):
    return np.sum((x * x + 4 - 4 * x * np.cos(y - NEIGHBOR_ANGLES)) ** (-alpha / 2))


def _disk_average(f) -> float:
    """Average of ``f(rho, theta)`` over the unit disk for functions with
    the six-fold symmetry of the neighbour-cell layout."""
    total = 0.0
    for lo, hi in ((0, np.pi / 6), (np.pi / 6, np.pi / 3)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            v, _ = integrate.dblquad(lambda r, t: r * f(r, t), lo, hi, 0, 1,
                                     epsabs=1e-9, epsrel=1e-9)
        total += v
    return 6 * total / np.pi


@functools.lru_cache(maxsize=64)
def psi_c(alpha: float) -> float:
    """Position-average constant of the co-located BD rate."""
    return alpha / np.log(4) - _disk_average(lambda r, t: np.log2(_p_int_ca_grid(r, t, alpha)))


def ca_mu_avg(L: int, K: int, params: SystemParams) -> AsymptoticValue:
    """Position average of :func:`ca_mu_rate` by 2-D quadrature."""
    a, c, n0 = params.alpha, (L - K + 1) / K, 1 / params.snr

    def rate(r, t):
        # log2(1 + c r^-a / q) = log2(r^a q + c) - log2(q) - a log2 r
        q = n0 + _p_int_ca_grid(r, t, a)
        return np.log2(r ** a * q + c) - np.log2(q) - a * np.log2(r) if r > 0 else 0.0

    return AsymptoticValue(_disk_average(rate), AsymptoticKind.EXACT_ASYMPTOTIC, "ca_mu_avg")


def ca_mu_avg_approx(L: int, K: int, params: SystemParams) -> AsymptoticValue:
    if L <= K:
        raise ValueError("the large-L approximation needs L > K")
    v = np.log2(L / K - 1) + psi_c(params.alpha)
    return AsymptoticValue(float(v), AsymptoticKind.APPROXIMATION, "ca_mu_avg_approx")


# -- multi user, distributed --------------------------------------------------

def da_mu_lb(d_min_tilde: float, p_int: float, K: int, params: SystemParams) -> AsymptoticValue:
    sinr = d_min_tilde ** (-params.alpha) / K / (1 / params.snr + p_int)
    return AsymptoticValue(float(phi(sinr)), AsymptoticKind.LOWER_BOUND, "da_mu_lb")


def da_mu_lb_approx(d_min_tilde: float, p_int: float, K: int, params: SystemParams,
                    high_snr: bool = True) -> AsymptoticValue:
    """Log form of :func:`da_mu_lb`; with ``high_snr`` the noise term is dropped."""
    denom = p_int if high_snr else 1 / params.snr + p_int
    v = np.log2(d_min_tilde ** (-params.alpha) / K / denom) - LOG2E
    return AsymptoticValue(float(v), AsymptoticKind.APPROXIMATION, "da_mu_lb_approx")


def neighbor_inverse_moment(D: float, alpha: float) -> float:
    """``E[d ** -alpha]`` for ``d`` the distance from a point at distance
    ``D > 1`` from a unit disk's centre to a uniform point of the disk,
    integrating the neighbour-cell distance density over its support."""
    if D <= 1:
        raise ValueError(f"the point must lie outside the disk, got D={D}")
    f = lambda u: np.exp(u * (2 - alpha)) * disk_distance_pdf(np.exp(u), D) * np.exp(-u)
    return _quad(f, np.log(D - 1), np.log(D + 1), epsabs=0, epsrel=1e-11)


@functools.lru_cache(maxsize=64)
def _inverse_moment_table(alpha: float):
    # log E vs log(D - 1) is smooth on (1, 3]; below the grid the power law
    # E ~ (D - 1)^(2 - alpha) is continued linearly in log-log.
    s = np.linspace(np.log(1e-9), np.log(2.0), 320)
    vals = np.log([neighbor_inverse_moment(1 + np.exp(si), alpha) for si in s])
    return interpolate.CubicSpline(s, vals), s[0], vals[0], 2 - alpha


def _inverse_moment_interp(D, alpha):
    spline, s0, v0, slope = _inverse_moment_table(float(alpha))
    s = np.log(np.asarray(D) - 1)
    return np.exp(np.where(s < s0, v0 + slope * (s - s0), spline(np.maximum(s, s0))))


def upsilon(alpha: float) -> float:
    """Mean ``d ** -alpha`` from the centre of cell 0 to a uniform point of
    one neighbour cell."""
    return neighbor_inverse_moment(2.0, alpha)


@functools.lru_cache(maxsize=64)
def psi_d(alpha: float) -> float:
    """Position-average interference constant of the distributed BD bound."""

    def log_mean_interference(r, t):
        D = np.sqrt(r * r + 4 - 4 * r * np.cos(t - NEIGHBOR_ANGLES))
        return np.log2(np.sum(_inverse_moment_interp(D, alpha)))

    return -_disk_average(log_mean_interference) - LOG2E


def da_mu_avg_lb(L: int, K: int, params: SystemParams) -> AsymptoticValue:
    """Average distributed BD lower bound (large-SNR form), using the
    nearest of the ``L - K + 1`` clusters left free by the other users."""
    _warn_small_L(L)
    n = int(L - K + 1)
    e_log2 = expected_log_min_distance(n) / np.log(2)
    v = -np.log2(K) - params.alpha * e_log2 + psi_d(params.alpha)
    return AsymptoticValue(float(v), AsymptoticKind.LOWER_BOUND, "da_mu_avg_lb")


# -- small cells --------------------------------------------------------------

def _center_min_pdf(x, L):
    return 2 * L * x * (1 - x * x) ** (L - 1)


def _center_points(L):
    return [p for p in (0.25 / np.sqrt(L), 1 / np.sqrt(L), 4 / np.sqrt(L)) if p < 1]


def sc_avg_lb(L: int, K: int, params: SystemParams) -> AsymptoticValue:
    """Small-cell lower bound for a centre user, large-L form."""
    a = params.alpha
    f = lambda x: phi((a - 2) / 2 * x ** -2 / K) * _center_min_pdf(x, L) if x > 0 else 0.0
    v = _quad(f, 0, 1, points=_center_points(L))
    return AsymptoticValue(v, AsymptoticKind.LOWER_BOUND, "sc_avg_lb")


def sc_avg_lb_exact(L: int, K: int, params: SystemParams) -> AsymptoticValue:
    """Small-cell lower bound for a centre user keeping the noise term,
    the mean neighbour-cell interference and the exact own-cell mean."""
    a = params.alpha
    floor = 1 / params.snr + 6 * upsilon(a)

    def f(x):
        if x <= 0 or x >= 1:
            return 0.0
        denom = x ** a * floor + 2 / (a - 2) * (x * x - x ** a) / (1 - x * x)
        return phi(1 / K / denom) * _center_min_pdf(x, L)

    v = _quad(f, 0, 1, points=_center_points(L))
    return AsymptoticValue(v, AsymptoticKind.LOWER_BOUND, "sc_avg_lb_exact")
