import warnings

import numpy as np
import pytest
from scipy import integrate

from dasmimo import asymptotics as asy
from dasmimo.geometry import disk_distance_pdf, sample_disk
from dasmimo.params import SystemParams

P = SystemParams(alpha=4.0, snr=10.0)


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield


# -- Marchenko-Pastur and Phi -------------------------------------------------

@pytest.mark.parametrize("ratio,users", [(1, 1), (4, 1), (16, 1), (8, 3)])
def test_mp_density_normalization_and_mean(ratio, users):
    lo, hi = [e / ratio for e in asy._mp_edges(ratio, users)]
    f = lambda x: asy.mp_density(x, ratio, users)
    mass = integrate.quad(f, lo, hi, limit=200)[0]
    mean = integrate.quad(lambda x: x * f(x), lo, hi, limit=200)[0]
    assert mass == pytest.approx(1.0, abs=1e-6)
    assert mean == pytest.approx(asy.mp_mean(ratio, users), abs=1e-6)


def test_mp_invalid_ratio():
    with pytest.raises(ValueError):
        asy.mp_density(1.0, 2, 3)


def test_phi_matches_integral():
    # Phi(x) = E[log2(1 + x * lambda)] under the quarter-circle law (ratio 1)
    for x in (0.1, 1.0, 10.0, 100.0):
        v = integrate.quad(lambda t: np.log2(1 + x * t) * asy.mp_density(t, 1), 0, 4,
                           limit=200)[0]
        assert asy.phi(x) == pytest.approx(v, rel=1e-7)


def test_phi_small_argument_stable():
    # Phi(x) ~ x log2(e) for small x
    assert asy.phi(1e-10) == pytest.approx(1e-10 * np.log2(np.e), rel=1e-5)
    with pytest.raises(ValueError):
        asy.phi(0.0)


# -- single user ----------------------------------------------------------------

def test_ca_su_avg_quadrature_vs_approx():
    L = 1024
    assert asy.ca_su_avg(L, P).value == pytest.approx(asy.ca_su_avg_approx(L, P).value, abs=0.01)


def test_ca_su_avg_by_monte_carlo(rng):
    L = 50
    rho = np.linalg.norm(sample_disk(rng, 400_000), axis=-1)
    mc = np.mean(np.log2(1 + L * 10 * rho ** -4.0))
    assert asy.ca_su_avg(L, P).value == pytest.approx(mc, abs=0.01)


def test_da_su_lb_forms():
    d = 0.05
    exact, approx = asy.da_su_lb(d, P), asy.da_su_lb_approx(d, P)
    assert exact.kind is asy.AsymptoticKind.LOWER_BOUND
    # the log form drops terms of order log2(e) / sqrt(snr)
    x = 10 * d ** -4.0
    assert exact.value == pytest.approx(approx.value, abs=2 * np.log2(np.e) / np.sqrt(x))


def test_expected_log_min_distance_single_cluster():
    # two independent uniform points in the unit disk: E[ln d] = -1/4
    assert asy.expected_log_min_distance(1) == pytest.approx(-0.25, abs=1e-10)


def test_expected_log_min_distance_by_monte_carlo(rng):
    n = 8
    u = sample_disk(rng, 200_000)
    c = sample_disk(rng, (200_000, n))
    d = np.min(np.linalg.norm(c - u[:, None], axis=-1), axis=1)
    mc = np.log(d)
    assert asy.expected_log_min_distance(n) == pytest.approx(mc.mean(), abs=4 * mc.std() / 447)


def test_da_su_avg_lb_slope():
    a = asy.da_su_avg_lb(512, P).value
    b = asy.da_su_avg_lb(1024, P).value
    assert b - a == pytest.approx(2.0, abs=0.05)


# -- multi user -------------------------------------------------------------------

def test_psi_c_value():
    assert 3.49 <= asy.psi_c(4.0) <= 3.59


def test_psi_c_by_monte_carlo(rng):
    u = sample_disk(rng, 400_000)
    r, t = np.hypot(*u.T), np.arctan2(u[:, 1], u[:, 0])
    p_int = np.sum((r[:, None] ** 2 + 4 - 4 * r[:, None] * np.cos(t[:, None] - asy.NEIGHBOR_ANGLES))
                   ** -2.0, axis=1)
    mc = 4 / np.log(4) - np.mean(np.log2(p_int))
    assert asy.psi_c(4.0) == pytest.approx(mc, abs=0.005)


def test_ca_mu_avg_approaches_approx():
    L, K = 2000, 100
    assert asy.ca_mu_avg(L, K, SystemParams(K=K, L=L, snr=1e6)).value == \
        pytest.approx(asy.ca_mu_avg_approx(L, K, P).value, abs=0.1)


def test_inverse_moment_closed_form():
    # E[d^-4] from a point at distance D outside the unit disk is 1/(D^2 - 1)^2
    for D in (1.01, 1.3, 2.0, 2.9):
        assert asy.neighbor_inverse_moment(D, 4.0) == pytest.approx(1 / (D * D - 1) ** 2,
                                                                    rel=1e-9)


def test_inverse_moment_interpolation():
    D = np.array([1 + 1e-12, 1.0001, 1.2, 2.5])
    approx = asy._inverse_moment_interp(D, 4.0)
    np.testing.assert_allclose(approx, 1 / (D * D - 1) ** 2, rtol=1e-6)


def test_upsilon_four():
    assert asy.upsilon(4.0) == pytest.approx(1 / 9, abs=1e-10)
    v = integrate.quad(lambda x: x ** -4.0 * disk_distance_pdf(x, 2.0), 1, 3)[0]
    assert asy.upsilon(4.0) == pytest.approx(v, rel=1e-8)


def test_psi_d_independent_route(rng):
    # Closed-form inner moment and Monte Carlo over positions.
    u = sample_disk(rng, 400_000)
    r, t = np.hypot(*u.T), np.arctan2(u[:, 1], u[:, 0])
    D2 = r[:, None] ** 2 + 4 - 4 * r[:, None] * np.cos(t[:, None] - asy.NEIGHBOR_ANGLES)
    x = -np.log2(np.sum(1 / (D2 - 1) ** 2, axis=1))
    mc = x.mean() - np.log2(np.e)
    assert asy.psi_d(4.0) == pytest.approx(mc, abs=4 * x.std() / np.sqrt(x.size))


def test_da_mu_avg_lb_slope():
    a = asy.da_mu_avg_lb(256, 128, P).value
    b = asy.da_mu_avg_lb(512, 256, P).value
    assert b - a == pytest.approx(1.0, abs=0.05)


def test_da_mu_lb_forms():
    v = asy.da_mu_lb(0.02, 0.5, 4, P)
    w = asy.da_mu_lb_approx(0.02, 0.5, 4, P, high_snr=False)
    x = 0.02 ** -4.0 / 4 / (0.1 + 0.5)
    assert v.value == pytest.approx(w.value, abs=2 * np.log2(np.e) / np.sqrt(x))


# -- small cells ------------------------------------------------------------------

def test_sc_flat_at_fixed_ratio():
    a = asy.sc_avg_lb(100, 20, P).value
    b = asy.sc_avg_lb(1000, 200, P).value
    assert abs(a - b) < 0.02


def test_sc_large_L_form_matches_exact():
    L, K = 1000, 200
    assert asy.sc_avg_lb(L, K, P).value == pytest.approx(
        asy.sc_avg_lb_exact(L, K, SystemParams(snr=1e9)).value, abs=0.01)


def test_small_L_warns():
    with pytest.warns(UserWarning):
        warnings.simplefilter("always")
        asy.ca_su_avg(4, P)


@pytest.mark.parametrize("ratio,users", [(1, 1), (4, 1), (16, 1), (8, 3)])
def test_mp_cdf_matches_quadrature(ratio, users):
    lo, hi = [e / ratio for e in asy._mp_edges(ratio, users)]
    xs = np.linspace(lo, hi, 13)[1:-1]
    ref = [integrate.quad(lambda u: asy.mp_density(u, ratio, users), lo, x, limit=200)[0]
           for x in xs]
    np.testing.assert_allclose(asy.mp_cdf(xs, ratio, users), ref, atol=1e-9)
    assert asy.mp_cdf(lo - 1e-3, ratio, users) == 0.0 and asy.mp_cdf(hi + 1, ratio, users) == 1.0
