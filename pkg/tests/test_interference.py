import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dasmimo.geometry import LayoutRealization, PolarPoint, sample_layout
from dasmimo.interference import (
    hill_tail_index, intercell_covariance, intercell_moment_mc, intercell_power,
    intercell_power_ca, intercell_power_da, sample_intercell_power_da,
)
from dasmimo.params import LayoutKind, SystemParams


def test_ca_centre_value():
    # six neighbours at distance 2: 6 / 16
    assert intercell_power_ca(PolarPoint(0.0, 0.0), 4.0) == 0.375


def test_ca_edge_value():
    assert 1.27 <= intercell_power_ca(PolarPoint(1.0, np.pi / 6), 4.0) <= 1.28


@settings(max_examples=50, deadline=None)
@given(rho=st.floats(0, 1), theta=st.floats(0, 2 * np.pi))
def test_ca_sixfold_periodic(rho, theta):
    a = intercell_power_ca(PolarPoint(rho, theta), 4.0)
    b = intercell_power_ca(PolarPoint(rho, (theta + np.pi / 3) % (2 * np.pi)), 4.0)
    assert a == pytest.approx(b, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(theta=st.floats(0, 2 * np.pi), r1=st.floats(0, 1), r2=st.floats(0, 1))
def test_ca_increasing_in_radius(theta, r1, r2):
    lo, hi = sorted([r1, r2])
    assert intercell_power_ca(PolarPoint(lo, theta), 4.0) <= \
        intercell_power_ca(PolarPoint(hi, theta), 4.0) + 1e-12


def test_ca_extremes_on_edge():
    edge = [intercell_power_ca(PolarPoint(1.0, t), 4.0) for t in np.linspace(0, np.pi / 3, 61)]
    assert np.argmax(edge) == 30  # theta = pi/6 faces a neighbour centre
    assert np.argmin(edge) in (0, 60)


def test_da_matches_layout_sum(rng):
    p = SystemParams(L=5, N=2)
    layout = sample_layout(LayoutKind.DA, p, rng)
    user = PolarPoint(0.3, 1.0)
    d = np.linalg.norm(layout.clusters[1:] - user.xy, axis=-1)
    assert intercell_power_da(user, layout, 4.0) == pytest.approx(np.sum(d ** -4.0) / 5)
    assert intercell_power(user, layout, 4.0) == intercell_power_da(user, layout, 4.0)


def test_ca_dispatch_and_covariance():
    p = SystemParams(L=3, N=2, snr=4.0)
    layout = sample_layout("ca", p)
    user = PolarPoint(0.0)
    assert intercell_power(user, layout, 4.0) == 0.375
    np.testing.assert_allclose(intercell_covariance(user, layout, p), 1.5 * np.eye(2))


def test_ca_layout_as_da_gives_same_value():
    # A distributed layout whose clusters all sit at the cell centres
    # reproduces the co-located value.
    clusters = np.repeat(sample_layout("ca", SystemParams()).clusters, 3, axis=1)
    layout = LayoutRealization(LayoutKind.DA, clusters, 2)
    user = PolarPoint(0.6, 0.2)
    assert intercell_power_da(user, layout, 4.0) == pytest.approx(intercell_power_ca(user, 4.0))


def test_centre_mean_is_two_thirds(rng):
    x = sample_intercell_power_da(PolarPoint(0.0), 4.0, 3, 100_000, rng)
    assert x.mean() == pytest.approx(2 / 3, rel=0.02)


def test_sampler_chunking_is_seamless():
    a = sample_intercell_power_da(PolarPoint(0.5, 0.3), 4.0, 2, 1000, np.random.default_rng(3),
                                  chunk=10_000_000)
    b = sample_intercell_power_da(PolarPoint(0.5, 0.3), 4.0, 2, 1000, np.random.default_rng(3),
                                  chunk=60)
    assert a.shape == b.shape == (1000,)
    assert a.mean() == pytest.approx(b.mean(), rel=0.3)


def test_hill_estimator_on_pareto(rng):
    x = rng.pareto(1.5, 200_000) + 1
    assert hill_tail_index(x) == pytest.approx(1.5, rel=0.1)


def test_moment_diagnostics_centre_vs_edge(rng):
    p = SystemParams(L=2)
    centre = intercell_moment_mc(PolarPoint(0.0), 1, p, 50_000, rng)
    edge = intercell_moment_mc(PolarPoint(1.0, np.pi / 6), 1, p, 50_000, rng)
    assert centre.trials == 50_000
    assert centre.tail_index > 2
    assert edge.tail_index < 1


def test_moment_order_validated(rng):
    with pytest.raises(ValueError):
        intercell_moment_mc(PolarPoint(0.0), 0, SystemParams(), 10, rng)
