import numpy as np
import pytest

from dasmimo.channel import (
    CoincidentPositionError, ca_large_scale_vector, cluster_distances, compose_channel,
    large_scale_fading, sample_small_scale,
)
from dasmimo.geometry import LayoutRealization, PolarPoint, sample_layout
from dasmimo.params import LayoutKind, SystemParams


def test_large_scale_unit_distance():
    assert large_scale_fading(PolarPoint(0.0), PolarPoint(1.0, 0.3), 4.0) == pytest.approx(1.0)
    assert large_scale_fading([0, 0], [2, 0], 4.0) == pytest.approx(0.25)


def test_coincident_raises():
    with pytest.raises(CoincidentPositionError):
        large_scale_fading(PolarPoint(0.5, 1.0), PolarPoint(0.5, 1.0), 4.0)
    with pytest.raises(CoincidentPositionError):
        ca_large_scale_vector(PolarPoint(0.0), 4.0)


def test_ca_vector_symmetry():
    v = ca_large_scale_vector(PolarPoint(0.5, np.pi / 6), 4.0)
    assert v[0] == pytest.approx(0.5 ** -2)
    # neighbours 1 and 2 sit at +-pi/6 around theta = pi/6 ... check the mirror pair 1 <-> 6
    w = ca_large_scale_vector(PolarPoint(0.5, -np.pi / 6 + 2 * np.pi), 4.0)
    np.testing.assert_allclose(np.sort(v[1:]), np.sort(w[1:]), rtol=1e-12)
    assert ca_large_scale_vector(PolarPoint(0.3), 4.0, M=5).shape == (7, 5)


def test_small_scale_moments(rng):
    H = sample_small_scale(4, 8, rng, 20_000)
    assert H.shape == (20_000, 4, 8)
    assert np.mean(np.abs(H) ** 2) == pytest.approx(1.0, rel=0.01)
    assert abs(np.mean(H ** 2)) < 0.01


def test_compose_channel_da(rng):
    p = SystemParams(L=6, N=2)
    layout = sample_layout(LayoutKind.DA, p, rng)
    user = PolarPoint(0.4, 2.0)
    ch = compose_channel(layout, user, p, rng)
    d = cluster_distances(layout, user)[0]
    np.testing.assert_allclose(ch.gamma, np.repeat(d ** -2.0, 2))
    assert np.linalg.norm(ch.beta) == pytest.approx(1.0)
    np.testing.assert_allclose(ch.G, ch.gamma * ch.H)
    np.testing.assert_allclose(ch.G_tilde * np.sqrt(ch.gain), ch.G)


def test_compose_channel_ca(rng):
    p = SystemParams(L=4, N=2)
    ch = compose_channel(sample_layout("ca", p), PolarPoint(0.5, 0.0), p, rng)
    np.testing.assert_allclose(ch.beta, 1 / np.sqrt(p.M))
    assert ch.gain == pytest.approx(p.M * 0.5 ** -4)


def test_compose_rejects_wrong_antenna_count(rng):
    layout = sample_layout(LayoutKind.DA, SystemParams(L=3, N=2), rng)
    with pytest.raises(ValueError):
        compose_channel(layout, PolarPoint(0.1), SystemParams(L=4, N=2), rng)


def test_user_on_cluster_raises(rng):
    p = SystemParams(L=2, N=1)
    clusters = np.zeros((7, 2, 2))
    clusters[0, 0] = [0.3, 0.0]
    layout = LayoutRealization(LayoutKind.DA, clusters, 1)
    with pytest.raises(CoincidentPositionError):
        compose_channel(layout, PolarPoint(0.3, 0.0), p, rng)
