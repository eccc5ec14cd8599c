import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dasmimo.channel import ChannelRealization, compose_channel
from dasmimo.geometry import sample_layout, sample_user_position
from dasmimo.params import LayoutKind, SystemParams
from dasmimo.precoding import (
    InfeasibleConfigurationError, RankDeficientError, RankZeroChannelError, bd_effective_eigenvalues,
    bd_precoder, equal_power_rate, null_space_basis, precoded_rate, svd_precoder, waterfill,
    waterfill_batch,
)


def _channel(G_tilde, gain=1.0):
    M = G_tilde.shape[1]
    gamma = np.full(M, np.sqrt(gain / M))
    beta = gamma / np.linalg.norm(gamma)
    H = G_tilde / beta
    return ChannelRealization(gamma, beta, H, gamma * H, G_tilde)


def _crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


# -- water-filling -------------------------------------------------------------

def test_waterfill_symmetric():
    p, z = waterfill([1.0, 1.0], 2.0)
    np.testing.assert_allclose(p, [1.0, 1.0])
    assert z == pytest.approx(2.0)


def test_waterfill_cutoff_channel_inactive():
    p, z = waterfill([1.0, 0.5], 1.0)
    np.testing.assert_allclose(p, [1.0, 0.0], atol=1e-15)
    assert z == pytest.approx(2.0)


def test_waterfill_single_channel():
    p, _ = waterfill([0.37], 5.0)
    np.testing.assert_allclose(p, [5.0])


def test_waterfill_errors():
    with pytest.raises(RankZeroChannelError):
        waterfill([0.0, 0.0], 1.0)
    with pytest.raises(ValueError):
        waterfill([1.0], 0.0)


def _brute_force_level(eigs, budget, noise):
    # Bisection on the water level as an independent oracle.
    lo, hi = 0.0, budget + noise / eigs[eigs > 0].min() + 1
    for _ in range(200):
        mid = (lo + hi) / 2
        used = np.sum(np.maximum(mid - noise / np.where(eigs > 0, eigs, np.nan), 0)[eigs > 0])
        lo, hi = (mid, hi) if used < budget else (lo, mid)
    return (lo + hi) / 2


eig_lists = st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=8)


@settings(max_examples=100, deadline=None)
@given(eigs=eig_lists, budget=st.floats(1e-3, 1e3), noise=st.floats(0.1, 10))
def test_waterfill_kkt(eigs, budget, noise):
    eigs = np.array(eigs)
    p, z = waterfill(eigs, budget, noise)
    active = p > 0
    assert np.all(p >= 0)
    assert abs(p.sum() - budget) <= 1e-9 * budget
    assert np.all(z - noise / eigs[active] > 0)
    assert np.all(z <= noise / eigs[~active] * (1 + 1e-12))
    assert z == pytest.approx(_brute_force_level(eigs, budget, noise), rel=1e-8)


@settings(max_examples=60, deadline=None)
@given(eigs=eig_lists, budget=st.floats(1e-2, 1e2), extra=st.floats(0, 1e2))
def test_waterfill_monotone_in_budget(eigs, budget, extra):
    p1, _ = waterfill(eigs, budget)
    p2, _ = waterfill(eigs, budget + extra)
    assert np.all(p2 >= p1 - 1e-9 * (budget + extra))


def test_waterfill_batch_matches_scalar(rng):
    eigs = rng.exponential(size=(50, 5))
    budgets = rng.uniform(0.1, 10, 50)
    P, Z = waterfill_batch(eigs, budgets, 1.0)
    for k in range(50):
        p, z = waterfill(eigs[k], budgets[k])
        np.testing.assert_allclose(P[k], p, rtol=1e-12, atol=1e-14)
        assert Z[k] == pytest.approx(z)


# -- SVD ---------------------------------------------------------------------

def test_svd_diagonalizes(rng):
    ch = _channel(_crandn(rng, 3, 10) / np.sqrt(10))
    res = svd_precoder(ch, 4.0)
    # G_tilde W = U Sigma Omega, diagonal in the receive singular basis
    U = np.linalg.svd(ch.G_tilde)[0]
    E = U.conj().T @ ch.G_tilde @ res.W
    off = E - np.diag(np.diag(E))
    assert np.linalg.norm(off) < 1e-10
    assert res.radiated_fraction == pytest.approx(1.0, abs=1e-10)
    assert res.powers.sum() == pytest.approx(4.0 * ch.gain, rel=1e-9)


def test_svd_equal_split_for_orthonormal_rows():
    G = np.eye(2, 6) * np.sqrt(0.5)
    res = svd_precoder(_channel(G), 3.0)
    np.testing.assert_allclose(res.effective_eigs, [0.5, 0.5])
    np.testing.assert_allclose(res.powers, [1.5, 1.5])


def test_svd_mrt_for_single_antenna(rng):
    g = _crandn(rng, 1, 8)
    res = svd_precoder(_channel(g / np.linalg.norm(g)), 2.0)
    w = res.W[:, 0]
    mrt = g[0].conj() / np.linalg.norm(g)
    assert abs(abs(np.vdot(mrt, w)) - np.linalg.norm(w)) < 1e-12


def test_svd_beats_equal_power(rng):
    p = SystemParams(L=6, N=3, snr=5.0)
    for _ in range(20):
        layout = sample_layout(LayoutKind.DA, p, rng)
        ch = compose_channel(layout, sample_user_position(rng), p, rng)
        res = svd_precoder(ch, p.snr)
        wf = precoded_rate(ch.G_tilde, res.W, p.snr * ch.gain)
        eq = equal_power_rate(ch.G, p.snr)
        assert wf >= eq - 1e-12


# -- null space and BD ---------------------------------------------------------

def test_null_space_empty():
    np.testing.assert_allclose(null_space_basis(np.zeros((0, 5)), 5), np.eye(5))


def test_null_space_canonical():
    X = np.hstack([np.eye(2), np.zeros((2, 4))])
    B = null_space_basis(X)
    assert B.shape == (6, 4)
    assert np.linalg.norm(B[:2]) < 1e-12


def test_null_space_random(rng):
    X = _crandn(rng, 2, 8)
    B = null_space_basis(X)
    assert B.shape == (8, 6)
    assert np.linalg.norm(X @ B) < 1e-9 * np.linalg.norm(X)
    np.testing.assert_allclose(B.conj().T @ B, np.eye(6), atol=1e-10)


def test_null_space_rank_deficient(rng):
    x = _crandn(rng, 1, 6)
    with pytest.raises(RankDeficientError) as info:
        null_space_basis(np.vstack([x, 2 * x]))
    assert info.value.rank == 1
    with pytest.raises(InfeasibleConfigurationError):
        null_space_basis(_crandn(rng, 4, 4))


def _random_users(rng, K, L, N):
    p = SystemParams(K=K, L=L, N=N)
    layout = sample_layout(LayoutKind.DA, p, rng)
    return p, [compose_channel(layout, sample_user_position(rng), p, rng) for _ in range(K)]


def test_bd_nulling_two_users(rng):
    p, chans = _random_users(rng, 2, 2, 2)
    res = bd_precoder(chans, p.per_user_power)
    assert np.linalg.norm(chans[0].G_tilde @ res[1].W) < 1e-9
    assert np.linalg.norm(chans[1].G_tilde @ res[0].W) < 1e-9
    for r in res:
        assert r.effective_eigs.size == p.N


def test_bd_single_user_equals_svd(rng):
    p, chans = _random_users(rng, 1, 5, 2)
    bd = bd_precoder(chans, p.snr)[0]
    svd = svd_precoder(chans[0], p.snr)
    r_bd = precoded_rate(chans[0].G_tilde, bd.W, p.snr * chans[0].gain)
    r_svd = precoded_rate(chans[0].G_tilde, svd.W, p.snr * chans[0].gain)
    assert r_bd == pytest.approx(r_svd, abs=1e-9)


def test_bd_infeasible(rng):
    p, chans = _random_users(rng, 2, 2, 2)
    with pytest.raises(InfeasibleConfigurationError):
        bd_precoder(chans + chans[:1], 1.0)


def test_bd_fast_path_matches_explicit_basis(rng):
    p, chans = _random_users(rng, 3, 8, 2)
    res = bd_precoder(chans, p.per_user_power)
    others = np.vstack([chans[1].G_tilde, chans[2].G_tilde])
    fast = bd_effective_eigenvalues(chans[0].G_tilde, others)
    np.testing.assert_allclose(np.sort(fast), np.sort(res[0].effective_eigs), rtol=1e-9)
