# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest

from seqsnr.mean_square import msq_direct, msq_spectral, msq_theta, sandwich_bounds
from seqsnr.seqset import Family, GeneratorSpec, SequenceSet, generate
from seqsnr.snr_model import ChannelProfile, UserChannel, snr_lower_bound
from seqsnr.spectral import spectral_set, to_spectral
from seqsnr.verify import random_channel


def channel_for(k_users: int, noise_n0: float = 0.3) -> ChannelProfile:
    users = tuple(UserChannel(gamma=0.2 * (k + 1), c_bound=0.8, m_spread=2) for k in range(k_users))
    return ChannelProfile(power=1.0, symbol_t=1.0, noise_n0=noise_n0, users=users)


def test_all_ones_r_ac() -> None:
    seq_set = generate(GeneratorSpec(Family.ALL_ONES, 4), 1)
    for indices in (msq_direct(seq_set), msq_theta(seq_set), msq_spectral(spectral_set(seq_set))):
        assert indices.r_ac == pytest.approx(1.75, abs=1e-12)
        assert indices.r_cc is None
        assert indices.r_cc_per_user is None


def test_identical_users_r_cc() -> None:
    seq_set = generate(GeneratorSpec(Family.ALL_ONES, 4), 2)
    for indices in (msq_direct(seq_set), msq_theta(seq_set), msq_spectral(spectral_set(seq_set))):
        assert indices.r_cc == pytest.approx(2.75, abs=1e-12)
        assert indices.require_r_cc() == pytest.approx((2.75, 2.75), abs=1e-12)


def test_require_r_cc_single_user() -> None:
    indices = msq_direct(generate(GeneratorSpec(Family.ALL_ONES, 4), 1))
    with pytest.raises(ValueError, match="single user"):
        indices.require_r_cc()


@pytest.mark.parametrize(("n", "k_users", "seed"), [(4, 2, 1), (8, 3, 2), (13, 4, 3), (16, 2, 4)])
def test_three_ways_agree(n: int, k_users: int, seed: int) -> None:
    seq_set = generate(GeneratorSpec(Family.RANDOM_PHASE, n, seed=seed), k_users)
    direct, theta, spectral = msq_direct(seq_set), msq_theta(seq_set), msq_spectral(spectral_set(seq_set))
    assert np.allclose(direct.r_ac_per_user, theta.r_ac_per_user, rtol=0, atol=1e-9)
    assert np.allclose(direct.r_ac_per_user, spectral.r_ac_per_user, rtol=0, atol=1e-9)
    assert np.allclose(direct.require_r_cc(), theta.require_r_cc(), rtol=0, atol=1e-9)
    assert np.allclose(direct.require_r_cc(), spectral.require_r_cc(), rtol=0, atol=1e-9)


def test_zadoff_chu_beats_all_ones() -> None:
    zc = generate(GeneratorSpec(Family.ZADOFF_CHU, 11, root=1), 1)
    ones = generate(GeneratorSpec(Family.ALL_ONES, 11), 1)
    assert msq_direct(zc).r_ac < msq_direct(ones).r_ac


def test_msq_spectral_rejects_off_sphere() -> None:
    coeffs = to_spectral(np.ones(4))
    scaled = replace(coeffs, alpha=coeffs.alpha * 2)
    with pytest.raises(ValueError, match="User 0"):
        msq_spectral([scaled])


@pytest.mark.parametrize(("n", "k_users", "seed"), [(4, 1, 5), (8, 2, 6), (8, 3, 7), (16, 4, 8)])
def test_sandwich_contains_bound(n: int, k_users: int, seed: int) -> None:
    seq_set = generate(GeneratorSpec(Family.RANDOM_PHASE, n, seed=seed), k_users)
    channel = channel_for(k_users)
    for i in range(k_users):
        snr = snr_lower_bound(seq_set, i, channel)
        lower, upper = sandwich_bounds(seq_set, i, channel)
        assert lower <= snr * (1 + 1e-12)
        assert snr <= upper * (1 + 1e-12)


def test_sandwich_noise_only_collapses() -> None:
    seq_set: SequenceSet = generate(GeneratorSpec(Family.ALL_ONES, 4), 1)
    channel = ChannelProfile(power=2.0, symbol_t=0.5, noise_n0=0.4, users=(UserChannel(0.0, 1.0, 1),))
    expected = (0.4 / (2 * 2.0 * 0.5)) ** -0.5
    lower, upper = sandwich_bounds(seq_set, 0, channel)
    assert lower == pytest.approx(expected, rel=1e-15)
    assert upper == pytest.approx(expected, rel=1e-15)


def test_sandwich_zero_bracket() -> None:
    seq_set = generate(GeneratorSpec(Family.ALL_ONES, 4), 1)
    channel = ChannelProfile(power=1.0, symbol_t=1.0, noise_n0=0.0, users=(UserChannel(0.0, 1.0, 1),))
    with pytest.raises(ValueError, match="zero"):
        sandwich_bounds(seq_set, 0, channel)


def test_three_ways_agree_seeded() -> None:
    for seed in range(100):
        n = (4, 8, 16)[seed % 3]
        seq_set = generate(GeneratorSpec(Family.RANDOM_PHASE, n, seed=1000 + seed), 2 + seed % 3)
        direct, theta, spectral = msq_direct(seq_set), msq_theta(seq_set), msq_spectral(spectral_set(seq_set))
        for other in (theta, spectral):
            assert np.allclose(direct.r_ac_per_user, other.r_ac_per_user, rtol=0, atol=1e-9)
            assert np.allclose(direct.require_r_cc(), other.require_r_cc(), rtol=0, atol=1e-9)


def test_sandwich_contains_bound_seeded() -> None:
    rng = np.random.default_rng(2024)
    for seed in range(100):
        k_users = 1 + seed % 4
        seq_set = generate(GeneratorSpec(Family.RANDOM_PHASE, 8, seed=seed), k_users)
        channel = random_channel(rng, k_users)
        for i in range(k_users):
            snr = snr_lower_bound(seq_set, i, channel)
            lower, upper = sandwich_bounds(seq_set, i, channel)
            assert lower <= snr * (1 + 1e-12)
            assert snr <= upper * (1 + 1e-12)
