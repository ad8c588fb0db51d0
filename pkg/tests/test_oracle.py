# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import pytest

from seqsnr.correlation import ALL_BIT_PAIRS
from seqsnr.oracle import (
    ChipIntegralInputs,
    bit_averaged_chip_sum,
    chip_integral_closed,
    chip_integral_numeric,
    direct_wave_bracket_oracle,
    interference_oracle,
    snr_oracle,
    variance_oracle,
)
from seqsnr.seqset import Family, GeneratorSpec, generate
from seqsnr.snr_model import (
    ChannelProfile,
    UserChannel,
    direct_wave_z,
    fading_variance_bound,
    interference_variance,
    pair_variance,
    snr_bracket,
    snr_lower_bound,
)


def channel_for(k_users: int) -> ChannelProfile:
    users = tuple(UserChannel(gamma=0.5 + 0.1 * k, c_bound=0.4 + 0.3 * k, m_spread=k + 1) for k in range(k_users))
    return ChannelProfile(power=1.7, symbol_t=0.9, noise_n0=0.05, users=users)


@pytest.mark.parametrize(
    ("a", "b", "t_c", "expected"),
    [
        (1, 1, 1.0, 1.0),
        (1, 0, 1.0, 1 / 3),
        (1, -1, 1.0, 1 / 3),
        (1 + 1j, 1 - 1j, 2.0, 32 / 3),
    ],
)
def test_chip_integral_values(a: complex, b: complex, t_c: float, expected: float) -> None:
    inp = ChipIntegralInputs(complex(a), complex(b), t_c)
    assert chip_integral_closed(inp) == pytest.approx(expected, rel=1e-15)
    assert chip_integral_numeric(inp) == pytest.approx(expected, rel=1e-12)
    assert chip_integral_numeric(inp, panels=10) == pytest.approx(expected, rel=1e-12)


def test_chip_integral_scales_as_cube() -> None:
    small = chip_integral_closed(ChipIntegralInputs(0.3 - 2j, 1.1 + 0.4j, 0.5))
    large = chip_integral_closed(ChipIntegralInputs(0.3 - 2j, 1.1 + 0.4j, 1.0))
    assert large == pytest.approx(8 * small, rel=1e-14)


def test_chip_integral_rejects() -> None:
    with pytest.raises(ValueError, match="even panel"):
        chip_integral_numeric(ChipIntegralInputs(1, 1, 1.0), panels=3)
    with pytest.raises(ValueError, match="positive"):
        ChipIntegralInputs(1, 1, 0.0)


def test_all_ones_bit_average() -> None:
    seq_set = generate(GeneratorSpec(Family.ALL_ONES, 4), 1)
    # quad_form is 4 at every lag for equal bits, 4 2 0 -2 -4 for a sign change; with T_c = 1
    # the chip sums are 64 and 64/3
    assert bit_averaged_chip_sum(seq_set, 0, 0, 1.0) == pytest.approx(128 / 3, rel=1e-12)
    assert bit_averaged_chip_sum(seq_set, 0, 0, 1.0, bit_pairs=ALL_BIT_PAIRS[:2]) == pytest.approx(64.0)
    assert bit_averaged_chip_sum(seq_set, 0, 0, 1.0, bit_pairs=ALL_BIT_PAIRS[2:]) == pytest.approx(64 / 3)


@pytest.mark.parametrize(("n", "k_users"), [(4, 2), (4, 3), (8, 2), (8, 3), (16, 2), (16, 3)])
def test_closed_forms_match_oracle(n: int, k_users: int) -> None:
    seq_set = generate(GeneratorSpec(Family.RANDOM_PHASE, n, seed=100 + n + k_users), k_users)
    channel = channel_for(k_users)
    for i in range(k_users):
        for k in range(k_users):
            assert variance_oracle(seq_set, i, k, channel) == pytest.approx(
                pair_variance(seq_set, i, k, channel), rel=1e-9
            )
        assert interference_oracle(seq_set, i, channel) == pytest.approx(
            interference_variance(seq_set, i, channel), rel=1e-9
        )
        assert variance_oracle(seq_set, i, i, channel) == pytest.approx(
            fading_variance_bound(seq_set, i, channel), rel=1e-9
        )
        assert snr_oracle(seq_set, i, channel) == pytest.approx(snr_lower_bound(seq_set, i, channel), rel=1e-9)


def test_binary_and_zadoff_chu_sets() -> None:
    channel = channel_for(3)
    for spec in (GeneratorSpec(Family.RANDOM_BINARY, 7, seed=3), GeneratorSpec(Family.ZADOFF_CHU, 7, root=2)):
        seq_set = generate(spec, 3)
        for i in range(3):
            assert snr_oracle(seq_set, i, channel) == pytest.approx(snr_lower_bound(seq_set, i, channel), rel=1e-9)


def test_direct_wave_reduction() -> None:
    seq_set = generate(GeneratorSpec(Family.RANDOM_PHASE, 8, seed=77), 3)
    channel = channel_for(3)
    for i in range(3):
        closed = snr_bracket(seq_set, i, channel, z=direct_wave_z(i, 3))
        assert direct_wave_bracket_oracle(seq_set, i, channel) == pytest.approx(closed, rel=1e-9)


@pytest.mark.parametrize("n", [4, 8, 16, 32])
@pytest.mark.parametrize("k_users", [2, 3, 4])
def test_oracle_equivalence_seeded(n: int, k_users: int) -> None:
    channel = channel_for(k_users)
    for seed in range(20):
        seq_set = generate(GeneratorSpec(Family.RANDOM_PHASE, n, seed=seed), k_users)
        for i in range(k_users):
            for k in range(k_users):
                closed = pair_variance(seq_set, i, k, channel)
                assert abs(variance_oracle(seq_set, i, k, channel) - closed) <= 1e-9 * closed
