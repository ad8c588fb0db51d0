# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
Brute-force ground truth for the variance closed forms.

Within chip l the squared correlation magnitude is exactly quadratic in the delay,

    Gamma(u) = |u * a + (T_c - u) * b|^2,   0 <= u <= T_c

where a and b are the quadratic-form correlations at lags l and l + 1.  The oracle enumerates the
four bit pairs, integrates every chip (closed form or Simpson quadrature) and applies the prefactors
of the worst-case channel.  Nothing here touches the spectral coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy import integrate

from seqsnr.correlation import ALL_BIT_PAIRS, BitPair, quad_form

if TYPE_CHECKING:
    from seqsnr.seqset import SequenceSet
    from seqsnr.snr_model import ChannelProfile


@dataclass(frozen=True)
class ChipIntegralInputs:
    a: complex
    b: complex
    t_c: float

    def __post_init__(self) -> None:
        if not self.t_c > 0:
            errmsg = f"Chip width must be positive, got {self.t_c}"
            raise ValueError(errmsg)


def chip_integral_closed(inp: ChipIntegralInputs) -> float:
    """(T_c^3 / 3) (|a|^2 + |b|^2 + Re[a conj(b)])."""
    a, b = inp.a, inp.b
    return inp.t_c**3 / 3 * (abs(a) ** 2 + abs(b) ** 2 + (a * b.conjugate()).real)


def chip_integral_numeric(inp: ChipIntegralInputs, panels: int = 2) -> float:
    """Composite Simpson rule over the chip; exact up to rounding since the integrand is quadratic."""
    if panels < 2 or panels % 2:
        errmsg = f"Simpson's rule needs an even panel count >= 2, got {panels}"
        raise ValueError(errmsg)
    u = np.linspace(0.0, inp.t_c, panels + 1)
    gamma = np.abs(u * inp.a + (inp.t_c - u) * inp.b) ** 2
    return float(integrate.simpson(gamma, x=u))


def chip_sum(seq_set: SequenceSet, i: int, k: int, bits: BitPair, t_c: float) -> float:
    """sum over l = 0..N-1 of the chip integral for one bit pair; lag N closes the last chip."""
    values = [quad_form(seq_set, i, k, lag, bits) for lag in range(seq_set.n + 1)]
    return sum(chip_integral_closed(ChipIntegralInputs(values[lag], values[lag + 1], t_c)) for lag in range(seq_set.n))


def bit_averaged_chip_sum(
    seq_set: SequenceSet, i: int, k: int, t_c: float, bit_pairs: tuple[BitPair, ...] = ALL_BIT_PAIRS
) -> float:
    """E_b{ sum_l integral of Gamma_{i,k} over chip l } with the bit pairs equally likely."""
    return sum(chip_sum(seq_set, i, k, bits, t_c) for bits in bit_pairs) / len(bit_pairs)


def variance_oracle(seq_set: SequenceSet, i: int, k: int, channel: ChannelProfile) -> float:
    """
    Brute-force variance contribution of the pair (i, k).

    For k != i: the interference term (P/(4T)) (1 + gamma_k^2 L_k) E_b{...}.
    For k == i: the fading bound (P/4) gamma_i^2 C_i M_i E_b{...}.
    """
    channel.covers(seq_set.k_users)
    t = channel.symbol_t
    averaged = bit_averaged_chip_sum(seq_set, i, k, t / seq_set.n)
    if k == i:
        entry = channel.users[i]
        return channel.power / 4 * entry.gamma**2 * entry.c_bound * entry.m_spread * averaged
    weight = 1 + channel.users[k].gamma ** 2 * channel.l_factor(k)
    return channel.power / (4 * t) * weight * averaged


def interference_oracle(seq_set: SequenceSet, i: int, channel: ChannelProfile) -> float:
    """Var{I_i} as the sum of the per-pair oracle values."""
    return sum(variance_oracle(seq_set, i, k, channel) for k in range(seq_set.k_users) if k != i)


def snr_oracle(seq_set: SequenceSet, i: int, channel: ChannelProfile) -> float:
    """(Var{I} + Var{F} + Var{N}) / (P T^2 / 2), raised to -1/2, all variances brute-forced."""
    t = channel.symbol_t
    noise = channel.noise_n0 * t / 4
    total = interference_oracle(seq_set, i, channel) + variance_oracle(seq_set, i, i, channel) + noise
    return float((total / (channel.power * t**2 / 2)) ** -0.5)


def direct_wave_bracket_oracle(seq_set: SequenceSet, i: int, channel: ChannelProfile) -> float:
    """The normalized interference sum with every Z_{i,k} = 1 and Z_{i,i} = 0, plus N0/(2PT)."""
    t = channel.symbol_t
    raw = sum(
        channel.power / (4 * t) * bit_averaged_chip_sum(seq_set, i, k, t / seq_set.n)
        for k in range(seq_set.k_users)
        if k != i
    )
    return raw / (channel.power * t**2 / 2) + channel.noise_term()
