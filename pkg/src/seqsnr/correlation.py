# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
Chip-synchronous correlation kernels.

Users are indexed from 0, chips from 0.  With that convention the aperiodic correlation is

    C_{i,k}(l) = sum_{n=0}^{N-l-1} conj(s_i[n+l]) s_k[n]     0 <= l <= N-1
    C_{i,k}(l) = sum_{n=0}^{N+l-1} conj(s_i[n]) s_k[n-l]     1-N <= l < 0
    C_{i,k}(l) = 0                                            otherwise

the periodic (even) correlation is theta(l) = C(l) + C(l-N), the odd one theta_hat(l) = C(l) - C(l-N),
and the quadratic form s_i^* B^(l)_{b_prev,b_cur} s_k equals b_prev * C(l-N) + b_cur * C(l).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from seqsnr.seqset import SequenceSet


@dataclass(frozen=True)
class BitPair:
    """The two adjacent data bits (b_{k,-1}, b_{k,0}) an asynchronous symbol straddles."""

    b_prev: int
    b_cur: int

    def __post_init__(self) -> None:
        if self.b_prev not in (-1, 1) or self.b_cur not in (-1, 1):
            errmsg = f"Bits must be -1 or +1, got ({self.b_prev}, {self.b_cur})"
            raise ValueError(errmsg)


ALL_BIT_PAIRS: tuple[BitPair, ...] = (BitPair(1, 1), BitPair(-1, -1), BitPair(-1, 1), BitPair(1, -1))


def _check_users(seq_set: SequenceSet, *users: int) -> None:
    for user in users:
        if not 0 <= user < seq_set.k_users:
            errmsg = f"User index {user} out of range for K={seq_set.k_users}"
            raise IndexError(errmsg)


def aperiodic_corr(seq_set: SequenceSet, i: int, k: int, lag: int) -> complex:
    """C_{i,k}(l); zero outside [1-N, N-1]."""
    _check_users(seq_set, i, k)
    n = seq_set.n
    s_i, s_k = seq_set[i], seq_set[k]
    if 0 <= lag <= n - 1:
        return complex(np.vdot(s_i[lag:], s_k[: n - lag]))
    if 1 - n <= lag < 0:
        return complex(np.vdot(s_i[: n + lag], s_k[-lag:]))
    return 0j


def aperiodic_all(seq_set: SequenceSet, i: int, k: int) -> np.ndarray:
    """C_{i,k}(l) for l = 1-N .. N-1; entry l + N - 1 holds lag l."""
    n = seq_set.n
    return np.array([aperiodic_corr(seq_set, i, k, lag) for lag in range(1 - n, n)], dtype=np.complex128)


def _check_lag(n: int, lag: int, upper: int) -> None:
    if not 0 <= lag <= upper:
        errmsg = f"Lag {lag} out of range [0, {upper}] for N={n}"
        raise ValueError(errmsg)


def periodic_corr(seq_set: SequenceSet, i: int, k: int, lag: int) -> complex:
    """theta_{i,k}(l) = C_{i,k}(l) + C_{i,k}(l-N), 0 <= l <= N-1."""
    _check_lag(seq_set.n, lag, seq_set.n - 1)
    return aperiodic_corr(seq_set, i, k, lag) + aperiodic_corr(seq_set, i, k, lag - seq_set.n)


def odd_corr(seq_set: SequenceSet, i: int, k: int, lag: int) -> complex:
    """theta_hat_{i,k}(l) = C_{i,k}(l) - C_{i,k}(l-N), 0 <= l <= N-1."""
    _check_lag(seq_set.n, lag, seq_set.n - 1)
    return aperiodic_corr(seq_set, i, k, lag) - aperiodic_corr(seq_set, i, k, lag - seq_set.n)


def quad_form(seq_set: SequenceSet, i: int, k: int, lag: int, bits: BitPair) -> complex:
    """s_i^* B^(l)_{b_prev,b_cur} s_k from the two boundary sums, 0 <= l <= N.

    The top-right identity block of B^(l) is l x l, the bottom-left one (N-l) x (N-l); at l = N the
    whole matrix is the top-right block.
    """
    _check_users(seq_set, i, k)
    n = seq_set.n
    _check_lag(n, lag, n)
    s_i, s_k = seq_set[i], seq_set[k]
    wrapped = np.vdot(s_i[:lag], s_k[n - lag :])  # b_prev * E_l block, C(l - N)
    shifted = np.vdot(s_i[lag:], s_k[: n - lag])  # b_cur * E_{N-l} block, C(l)
    return complex(bits.b_prev * wrapped + bits.b_cur * shifted)


def b_matrix(n: int, lag: int, bits: BitPair) -> np.ndarray:
    """Dense B^(l)_{b_prev,b_cur}; for checks at small N only."""
    _check_lag(n, lag, n)
    mat = np.zeros((n, n), dtype=np.complex128)
    mat[:lag, n - lag :] = bits.b_prev * np.eye(lag)
    mat[lag:, : n - lag] = bits.b_cur * np.eye(n - lag)
    return mat


@dataclass(frozen=True)
class CorrelationProfile:
    """All correlations of one user pair."""

    pair: tuple[int, int]
    aperiodic: dict[int, complex]
    periodic: np.ndarray
    odd: np.ndarray

    @property
    def n(self) -> int:
        return int(self.periodic.size)


def correlation_profile(seq_set: SequenceSet, i: int, k: int) -> CorrelationProfile:
    n = seq_set.n
    aperiodic = {lag: aperiodic_corr(seq_set, i, k, lag) for lag in range(1 - n, n)}
    periodic = np.array([aperiodic[lag] + aperiodic.get(lag - n, 0j) for lag in range(n)])
    odd = np.array([aperiodic[lag] - aperiodic.get(lag - n, 0j) for lag in range(n)])
    return CorrelationProfile(pair=(i, k), aperiodic=aperiodic, periodic=periodic, odd=odd)


def profile_to_csv(profile: CorrelationProfile) -> str:
    """CSV with one row per lag l in 1-N .. N-1; theta columns are empty for negative lags."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["l", "re_c", "im_c", "re_theta", "im_theta", "re_theta_hat", "im_theta_hat"])
    for lag, value in sorted(profile.aperiodic.items()):
        row = [str(lag), format_float(value.real), format_float(value.imag)]
        if lag >= 0:
            theta, theta_hat = profile.periodic[lag], profile.odd[lag]
            row += [
                format_float(theta.real),
                format_float(theta.imag),
                format_float(theta_hat.real),
                format_float(theta_hat.imag),
            ]
        else:
            row += ["", "", "", ""]
        writer.writerow(row)
    return out.getvalue()


def format_float(value: float) -> str:
    """17 significant digits, '.' decimal point, independent of locale."""
    return format(float(value), ".17g")
