# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
Mean-square auto- and crosscorrelation indices, computed three ways:

* from the aperiodic correlation over all lags (msq_direct),
* from the periodic and odd correlations over l = 0..N-1 (msq_theta),
* from the spectral coefficients (msq_spectral).

R_CC is undefined for a single user and is reported as None.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from seqsnr.correlation import aperiodic_all, correlation_profile
from seqsnr.snr_model import ChannelProfile, z_factors
from seqsnr.spectral import SpectralCoefficients, spectral_set

if TYPE_CHECKING:
    from seqsnr.seqset import SequenceSet


@dataclass(frozen=True)
class MsqIndices:
    r_cc_per_user: tuple[float, ...] | None
    r_ac_per_user: tuple[float, ...]
    r_cc: float | None
    r_ac: float

    def require_r_cc(self) -> tuple[float, ...]:
        if self.r_cc_per_user is None:
            errmsg = "R_CC is undefined for a single user"
            raise ValueError(errmsg)
        return self.r_cc_per_user


def _indices(r_ac: list[float], r_cc: list[float] | None) -> MsqIndices:
    return MsqIndices(
        r_cc_per_user=None if r_cc is None else tuple(r_cc),
        r_ac_per_user=tuple(r_ac),
        r_cc=None if r_cc is None else float(np.mean(r_cc)),
        r_ac=float(np.mean(r_ac)),
    )


def msq_direct(seq_set: SequenceSet) -> MsqIndices:
    n, k_users = seq_set.n, seq_set.k_users
    r_ac: list[float] = []
    r_cc: list[float] | None = [] if k_users > 1 else None
    for i in range(k_users):
        auto = np.abs(aperiodic_all(seq_set, i, i)) ** 2
        # entry N - 1 is lag 0
        r_ac.append(float((np.sum(auto) - auto[n - 1]) / n**2))
        if r_cc is not None:
            cross = sum(float(np.sum(np.abs(aperiodic_all(seq_set, i, k)) ** 2)) for k in range(k_users) if k != i)
            r_cc.append(cross / ((k_users - 1) * n**2))
    return _indices(r_ac, r_cc)


def msq_theta(seq_set: SequenceSet) -> MsqIndices:
    n, k_users = seq_set.n, seq_set.k_users
    r_ac: list[float] = []
    r_cc: list[float] | None = [] if k_users > 1 else None
    for i in range(k_users):
        auto = correlation_profile(seq_set, i, i)
        r_ac.append(float(np.sum(np.abs(auto.periodic[1:]) ** 2 + np.abs(auto.odd[1:]) ** 2) / (2 * n**2)))
        if r_cc is not None:
            cross = 0.0
            for k in range(k_users):
                if k != i:
                    profile = correlation_profile(seq_set, i, k)
                    cross += float(np.sum(np.abs(profile.periodic) ** 2 + np.abs(profile.odd) ** 2))
            r_cc.append(cross / (2 * (k_users - 1) * n**2))
    return _indices(r_ac, r_cc)


def msq_spectral(coeffs: list[SpectralCoefficients], rtol: float = 1e-6) -> MsqIndices:
    """R_AC^(i) = 1/(2N) sum_m (|alpha|^4 + |beta|^4) - 1 and the matching R_CC^(i)."""
    k_users = len(coeffs)
    n = coeffs[0].n
    for user, c in enumerate(coeffs):
        for name, vec in (("alpha", c.alpha), ("beta", c.beta)):
            norm = float(np.vdot(vec, vec).real)
            if abs(norm - n) > rtol * n:
                errmsg = f"User {user}: ||{name}||^2 = {norm!r} is off the radius-sqrt(N) hypersphere"
                raise ValueError(errmsg)

    alpha_sq = [np.abs(c.alpha) ** 2 for c in coeffs]
    beta_sq = [np.abs(c.beta) ** 2 for c in coeffs]
    r_ac = [float(np.sum(alpha_sq[i] ** 2 + beta_sq[i] ** 2)) / (2 * n) - 1 for i in range(k_users)]
    r_cc: list[float] | None = None
    if k_users > 1:
        r_cc = [
            sum(float(np.sum(alpha_sq[i] * alpha_sq[k] + beta_sq[i] * beta_sq[k])) for k in range(k_users) if k != i)
            / (2 * (k_users - 1) * n)
            for i in range(k_users)
        ]
    return _indices(r_ac, r_cc)


def sandwich_bounds(
    seq_set: SequenceSet,
    i: int,
    channel: ChannelProfile,
    coeffs: list[SpectralCoefficients] | None = None,
) -> tuple[float, float]:
    """
    Bounds on the SNR lower bound from the mean-square indices of user i:

        lower = [1/(2N) {Z_ii (R_AC + 1) + Z_U (K-1) R_CC} + N0/(2PT)]^(-1/2)
        upper = [1/(6N) {Z_ii (R_AC + 1) + Z_L (K-1) R_CC} + N0/(2PT)]^(-1/2)

    with Z_U and Z_L the largest and smallest Z_{i,k} over all k.
    """
    channel.covers(seq_set.k_users)
    coeffs = coeffs if coeffs is not None else spectral_set(seq_set)
    indices = msq_spectral(coeffs)
    n, k_users = seq_set.n, seq_set.k_users
    z = z_factors(i, channel, k_users)
    z_upper, z_lower = float(np.max(z)), float(np.min(z))
    auto_term = z[i] * (indices.r_ac_per_user[i] + 1)
    cross = (k_users - 1) * indices.r_cc_per_user[i] if indices.r_cc_per_user is not None else 0.0
    noise = channel.noise_term()

    lower_bracket = (auto_term + z_upper * cross) / (2 * n) + noise
    upper_bracket = (auto_term + z_lower * cross) / (6 * n) + noise
    if not upper_bracket > 0:
        errmsg = "The sandwich brackets are zero: every Z term vanishes and N0 = 0"
        raise ValueError(errmsg)
    return float(lower_bracket**-0.5), float(upper_bracket**-0.5)
