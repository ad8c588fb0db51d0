# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
Closed forms of the worst-case interference and fading variances and of the SNR lower bound.

For users i, k with spectral coefficients alpha, beta the mode-m coupling is

    S_m^{i,k} = |alpha_i,m|^2 |alpha_k,m|^2 (1 + cos(2 pi m/N)/2)
              + |beta_i,m|^2 |beta_k,m|^2 (1 + cos(2 pi (m/N + 1/(2N)))/2)

and the bound on the SNR of user i is

    SNR_i >= { 1/(6 N^2) sum_k Z_{i,k} sum_{m=1}^{N} S_m^{i,k} + N_0/(2 P T) }^(-1/2)

with Z_{i,i} = gamma_i^2 C_i M_i T and Z_{i,k} = 1 + gamma_k^2 L_k, L_k = M_k C_k T.  The signal power
is taken as E{D_i}^2 = P T^2 / 2, which makes the bracket the variance sum divided by P T^2 / 2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
from loguru import logger

from seqsnr.spectral import SpectralCoefficients, spectral_set

if TYPE_CHECKING:
    from seqsnr.seqset import SequenceSet


class ChannelError(ValueError):
    """A channel profile or channel file is malformed."""


@dataclass(frozen=True)
class UserChannel:
    """Worst-case fading parameters of one user."""

    gamma: float
    c_bound: float
    m_spread: int


@dataclass(frozen=True)
class ChannelProfile:
    power: float
    symbol_t: float
    noise_n0: float
    users: tuple[UserChannel, ...]

    def __post_init__(self) -> None:
        for name in ("power", "symbol_t", "noise_n0"):
            value = getattr(self, name)
            if not math.isfinite(value):
                errmsg = f"Channel {name} must be finite, got {value!r}"
                raise ChannelError(errmsg)
        if self.power <= 0 or self.symbol_t <= 0 or self.noise_n0 < 0:
            errmsg = f"Need P > 0, T > 0 and N0 >= 0, got P={self.power}, T={self.symbol_t}, N0={self.noise_n0}"
            raise ChannelError(errmsg)
        for user, entry in enumerate(self.users):
            if not (math.isfinite(entry.gamma) and math.isfinite(entry.c_bound)):
                errmsg = f"users[{user}]: gamma and c must be finite"
                raise ChannelError(errmsg)
            if entry.gamma < 0 or entry.c_bound <= 0 or entry.m_spread < 1:
                errmsg = f"users[{user}]: need gamma >= 0, c > 0 and m >= 1, got {entry}"
                raise ChannelError(errmsg)

    @property
    def k_users(self) -> int:
        return len(self.users)

    def l_factor(self, k: int) -> float:
        """L_k = M_k C_k T, the delay-power integral of the rectangular worst case."""
        entry = self.users[k]
        return entry.m_spread * entry.c_bound * self.symbol_t

    def noise_term(self) -> float:
        """N_0 / (2 P T)."""
        return self.noise_n0 / (2 * self.power * self.symbol_t)

    def scaled_power(self, factor: float) -> ChannelProfile:
        return ChannelProfile(self.power * factor, self.symbol_t, self.noise_n0, self.users)

    def covers(self, k_users: int) -> None:
        if self.k_users < k_users:
            errmsg = f"Channel has entries for {self.k_users} users, the sequence set has {k_users}"
            raise ChannelError(errmsg)


def channel_from_dict(data: Any, source: str = "<data>") -> ChannelProfile:
    """Build a profile from {"p", "t", "n0", "users": [{"gamma", "c", "m"}, ...]}."""
    if not isinstance(data, dict):
        errmsg = f"{source}: top level must be a JSON object"
        raise ChannelError(errmsg)
    for key in ("p", "t", "n0", "users"):
        if key not in data:
            errmsg = f'{source}: missing field "{key}"'
            raise ChannelError(errmsg)
    if not isinstance(data["users"], list):
        errmsg = f'{source}: "users" must be a list'
        raise ChannelError(errmsg)

    users: list[UserChannel] = []
    for index, entry in enumerate(data["users"]):
        if not isinstance(entry, dict):
            errmsg = f"{source}: users[{index}] must be an object"
            raise ChannelError(errmsg)
        for key in ("gamma", "c", "m"):
            if key not in entry:
                errmsg = f'{source}: missing field "users[{index}].{key}"'
                raise ChannelError(errmsg)
        if isinstance(entry["m"], bool) or not isinstance(entry["m"], int):
            errmsg = f'{source}: "users[{index}].m" must be an integer, got {entry["m"]!r}'
            raise ChannelError(errmsg)
        users.append(
            UserChannel(
                gamma=_number(entry["gamma"], f"users[{index}].gamma", source),
                c_bound=_number(entry["c"], f"users[{index}].c", source),
                m_spread=entry["m"],
            )
        )

    return ChannelProfile(
        power=_number(data["p"], "p", source),
        symbol_t=_number(data["t"], "t", source),
        noise_n0=_number(data["n0"], "n0", source),
        users=tuple(users),
    )


def _number(value: Any, name: str, source: str) -> float:
    """A JSON number as float; strings, booleans and containers are schema errors."""
    if isinstance(value, bool) or not isinstance(value, int | float):
        errmsg = f'{source}: "{name}" must be a number, got {value!r}'
        raise ChannelError(errmsg)
    return float(value)


def channel_to_dict(channel: ChannelProfile) -> dict[str, Any]:
    return {
        "p": channel.power,
        "t": channel.symbol_t,
        "n0": channel.noise_n0,
        "users": [{"gamma": u.gamma, "c": u.c_bound, "m": u.m_spread} for u in channel.users],
    }


def load_channel(path: Path) -> ChannelProfile:
    """
    Load a channel file.

    raises: ChannelError
    """
    try:
        with path.open(encoding="utf-8") as fp:
            data = json.load(fp)
    except (OSError, json.JSONDecodeError) as ex:
        errmsg = f"The channel file ({path}) could not be loaded: {ex}"
        raise ChannelError(errmsg) from ex
    return channel_from_dict(data, source=str(path))


def s_weights(n: int) -> tuple[np.ndarray, np.ndarray]:
    """The cosine weights of the alpha and beta parts of S_m, m = 1..n; both lie in [1/2, 3/2]."""
    m = np.arange(1, n + 1)
    return 1 + 0.5 * np.cos(2 * np.pi * m / n), 1 + 0.5 * np.cos(2 * np.pi * (m / n + 1 / (2 * n)))


def s_terms(coeffs_i: SpectralCoefficients, coeffs_k: SpectralCoefficients) -> np.ndarray:
    """S_m^{i,k} for every mode m = 1..N."""
    if coeffs_i.n != coeffs_k.n:
        errmsg = f"Coefficient lengths differ: {coeffs_i.n} vs {coeffs_k.n}"
        raise ValueError(errmsg)
    weight, weight_hat = s_weights(coeffs_i.n)
    alpha_part = np.abs(coeffs_i.alpha) ** 2 * np.abs(coeffs_k.alpha) ** 2
    beta_part = np.abs(coeffs_i.beta) ** 2 * np.abs(coeffs_k.beta) ** 2
    return alpha_part * weight + beta_part * weight_hat


def s_term(coeffs_i: SpectralCoefficients, coeffs_k: SpectralCoefficients, m: int) -> float:
    """S_m^{i,k} for one mode, 1 <= m <= N."""
    if not 1 <= m <= coeffs_i.n:
        errmsg = f"Mode m={m} out of range [1, {coeffs_i.n}]"
        raise ValueError(errmsg)
    return float(s_terms(coeffs_i, coeffs_k)[m - 1])


def s_hat_term(params_i: np.ndarray, params_k: np.ndarray, m: int) -> float:
    """S_m^{i,k} from the split real parameters, each a 4 x N array (alpha_1, alpha_2, beta_1, beta_2)."""
    params_i, params_k = np.asarray(params_i, dtype=np.float64), np.asarray(params_k, dtype=np.float64)
    if params_i.shape != params_k.shape or params_i.ndim != 2 or params_i.shape[0] != 4:
        errmsg = f"Parameter arrays must both be 4 x N, got {params_i.shape} and {params_k.shape}"
        raise ValueError(errmsg)
    n = params_i.shape[1]
    if not 1 <= m <= n:
        errmsg = f"Mode m={m} out of range [1, {n}]"
        raise ValueError(errmsg)
    weight, weight_hat = s_weights(n)
    a_i, b_i = params_i[0] ** 2 + params_i[1] ** 2, params_i[2] ** 2 + params_i[3] ** 2
    a_k, b_k = params_k[0] ** 2 + params_k[1] ** 2, params_k[2] ** 2 + params_k[3] ** 2
    col = m - 1
    return float(a_i[col] * a_k[col] * weight[col] + b_i[col] * b_k[col] * weight_hat[col])


def s_sums(coeffs: list[SpectralCoefficients], i: int) -> np.ndarray:
    """sum_m S_m^{i,k} for k = 0..K-1, summed k by k then m by m."""
    return np.array([float(np.sum(s_terms(coeffs[i], coeffs[k]))) for k in range(len(coeffs))])


def _coeffs(seq_set: SequenceSet, coeffs: list[SpectralCoefficients] | None) -> list[SpectralCoefficients]:
    return coeffs if coeffs is not None else spectral_set(seq_set)


def interference_variance(
    seq_set: SequenceSet, i: int, channel: ChannelProfile, coeffs: list[SpectralCoefficients] | None = None
) -> float:
    """Var{I_i} = P T^2/(12 N^2) sum_{k != i} (1 + gamma_k^2 L_k) sum_m S_m^{i,k}."""
    channel.covers(seq_set.k_users)
    sums = s_sums(_coeffs(seq_set, coeffs), i)
    n = seq_set.n
    total = sum(
        (1 + channel.users[k].gamma ** 2 * channel.l_factor(k)) * sums[k] for k in range(seq_set.k_users) if k != i
    )
    return float(channel.power * channel.symbol_t**2 / (12 * n**2) * total)


def pair_variance(
    seq_set: SequenceSet, i: int, k: int, channel: ChannelProfile, coeffs: list[SpectralCoefficients] | None = None
) -> float:
    """
    The closed-form contribution of user k to the variance seen by user i.

    For k != i this is the k-th term of Var{I_i}; for k == i it is the Var{F_i} bound.
    """
    channel.covers(seq_set.k_users)
    coeffs = _coeffs(seq_set, coeffs)
    pair_sum = float(np.sum(s_terms(coeffs[i], coeffs[k])))
    n, t = seq_set.n, channel.symbol_t
    return float(channel.power * t**2 / (12 * n**2) * z_factor(i, k, channel) * pair_sum)


def fading_variance_bound(
    seq_set: SequenceSet, i: int, channel: ChannelProfile, coeffs: list[SpectralCoefficients] | None = None
) -> float:
    """Var{F_i} <= P T^3/(12 N^2) gamma_i^2 C_i M_i sum_m S_m^{i,i}."""
    channel.covers(seq_set.k_users)
    coeffs = _coeffs(seq_set, coeffs)
    entry = channel.users[i]
    n = seq_set.n
    self_sum = float(np.sum(s_terms(coeffs[i], coeffs[i])))
    return float(
        channel.power * channel.symbol_t**3 / (12 * n**2) * entry.gamma**2 * entry.c_bound * entry.m_spread * self_sum
    )


def z_factor(i: int, k: int, channel: ChannelProfile) -> float:
    if k == i:
        entry = channel.users[i]
        return entry.gamma**2 * entry.c_bound * entry.m_spread * channel.symbol_t
    return 1 + channel.users[k].gamma ** 2 * channel.l_factor(k)


def z_factors(i: int, channel: ChannelProfile, k_users: int | None = None) -> np.ndarray:
    """Z_{i,k} for k = 0..K-1."""
    count = channel.k_users if k_users is None else k_users
    return np.array([z_factor(i, k, channel) for k in range(count)])


def direct_wave_z(i: int, k_users: int) -> np.ndarray:
    """Z_{i,k} = 1 (k != i), Z_{i,i} = 0: the direct-wave-only, non-fading case."""
    z = np.ones(k_users)
    z[i] = 0.0
    return z


def bracket_from_sums(n: int, z: np.ndarray, sums: np.ndarray, noise_term: float) -> float:
    """1/(6 N^2) sum_k Z_k sums_k + noise_term, checked positive."""
    bracket = float(np.dot(z, sums)) / (6 * n**2) + noise_term
    if not bracket > 0:
        errmsg = "The SNR bracket is zero: every Z term vanishes and N0 = 0"
        raise ValueError(errmsg)
    return bracket


def snr_bracket(
    seq_set: SequenceSet,
    i: int,
    channel: ChannelProfile,
    z: np.ndarray | None = None,
    coeffs: list[SpectralCoefficients] | None = None,
) -> float:
    """The bracket whose inverse square root is the SNR bound; ``z`` overrides the Z_{i,k} from the channel."""
    channel.covers(seq_set.k_users)
    z = z_factors(i, channel, seq_set.k_users) if z is None else np.asarray(z, dtype=np.float64)
    sums = s_sums(_coeffs(seq_set, coeffs), i)
    return bracket_from_sums(seq_set.n, z, sums, channel.noise_term())


def snr_lower_bound(
    seq_set: SequenceSet,
    i: int,
    channel: ChannelProfile,
    z: np.ndarray | None = None,
    coeffs: list[SpectralCoefficients] | None = None,
) -> float:
    bound = snr_bracket(seq_set, i, channel, z=z, coeffs=coeffs) ** -0.5
    logger.debug(f"user {i}: SNR lower bound {bound:.6g}")
    return bound


def to_db(snr: float) -> float:
    """Amplitude ratio in decibels, 20 log10."""
    return 20 * math.log10(snr)


@dataclass(frozen=True)
class SnrReport:
    """One row of the analysis report."""

    user: int
    s_sums: tuple[float, ...]
    var_interference: float
    var_fading_bound: float
    snr_lower: float
    snr_lower_db: float
    r_ac: float
    r_cc: float | None
    sandwich_lower: float
    sandwich_upper: float
