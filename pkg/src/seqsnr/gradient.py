# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
The SNR bracket as a smooth function of the split spectral parameters, and its analytic gradient.

Writing A_m = alpha_1,m^2 + alpha_2,m^2 and B_m = beta_1,m^2 + beta_2,m^2 the objective for user i is

    f = 1/(6 N^2) sum_k Z_{i,k} sum_m (A^i_m A^k_m w_m + B^i_m B^k_m w_hat_m) + N_0/(2 P T)

with w_m, w_hat_m the cosine weights of S_m.  alpha and beta are free here; keeping them on the
hypersphere is left to the caller.  In sequence space alpha = V^* s and beta = V_hat^* s are tied
to s and the gradient is chained back through the basis matrices.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger

from seqsnr.snr_model import s_weights, z_factors
from seqsnr.spectral import build_matrices, spectral_set, split_params

if TYPE_CHECKING:
    from seqsnr.seqset import SequenceSet
    from seqsnr.snr_model import ChannelProfile
    from seqsnr.spectral import SpectralCoefficients

FD_STEP: float = 1e-5
GRADIENT_FLOOR: float = 1e-12


@dataclass(frozen=True, eq=False)
class ParamVector:
    """
    The split parameters of every user as a K x 4 x N array.

    Row order per user is (alpha_1, alpha_2, beta_1, beta_2), the real and imaginary parts of alpha
    and beta.
    """

    params: np.ndarray

    def __post_init__(self) -> None:
        params = np.array(self.params, dtype=np.float64)
        if params.ndim != 3 or params.shape[1] != 4 or params.shape[0] < 1:
            errmsg = f"Parameters must be a K x 4 x N array, got shape {params.shape}"
            raise ValueError(errmsg)
        object.__setattr__(self, "params", params)

    @property
    def k_users(self) -> int:
        return int(self.params.shape[0])

    @property
    def n(self) -> int:
        return int(self.params.shape[2])

    def user(self, k: int) -> np.ndarray:
        return self.params[k]

    def mode_powers(self) -> tuple[np.ndarray, np.ndarray]:
        """(A, B), each K x N."""
        p = self.params
        return p[:, 0] ** 2 + p[:, 1] ** 2, p[:, 2] ** 2 + p[:, 3] ** 2

    def on_hypersphere(self, rtol: float = 1e-9) -> bool:
        """True when ||alpha||^2 = ||beta||^2 = N for every user."""
        a, b = self.mode_powers()
        n = self.n
        return bool(np.all(np.abs(a.sum(axis=1) - n) <= rtol * n) and np.all(np.abs(b.sum(axis=1) - n) <= rtol * n))


def params_from_coeffs(coeffs: list[SpectralCoefficients]) -> ParamVector:
    return ParamVector(np.stack([split_params(c) for c in coeffs]))


def params_from_set(seq_set: SequenceSet) -> ParamVector:
    return params_from_coeffs(spectral_set(seq_set))


def _check_user(index: int, k_users: int, name: str) -> None:
    if not 0 <= index < k_users:
        errmsg = f"{name} index {index} out of range for K={k_users}"
        raise IndexError(errmsg)


def objective(params: ParamVector, i: int, channel: ChannelProfile) -> float:
    """The bracket of the SNR bound evaluated on free parameters."""
    _check_user(i, params.k_users, "User")
    channel.covers(params.k_users)
    n = params.n
    weight, weight_hat = s_weights(n)
    a, b = params.mode_powers()
    z = z_factors(i, channel, params.k_users)
    sums = (a[i] * a * weight).sum(axis=1) + (b[i] * b * weight_hat).sum(axis=1)
    return float(np.dot(z, sums)) / (6 * n**2) + channel.noise_term()


def grad_params(params: ParamVector, i: int, channel: ChannelProfile, wrt_user: int) -> np.ndarray:
    """
    d objective / d params of ``wrt_user`` as a 4 x N array.

    :param params: the parameters of every user
    :param i: the user whose bracket is differentiated
    :param channel: supplies the Z_{i,k} weights
    :param wrt_user: the user whose parameters vary
    :return: the gradient, same layout as ``params.user(wrt_user)``
    """
    _check_user(i, params.k_users, "User")
    _check_user(wrt_user, params.k_users, "Gradient user")
    channel.covers(params.k_users)
    n = params.n
    weight, weight_hat = s_weights(n)
    a, b = params.mode_powers()
    z = z_factors(i, channel, params.k_users)
    scale = 1 / (6 * n**2)

    # df/dA_j = c w (Z_j A_i + [j == i] sum_k Z_k A_k); the self-term is quartic so it appears twice
    d_a = z[wrt_user] * a[i]
    d_b = z[wrt_user] * b[i]
    if wrt_user == i:
        d_a = d_a + z @ a
        d_b = d_b + z @ b
    d_a = scale * weight * d_a
    d_b = scale * weight_hat * d_b

    p = params.user(wrt_user)
    return np.stack([2 * p[0] * d_a, 2 * p[1] * d_a, 2 * p[2] * d_b, 2 * p[3] * d_b])


def sequence_objective(seqs: np.ndarray, i: int, channel: ChannelProfile) -> float:
    """The objective of raw sequences (K x N), with no normalization check on s."""
    seqs = np.asarray(seqs, dtype=np.complex128)
    mats = build_matrices(seqs.shape[1])
    alpha = seqs @ mats.v.conj()
    beta = seqs @ mats.v_hat.conj()
    params = np.stack([alpha.real, alpha.imag, beta.real, beta.imag], axis=1)
    return objective(ParamVector(params), i, channel)


def grad_sequence(seq_set: SequenceSet, i: int, channel: ChannelProfile, wrt_user: int) -> np.ndarray:
    """
    d objective / d s of ``wrt_user``: entry n is df/dRe(s_n) + j df/dIm(s_n).

    With g_alpha and g_beta the parameter gradient packed the same way, this is V g_alpha + V_hat g_beta.
    """
    mats = build_matrices(seq_set.n)
    grad = grad_params(params_from_set(seq_set), i, channel, wrt_user)
    g_alpha = grad[0] + 1j * grad[1]
    g_beta = grad[2] + 1j * grad[3]
    return mats.v @ g_alpha + mats.v_hat @ g_beta


def central_difference(f: Callable[[np.ndarray], float], x: np.ndarray, eps: float = FD_STEP) -> np.ndarray:
    """Central-difference gradient of a real function of a real array."""
    if not eps > 0:
        errmsg = f"Finite-difference step must be positive, got {eps}"
        raise ValueError(errmsg)
    x = np.array(x, dtype=np.float64)
    grad = np.zeros_like(x)
    flat_x, flat_grad = x.reshape(-1), grad.reshape(-1)
    for index in range(flat_x.size):
        saved = flat_x[index]
        flat_x[index] = saved + eps
        upper = f(x)
        flat_x[index] = saved - eps
        lower = f(x)
        flat_x[index] = saved
        flat_grad[index] = (upper - lower) / (2 * eps)
    return grad


def gradient_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = GRADIENT_FLOOR) -> float:
    """max |analytic - numeric| over the components, relative to the largest analytic component (at least floor)."""
    analytic, numeric = np.asarray(analytic), np.asarray(numeric)
    scale = max(float(np.max(np.abs(analytic))), floor)
    return float(np.max(np.abs(analytic - numeric))) / scale


def check_param_gradient(
    params: ParamVector, i: int, channel: ChannelProfile, wrt_user: int, eps: float = FD_STEP
) -> float:
    """gradient_error of grad_params against central differences in parameter space."""
    analytic = grad_params(params, i, channel, wrt_user)

    def f(user_params: np.ndarray) -> float:
        trial = params.params.copy()
        trial[wrt_user] = user_params
        return objective(ParamVector(trial), i, channel)

    numeric = central_difference(f, params.user(wrt_user), eps)
    error = gradient_error(analytic, numeric)
    logger.debug(f"param gradient, user {i} wrt {wrt_user}: error {error:.3g}")
    return error


def check_sequence_gradient(
    seq_set: SequenceSet, i: int, channel: ChannelProfile, wrt_user: int, eps: float = FD_STEP
) -> float:
    """gradient_error of grad_sequence against central differences perturbing Re(s_n) and Im(s_n)."""
    analytic = grad_sequence(seq_set, i, channel, wrt_user)
    base = np.array(seq_set.seqs)

    def f(parts: np.ndarray) -> float:
        trial = base.copy()
        trial[wrt_user] = parts[0] + 1j * parts[1]
        return sequence_objective(trial, i, channel)

    numeric = central_difference(f, np.stack([base[wrt_user].real, base[wrt_user].imag]), eps)
    error = gradient_error(np.stack([analytic.real, analytic.imag]), numeric)
    logger.debug(f"sequence gradient, user {i} wrt {wrt_user}: error {error:.3g}")
    return error
