# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
The two orthogonal bases of C^N and the coefficients of a sequence in them.

For eta in {0, 1/(2N)} the basis vectors are (w_m(eta))_n = exp(2 pi j (n-1)(m/N + eta)), with m and n
running 1..N.  A normalized sequence is

    s = (1/sqrt(N)) sum_m alpha_m w_m(0) = (1/sqrt(N)) sum_m beta_m w_m(1/(2N))

so alpha = V^* s and beta = V_hat^* s, where V and V_hat hold the scaled basis vectors as columns.
Array position m - 1 holds mode m throughout.

The periodic correlation is diagonal in the first basis and the odd correlation in the second:

    s_i^* B^(l)_{1,1} s_k  =  sum_m lambda_m^(l) conj(alpha_i,m) alpha_k,m,   lambda_m^(l) = exp(-2 pi j l m / N)
    s_i^* B^(l)_{-1,1} s_k =  sum_m lambda_hat_m^(l) conj(beta_i,m) beta_k,m,
    lambda_hat_m^(l) = exp(-2 pi j l (m/N + 1/(2N)))

with the signs flipped for the bit pairs (-1,-1) and (1,-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

from seqsnr.correlation import BitPair, quad_form

if TYPE_CHECKING:
    from seqsnr.seqset import SequenceSet

NORM_RTOL: float = 1e-6
"""Relative tolerance on ||s||^2 = N accepted by to_spectral."""


def identity_tolerance(n: int, base: float = 1e-9) -> float:
    """Absolute tolerance for identity residuals: fixed up to N = 256, growing linearly above."""
    return base if n <= 256 else base * n / 256


def basis_vector(m: int, eta: float, n: int) -> np.ndarray:
    """w_m(eta) for 1 <= m <= n."""
    if not 1 <= m <= n:
        errmsg = f"Basis index m={m} out of range [1, {n}]"
        raise ValueError(errmsg)
    return np.exp(2j * np.pi * np.arange(n) * (m / n + eta))


def eigenvalues(n: int, lag: int) -> np.ndarray:
    """lambda_m^(l) for m = 1..n."""
    m = np.arange(1, n + 1)
    return np.exp(-2j * np.pi * lag * m / n)


def eigenvalues_hat(n: int, lag: int) -> np.ndarray:
    """lambda_hat_m^(l) for m = 1..n."""
    m = np.arange(1, n + 1)
    return np.exp(-2j * np.pi * lag * (m / n + 1 / (2 * n)))


@dataclass(frozen=True, eq=False)
class BasisMatrices:
    n: int
    v: np.ndarray
    v_hat: np.ndarray
    phi: np.ndarray
    phi_hat: np.ndarray

    def unitarity_residuals(self) -> dict[str, float]:
        """Frobenius norms of M^* M - I for each matrix and of phi phi_hat - I."""
        eye = np.eye(self.n)
        residuals = {
            name: float(np.linalg.norm(mat.conj().T @ mat - eye))
            for name, mat in (("v", self.v), ("v_hat", self.v_hat), ("phi", self.phi), ("phi_hat", self.phi_hat))
        }
        residuals["phi_phi_hat"] = float(np.linalg.norm(self.phi @ self.phi_hat - eye))
        return residuals


@lru_cache(maxsize=64)
def build_matrices(n: int) -> BasisMatrices:
    """V, V_hat, Phi and Phi_hat from their closed forms.  Cached per n; the arrays are read-only."""
    if n < 2:
        errmsg = f"N must be at least 2, got {n}"
        raise ValueError(errmsg)
    v = np.column_stack([basis_vector(m, 0.0, n) for m in range(1, n + 1)]) / np.sqrt(n)
    v_hat = np.column_stack([basis_vector(m, 1 / (2 * n), n) for m in range(1, n + 1)]) / np.sqrt(n)

    # (n - m)/N +- 1/(2N) is never an integer, so neither denominator vanishes
    diff = np.arange(n)[np.newaxis, :] - np.arange(n)[:, np.newaxis]
    phi = (2 / n) / (1 - np.exp(2j * np.pi * (diff / n + 1 / (2 * n))))
    phi_hat = (2 / n) / (1 - np.exp(2j * np.pi * (diff / n - 1 / (2 * n))))

    for mat in (v, v_hat, phi, phi_hat):
        mat.setflags(write=False)
    return BasisMatrices(n=n, v=v, v_hat=v_hat, phi=phi, phi_hat=phi_hat)


@dataclass(frozen=True, eq=False)
class SpectralCoefficients:
    n: int
    alpha: np.ndarray
    beta: np.ndarray


def to_spectral(s: np.ndarray, rtol: float = NORM_RTOL) -> SpectralCoefficients:
    """alpha and beta of a normalized sequence."""
    s = np.asarray(s, dtype=np.complex128)
    n = s.size
    energy = float(np.vdot(s, s).real)
    if abs(energy - n) > rtol * n:
        errmsg = f"Sequence energy {energy!r} is not N = {n} (rtol {rtol:g})"
        raise ValueError(errmsg)
    mats = build_matrices(n)
    return SpectralCoefficients(n=n, alpha=mats.v.conj().T @ s, beta=mats.v_hat.conj().T @ s)


def spectral_set(seq_set: SequenceSet) -> list[SpectralCoefficients]:
    """Coefficients of every user, in user order."""
    return [to_spectral(seq_set[user]) for user in range(seq_set.k_users)]


def from_spectral(coeffs: SpectralCoefficients) -> np.ndarray:
    """The sequence (1/sqrt(N)) sum_m alpha_m w_m(0)."""
    return build_matrices(coeffs.n).v @ coeffs.alpha


def eigen_sum(coeffs_i: SpectralCoefficients, coeffs_k: SpectralCoefficients, lag: int, bits: BitPair) -> complex:
    """The eigen-decomposed value of s_i^* B^(l)_{bits} s_k."""
    n = coeffs_i.n
    if bits.b_prev == bits.b_cur:
        total = np.sum(eigenvalues(n, lag) * coeffs_i.alpha.conj() * coeffs_k.alpha)
    else:
        total = np.sum(eigenvalues_hat(n, lag) * coeffs_i.beta.conj() * coeffs_k.beta)
    return complex(bits.b_cur * total)


def eigen_check(seq_set: SequenceSet, i: int, k: int, lag: int, bits: BitPair) -> float:
    """|quad_form - eigen_sum| for one (i, k, l, bits)."""
    direct = quad_form(seq_set, i, k, lag, bits)
    spectral = eigen_sum(to_spectral(seq_set[i]), to_spectral(seq_set[k]), lag, bits)
    return abs(direct - spectral)


def orthogonality_residuals(n: int) -> dict[str, float]:
    """Largest deviation, over all (m, m'), of the six eigenvalue sums over l = 0..N-1 from their closed forms."""
    m = np.arange(1, n + 1)
    delta = np.eye(n)
    shift = np.exp(2j * np.pi * m / n)[np.newaxis, :]
    shift_hat = np.exp(2j * np.pi * (m / n + 1 / (2 * n)))[np.newaxis, :]

    lam = np.array([eigenvalues(n, lag) for lag in range(n + 1)])
    lam_hat = np.array([eigenvalues_hat(n, lag) for lag in range(n + 1)])

    def gram(left: np.ndarray, right: np.ndarray) -> np.ndarray:
        # entry (m, m') = sum_l left[l, m] * conj(right[l, m'])
        return left.T @ right.conj()

    expected = {
        "lambda": (gram(lam[:n], lam[:n]), n * delta),
        "lambda_hat": (gram(lam_hat[:n], lam_hat[:n]), n * delta),
        "lambda_shifted": (gram(lam[1:], lam[1:]), n * delta),
        "lambda_hat_shifted": (gram(lam_hat[1:], lam_hat[1:]), n * delta),
        "lambda_cross": (gram(lam[:n], lam[1:]), n * shift * delta),
        "lambda_hat_cross": (gram(lam_hat[:n], lam_hat[1:]), n * shift_hat * delta),
    }
    return {name: float(np.max(np.abs(got - want))) for name, (got, want) in expected.items()}


def split_params(coeffs: SpectralCoefficients) -> np.ndarray:
    """The real split (alpha_1, alpha_2, beta_1, beta_2) as a 4 x N array: real and imaginary parts."""
    return np.stack([coeffs.alpha.real, coeffs.alpha.imag, coeffs.beta.real, coeffs.beta.imag])


def join_params(params: np.ndarray) -> SpectralCoefficients:
    """Inverse of split_params."""
    params = np.asarray(params, dtype=np.float64)
    return SpectralCoefficients(n=params.shape[1], alpha=params[0] + 1j * params[1], beta=params[2] + 1j * params[3])
