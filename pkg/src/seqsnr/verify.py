# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
The oracle and identity suite behind the ``verify`` command.

Each trial draws a random-phase set and a random positive channel from its own seed and measures,
for every closed form, the residual against its independent counterpart.  Per-run checks (basis
unitarity, eigenvalue orthogonality, Zadoff-Chu sanity) do not depend on the trial.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger

from seqsnr.correlation import ALL_BIT_PAIRS, periodic_corr, quad_form
from seqsnr.gradient import FD_STEP, check_param_gradient, check_sequence_gradient, params_from_coeffs
from seqsnr.mean_square import msq_direct, msq_spectral, msq_theta, sandwich_bounds
from seqsnr.oracle import (
    ChipIntegralInputs,
    chip_integral_closed,
    chip_integral_numeric,
    direct_wave_bracket_oracle,
    variance_oracle,
)
from seqsnr.seqset import Family, GeneratorSpec, SequenceSet, generate
from seqsnr.snr_model import ChannelProfile, UserChannel, direct_wave_z, pair_variance, snr_bracket
from seqsnr.spectral import build_matrices, eigen_sum, identity_tolerance, orthogonality_residuals, spectral_set

if TYPE_CHECKING:
    from seqsnr.spectral import SpectralCoefficients

ZC_LENGTHS: tuple[int, ...] = (5, 7, 11)
SEED_MODULUS = 2**64


@dataclass(frozen=True)
class Residual:
    """The worst residual of one check; users are None for checks that involve no user pair."""

    check: str
    value: float
    seed: int
    i: int | None = None
    k: int | None = None

    def describe(self) -> str:
        users = "-" if self.i is None else f"({self.i}, {self.k})"
        return f"{self.check}: residual {self.value:.3e} at seed {self.seed}, users {users}"


@dataclass(frozen=True)
class VerifyConfig:
    n: int
    users: int
    trials: int
    seed: int = 0
    tol: float = 1e-9
    grad_tol: float = 1e-6
    eps: float = FD_STEP
    threads: int = 1

    def validate(self) -> None:
        if self.n < 2 or self.users < 1 or self.trials < 1:
            errmsg = (
                f"Need n >= 2, users >= 1 and trials >= 1, got n={self.n}, users={self.users}, trials={self.trials}"
            )
            raise ValueError(errmsg)
        if not (self.tol > 0 and self.grad_tol > 0 and self.eps > 0):
            errmsg = "Tolerances and the finite-difference step must be positive"
            raise ValueError(errmsg)
        if not 0 <= self.seed < SEED_MODULUS:
            errmsg = f"Seed must be an unsigned 64-bit integer, got {self.seed}"
            raise ValueError(errmsg)


@dataclass
class VerifyOutcome:
    config: VerifyConfig
    worst: dict[str, Residual] = field(default_factory=dict)

    def record(self, residual: Residual) -> None:
        current = self.worst.get(residual.check)
        # NaN never compares greater, so it has to be caught explicitly
        if current is None or residual.value > current.value or np.isnan(residual.value):
            self.worst[residual.check] = residual

    def tolerance(self, check: str) -> float:
        return self.config.grad_tol if check.startswith("gradient") else self.config.tol

    def failures(self) -> list[Residual]:
        return [r for name, r in self.worst.items() if not r.value <= self.tolerance(name)]

    @property
    def passed(self) -> bool:
        return not self.failures()

    def worst_overall(self) -> Residual:
        """The residual furthest above (or closest to) its tolerance."""

        def ratio(r: Residual) -> float:
            return float(np.inf) if np.isnan(r.value) else r.value / self.tolerance(r.check)

        return max(self.worst.values(), key=ratio)


def relative_error(got: float, want: float) -> float:
    scale = max(abs(got), abs(want))
    return 0.0 if scale == 0 else abs(got - want) / scale


def random_channel(rng: np.random.Generator, k_users: int) -> ChannelProfile:
    """Strictly positive P, T, N0, C, M and gamma."""
    users = tuple(
        UserChannel(
            gamma=float(rng.uniform(0.1, 1.0)),
            c_bound=float(rng.uniform(0.1, 1.0)),
            m_spread=int(rng.integers(1, 5)),
        )
        for _ in range(k_users)
    )
    return ChannelProfile(
        power=float(rng.uniform(0.5, 2.0)),
        symbol_t=float(rng.uniform(0.5, 2.0)),
        noise_n0=float(rng.uniform(0.01, 1.0)),
        users=users,
    )


def trial_seed(base: int, trial: int) -> int:
    return (base + trial) % SEED_MODULUS


def run_trial(config: VerifyConfig, seed: int) -> list[Residual]:
    """All per-trial residuals of one seeded (set, channel) draw."""
    seq_set = generate(GeneratorSpec(Family.RANDOM_PHASE, config.n, seed=seed), config.users)
    rng = np.random.default_rng([seed, 1])
    channel = random_channel(rng, config.users)
    coeffs = spectral_set(seq_set)
    residuals: list[Residual] = []
    k_users, n = seq_set.k_users, seq_set.n

    for i in range(k_users):
        for k in range(k_users):
            closed = pair_variance(seq_set, i, k, channel, coeffs=coeffs)
            check = "fading_oracle" if k == i else "interference_oracle"
            oracle = variance_oracle(seq_set, i, k, channel)
            residuals.append(Residual(check, relative_error(oracle, closed), seed, i, k))

            eigen = max(
                abs(quad_form(seq_set, i, k, lag, bits) - eigen_sum(coeffs[i], coeffs[k], lag, bits))
                for lag in range(n + 1)
                for bits in ALL_BIT_PAIRS
            )
            residuals.append(Residual("eigen_identity", eigen, seed, i, k))

    phi = build_matrices(n).phi
    for user, c in enumerate(coeffs):
        residuals.append(Residual("alpha_phi_beta", float(np.max(np.abs(c.alpha - phi @ c.beta))), seed, user, user))

    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    inp = ChipIntegralInputs(complex(a), complex(b), float(rng.uniform(0.1, 2.0)))
    quadrature = relative_error(chip_integral_numeric(inp), chip_integral_closed(inp))
    residuals.append(Residual("chip_quadrature", quadrature, seed))

    residuals.append(_msq_residual(seq_set, coeffs, seed))

    for i in range(k_users):
        snr = snr_bracket(seq_set, i, channel, coeffs=coeffs) ** -0.5
        lower, upper = sandwich_bounds(seq_set, i, channel, coeffs=coeffs)
        violation = max(lower - snr, snr - upper, 0.0) / snr
        residuals.append(Residual("sandwich_containment", violation, seed, i, i))

        direct = snr_bracket(seq_set, i, channel, z=direct_wave_z(i, k_users), coeffs=coeffs)
        oracle = direct_wave_bracket_oracle(seq_set, i, channel)
        residuals.append(Residual("direct_wave_reduction", relative_error(oracle, direct), seed, i, i))

    params = params_from_coeffs(coeffs)
    for i in range(k_users):
        for j in range(k_users):
            error = check_param_gradient(params, i, channel, j, config.eps)
            residuals.append(Residual("gradient_params", error, seed, i, j))
            error = check_sequence_gradient(seq_set, i, channel, j, config.eps)
            residuals.append(Residual("gradient_sequence", error, seed, i, j))

    logger.debug(f"trial seed {seed}: {len(residuals)} residuals")
    return residuals


def _msq_residual(seq_set: SequenceSet, coeffs: list[SpectralCoefficients], seed: int) -> Residual:
    direct, theta, spectral = msq_direct(seq_set), msq_theta(seq_set), msq_spectral(coeffs)
    worst = 0.0
    worst_user = 0
    for user in range(seq_set.k_users):
        values = [direct.r_ac_per_user[user], theta.r_ac_per_user[user], spectral.r_ac_per_user[user]]
        if direct.r_cc_per_user is not None:
            values_cc = [direct.r_cc_per_user[user], theta.require_r_cc()[user], spectral.require_r_cc()[user]]
            spread = max(max(values) - min(values), max(values_cc) - min(values_cc))
        else:
            spread = max(values) - min(values)
        if spread > worst:
            worst, worst_user = spread, user
    return Residual("msq_agreement", worst, seed, worst_user, worst_user)


def run_static_checks(config: VerifyConfig) -> list[Residual]:
    """Checks that depend only on N: unitarity, eigenvalue orthogonality and Zadoff-Chu sanity."""
    n = config.n
    scale = identity_tolerance(n, 1.0)
    residuals = [
        Residual("unitarity", max(build_matrices(n).unitarity_residuals().values()) / scale, config.seed),
        Residual("orthogonality", max(orthogonality_residuals(n).values()) / (n * scale), config.seed),
    ]
    for length in ZC_LENGTHS:
        zc = generate(GeneratorSpec(Family.ZADOFF_CHU, length, root=1), 1)
        sidelobe = max(abs(periodic_corr(zc, 0, 0, lag)) for lag in range(1, length))
        residuals.append(Residual("zadoff_chu_sidelobes", sidelobe, config.seed, 0, 0))

        ones = generate(GeneratorSpec(Family.ALL_ONES, length), 1)
        zc_r_ac = msq_direct(zc).r_ac
        ones_r_ac = msq_direct(ones).r_ac
        residuals.append(Residual("zadoff_chu_r_ac", 0.0 if zc_r_ac < ones_r_ac else np.inf, config.seed, 0, 0))
    return residuals


def run_verify(config: VerifyConfig) -> VerifyOutcome:
    """
    Run the suite.  Trials fan out over ``config.threads`` workers; results are reduced in trial order.

    raises: ValueError on an invalid configuration
    """
    config.validate()
    outcome = VerifyOutcome(config)
    for residual in run_static_checks(config):
        outcome.record(residual)

    seeds = [trial_seed(config.seed, trial) for trial in range(config.trials)]
    if config.threads == 1:
        per_trial = [run_trial(config, seed) for seed in seeds]
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            per_trial = list(pool.map(lambda seed: run_trial(config, seed), seeds))
    for residuals in per_trial:
        for residual in residuals:
            outcome.record(residual)

    for name, residual in sorted(outcome.worst.items()):
        logger.debug(f"{name}: {residual.value:.3e} (tol {outcome.tolerance(name):g})")
    return outcome
