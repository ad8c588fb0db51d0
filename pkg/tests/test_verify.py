# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import math

import numpy as np
import pytest

from seqsnr.verify import (
    SEED_MODULUS,
    Residual,
    VerifyConfig,
    VerifyOutcome,
    random_channel,
    relative_error,
    run_static_checks,
    run_trial,
    run_verify,
    trial_seed,
)

EXPECTED_CHECKS = {
    "unitarity",
    "orthogonality",
    "zadoff_chu_sidelobes",
    "zadoff_chu_r_ac",
    "fading_oracle",
    "interference_oracle",
    "eigen_identity",
    "alpha_phi_beta",
    "chip_quadrature",
    "msq_agreement",
    "sandwich_containment",
    "direct_wave_reduction",
    "gradient_params",
    "gradient_sequence",
}


def test_small_run_passes() -> None:
    outcome = run_verify(VerifyConfig(n=4, users=2, trials=3, seed=5))
    assert set(outcome.worst) == EXPECTED_CHECKS
    assert outcome.passed, [r.describe() for r in outcome.failures()]


def test_single_user_run() -> None:
    outcome = run_verify(VerifyConfig(n=5, users=1, trials=2))
    assert "interference_oracle" not in outcome.worst
    assert outcome.passed, [r.describe() for r in outcome.failures()]


def test_threads_do_not_change_outcome() -> None:
    config = VerifyConfig(n=4, users=2, trials=4, seed=9)
    serial = run_verify(config)
    threaded = run_verify(VerifyConfig(n=4, users=2, trials=4, seed=9, threads=3))
    assert serial.worst == threaded.worst


def test_trial_is_deterministic() -> None:
    config = VerifyConfig(n=4, users=2, trials=1)
    assert run_trial(config, 17) == run_trial(config, 17)


def test_trial_seed_wraps() -> None:
    assert trial_seed(3, 4) == 7
    assert trial_seed(SEED_MODULUS - 1, 2) == 1


def test_static_checks() -> None:
    residuals = run_static_checks(VerifyConfig(n=8, users=1, trials=1))
    assert all(r.value < 1e-9 for r in residuals)
    assert {r.check for r in residuals} == {"unitarity", "orthogonality", "zadoff_chu_sidelobes", "zadoff_chu_r_ac"}


def test_random_channel_is_positive() -> None:
    channel = random_channel(np.random.default_rng(0), 4)
    assert channel.k_users == 4
    assert channel.noise_n0 > 0
    assert all(u.gamma > 0 and u.c_bound > 0 and u.m_spread >= 1 for u in channel.users)


@pytest.mark.parametrize(
    "config",
    [
        VerifyConfig(n=1, users=1, trials=1),
        VerifyConfig(n=4, users=0, trials=1),
        VerifyConfig(n=4, users=1, trials=0),
        VerifyConfig(n=4, users=1, trials=1, tol=0.0),
        VerifyConfig(n=4, users=1, trials=1, seed=-1),
    ],
)
def test_config_validation(config: VerifyConfig) -> None:
    with pytest.raises(ValueError):  # NOQA: PT011
        run_verify(config)


def test_outcome_tolerances_and_failures() -> None:
    outcome = VerifyOutcome(VerifyConfig(n=4, users=1, trials=1, tol=1e-9, grad_tol=1e-6))
    outcome.record(Residual("eigen_identity", 1e-12, 0, 0, 0))
    outcome.record(Residual("gradient_params", 1e-7, 0, 0, 0))
    assert outcome.passed

    outcome.record(Residual("eigen_identity", 1e-8, 3, 1, 0))
    assert [r.seed for r in outcome.failures()] == [3]
    assert outcome.worst_overall().check == "eigen_identity"
    assert "seed 3" in outcome.worst_overall().describe()
    assert "users (1, 0)" in outcome.worst_overall().describe()


def test_outcome_keeps_nan() -> None:
    outcome = VerifyOutcome(VerifyConfig(n=4, users=1, trials=1))
    outcome.record(Residual("msq_agreement", 0.0, 0))
    outcome.record(Residual("msq_agreement", math.nan, 1))
    assert not outcome.passed
    assert outcome.worst_overall().seed == 1


def test_relative_error() -> None:
    assert relative_error(0.0, 0.0) == 0.0
    assert relative_error(1.0, 2.0) == pytest.approx(0.5)
