# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
Command execution: an immutable RunConfig in, an exit code (and report files) out.

Exit codes: 0 success, 1 a verification or gradient check failed, 2 bad input.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Any

from loguru import logger

from seqsnr.clibones.atomic_write import atomic_write_text
from seqsnr.correlation import correlation_profile, profile_to_csv
from seqsnr.gradient import FD_STEP, check_param_gradient, check_sequence_gradient, params_from_set
from seqsnr.report import build_reports, metadata_comment_lines, report_metadata, reports_to_csv, reports_to_json
from seqsnr.seqset import Family, GeneratorSpec, generate, load, save
from seqsnr.snr_model import load_channel
from seqsnr.verify import VerifyConfig, run_verify

if TYPE_CHECKING:
    from collections.abc import Callable

EXIT_SUCCESS = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


class Command(str, Enum):
    GENERATE = "generate"
    ANALYZE = "analyze"
    PROFILE = "profile"
    VERIFY = "verify"
    GRAD_CHECK = "grad-check"


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class RunConfig:
    """Everything one command needs.  Fields a command does not use keep their defaults."""

    command: Command
    input_path: Path | None = None
    channel_path: Path | None = None
    output_path: Path | None = None
    family: Family = Family.RANDOM_PHASE
    n: int = 8
    users: int = 1
    root: int = 1
    seed: int | None = None
    trials: int = 20
    tol: float = 1e-9
    grad_tol: float = 1e-6
    eps: float = FD_STEP
    user: int = 0
    pair: tuple[int, int] = (0, 0)
    report_format: ReportFormat = ReportFormat.JSON
    threads: int = 1

    def validate(self) -> None:
        """raises: ValueError"""
        required: dict[Command, tuple[str, ...]] = {
            Command.GENERATE: ("output_path",),
            Command.ANALYZE: ("input_path", "channel_path", "output_path"),
            Command.PROFILE: ("input_path", "output_path"),
            Command.GRAD_CHECK: ("input_path", "channel_path"),
        }
        for name in required.get(self.command, ()):
            if getattr(self, name) is None:
                errmsg = f"{self.command.value}: {name.removesuffix('_path')} path is required"
                raise ValueError(errmsg)
        if self.output_path is not None:
            for name in ("input_path", "channel_path"):
                other = getattr(self, name)
                if other is not None and Path(other).resolve() == Path(self.output_path).resolve():
                    errmsg = f"The output path {self.output_path} is also the {name.removesuffix('_path')} path"
                    raise ValueError(errmsg)
        if not (self.tol > 0 and self.grad_tol > 0 and self.eps > 0):
            errmsg = f"Tolerances and step must be positive: tol={self.tol}, grad_tol={self.grad_tol}, eps={self.eps}"
            raise ValueError(errmsg)
        if self.threads < 1:
            errmsg = f"Thread count must be at least 1, got {self.threads}"
            raise ValueError(errmsg)

    def as_dict(self) -> dict[str, Any]:
        """The config as JSON-ready values, for report metadata."""
        result: dict[str, Any] = {}
        for item in fields(self):
            name, value = item.name, getattr(self, item.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple):
                value = list(value)
            result[name] = value
        # the thread count never changes the output
        del result["threads"]
        return result


def _require(path: Path | None) -> Path:
    if path is None:  # pragma: no cover
        errmsg = "Missing path"
        raise ValueError(errmsg)
    return path


def run_generate(config: RunConfig) -> int:
    spec = GeneratorSpec(config.family, config.n, root=config.root, seed=config.seed or 0)
    seq_set = generate(spec, config.users)
    output = _require(config.output_path)
    save(seq_set, output)
    logger.info(f'Wrote {config.users} {config.family.value} sequences of length {config.n} to "{output}"')
    return EXIT_SUCCESS


def run_analyze(config: RunConfig) -> int:
    seq_set = load(_require(config.input_path))
    channel = load_channel(_require(config.channel_path))
    reports = build_reports(seq_set, channel, threads=config.threads)
    metadata = report_metadata(config.as_dict(), seed=config.seed)
    if config.report_format is ReportFormat.CSV:
        text = reports_to_csv(reports, metadata)
    else:
        text = reports_to_json(reports, metadata)
    output = _require(config.output_path)
    atomic_write_text(output, text)
    for report in reports:
        logger.info(f"user {report.user}: SNR >= {report.snr_lower:.6g} ({report.snr_lower_db:.3f} dB)")
    logger.info(f'Wrote the report to "{output}"')
    return EXIT_SUCCESS


def run_profile(config: RunConfig) -> int:
    seq_set = load(_require(config.input_path))
    i, k = config.pair
    for user in (i, k):
        if not 0 <= user < seq_set.k_users:
            errmsg = f"User index {user} out of range for K={seq_set.k_users}"
            raise ValueError(errmsg)
    profile = correlation_profile(seq_set, i, k)
    metadata = report_metadata(config.as_dict(), seed=config.seed)
    output = _require(config.output_path)
    atomic_write_text(output, metadata_comment_lines(metadata) + profile_to_csv(profile))
    logger.info(f'Wrote the correlation profile of users ({i}, {k}) to "{output}"')
    return EXIT_SUCCESS


def run_verify_command(config: RunConfig) -> int:
    verify_config = VerifyConfig(
        n=config.n,
        users=config.users,
        trials=config.trials,
        seed=config.seed or 0,
        tol=config.tol,
        grad_tol=config.grad_tol,
        eps=config.eps,
        threads=config.threads,
    )
    outcome = run_verify(verify_config)
    failures = outcome.failures()
    for failure in failures:
        logger.error(f"FAILED {failure.describe()} (tol {outcome.tolerance(failure.check):g})")
    worst = outcome.worst_overall()
    if failures:
        logger.error(f"worst {worst.describe()}")
        return EXIT_CHECK_FAILED
    logger.info(f"All {len(outcome.worst)} checks passed over {config.trials} trials; worst {worst.describe()}")
    return EXIT_SUCCESS


def run_grad_check(config: RunConfig) -> int:
    seq_set = load(_require(config.input_path))
    channel = load_channel(_require(config.channel_path))
    channel.covers(seq_set.k_users)
    i = config.user
    if not 0 <= i < seq_set.k_users:
        errmsg = f"User index {i} out of range for K={seq_set.k_users}"
        raise ValueError(errmsg)

    params = params_from_set(seq_set)
    worst = 0.0
    failed = False
    for j in range(seq_set.k_users):
        for space, error in (
            ("parameter", check_param_gradient(params, i, channel, j, config.eps)),
            ("sequence", check_sequence_gradient(seq_set, i, channel, j, config.eps)),
        ):
            worst = max(worst, error)
            if not error <= config.grad_tol:
                failed = True
                logger.error(f"FAILED {space} gradient of user {i} wrt {j}: error {error:.3e} > {config.grad_tol:g}")
            else:
                logger.debug(f"{space} gradient of user {i} wrt user {j}: error {error:.3e}")
    logger.info(f"worst gradient error for user {i}: {worst:.3e} (tol {config.grad_tol:g})")
    return EXIT_CHECK_FAILED if failed else EXIT_SUCCESS


COMMANDS: dict[Command, Callable[[RunConfig], int]] = {
    Command.GENERATE: run_generate,
    Command.ANALYZE: run_analyze,
    Command.PROFILE: run_profile,
    Command.VERIFY: run_verify_command,
    Command.GRAD_CHECK: run_grad_check,
}


def run(config: RunConfig) -> int:
    """
    Execute one command.

    :param config: the validated-on-entry run configuration
    :return: the process exit code
    """
    try:
        config.validate()
        return COMMANDS[config.command](config)
    except (ValueError, IndexError, OSError) as ex:
        # SequenceSetError and ChannelError are ValueErrors
        logger.error(str(ex))
        return EXIT_INPUT_ERROR
