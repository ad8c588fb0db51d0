# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import os
from pathlib import Path
from typing import TYPE_CHECKING, Any

from pathvalidate.argparse import validate_filepath_arg

from seqsnr.cli import Command, ReportFormat, RunConfig
from seqsnr.clibones.application_settings import ApplicationSettings
from seqsnr.gradient import FD_STEP
from seqsnr.seqset import Family

if TYPE_CHECKING:
    import argparse
    from collections.abc import Sequence

THREADS_ENV = "SEQSNR_THREADS"
GRADIENT_TOL_HELP = (
    "Gradient tolerance on max|analytic - numeric| / max|analytic|, the largest deviation relative to the "
    "largest analytic component, not a per-component ratio (default: %(default)s)."
)


def parse_threads(value: Any, source: str) -> tuple[int | None, str | None]:
    """:return: the thread count, or None and an error message naming the source"""
    try:
        threads = int(value)
    except (TypeError, ValueError):
        threads = 0
    if isinstance(value, bool) or threads < 1 or str(threads) != str(value).strip():
        return None, f"{source} must be an integer >= 1, got {value!r}"
    return threads, None


class Settings(ApplicationSettings):
    """The seqsnr command line: global logging/config options plus one sub-command.

    Usage::

        with Settings(args) as settings:
            if not settings.quick_exit:
                exit_code = run(run_config_from_settings(settings))
    """

    __project_name: str = "seqsnr"
    """The program name"""

    __project_package: str = "seqsnr"
    """The package this settings belongs to; also the config file section."""

    __project_description: str = (
        "Worst-case SNR lower bounds, mean-square correlation indices and their gradients for "
        "CDMA spreading-sequence sets, each checked against a brute-force oracle."
    )

    def __init__(self, args: Sequence[str] | None = None) -> None:
        super().__init__(
            app_name=Settings.__project_name,
            app_package=Settings.__project_package,
            app_description=Settings.__project_description,
            args=args,
        )
        self.add_persist_keys({"loglevel", "debug", "threads"})

    def add_parent_parsers(self) -> list[argparse.ArgumentParser]:
        return []

    def add_arguments(self, parser: argparse.ArgumentParser, defaults: dict[str, Any]) -> None:  # noqa: ARG002
        """
        The global --threads option and the sub-commands.

        :param parser: the main parser
        :param defaults: persisted defaults; applied by the caller after this returns
        """
        parser.add_argument(
            "--threads",
            type=int,
            default=None,
            help=f"Most worker threads (default: config file, then ${THREADS_ENV}, then 1).",
        )
        commands = parser.add_subparsers(dest="command", title="commands", metavar="COMMAND")

        generate = commands.add_parser(Command.GENERATE.value, help="Write a generated sequence set.")
        generate.add_argument("--family", choices=[f.value for f in Family], default=Family.RANDOM_PHASE.value)
        generate.add_argument("--n", type=int, required=True, help="Sequence length N (>= 2).")
        generate.add_argument("--users", type=int, default=1, help="Number of users K (default: %(default)s).")
        generate.add_argument("--seed", type=int, default=0, help="Unsigned 64-bit seed (default: %(default)s).")
        generate.add_argument("--root", type=int, default=1, help="Zadoff-Chu root, coprime to N.")
        generate.add_argument("--out", dest="output_path", type=validate_filepath_arg, required=True)

        analyze = commands.add_parser(Command.ANALYZE.value, help="Write the per-user SNR report.")
        analyze.add_argument("--input", dest="input_path", type=validate_filepath_arg, required=True)
        analyze.add_argument("--channel", dest="channel_path", type=validate_filepath_arg, required=True)
        analyze.add_argument("--out", dest="output_path", type=validate_filepath_arg, required=True)
        analyze.add_argument(
            "--format",
            dest="report_format",
            choices=[f.value for f in ReportFormat],
            default=None,
            help="Report format (default: csv for a .csv output file, else json).",
        )
        analyze.add_argument("--seed", type=int, default=None, help="Seed of the input set, recorded in the report.")

        profile = commands.add_parser(Command.PROFILE.value, help="Write the correlations of a user pair as CSV.")
        profile.add_argument("--input", dest="input_path", type=validate_filepath_arg, required=True)
        profile.add_argument("--pair", type=int, nargs=2, metavar=("I", "K"), default=[0, 0])
        profile.add_argument("--out", dest="output_path", type=validate_filepath_arg, required=True)

        verify = commands.add_parser(Command.VERIFY.value, help="Run the oracle and identity suite.")
        verify.add_argument("--n", type=int, default=8, help="Sequence length N (default: %(default)s).")
        verify.add_argument("--users", type=int, default=3, help="Number of users K (default: %(default)s).")
        verify.add_argument("--trials", type=int, default=20, help="Seeded trials (default: %(default)s).")
        verify.add_argument("--seed", type=int, default=0, help="Seed of the first trial (default: %(default)s).")
        verify.add_argument("--tol", type=float, default=1e-9, help="Identity tolerance (default: %(default)s).")
        verify.add_argument("--grad-tol", type=float, default=1e-6, help=GRADIENT_TOL_HELP)
        verify.add_argument("--eps", type=float, default=FD_STEP, help="Difference step (default: %(default)s).")

        grad = commands.add_parser(Command.GRAD_CHECK.value, help="Check gradients by finite differences.")
        grad.add_argument("--input", dest="input_path", type=validate_filepath_arg, required=True)
        grad.add_argument("--channel", dest="channel_path", type=validate_filepath_arg, required=True)
        grad.add_argument("--user", type=int, default=0, help="User whose bound is differentiated.")
        grad.add_argument("--eps", type=float, default=FD_STEP, help="Difference step (default: %(default)s).")
        grad.add_argument("--tol", type=float, default=1e-6, help=GRADIENT_TOL_HELP)

    def validate_arguments(self, settings: argparse.Namespace, remaining_argv: list[str]) -> list[str]:  # noqa: ARG002
        """
        Require a command and resolve the thread cap: --threads, config file, $SEQSNR_THREADS, 1.

        :return: a list of error messages or an empty list
        """
        errors: list[str] = []
        if settings.command is None:
            errors.append(f"a command is required, one of: {', '.join(c.value for c in Command)}")

        threads: int | None = 1
        if settings.threads is not None:
            threads, error = parse_threads(settings.threads, "--threads (or the config file threads)")
        elif THREADS_ENV in os.environ:
            threads, error = parse_threads(os.environ[THREADS_ENV], THREADS_ENV)
        else:
            error = None
        if error:
            errors.append(error)
        settings.threads = threads
        return errors


def run_config_from_settings(settings: argparse.Namespace) -> RunConfig:
    """Freeze the parsed settings of one command into a RunConfig."""
    command = Command(settings.command)
    values = vars(settings)

    def path(name: str) -> Path | None:
        value = values.get(name)
        return None if value is None else Path(value)

    output_path = path("output_path")
    report_format = values.get("report_format")
    if report_format is None:
        report_format = "csv" if output_path is not None and output_path.suffix.lower() == ".csv" else "json"

    tol = values.get("tol", 1e-9)
    return RunConfig(
        command=command,
        input_path=path("input_path"),
        channel_path=path("channel_path"),
        output_path=output_path,
        family=Family(values.get("family", Family.RANDOM_PHASE.value)),
        n=values.get("n", 8),
        users=values.get("users", 1),
        root=values.get("root", 1),
        seed=values.get("seed"),
        trials=values.get("trials", 20),
        # grad-check's --tol is its gradient tolerance
        tol=1e-9 if command is Command.GRAD_CHECK else tol,
        grad_tol=tol if command is Command.GRAD_CHECK else values.get("grad_tol", 1e-6),
        eps=values.get("eps", FD_STEP),
        user=values.get("user", 0),
        pair=tuple(values.get("pair", (0, 0))),  # type: ignore[arg-type]
        report_format=ReportFormat(report_format),
        threads=settings.threads,
    )
