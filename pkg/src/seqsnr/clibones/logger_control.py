# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import sys
from typing import TYPE_CHECKING, Any

from loguru import logger
from pathvalidate.argparse import validate_filepath_arg

if TYPE_CHECKING:
    import argparse
    from collections.abc import Sequence

# full colorized format, used for the log file
LOGURU_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)
# no timestamp
LOGURU_MEDIUM_FORMAT = "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
# just the colorized message, used on the console
LOGURU_SHORT_FORMAT = "<level>{message}</level>"

VALID_LOG_LEVELS: Sequence[str] = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class LoggerControl:
    """Add logger control arguments (--loglevel, --debug, --quiet, --logfile) to a CLI application."""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        group = parser.add_argument_group(title="Logging Options")
        group.add_argument(
            "--loglevel",
            default="INFO",
            choices=VALID_LOG_LEVELS,
            help='Console and log file verbosity (default: "INFO").',
        )
        group.add_argument("--debug", action="store_true", help='Same as "--loglevel DEBUG".')
        group.add_argument(
            "--quiet",
            action="store_true",
            help='Only errors and critical messages.  Overrides "--loglevel" and "--debug".',
        )
        group.add_argument(
            "--logfile",
            type=validate_filepath_arg,
            help="Also log, with timestamps and source locations, to this file.",
        )

    @staticmethod
    def resolve_level(settings: dict[str, Any]) -> tuple[str, list[str]]:
        """
        The effective level: --quiet beats --debug beats --loglevel.

        :return: the level and any error messages about the configured one
        """
        errors: list[str] = []
        level = settings.get("loglevel") or "INFO"
        if level not in VALID_LOG_LEVELS:
            errors.append(f"Invalid log level {level}, should be one of the following: {VALID_LOG_LEVELS}")
            level = "INFO"
        if settings.get("debug"):
            level = "DEBUG"
        if settings.get("quiet"):
            level = "ERROR"
        return level, errors

    def setup(self, settings: argparse.Namespace) -> None:
        """Replace every loguru sink with the console sink and the optional log file sink."""
        settings_dict = vars(settings)
        level, errors = self.resolve_level(settings_dict)
        settings.loglevel = level

        logger.remove(None)
        logger.add(sys.stdout, level=level, format=LOGURU_SHORT_FORMAT)

        logfile = settings_dict.get("logfile")
        if logfile:
            try:
                logger.add(logfile, level=level, format=LOGURU_FORMAT)
            except OSError as ex:
                errors.append(f"Could not open logfile ({logfile}): {ex}")

        for msg in errors:
            logger.error(msg)
