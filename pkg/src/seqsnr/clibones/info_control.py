# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import importlib
from dataclasses import dataclass
from importlib import metadata
from typing import TYPE_CHECKING

from loguru import logger

if TYPE_CHECKING:
    import argparse


@dataclass
class InfoControl:
    """Add the informational options (--version, --longhelp) to a CLI application."""

    DEFAULT_VERSION = "Unknown"

    app_package: str | None = None

    def add_arguments(self, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        group = parser.add_argument_group(title="Informational Commands")
        group.add_argument("-v", "--version", action="store_true", help="Show the application's version.")
        group.add_argument("--longhelp", action="store_true", help="Show the package documentation.")
        return parser

    def setup(self, settings: argparse.Namespace) -> None:
        """Log the requested information; either option ends the run (quick_exit)."""
        if settings.longhelp and self.app_package:
            logger.info(self.load_longhelp())
            settings.quick_exit = True

        if settings.version and not settings.quick_exit:
            logger.info(f"Version {self.load_version()}")
            settings.quick_exit = True

    def load_version(self) -> str:
        """
        The installed distribution's version, else the package's ``__version__``, else DEFAULT_VERSION.
        """
        if not self.app_package:
            return InfoControl.DEFAULT_VERSION
        try:
            return metadata.version(self.app_package)
        except (ValueError, metadata.PackageNotFoundError):
            logger.debug(f"No distribution metadata for {self.app_package}")
        try:
            return str(importlib.import_module(self.app_package).__version__)
        except (ImportError, AttributeError, TypeError, ValueError):
            logger.warning(f"Could not import {self.app_package}.__version__")
        return InfoControl.DEFAULT_VERSION

    def load_longhelp(self) -> str:
        errmsg = f"Long Help not available.  Please add docstring to {self.app_package}.__init__.py"
        try:
            app_module = importlib.import_module(str(self.app_package))
        except (ImportError, TypeError):
            return errmsg
        return app_module.__doc__ or errmsg
