# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
A context manager base class that optionally reads a config file then uses its values as defaults
for command line argument parsing.

Derive from it and implement **add_parent_parsers**, **add_arguments** and **validate_arguments**.
The base class contributes:

* config file support (--config FILE, --save-config, --save-config-as FILE); the default config file
  is ``~/.config/<app_package>.toml`` and only the persist keys are read from or written to it,

* --version and --longhelp (the docstring of ``<app_package>/__init__.py``),

* loguru setup from --loglevel LEVEL, --quiet, --debug and --logfile FILE.
"""

from __future__ import annotations

import argparse
import sys
from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING, Any

from seqsnr.clibones.config_file import ConfigFile
from seqsnr.clibones.info_control import InfoControl
from seqsnr.clibones.logger_control import LoggerControl

if TYPE_CHECKING:
    from collections.abc import Sequence


class ApplicationSettings(ABC):
    """
    Usage::

        with MySettings(args) as settings:
            if settings.quick_exit:
                return 0
            ...

    Usage errors (argparse or validate_arguments) exit through ``parser.error`` with status 2.
    """

    def __init__(
        self,
        app_name: str,
        app_package: str,
        app_description: str,
        default_config_file: Path | None = None,
        args: Sequence[str] | None = None,
    ) -> None:
        """
        :param app_name: the program name shown in usage messages
        :param app_package: the package name; also the config file section
        :param app_description: shown by --help
        :param default_config_file: the config file used without --config
        :param args: the arguments to parse; None parses sys.argv
        """
        self.__app_name = app_name
        self.__app_package = app_package
        self.__app_description = app_description
        self.__default_config_file = default_config_file or Path.home() / ".config" / f"{app_package}.toml"
        self.__args: Sequence[str] = sys.argv[1:] if args is None else args

        self._parser: argparse.ArgumentParser | None = None
        self._settings: argparse.Namespace | None = None
        self._remaining_argv: list[str] = []
        self._persist_keys: set[str] = set()
        self._config_file = ConfigFile()
        self.logger_control = LoggerControl()
        self.info_control = InfoControl(app_package=app_package)

    @abstractmethod
    def add_parent_parsers(self) -> list[argparse.ArgumentParser]:  # pragma: no cover
        """:return: parent parsers for the main parser"""
        return []

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser, defaults: dict[str, Any]) -> None:  # pragma: no cover
        """
        Add the application's arguments (and sub-commands) to the parser.

        :param parser: the main parser, config, info and logging options already added
        :param defaults: the persisted defaults loaded from the config file
        """
        return

    @abstractmethod
    def validate_arguments(
        self, settings: argparse.Namespace, remaining_argv: list[str]
    ) -> list[str]:  # pragma: no cover
        """
        Check the parsed settings; may normalize them in place.

        :return: error messages, empty when valid
        """
        return []

    def add_persist_keys(self, keys: set[str]) -> None:
        self._persist_keys |= keys

    def parse(self, args: Sequence[str]) -> tuple[argparse.ArgumentParser, argparse.Namespace, list[str]]:
        """
        Parse the config file options, load the defaults they select, then parse the command line.

        :return: the parser, the settings and any unrecognized arguments
        """
        config_file = ConfigFile(
            section_name=self.__app_package,
            persist_keys=self._persist_keys,
            default_config_file=self.__default_config_file,
        )
        try:
            dash_config_parser, remaining_args, defaults = config_file.parser(args=args)
        except ValueError as ex:
            argparse.ArgumentParser(self.__app_name).error(str(ex))
        self._config_file = config_file

        parser = argparse.ArgumentParser(
            self.__app_name,
            parents=[dash_config_parser, *self.add_parent_parsers()],
            description=self.__app_description,
        )
        self.info_control.add_arguments(parser=parser)
        self.logger_control.add_arguments(parser=parser)
        self.add_arguments(parser=parser, defaults=defaults)
        if defaults:
            parser.set_defaults(**defaults)

        settings, leftover_args = parser.parse_known_args(args=remaining_args)
        settings.quick_exit = False
        settings.config_file = config_file.config_filepath
        return parser, settings, leftover_args

    def __enter__(self) -> argparse.Namespace:
        """:return: the validated settings namespace"""
        self._parser, self._settings, self._remaining_argv = self.parse(args=self.__args)

        self.logger_control.setup(self._settings)
        self.info_control.setup(self._settings)

        if not self._settings.quick_exit:
            error_messages = self._check_leftovers(self._remaining_argv) + self.validate_arguments(
                self._settings, self._remaining_argv
            )
            for error_msg in error_messages:
                self._parser.error(error_msg)

            # saved after validation so normalized values are what gets persisted
            try:
                self._config_file.save_config_file(vars(self._settings))
            except ValueError as ex:
                self._parser.error(str(ex))
        self._settings.parser = self._parser
        return self._settings

    def __exit__(self, *exc: object) -> None:  # NOQA: B027
        """context manager exit"""

    @staticmethod
    def _check_leftovers(remaining_argv: list[str]) -> list[str]:
        if remaining_argv:
            return [f"unrecognized arguments: {' '.join(remaining_argv)}"]
        return []
