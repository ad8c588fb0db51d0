# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
Persisted CLI defaults in TOML (.toml, .tml) or JSON (.json) files.

Only the persist keys of one section are read back as argparse defaults; ``--save-config`` and
``--save-config-as FILE`` write the current values of those keys into that section.
"""

from __future__ import annotations

import argparse
import json
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any

import tomlkit
import tomlkit.exceptions

from seqsnr.clibones.atomic_write import atomic_write_text

if TYPE_CHECKING:
    from collections.abc import Sequence

Loader = Callable[[str], dict[str, Any]]
Dumper = Callable[[dict[str, Any]], str]


def _load_toml(text: str) -> dict[str, Any]:
    data: dict[str, Any] = tomlkit.loads(text).value
    return data


def _load_json(text: str) -> dict[str, Any]:
    data = json.loads(text)
    if not isinstance(data, dict):
        errmsg = "JSON config data is not a dictionary"
        raise ValueError(errmsg)
    return data


def _dump_json(data: dict[str, Any]) -> str:
    return json.dumps(data, indent=2) + "\n"


FORMATS: dict[str, tuple[Loader, Dumper]] = {
    ".toml": (_load_toml, tomlkit.dumps),
    ".tml": (_load_toml, tomlkit.dumps),
    ".json": (_load_json, _dump_json),
}


@dataclass
class ConfigFile:
    """
    Reading and writing config files of the supported formats.
    Converts any exceptions in load or save to ValueError, except a missing file on load.

    Usage::

        config_file = ConfigFile(section_name="seqsnr", persist_keys={"loglevel"})
        dash_config_parser, remaining_args, defaults = config_file.parser(args)
    """

    section_name: str = "settings"
    persist_keys: set[str] = field(default_factory=set)
    default_config_file: Path | None = None
    config_filepath: Path | None = None
    save_config_filepath: Path | None = None

    @property
    def supported_extensions(self) -> list[str]:
        """The supported extensions, each with its leading dot."""
        return list(FORMATS)

    @staticmethod
    def _format(filepath: Path) -> tuple[Loader, Dumper]:
        try:
            return FORMATS[filepath.suffix]
        except KeyError as ex:
            errmsg = f"Unsupported config file format: {filepath}"
            raise ValueError(errmsg) from ex

    def load(self, filepath: Path | None) -> dict[str, Any]:
        """
        Load a config file into a dictionary; None loads as empty.

        raises: ValueError, FileNotFoundError
        """
        if filepath is None:
            return {}
        loader, _ = self._format(filepath)
        text = filepath.read_text(encoding="utf-8")
        try:
            return loader(text)
        except (json.JSONDecodeError, tomlkit.exceptions.TOMLKitError, TypeError) as ex:
            errmsg = f"The config file ({filepath}) could not be loaded: {ex}"
            raise ValueError(errmsg) from ex

    def save(self, filepath: Path, config_dict: dict[str, Any]) -> None:
        """
        Save a dictionary in the format given by the file's extension.

        raises: ValueError
        """
        if not isinstance(config_dict, dict):
            errmsg = f"The config file ({filepath}) must be a dictionary"  # type: ignore[unreachable]
            raise ValueError(errmsg)
        _, dumper = self._format(filepath)
        try:
            text = dumper(config_dict)
        except (TypeError, ValueError, tomlkit.exceptions.TOMLKitError) as ex:
            errmsg = f"Cannot convert the data to the format of the config file {filepath}: {ex}"
            raise ValueError(errmsg) from ex
        atomic_write_text(filepath, text)

    def parser(self, args: Sequence[str]) -> tuple[argparse.ArgumentParser, list[str], dict[str, Any]]:
        """Parse the config options off ``args`` and load the defaults they select."""
        config_help = f"Configuration file (default: {self.default_config_file})"
        dash_config_parser = argparse.ArgumentParser(add_help=False)
        dash_config_parser.add_argument("--config", metavar="FILE", help=config_help)
        dash_config_parser.add_argument(
            "--save-config", action="store_true", help="Save the persisted options to the config file"
        )
        dash_config_parser.add_argument("--save-config-as", metavar="FILE", help="Save the persisted options to FILE")
        parse_args, remaining_args = dash_config_parser.parse_known_args(args=args)

        self.config_filepath = Path(parse_args.config) if parse_args.config else self.default_config_file
        if parse_args.save_config:
            self.save_config_filepath = self.config_filepath
        if parse_args.save_config_as:
            self.save_config_filepath = Path(parse_args.save_config_as)

        defaults: dict[str, Any] = {}
        try:
            data = self.load(self.config_filepath)
        except FileNotFoundError:
            # no config file means no defaults
            data = {}
        section = data.get(self.section_name, {})
        if isinstance(section, dict):
            defaults = {key: value for key, value in section.items() if key in self.persist_keys}
        return dash_config_parser, remaining_args, defaults

    def save_config_file(self, settings: dict[str, Any]) -> None:
        """Write the persist keys of ``settings`` when a save was requested.  Unset (None) values are skipped."""
        if self.save_config_filepath is None:
            return
        data = {key: settings[key] for key in sorted(self.persist_keys) if settings.get(key) is not None}
        self.save(filepath=self.save_config_filepath, config_dict={self.section_name: data})
