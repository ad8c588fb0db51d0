# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import tempfile
from pathlib import Path

import pytest

from seqsnr.clibones.config_file import ConfigFile

# dummy test data, making sure to have a dict in a dict
data = {
    "Section1": {
        "field1": "value1",
        "field2": "",  # empty strings are OK
        "threads": 4,
    },
    "Section2": {  # empty dicts are OK
    },
}


def test_config_file_save_load() -> None:
    """round trips a known set of data by saving it, then verifying it is the same when loaded."""
    config_file = ConfigFile()
    for extension in config_file.supported_extensions:
        with tempfile.TemporaryDirectory() as tmp:
            filepath = Path(tmp) / f"test_data{extension}"
            config_file.save(filepath=filepath, config_dict=data)
            config_dict = config_file.load(filepath=filepath)
            assert data == config_dict


def test_invalid_config_file_load() -> None:
    """Loading text that is neither TOML nor JSON raises ValueError."""
    config_file = ConfigFile()
    for extension in config_file.supported_extensions:
        with tempfile.TemporaryDirectory() as tmp:
            filepath = Path(tmp) / f"test_data{extension}"
            filepath.write_text("spreading sequences = [ not closed\n{: garbage")
            with pytest.raises(ValueError):  # NOQA: PT011
                config_file.load(filepath=filepath)


def test_json_config_must_be_object() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        filepath = Path(tmp) / "list.json"
        filepath.write_text("[1, 2, 3]")
        with pytest.raises(ValueError, match="not a dictionary"):
            ConfigFile().load(filepath=filepath)


def test_missing_config_file_load() -> None:
    with tempfile.TemporaryDirectory() as tmp, pytest.raises(FileNotFoundError):
        ConfigFile().load(filepath=Path(tmp) / "missing.toml")


def test_invalid_config_file_save() -> None:
    """
    Try saving an invalid config data to verify a ValueError is raised.
    """
    config_file = ConfigFile()
    for extension in config_file.supported_extensions:
        with tempfile.TemporaryDirectory() as tmp:
            filepath = Path(tmp) / f"test_data{extension}"
            with pytest.raises(ValueError):  # NOQA: PT011
                # intentionally using wrong type of data to force ValueError
                # noinspection PyTypeChecker
                config_file.save(filepath=filepath, config_dict="not a dict")  # type: ignore[arg-type]


def test_unsupported_config_file_format_save() -> None:
    """test saving with an unsupported config file extension."""
    config_file = ConfigFile()
    with pytest.raises(ValueError), tempfile.TemporaryDirectory() as tmp:  # NOQA: PT011
        config_file.save(filepath=Path(tmp) / "test_data.unsupported", config_dict=data)


def test_unsupported_config_file_format_load() -> None:
    """test loading with an unsupported config file extension."""
    config_file = ConfigFile()

    with pytest.raises(ValueError), tempfile.TemporaryDirectory() as tmp:  # NOQA: PT011
        config_file.load(filepath=Path(tmp) / "test_data.unsupported")


def test_missing_file_extension_save() -> None:
    """test saving without a config file extension."""
    config_file = ConfigFile()
    with pytest.raises(ValueError), tempfile.TemporaryDirectory() as tmp:  # NOQA: PT011
        config_file.save(filepath=Path(tmp) / "test_data", config_dict=data)


def test_parser_reads_only_persist_keys() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        filepath = Path(tmp) / "seqsnr.toml"
        filepath.write_text('[seqsnr]\nloglevel = "DEBUG"\nthreads = 3\nunknown = 1\n\n[other]\nthreads = 9\n')
        config_file = ConfigFile(section_name="seqsnr", persist_keys={"loglevel", "threads"})
        _, remaining, defaults = config_file.parser(["--config", str(filepath), "verify", "--n", "4"])
        assert remaining == ["verify", "--n", "4"]
        assert defaults == {"loglevel": "DEBUG", "threads": 3}
        assert config_file.config_filepath == filepath
        assert config_file.save_config_filepath is None


def test_parser_without_config_file() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        config_file = ConfigFile(section_name="seqsnr", default_config_file=Path(tmp) / "absent.toml")
        _, _, defaults = config_file.parser(["--save-config"])
        assert defaults == {}
        assert config_file.save_config_filepath == Path(tmp) / "absent.toml"


def test_save_config_file_skips_unset() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        filepath = Path(tmp) / "saved.json"
        config_file = ConfigFile(section_name="seqsnr", persist_keys={"loglevel", "threads", "debug"})
        config_file.parser(["--save-config-as", str(filepath)])
        config_file.save_config_file({"loglevel": "INFO", "threads": None, "debug": False, "n": 8})
        assert config_file.load(filepath) == {"seqsnr": {"debug": False, "loglevel": "INFO"}}
