# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
main entry point for the seqsnr command line.
"""

from __future__ import annotations

import sys

from seqsnr.cli import run
from seqsnr.settings import Settings, run_config_from_settings


def main(args: list[str] | None = None) -> int:
    """The command line application's main function; returns the exit code."""
    with Settings(args=args) as settings:
        # --version and --longhelp finish during parsing
        if settings.quick_exit:
            return 0
        return run(run_config_from_settings(settings))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main(args=None))
