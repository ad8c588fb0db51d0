# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""# seqsnr

Scores sets of complex spreading sequences for asynchronous CDMA over worst-case Rician WSSUS fading.

For every user of a sequence set, given the per-user channel constants (gamma, C, M) and the system
constants (P, T, N0), seqsnr computes the closed-form worst-case interference and fading variances,
the resulting SNR lower bound, the mean-square auto- and crosscorrelation indices R_AC and R_CC and
the bounds they put on the SNR.  The closed forms are evaluated through the periodic/odd spectral
decomposition of the sequences, so the bracket of the bound is a smooth function of the spectral
parameters; its analytic gradient is available for sequence design.

Every closed form has a brute-force counterpart (bit-pair enumeration plus exact chip integration)
and the `verify` command checks the two against each other on seeded random sets.

Commands:

* `generate`   write a sequence set (all_ones, random_phase, random_binary, zadoff_chu)
* `analyze`    write the per-user report (JSON or CSV) for a set and a channel file
* `profile`    write the aperiodic, periodic and odd correlations of a user pair as CSV
* `verify`     run the oracle and identity suite on seeded random sets
* `grad-check` compare the analytic gradients with central differences

Exit codes: 0 success, 1 verification or gradient check failure, 2 input error.
The environment variable SEQSNR_THREADS caps the worker threads.
"""

from __future__ import annotations

from importlib import metadata
from pathlib import Path

import tomlkit

try:
    # this assumes running in an installed package
    __version__ = metadata.version(__package__)
except metadata.PackageNotFoundError:
    # development checkout: src/seqsnr/__init__.py with pyproject.toml two levels above src
    pyproject_path = Path(__file__).parent.parent.parent / "pyproject.toml"
    with pyproject_path.open() as fp:
        data = tomlkit.loads(fp.read()).value
        __version__ = data["tool"]["poetry"]["version"] + "dev"
