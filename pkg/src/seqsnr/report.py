# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
Per-user analysis reports and their JSON and CSV renderings.

Both renderings carry the tool name, version, seed and run configuration; CSV puts them in
leading '#' lines.  Output depends only on the inputs, never on the thread count.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from typing import TYPE_CHECKING, Any

from loguru import logger

from seqsnr import __version__
from seqsnr.correlation import format_float
from seqsnr.mean_square import msq_spectral, sandwich_bounds
from seqsnr.snr_model import SnrReport, fading_variance_bound, interference_variance, s_sums, snr_lower_bound, to_db
from seqsnr.spectral import spectral_set

if TYPE_CHECKING:
    from seqsnr.mean_square import MsqIndices
    from seqsnr.seqset import SequenceSet
    from seqsnr.snr_model import ChannelProfile
    from seqsnr.spectral import SpectralCoefficients

TOOL_NAME = "seqsnr"

REPORT_COLUMNS: tuple[str, ...] = (
    "user",
    "var_interference",
    "var_fading_bound",
    "snr_lower",
    "snr_lower_db",
    "r_ac",
    "r_cc",
    "sandwich_lower",
    "sandwich_upper",
)


def user_report(
    seq_set: SequenceSet,
    i: int,
    channel: ChannelProfile,
    coeffs: list[SpectralCoefficients],
    indices: MsqIndices,
) -> SnrReport:
    snr = snr_lower_bound(seq_set, i, channel, coeffs=coeffs)
    lower, upper = sandwich_bounds(seq_set, i, channel, coeffs=coeffs)
    return SnrReport(
        user=i,
        s_sums=tuple(float(x) for x in s_sums(coeffs, i)),
        var_interference=interference_variance(seq_set, i, channel, coeffs=coeffs),
        var_fading_bound=fading_variance_bound(seq_set, i, channel, coeffs=coeffs),
        snr_lower=snr,
        snr_lower_db=to_db(snr),
        r_ac=indices.r_ac_per_user[i],
        r_cc=None if indices.r_cc_per_user is None else indices.r_cc_per_user[i],
        sandwich_lower=lower,
        sandwich_upper=upper,
    )


def build_reports(seq_set: SequenceSet, channel: ChannelProfile, threads: int = 1) -> list[SnrReport]:
    """
    One report per user, in user order.

    :param seq_set: the sequences to score
    :param channel: the channel profile, with an entry for every user
    :param threads: the most worker threads to fan the users out to
    :return: the reports, row i for user i
    """
    if threads < 1:
        errmsg = f"Thread count must be at least 1, got {threads}"
        raise ValueError(errmsg)
    channel.covers(seq_set.k_users)
    coeffs = spectral_set(seq_set)
    indices = msq_spectral(coeffs)

    def one(i: int) -> SnrReport:
        return user_report(seq_set, i, channel, coeffs, indices)

    users = range(seq_set.k_users)
    if threads == 1:
        reports = [one(i) for i in users]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(one, users))
    logger.info(f"analyzed {len(reports)} users (N={seq_set.n})")
    return reports


def report_metadata(config: dict[str, Any], seed: int | None = None) -> dict[str, Any]:
    return {"tool": TOOL_NAME, "version": __version__, "seed": seed, "config": config}


def reports_to_json(reports: list[SnrReport], metadata: dict[str, Any]) -> str:
    document = {"metadata": metadata, "users": [asdict(report) for report in reports]}
    return json.dumps(document, indent=2) + "\n"


def metadata_comment_lines(metadata: dict[str, Any]) -> str:
    """The metadata as '# key: value' lines, values JSON encoded."""
    return "".join(f"# {key}: {json.dumps(value, sort_keys=True)}\n" for key, value in metadata.items())


def reports_to_csv(reports: list[SnrReport], metadata: dict[str, Any]) -> str:
    """
    One row per user.  The S-sums get one column per user k (s_sum_0 ...); R_CC is empty for K = 1.
    """
    out = io.StringIO()
    out.write(metadata_comment_lines(metadata))
    writer = csv.writer(out, lineterminator="\n")
    k_users = len(reports[0].s_sums) if reports else 0
    sum_columns = [f"s_sum_{k}" for k in range(k_users)]
    writer.writerow([REPORT_COLUMNS[0], *sum_columns, *REPORT_COLUMNS[1:]])
    for report in reports:
        row = [str(report.user), *(format_float(x) for x in report.s_sums)]
        for column in REPORT_COLUMNS[1:]:
            value = getattr(report, column)
            row.append("" if value is None else format_float(value))
        writer.writerow(row)
    return out.getvalue()
