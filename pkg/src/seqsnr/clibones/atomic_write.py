# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import tempfile
from pathlib import Path


def atomic_write_text(filepath: Path, text: str) -> None:
    """Write text to a temporary file beside filepath then atomically "switch" it in using rename.

    On failure the temporary file is removed and filepath is left untouched.
    """
    with tempfile.NamedTemporaryFile("wt", dir=filepath.parent, delete=False, encoding="utf-8", newline="") as tf:
        temp_name = Path(tf.name)
        try:
            tf.write(text)
        except BaseException:
            tf.close()
            temp_name.unlink(missing_ok=True)
            raise
    try:
        temp_name.replace(filepath)
    except BaseException:
        temp_name.unlink(missing_ok=True)
        raise
