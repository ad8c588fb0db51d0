# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""
Spreading-sequence sets: the data model, the deterministic generators and the JSON file format.

A set holds K complex sequences of common length N, each normalized so that the chip energies
sum to N.  Binary families are embedded as {-1, +1} + 0j.

Zadoff-Chu sequences use, for odd N and root r coprime to N,

    s_n = exp(-j * pi * r * (n - 1) * n / N),   n = 1..N

and, for even N, the usual even-length variant s_n = exp(-j * pi * r * (n - 1)**2 / N).

File format (JSON)::

    {"n": N, "k": K, "sequences": [[[re, im], ...], ...]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger

from seqsnr.clibones.atomic_write import atomic_write_text

ENERGY_RTOL: float = 1e-9
"""Relative tolerance of the energy invariant for sets built in memory."""

LOAD_ENERGY_RTOL: float = 1e-6
"""Relative tolerance of the energy invariant for sets read from a file."""


class SequenceSetError(ValueError):
    """A sequence set or a sequence-set file violates the schema or the energy invariant."""


class Family(str, Enum):
    ALL_ONES = "all_ones"
    RANDOM_PHASE = "random_phase"
    RANDOM_BINARY = "random_binary"
    ZADOFF_CHU = "zadoff_chu"


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate.  ``root`` is only used by the Zadoff-Chu family."""

    family: Family
    n: int
    root: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.n < 2:
            errmsg = f"Sequence length must be at least 2, got {self.n}"
            raise SequenceSetError(errmsg)
        if not 0 <= self.seed < 2**64:
            errmsg = f"Seed must be an unsigned 64-bit integer, got {self.seed}"
            raise SequenceSetError(errmsg)
        if self.family is Family.ZADOFF_CHU and (self.root < 1 or math.gcd(self.root, self.n) != 1):
            errmsg = f"Zadoff-Chu root {self.root} must be positive and coprime to N={self.n}"
            raise SequenceSetError(errmsg)


@dataclass(frozen=True, eq=False)
class SequenceSet:
    """K complex sequences of length N, row k holding s_k.  The array is read-only."""

    seqs: np.ndarray
    energy_rtol: float = field(default=ENERGY_RTOL, repr=False)
    n: int = field(init=False)
    k_users: int = field(init=False)

    def __post_init__(self) -> None:
        seqs = np.array(self.seqs, dtype=np.complex128, copy=True)
        if seqs.ndim != 2:
            errmsg = f"Sequences must form a K x N array, got shape {seqs.shape}"
            raise SequenceSetError(errmsg)
        k_users, n = seqs.shape
        if k_users < 1 or n < 2:
            errmsg = f"Need at least one user and N >= 2, got K={k_users}, N={n}"
            raise SequenceSetError(errmsg)
        bad = np.argwhere(~np.isfinite(seqs))
        if bad.size:
            user, chip = (int(x) for x in bad[0])
            errmsg = f"User {user} has a non-finite chip at index {chip}: {seqs[user, chip]!r}"
            raise SequenceSetError(errmsg)
        seqs.setflags(write=False)
        object.__setattr__(self, "seqs", seqs)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k_users", k_users)
        check_energy(self, rtol=self.energy_rtol)

    def __getitem__(self, user: int) -> np.ndarray:
        return self.seqs[user]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SequenceSet):
            return NotImplemented
        return bool(np.array_equal(self.seqs, other.seqs))

    def __hash__(self) -> int:
        return hash(self.seqs.tobytes())

    def energies(self) -> np.ndarray:
        """Per-user sum of |s_{k,n}|^2."""
        return np.sum(np.abs(self.seqs) ** 2, axis=1)


def check_energy(seq_set: SequenceSet, rtol: float) -> None:
    """Raise SequenceSetError naming the first user whose energy differs from N beyond rtol."""
    for user, energy in enumerate(seq_set.energies()):
        if abs(energy - seq_set.n) > rtol * seq_set.n:
            errmsg = (
                f"User {user} violates the energy invariant: sum |s|^2 = {energy!r}, "
                f"expected N = {seq_set.n} (rtol {rtol:g})"
            )
            raise SequenceSetError(errmsg)


def zadoff_chu(n: int, root: int) -> np.ndarray:
    """The root-``root`` Zadoff-Chu sequence of length n (unit modulus)."""
    idx = np.arange(1, n + 1, dtype=np.float64)
    phase = (idx - 1) * idx if n % 2 else (idx - 1) ** 2
    return np.exp(-1j * np.pi * root * phase / n)


def generate(spec: GeneratorSpec, k_users: int) -> SequenceSet:
    """Generate k_users sequences of the requested family; a pure function of (spec, k_users)."""
    spec.validate()
    if k_users < 1:
        errmsg = f"Number of users must be at least 1, got {k_users}"
        raise SequenceSetError(errmsg)

    shape = (k_users, spec.n)
    rng = np.random.default_rng(spec.seed)
    if spec.family is Family.ALL_ONES:
        seqs = np.ones(shape, dtype=np.complex128)
    elif spec.family is Family.RANDOM_PHASE:
        seqs = np.exp(2j * np.pi * rng.random(shape))
    elif spec.family is Family.RANDOM_BINARY:
        seqs = rng.choice(np.array([-1.0, 1.0]), size=shape).astype(np.complex128)
    else:
        # users share the root sequence; a cyclic shift per user keeps them distinct
        base = zadoff_chu(spec.n, spec.root)
        seqs = np.stack([np.roll(base, user) for user in range(k_users)])

    logger.debug(f"generated {spec.family.value} set: N={spec.n}, K={k_users}, seed={spec.seed}")
    return SequenceSet(seqs)


def to_dict(seq_set: SequenceSet) -> dict[str, Any]:
    return {
        "n": seq_set.n,
        "k": seq_set.k_users,
        "sequences": [[[float(chip.real), float(chip.imag)] for chip in seq] for seq in seq_set.seqs],
    }


def from_dict(data: Any, source: str = "<data>") -> SequenceSet:
    """Build a set from the decoded JSON document, validating the schema and the energy invariant."""
    if not isinstance(data, dict):
        errmsg = f"{source}: top level must be a JSON object"
        raise SequenceSetError(errmsg)
    for key in ("n", "k", "sequences"):
        if key not in data:
            errmsg = f'{source}: missing field "{key}"'
            raise SequenceSetError(errmsg)
    n, k_users, sequences = data["n"], data["k"], data["sequences"]
    if not isinstance(n, int) or not isinstance(k_users, int) or not isinstance(sequences, list):
        errmsg = f'{source}: "n" and "k" must be integers and "sequences" a list'
        raise SequenceSetError(errmsg)
    if len(sequences) != k_users:
        errmsg = f"{source}: k={k_users} but {len(sequences)} sequences given"
        raise SequenceSetError(errmsg)

    rows: list[list[complex]] = []
    for user, seq in enumerate(sequences):
        if not isinstance(seq, list) or len(seq) != n:
            errmsg = f"{source}: sequence {user} does not have n={n} chips"
            raise SequenceSetError(errmsg)
        row: list[complex] = []
        for chip in seq:
            if not (isinstance(chip, list) and len(chip) == 2 and all(isinstance(x, int | float) for x in chip)):
                errmsg = f"{source}: sequence {user} has a chip that is not a [re, im] pair: {chip!r}"
                raise SequenceSetError(errmsg)
            row.append(complex(chip[0], chip[1]))
        rows.append(row)

    if k_users < 1 or n < 2:
        errmsg = f"{source}: need k >= 1 and n >= 2, got k={k_users}, n={n}"
        raise SequenceSetError(errmsg)
    try:
        return SequenceSet(np.array(rows, dtype=np.complex128), energy_rtol=LOAD_ENERGY_RTOL)
    except SequenceSetError as ex:
        errmsg = f"{source}: {ex}"
        raise SequenceSetError(errmsg) from ex


def load(path: Path) -> SequenceSet:
    """Load a sequence-set file.

    raises: SequenceSetError
    """
    try:
        with path.open(encoding="utf-8") as fp:
            data = json.load(fp)
    except (OSError, json.JSONDecodeError) as ex:
        errmsg = f"The sequence-set file ({path}) could not be loaded: {ex}"
        raise SequenceSetError(errmsg) from ex
    seq_set = from_dict(data, source=str(path))
    logger.debug(f"loaded {path}: N={seq_set.n}, K={seq_set.k_users}")
    return seq_set


def save(seq_set: SequenceSet, path: Path) -> None:
    """Save losslessly; json writes floats with their shortest round-trip representation."""
    atomic_write_text(path, json.dumps(to_dict(seq_set)) + "\n")
