# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from seqsnr.seqset import (
    Family,
    GeneratorSpec,
    SequenceSet,
    SequenceSetError,
    from_dict,
    generate,
    load,
    save,
    to_dict,
    zadoff_chu,
)


def test_all_ones() -> None:
    seq_set = generate(GeneratorSpec(Family.ALL_ONES, 4), 1)
    assert seq_set.n == 4
    assert seq_set.k_users == 1
    assert np.array_equal(seq_set[0], np.ones(4))


def test_zadoff_chu_formula() -> None:
    seq_set = generate(GeneratorSpec(Family.ZADOFF_CHU, 5, root=1), 1)
    n = np.arange(1, 6)
    expected = np.exp(-1j * np.pi * (n - 1) * n / 5)
    assert np.allclose(seq_set[0], expected, rtol=0, atol=1e-15)
    assert abs(float(np.sum(np.abs(seq_set[0]) ** 2)) - 5) < 1e-12


def test_zadoff_chu_users_are_cyclic_shifts() -> None:
    seq_set = generate(GeneratorSpec(Family.ZADOFF_CHU, 7, root=3), 3)
    base = zadoff_chu(7, 3)
    for user in range(3):
        assert np.array_equal(seq_set[user], np.roll(base, user))


def test_random_phase_is_deterministic() -> None:
    spec = GeneratorSpec(Family.RANDOM_PHASE, 8, seed=42)
    first = generate(spec, 2)
    second = generate(spec, 2)
    assert first == second
    assert first.seqs.tobytes() == second.seqs.tobytes()
    assert generate(GeneratorSpec(Family.RANDOM_PHASE, 8, seed=43), 2) != first


@pytest.mark.parametrize("family", list(Family))
def test_energy_invariant(family: Family) -> None:
    seq_set = generate(GeneratorSpec(family, 11, root=2, seed=5), 4)
    assert np.allclose(seq_set.energies(), 11, rtol=1e-12)


def test_random_binary_values() -> None:
    seq_set = generate(GeneratorSpec(Family.RANDOM_BINARY, 16, seed=1), 3)
    assert set(np.unique(seq_set.seqs)) <= {-1 + 0j, 1 + 0j}


def test_set_is_read_only() -> None:
    seq_set = generate(GeneratorSpec(Family.ALL_ONES, 4), 1)
    with pytest.raises(ValueError):  # NOQA: PT011
        seq_set.seqs[0, 0] = 2


@pytest.mark.parametrize(
    ("spec", "k_users"),
    [
        (GeneratorSpec(Family.ZADOFF_CHU, 6, root=2), 1),
        (GeneratorSpec(Family.ZADOFF_CHU, 5, root=0), 1),
        (GeneratorSpec(Family.ALL_ONES, 1), 1),
        (GeneratorSpec(Family.RANDOM_PHASE, 4, seed=-1), 1),
        (GeneratorSpec(Family.RANDOM_PHASE, 4, seed=2**64), 1),
        (GeneratorSpec(Family.ALL_ONES, 4), 0),
    ],
)
def test_generate_rejects(spec: GeneratorSpec, k_users: int) -> None:
    with pytest.raises(SequenceSetError):
        generate(spec, k_users)


def test_energy_violation_names_user() -> None:
    seqs = np.ones((3, 4), dtype=np.complex128)
    seqs[2] *= np.sqrt(2)
    with pytest.raises(SequenceSetError, match="User 2"):
        SequenceSet(seqs)


def test_save_load_round_trip(tmp_path: Path) -> None:
    for spec in (GeneratorSpec(Family.ZADOFF_CHU, 11, root=3), GeneratorSpec(Family.RANDOM_PHASE, 16, seed=9)):
        seq_set = generate(spec, 3)
        path = tmp_path / "set.json"
        save(seq_set, path)
        assert load(path) == seq_set


def test_load_double_energy(tmp_path: Path) -> None:
    data = to_dict(generate(GeneratorSpec(Family.RANDOM_PHASE, 4, seed=3), 2))
    data["sequences"][1] = [[re * np.sqrt(2), im * np.sqrt(2)] for re, im in data["sequences"][1]]
    path = tmp_path / "double.json"
    path.write_text(json.dumps(data))
    with pytest.raises(SequenceSetError, match="User 1"):
        load(path)


def test_load_tolerates_small_energy_error() -> None:
    data = to_dict(generate(GeneratorSpec(Family.ALL_ONES, 4), 1))
    data["sequences"][0][0] = [1 + 1e-8, 0.0]
    assert from_dict(data).n == 4


@pytest.mark.parametrize(
    ("data", "match"),
    [
        ({"n": 2, "k": 2, "sequences": [[[1, 0], [1, 0]], [[1, 0]]]}, "sequence 1"),
        ({"n": 2, "sequences": [[[1, 0], [1, 0]]]}, '"k"'),
        ({"n": 2, "k": 1, "sequences": [[[1, 0], [1, 0, 0]]]}, "pair"),
        ({"n": 2, "k": 2, "sequences": [[[1, 0], [1, 0]]]}, "sequences given"),
        ([1, 2, 3], "JSON object"),
    ],
)
def test_schema_errors(data: object, match: str) -> None:
    with pytest.raises(SequenceSetError, match=match):
        from_dict(data)


def test_load_missing_file(tmp_path: Path) -> None:
    with pytest.raises(SequenceSetError, match="could not be loaded"):
        load(tmp_path / "missing.json")


def test_load_bad_json(tmp_path: Path) -> None:
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(SequenceSetError):
        load(path)


def test_load_rejects_nan_chip(tmp_path: Path) -> None:
    path = tmp_path / "nan.json"
    path.write_text('{"n": 2, "k": 1, "sequences": [[[NaN, 0], [1, 0]]]}')
    with pytest.raises(SequenceSetError, match="non-finite chip at index 0"):
        load(path)


@pytest.mark.parametrize("value", [np.nan, np.inf, complex(1, np.inf)])
def test_non_finite_chip_names_user(value: complex) -> None:
    seqs = np.ones((2, 4), dtype=np.complex128)
    seqs[1, 2] = value
    with pytest.raises(SequenceSetError, match="User 1 has a non-finite chip at index 2"):
        SequenceSet(seqs)
