import json
import os
from pathlib import Path

import numpy as np
import pytest

from hullcode.codes import LinearCode
from hullcode.gf import field_new
from hullcode.linalg import FieldMatrix

CURRENT_DIR = Path(os.path.dirname(__file__))

HAMMING_GENERATOR = [
    [1, 0, 0, 0, 1, 1, 0],
    [0, 1, 0, 0, 0, 1, 1],
    [0, 0, 1, 0, 1, 1, 1],
    [0, 0, 0, 1, 1, 0, 1],
]


@pytest.fixture()
def gf2():
    return field_new(2, 1)


@pytest.fixture()
def gf3():
    return field_new(3, 1)


@pytest.fixture()
def gf4():
    return field_new(2, 2)


@pytest.fixture()
def gf5():
    return field_new(5, 1)


@pytest.fixture()
def gf7():
    return field_new(7, 1)


@pytest.fixture()
def gf8():
    return field_new(2, 3)


@pytest.fixture()
def gf9():
    return field_new(3, 2)


@pytest.fixture()
def hamming_code(gf2):
    """Binary [7, 4] Hamming code in systematic form."""
    return LinearCode(FieldMatrix(gf2, HAMMING_GENERATOR))


@pytest.fixture()
def hamming_file():
    """Code JSON file of the binary [7, 4] Hamming code"""
    return CURRENT_DIR / "data" / "hamming_7_4.json"


@pytest.fixture()
def code_file_closure(tmp_path):
    """Write a code JSON document to a temporary file."""

    def code_file(payload, name="code.json"):
        file_path = tmp_path / name
        file_path.write_text(json.dumps(payload), encoding="utf-8")
        return file_path

    return code_file


@pytest.fixture()
def rng():
    """Seeded random generator, identical for every test."""
    return np.random.default_rng(20240101)


@pytest.fixture()
def scan_spec_file(tmp_path):
    """Small scan specification with a skipped grid point."""
    file_path = tmp_path / "scan.json"
    spec = {"q": [2, 3], "m": 6, "k": "1..2", "t": [0, 3], "d": 2, "seeds": [1]}
    file_path.write_text(json.dumps(spec), encoding="utf-8")
    return file_path
