import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from hullcode.codes import LinearCode, RankDeficientError
from hullcode.construct import ConstructionParams, construct
from hullcode.gf import field_new
from hullcode.process import (
    SCAN_COLUMNS,
    ScanSpec,
    _check_path,
    code_to_dict,
    expand_grid,
    load_code_file,
    load_scan_spec,
    parse_range,
    parse_values,
    result_to_dict,
    scan_grid,
    summarize_scan,
    write_json,
    write_scan,
)
from hullcode.valid import InvalidParamsError


def test_check_path():
    """File path checks should provide user with info on pathlib.Path"""
    assert _check_path(Path("./")) is None
    with pytest.raises(TypeError) as excinfo:
        _check_path("invalid_string_input_path")
    assert "to convert string file_path to valid" in str(excinfo.value)
    with pytest.raises(TypeError) as excinfo:
        _check_path(np.array([1, 2]))
    assert " should be a pathlib.Path" in str(excinfo.value)


def test_load_code_file(hamming_file, hamming_code):
    """The Hamming fixture loads into the systematic [7, 4] code"""
    code = load_code_file(hamming_file)
    assert isinstance(code, LinearCode)
    assert code == hamming_code


def test_load_code_file_directory(tmp_path):
    """A directory is not a code file"""
    with pytest.raises(ValueError) as excinfo:
        load_code_file(tmp_path)
    assert "instead of a directory" in str(excinfo.value)


def test_load_code_file_invalid_json(tmp_path):
    """Malformed JSON is reported as invalid input"""
    file_path = tmp_path / "broken.json"
    file_path.write_text("{ not json", encoding="utf-8")
    with pytest.raises(InvalidParamsError) as excinfo:
        load_code_file(file_path)
    assert "is not valid JSON" in str(excinfo.value)


@pytest.mark.parametrize(
    "change,message",
    [
        ({"k": 3}, "Generator has 4 rows, expected k=3"),
        ({"n": 8}, "should have n=8 entries"),
        ({"generator": None}, "needs the keys"),
        ({"field": {"p": 2}}, "A field needs the keys"),
        ({"field": {"p": 2, "r": 2, "modulus": [1, 0, 1]}}, "not monic irreducible"),
        ({"generator": [[1, 2, 0, 0, 0, 0, 0]] * 4}, "Entries should be encodings"),
        ({"generator": [[1.9, 0, 0, 0, 1, 1, 0]] * 4}, "integer encodings"),
        ({"generator": [["x", 0, 0, 0, 1, 1, 0]] * 4}, "integer encodings"),
        ({"generator": [[None, 0, 0, 0, 1, 1, 0]] * 4}, "integer encodings"),
    ],
)
def test_load_code_file_invalid(code_file_closure, hamming_code, change, message):
    """Inconsistent code documents are rejected with a message"""
    payload = code_to_dict(hamming_code)
    payload.update(change)
    if payload["generator"] is None:
        del payload["generator"]
    with pytest.raises(InvalidParamsError) as excinfo:
        load_code_file(code_file_closure(payload))
    assert message in str(excinfo.value)


def test_load_code_file_rank_deficient(code_file_closure, gf3):
    """Generators need full row rank"""
    payload = {
        "field": gf3.to_dict(),
        "n": 3,
        "k": 2,
        "generator": [[1, 2, 0], [2, 1, 0]],
    }
    with pytest.raises(RankDeficientError):
        load_code_file(code_file_closure(payload))


def test_code_json_extension_field(tmp_path):
    """Codes over GF(9) keep their modulus through a file"""
    field = field_new(3, 2)
    code = LinearCode.from_rows(field, [[1, 0, 3, 8], [0, 1, 5, 2]])
    file_path = tmp_path / "gf9.json"
    write_json(code_to_dict(code), file_path)
    assert file_path.read_text(encoding="utf-8").endswith("}\n")
    assert load_code_file(file_path) == code


def test_result_to_dict(tmp_path):
    """A construction result is also a valid code document"""
    result = construct(ConstructionParams(q=5, m=6, k=2, t=1, d=2, seed=3))
    payload = result_to_dict(result)
    assert payload["case"] == "OneMod4"
    assert payload["seed"] == 3
    assert payload["n"] == payload["expected_length"] == 14
    assert payload["guaranteed_distance"] == 4
    assert payload["report"]["hull_dim_gram"] == 1
    assert payload["bound"]["holds"] is True
    file_path = tmp_path / "result.json"
    write_json(payload, file_path)
    assert load_code_file(file_path) == result.code


@pytest.mark.parametrize(
    "value,expected",
    [("2..4", [2, 3, 4]), ("5", [5]), (" 1 .. 2 ", [1, 2]), (7, [7]), ("3..1", [])],
)
def test_parse_range(value, expected):
    """Integers and inclusive ranges A..B"""
    assert parse_range(value) == expected


@pytest.mark.parametrize("value", ["a..b", "1-3", "2..", 2.5])
def test_parse_range_invalid(value):
    """Anything else is rejected"""
    with pytest.raises(InvalidParamsError):
        parse_range(value)


def test_parse_values():
    """Lists, ranges and single values are concatenated"""
    assert parse_values(["1..2", 5]) == [1, 2, 5]
    assert parse_values("0..1") == [0, 1]
    assert parse_values(3) == [3]
    assert parse_values(None) is None


def test_scan_spec():
    """Values are normalised to tuples"""
    spec = ScanSpec(q=[2, "3..4"], m=8, k="1..2", d=[2])
    assert spec.q == (2, 3, 4)
    assert spec.m == (8,)
    assert spec.t is None
    assert spec.seeds == (0,)
    with pytest.raises(InvalidParamsError) as excinfo:
        ScanSpec(q=2, m=8, k=1, d=2, format="xml")
    assert "'csv' or 'json'" in str(excinfo.value)


def test_load_scan_spec(scan_spec_file):
    """Scan specifications are read from JSON"""
    spec = load_scan_spec(scan_spec_file)
    assert spec.q == (2, 3)
    assert spec.k == (1, 2)
    assert spec.t == (0, 3)
    assert spec.seeds == (1,)


@pytest.mark.parametrize(
    "payload,message",
    [
        ({"q": 2, "m": 6, "k": 1}, "misses the keys ['d']"),
        ({"q": 2, "m": 6, "k": 1, "d": 2, "n": 3}, "Unknown scan specification keys"),
    ],
)
def test_load_scan_spec_invalid(tmp_path, payload, message):
    """Missing and unknown keys are reported"""
    file_path = tmp_path / "scan.json"
    file_path.write_text(json.dumps(payload), encoding="utf-8")
    with pytest.raises(InvalidParamsError) as excinfo:
        load_scan_spec(file_path)
    assert message in str(excinfo.value)


def test_expand_grid_order_and_reasons():
    """Grid order is q, m, k, t, d, seed; invalid points get a reason"""
    spec = ScanSpec(q=[2, 6], m=3, k=[1, 4], t=[0, 2], d=[2, 5], seeds=[0, 1])
    points = expand_grid(spec)
    assert len(points) == 2 * 1 * 2 * 2 * 2 * 2
    assert [point["index"] for point in points] == list(range(len(points)))
    first, second = points[0], points[1]
    assert [first[key] for key in ("q", "k", "t", "d", "seed")] == [2, 1, 0, 2, 0]
    assert second["seed"] == 1
    reasons = {
        (p["q"], p["k"], p["t"], p["d"]): p["reason"] for p in points if p["seed"] == 0
    }
    assert reasons[(2, 1, 0, 2)] is None
    assert reasons[(6, 1, 0, 2)] == "q is not a prime power"
    assert reasons[(2, 4, 0, 2)] == "k exceeds m"
    assert reasons[(2, 1, 0, 5)] == "d exceeds m"
    assert reasons[(2, 1, 2, 2)] == "t exceeds k"


def test_expand_grid_all_hull_dimensions():
    """Without t every hull dimension 0..k is scanned"""
    points = expand_grid(ScanSpec(q=2, m=6, k="1..3", d=2))
    assert [(p["k"], p["t"]) for p in points] == [
        (k, t) for k in range(1, 4) for t in range(k + 1)
    ]


def test_scan_grid(scan_spec_file):
    """Every constructed row verifies and t > k rows are skipped"""
    table = scan_grid(load_scan_spec(scan_spec_file))
    assert list(table.columns) == SCAN_COLUMNS
    assert len(table) == 8
    skipped = table[table["status"] == "skipped"]
    assert len(skipped) == 4
    assert set(skipped["reason"]) == {"t exceeds k"}
    assert skipped["t"].eq(3).all()
    constructed = table[table["status"] == "constructed"]
    assert len(constructed) == 4
    assert constructed["verified"].all()
    assert (constructed["hull_dim"] == constructed["t"]).all()
    assert (constructed["min_distance"] >= constructed["guaranteed_distance"]).all()
    assert list(constructed["n"]) == [7, 8, 19, 20]
    assert table["n"].dtype == "Int64"


def test_scan_grid_exhausted_row(caplog):
    """Exhausted searches end up in the table and the log instead of raising"""
    spec = ScanSpec(q=2, m=2, k=2, t=0, d=2, max_attempts_per_vector=20, max_restarts=1)
    with caplog.at_level(logging.WARNING, logger="hullcode.process"):
        table = scan_grid(spec)
    assert "Grid point 0 exhausted" in caplog.text
    row = table.iloc[0]
    assert row["status"] == "exhausted"
    assert not row["bound_holds"]
    assert row["restarts"] == 1
    assert pd.isna(row["hull_dim"])


def test_scan_grid_failed_row(caplog):
    """Points beyond the enumeration cap are failed rows with a logged warning"""
    spec = ScanSpec(q=7, m=9, k=9, t=0, d=1)
    with caplog.at_level(logging.WARNING, logger="hullcode.process"):
        table = scan_grid(spec)
    row = table.iloc[0]
    assert row["status"] == "failed"
    assert row["reason"].startswith("EnumerationCapExceededError")
    assert "Grid point 0 failed" in caplog.text


def test_scan_grid_empty():
    """An empty range gives an empty table"""
    table = scan_grid(ScanSpec(q=2, m="5..4", k=1, d=1))
    assert table.empty
    assert list(table.columns) == SCAN_COLUMNS


def test_scan_grid_deterministic(scan_spec_file, tmp_path):
    """Identical specs give byte-identical CSV, also with two workers"""
    spec = load_scan_spec(scan_spec_file)
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    write_scan(scan_grid(spec), first)
    write_scan(scan_grid(spec, n_jobs=2), second)
    assert first.read_bytes() == second.read_bytes()


def test_write_scan_json(scan_spec_file, tmp_path):
    """JSON output holds one record per grid point"""
    table = scan_grid(load_scan_spec(scan_spec_file))
    file_path = tmp_path / "scan.json"
    write_scan(table, file_path, format="json")
    records = json.loads(file_path.read_text(encoding="utf-8"))
    assert len(records) == 8
    assert set(records[0]) == set(SCAN_COLUMNS)


def test_summarize_scan(scan_spec_file):
    """Counts per construction case"""
    summary = summarize_scan(scan_grid(load_scan_spec(scan_spec_file)))
    assert summary.index.name == "case"
    assert list(summary.columns) == [
        "points",
        "constructed",
        "exhausted",
        "skipped",
        "failed",
        "verified",
    ]
    assert summary.loc["Even", "points"] == 4
    assert summary.loc["ThreeMod4", "constructed"] == 2
    assert summary.loc["ThreeMod4", "verified"] == 2
    assert summary["skipped"].sum() == 4
