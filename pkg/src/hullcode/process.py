import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path

import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from hullcode.bounds import gv_condition
from hullcode.codes import LinearCode
from hullcode.construct import (
    MAX_ATTEMPTS_PER_VECTOR,
    MAX_RESTARTS,
    ConstructionParams,
    HullCase,
    SearchExhaustedError,
    construct,
)
from hullcode.gf import field_with_modulus
from hullcode.valid import HullCodeError, InvalidParamsError, as_int, prime_power

logger = logging.getLogger(__name__)

SCAN_COLUMNS = [
    "index",
    "q",
    "m",
    "k",
    "t",
    "d",
    "seed",
    "status",
    "reason",
    "bound_holds",
    "case",
    "n",
    "attempts",
    "restarts",
    "hull_dim",
    "min_distance",
    "guaranteed_distance",
    "verified",
]
_INTEGER_COLUMNS = [
    "index",
    "q",
    "m",
    "k",
    "t",
    "d",
    "seed",
    "n",
    "attempts",
    "restarts",
    "hull_dim",
    "min_distance",
    "guaranteed_distance",
]
_BOOLEAN_COLUMNS = ["bound_holds", "verified"]
_RANGE = re.compile(r"^\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?$")


def _check_path(file_path):
    """Provide user feedback on file_path type."""
    if not isinstance(file_path, Path):
        if isinstance(file_path, str):
            raise TypeError(
                f"`file_path` should be a `pathlib.Path` object, use "
                f"`Path({file_path})` to convert string file_path to valid `Path`."
            )
        else:
            raise TypeError("`file_path` should be a pathlib.Path object")


def _read_json(file_path):
    _check_path(file_path)
    if file_path.is_dir():
        raise ValueError(
            "`file_path` need to be the path to a file instead of a directory"
        )
    try:
        return json.loads(file_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise InvalidParamsError(f"{file_path} is not valid JSON: {err}") from None


def write_json(payload, file_path):
    """Write a JSON document (UTF-8, indented, sorted keys, trailing newline)."""
    _check_path(file_path)
    file_path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def field_to_dict(field):
    return field.to_dict()


def field_from_dict(data):
    """Rebuild a field from ``{"p": ..., "r": ..., "modulus": [...]}``."""
    try:
        return field_with_modulus(data["p"], data["r"], data["modulus"])
    except (KeyError, TypeError):
        raise InvalidParamsError(
            "A field needs the keys `p`, `r` and `modulus`."
        ) from None


def code_to_dict(code):
    """Encode a code as ``{field, n, k, generator}``."""
    return {
        "field": field_to_dict(code.field),
        "n": code.n,
        "k": code.k,
        "generator": code.generator.to_list(),
    }


def code_from_dict(data):
    """Rebuild a :class:`hullcode.codes.LinearCode` from its JSON encoding.

    The declared ``n`` and ``k`` should match the generator matrix.
    """
    try:
        field = field_from_dict(data["field"])
        n, k, rows = as_int(data["n"], "n"), as_int(data["k"], "k"), data["generator"]
    except (KeyError, TypeError):
        raise InvalidParamsError(
            "A code needs the keys `field`, `n`, `k` and `generator`."
        ) from None
    if len(rows) != k:
        raise InvalidParamsError(f"Generator has {len(rows)} rows, expected k={k}.")
    if any(not isinstance(row, list) or len(row) != n for row in rows):
        raise InvalidParamsError(f"Every generator row should have n={n} entries.")
    return LinearCode.from_rows(field, rows, n=n)


def result_to_dict(result):
    """Encode a construction result; the output is also a valid code document."""
    payload = code_to_dict(result.code)
    payload.update(
        {
            "case": result.case.value,
            "seed": result.seed,
            "attempts": result.attempts,
            "restarts": result.restarts,
            "expected_length": result.expected_length,
            "guaranteed_distance": result.guaranteed_distance,
            "t": result.params.t,
            "d": result.params.d,
            "bound": result.bound.to_dict(),
            "report": result.report.to_dict(),
        }
    )
    return payload


def load_code_file(file_path):
    """Load a code (or construction result) JSON file.

    Parameters
    ----------
    file_path: pathlib.Path

    Returns
    -------
    code: hullcode.codes.LinearCode
    """
    return code_from_dict(_read_json(file_path))


def parse_range(value):
    """Expand ``A`` or the inclusive range ``A..B`` into a list of integers.

    Examples
    --------
    >>> parse_range("2..4")
    [2, 3, 4]
    >>> parse_range(7)
    [7]
    """
    if isinstance(value, str):
        match = _RANGE.match(value)
        if match is None:
            raise InvalidParamsError(
                f"'{value}' is neither an integer nor a range A..B."
            )
        start = int(match.group(1))
        stop = int(match.group(2)) if match.group(2) is not None else start
        return list(range(start, stop + 1))
    return [as_int(value, "range")]


def parse_values(values):
    """Concatenate the expansions of several values (a single value is allowed)."""
    if values is None:
        return None
    if isinstance(values, (str, int)):
        values = [values]
    return [number for value in values for number in parse_range(value)]


@dataclass(frozen=True)
class ScanSpec:
    """Grid of construction parameters.

    ``t = None`` scans every hull dimension 0..k of each grid point.
    """

    q: tuple
    m: tuple
    k: tuple
    d: tuple
    t: tuple = None
    seeds: tuple = (0,)
    format: str = "csv"
    max_attempts_per_vector: int = MAX_ATTEMPTS_PER_VECTOR
    max_restarts: int = MAX_RESTARTS

    def __post_init__(self):
        for name in ("q", "m", "k", "d", "t", "seeds"):
            values = getattr(self, name)
            if values is not None:
                object.__setattr__(self, name, tuple(parse_values(values)))
        if self.format not in ("csv", "json"):
            raise InvalidParamsError(
                f"Output format should be 'csv' or 'json', got '{self.format}'."
            )


def load_scan_spec(file_path):
    """Load a scan specification from JSON.

    Keys ``q``, ``m``, ``k`` and ``d`` are required, ``t``, ``seeds`` and
    ``format`` are optional; values are integers, ``"A..B"`` strings or lists of
    those.
    """
    data = _read_json(file_path)
    missing = {"q", "m", "k", "d"} - set(data)
    if missing:
        raise InvalidParamsError(
            f"Scan specification misses the keys {sorted(missing)}."
        )
    unknown = set(data) - {"q", "m", "k", "t", "d", "seeds", "format"}
    if unknown:
        raise InvalidParamsError(f"Unknown scan specification keys {sorted(unknown)}.")
    return ScanSpec(**data)


def _skip_reason(q, m, k, t, d):
    try:
        prime_power(q)
    except InvalidParamsError:
        return "q is not a prime power"
    if k > m:
        return "k exceeds m"
    if d > m:
        return "d exceeds m"
    if t > k:
        return "t exceeds k"
    if k < 1 or d < 1 or t < 0:
        return "parameters out of range"
    return None


def expand_grid(spec):
    """List the grid points of a scan in a fixed order (q, m, k, t, d, seed).

    Returns
    -------
    points: list of dict
        Keys ``index, q, m, k, t, d, seed`` and ``reason`` (None for valid points).
    """
    points = []
    for q in spec.q:
        for m in spec.m:
            for k in spec.k:
                hulls = spec.t if spec.t is not None else range(0, k + 1)
                for t in hulls:
                    for d in spec.d:
                        for seed in spec.seeds:
                            point = {"index": len(points), "q": q, "m": m, "k": k}
                            point.update({"t": t, "d": d, "seed": seed})
                            point["reason"] = _skip_reason(q, m, k, t, d)
                            points.append(point)
    return points


def _scan_row(point, max_attempts_per_vector, max_restarts):
    """Run one grid point; failures end up in the row, never raise."""
    row = dict.fromkeys(SCAN_COLUMNS)
    row.update({key: point[key] for key in ("index", "q", "m", "k", "t", "d", "seed")})
    if point["reason"] is not None:
        row.update(status="skipped", reason=point["reason"])
        if point["reason"] != "q is not a prime power":
            row["case"] = HullCase.for_field_size(point["q"]).value
        return row

    q, m, k, t, d = (point[key] for key in ("q", "m", "k", "t", "d"))
    try:
        params = ConstructionParams(
            q=q,
            m=m,
            k=k,
            t=t,
            d=d,
            seed=point["seed"],
            max_attempts_per_vector=max_attempts_per_vector,
            max_restarts=max_restarts,
        )
        row.update(
            bound_holds=gv_condition(q, m, k, d).holds,
            case=params.case.value,
            n=params.expected_length,
            guaranteed_distance=params.guaranteed_distance,
        )
        result = construct(params)
    except SearchExhaustedError as err:
        logger.warning("Grid point %d exhausted: %s", point["index"], err)
        row.update(
            status="exhausted",
            reason="search exhausted",
            attempts=err.attempts,
            restarts=err.restarts,
        )
        return row
    except HullCodeError as err:
        logger.warning("Grid point %d failed: %s", point["index"], err)
        row.update(status="failed", reason=f"{type(err).__name__}: {err}")
        return row

    row.update(
        status="constructed",
        attempts=result.attempts,
        restarts=result.restarts,
        hull_dim=result.report.hull_dim,
        min_distance=result.report.min_distance,
        verified=True,
    )
    return row


def scan_grid(spec, n_jobs=1, progress=False):
    """Run the construction over every point of a scan grid.

    Parameters
    ----------
    spec: ScanSpec
    n_jobs: int, default 1
        Number of joblib workers; rows are returned in grid order regardless.
    progress: bool, default False
        Show a tqdm progress bar.

    Returns
    -------
    table: pandas.DataFrame
        One row per grid point with the columns of ``SCAN_COLUMNS``:

        - *status* (str): constructed, exhausted, skipped or failed
        - *reason* (str): why a row was skipped, exhausted or failed
        - *bound_holds* (bool): verdict of the existence condition
        - *case* (str): Even, OneMod4 or ThreeMod4
        - *n*, *guaranteed_distance* (int): expected length and distance
        - *hull_dim*, *min_distance* (int): verified values
    """
    points = expand_grid(spec)
    for point in points:
        if point["reason"] is not None:
            logger.info("Skipping grid point %d: %s.", point["index"], point["reason"])

    rows = Parallel(n_jobs=n_jobs)(
        delayed(_scan_row)(point, spec.max_attempts_per_vector, spec.max_restarts)
        for point in tqdm(points, total=len(points), disable=not progress)
    )
    table = pd.DataFrame.from_records(rows, columns=SCAN_COLUMNS)
    table[_INTEGER_COLUMNS] = table[_INTEGER_COLUMNS].astype("Int64")
    table[_BOOLEAN_COLUMNS] = table[_BOOLEAN_COLUMNS].astype("boolean")
    return table


def write_scan(table, file_path, format="csv"):
    """Write a scan table as CSV (fixed column order) or as JSON records."""
    _check_path(file_path)
    if format == "csv":
        table.to_csv(file_path, index=False, columns=SCAN_COLUMNS)
    else:
        write_json(json.loads(table.to_json(orient="records")), file_path)


def summarize_scan(table):
    """Aggregate a scan table per construction case.

    Returns
    -------
    summary: pandas.DataFrame
        Indexed by *case* with the columns *points*, *constructed*, *exhausted*,
        *skipped*, *failed* and *verified*.
    """
    statuses = ["constructed", "exhausted", "skipped", "failed"]
    cases = table["case"].fillna("unknown")
    summary = pd.crosstab(cases, table["status"])
    summary = summary.reindex(columns=statuses, fill_value=0)
    summary.insert(0, "points", summary.sum(axis=1))
    verified = table["verified"].fillna(False).astype(bool)
    summary["verified"] = verified.groupby(cases).sum().astype(int)
    summary.index.name = "case"
    summary.columns.name = None
    return summary
