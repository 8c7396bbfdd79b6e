"""Command line front end: ``hullcode construct|verify|bound|scan``.

Exit codes: 0 success, 1 invalid input, 2 search exhausted, 3 verification or
expectation mismatch. Configuration is read from the environment (and a ``.env``
file in the working directory): ``HULLCODE_JOBS`` is the default of ``--jobs``,
``HULLCODE_LOG_LEVEL`` the default log level.
"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path

import pandas as pd
from dotenv import find_dotenv, load_dotenv

from hullcode.bounds import (
    epsilon0,
    gv_condition,
    rational_string,
    simplified_condition,
    step_probabilities,
)
from hullcode.codes import InternalInconsistencyError, verify
from hullcode.construct import (
    MAX_ATTEMPTS_PER_VECTOR,
    MAX_RESTARTS,
    ConstructionParams,
    SearchExhaustedError,
    VerificationFailedError,
    construct,
)
from hullcode.process import (
    ScanSpec,
    load_code_file,
    load_scan_spec,
    result_to_dict,
    scan_grid,
    summarize_scan,
    write_json,
    write_scan,
)
from hullcode.valid import HullCodeError, InvalidParamsError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_EXHAUSTED = 2
EXIT_MISMATCH = 3

_STEP_COLUMNS = [
    "p_basis",
    "p_orthogonal",
    "p_distance_lower",
    "p_step_lower",
    "epsilon",
]


class ExpectationError(HullCodeError):
    """Raise when a verified code does not meet the expected hull or distance."""


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors as invalid input (exit code 1)."""

    def error(self, message):
        raise InvalidParamsError(f"{self.prog}: {message}")


def _env_jobs():
    value = os.environ.get("HULLCODE_JOBS", "1")
    try:
        return int(value)
    except ValueError:
        raise InvalidParamsError(
            f"HULLCODE_JOBS should be an integer, got '{value}'."
        ) from None


def _dump(payload, out=None):
    if out is None:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        write_json(payload, Path(out))


def _build_parser():
    parser = _ArgumentParser(
        prog="hullcode",
        description="Linear codes with prescribed hull dimension and distance.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="INFO, repeat for DEBUG"
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    p_construct = sub.add_parser("construct", help="construct and verify a code")
    for name in ("q", "m", "k", "t", "d"):
        p_construct.add_argument(f"--{name}", type=int, required=True)
    p_construct.add_argument("--seed", type=int, default=0)
    p_construct.add_argument("--out", help="result JSON file (default: stdout)")
    p_construct.add_argument(
        "--max-attempts", type=int, default=MAX_ATTEMPTS_PER_VECTOR
    )
    p_construct.add_argument("--max-restarts", type=int, default=MAX_RESTARTS)
    p_construct.add_argument("--jobs", type=int, default=None)

    p_verify = sub.add_parser("verify", help="verify a code JSON file")
    p_verify.add_argument("--in", dest="input", required=True, help="code JSON file")
    p_verify.add_argument("--expect-hull", type=int, default=None)
    p_verify.add_argument(
        "--expect-distance",
        type=int,
        default=None,
        help="lower bound on the minimum distance",
    )
    p_verify.add_argument("--jobs", type=int, default=None)

    p_bound = sub.add_parser("bound", help="evaluate the existence condition")
    for name in ("q", "m", "k", "d"):
        p_bound.add_argument(f"--{name}", type=int, default=None)
    p_bound.add_argument("--simplified", action="store_true")
    p_bound.add_argument(
        "--intermediate",
        action="store_true",
        help="with --simplified, keep the (q-1)^d factor",
    )
    p_bound.add_argument("--steps", action="store_true", help="add per-step table")
    p_bound.add_argument("--rate-threshold", action="store_true")
    p_bound.add_argument("--delta", default=None, help="relative distance d/m")

    p_scan = sub.add_parser("scan", help="construct over a parameter grid")
    for name in ("q", "m", "k", "t", "d"):
        p_scan.add_argument(f"--{name}", nargs="+", default=None, help="A or A..B")
    p_scan.add_argument("--seeds", nargs="+", default=None)
    p_scan.add_argument("--spec", default=None, help="scan specification JSON file")
    p_scan.add_argument("--format", choices=["csv", "json"], default=None)
    p_scan.add_argument("--out", default=None, help="output file (default: stdout)")
    p_scan.add_argument("--jobs", type=int, default=None)
    p_scan.add_argument("--max-attempts", type=int, default=MAX_ATTEMPTS_PER_VECTOR)
    p_scan.add_argument("--max-restarts", type=int, default=MAX_RESTARTS)
    return parser


def _configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    elif args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    else:
        level = os.environ.get("HULLCODE_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def cmd_construct(args):
    params = ConstructionParams(
        q=args.q,
        m=args.m,
        k=args.k,
        t=args.t,
        d=args.d,
        seed=args.seed,
        max_attempts_per_vector=args.max_attempts,
        max_restarts=args.max_restarts,
    )
    jobs = args.jobs if args.jobs is not None else _env_jobs()
    result = construct(params, n_jobs=jobs)
    _dump(result_to_dict(result), args.out)
    return EXIT_OK


def cmd_verify(args):
    code = load_code_file(Path(args.input))
    jobs = args.jobs if args.jobs is not None else _env_jobs()
    report = verify(code, n_jobs=jobs)
    payload = {"n": code.n, "k": code.k, "hull_dim": report.hull_dim}
    payload.update(report.to_dict())
    _dump(payload)
    if args.expect_hull is not None and report.hull_dim != args.expect_hull:
        raise ExpectationError(
            f"Hull dimension {report.hull_dim} differs from the expected "
            f"{args.expect_hull}."
        )
    if args.expect_distance is not None and report.min_distance < args.expect_distance:
        raise ExpectationError(
            f"Minimum distance {report.min_distance} is below the expected "
            f"{args.expect_distance}."
        )
    return EXIT_OK


def _steps_records(q, m, k, d):
    steps = step_probabilities(q, m, k, d)
    return [
        {
            "step": int(row["step"]),
            **{
                column: None if pd.isna(row[column]) else rational_string(row[column])
                for column in _STEP_COLUMNS
            },
        }
        for _, row in steps.iterrows()
    ]


def cmd_bound(args):
    if args.rate_threshold:
        if args.delta is None or args.q is None:
            raise InvalidParamsError("--rate-threshold needs --delta and --q.")
        threshold = epsilon0(args.delta, args.q)
        _dump({"delta": args.delta, "q": args.q, "epsilon0": threshold})
        return EXIT_OK

    missing = [name for name in ("q", "m", "k", "d") if getattr(args, name) is None]
    if missing:
        raise InvalidParamsError(
            f"bound needs {', '.join('--' + name for name in missing)}."
        )
    q, m, k, d = args.q, args.m, args.k, args.d
    if args.simplified or args.intermediate:
        report = simplified_condition(q, m, k, d, intermediate=args.intermediate)
    else:
        report = gv_condition(q, m, k, d)
    payload = report.to_dict()
    if args.steps:
        payload["steps"] = _steps_records(q, m, k, d)
    _dump(payload)
    return EXIT_OK


def _scan_spec(args):
    grid_flags = {name: getattr(args, name) for name in ("q", "m", "k", "t", "d")}
    if args.spec is not None:
        if any(value is not None for value in grid_flags.values()):
            raise InvalidParamsError("Use either --spec or the grid flags, not both.")
        spec = load_scan_spec(Path(args.spec))
    else:
        missing = [name for name in ("q", "m", "k", "d") if grid_flags[name] is None]
        if missing:
            raise InvalidParamsError(
                f"scan needs {', '.join('--' + name for name in missing)} or --spec."
            )
        spec = ScanSpec(
            seeds=args.seeds if args.seeds is not None else (0,),
            **grid_flags,
        )
    return ScanSpec(
        q=spec.q,
        m=spec.m,
        k=spec.k,
        d=spec.d,
        t=spec.t,
        seeds=spec.seeds,
        format=args.format or spec.format,
        max_attempts_per_vector=args.max_attempts,
        max_restarts=args.max_restarts,
    )


def cmd_scan(args):
    spec = _scan_spec(args)
    jobs = args.jobs if args.jobs is not None else _env_jobs()
    table = scan_grid(spec, n_jobs=jobs, progress=args.out is not None)
    if len(table):
        logger.info("Scan summary:\n%s", summarize_scan(table).to_string())
    if args.out is not None:
        write_scan(table, Path(args.out), format=spec.format)
    elif spec.format == "csv":
        table.to_csv(sys.stdout, index=False)
    else:
        _dump(json.loads(table.to_json(orient="records")))
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "bound": cmd_bound,
    "scan": cmd_scan,
}


def main(argv=None):
    """Run the command line interface and return the exit code.

    Parameters
    ----------
    argv: list of str, optional
        Arguments without the program name, default ``sys.argv[1:]``.
    """
    load_dotenv(find_dotenv(usecwd=True))
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except InvalidParamsError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    _configure_logging(args)

    try:
        return COMMANDS[args.command](args)
    except SearchExhaustedError as err:
        print(f"search exhausted: {err}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (
        ExpectationError,
        VerificationFailedError,
        InternalInconsistencyError,
    ) as err:
        print(f"verification failed: {err}", file=sys.stderr)
        return EXIT_MISMATCH
    except (HullCodeError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID


def run():
    """Entry point for the ``hullcode`` console script."""
    sys.exit(main())
