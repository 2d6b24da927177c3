"""Command-line front end.

Subcommands::

    twolocus step       --point X,Y,U,V --a A --b B
    twolocus trajectory --point X,Y,U,V --a A --b B [--steps N]
    twolocus limit      --point X,Y,U,V --a A --b B
    twolocus sweep      --a-grid MIN:MAX:COUNT --b-grid MIN:MAX:COUNT [--point ...]
    twolocus verify     --a-grid MIN:MAX:COUNT --b-grid MIN:MAX:COUNT [--point ...]

Exit codes: 0 success, 2 usage error, 3 verification failure, 4 I/O
error, 5 iteration hit ``--max-steps``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Any, List, Optional, Sequence

from .errors import IoError, MaxStepsExceeded, TwoLocusError, UsageError
from .operator import step_additive
from .scalars import Scalar, Tolerance, format_scalar, parse_scalar
from .slices import eigenvalues, predicted_limit
from .state import GameteState, RecombinationParams, alpha_of, linkage_disequilibrium, parse_state
from .trajectory import (
    DEFAULT_MAX_STEPS,
    StopCriterion,
    iterate,
    run_to_convergence,
    verify_against_oracle,
)

MODES = ("step", "trajectory", "limit", "sweep", "verify")
DEFAULT_POINT = "0.4,0.2,0.1,0.3"
DEFAULT_GRID = "0:1:11"
RATIONAL_MAX_STEPS = 200

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY_FAILED = 3
EXIT_IO = 4
EXIT_MAX_STEPS = 5

CONFIG_KEYS = {
    "mode", "point", "a", "b", "a_grid", "b_grid", "eps", "max_steps", "steps",
    "arithmetic", "output_path", "output_format", "jobs",
}

TRAJECTORY_HEADER = ["n", "x", "y", "u", "v", "D"]
STEP_HEADER = ["x", "y", "u", "v", "D"]
LIMIT_HEADER = ["x0", "y0", "u0", "v0", "alpha", "lambda2", "x_lim", "y_lim", "u_lim", "v_lim"]
SWEEP_HEADER = [
    "a", "b", "x0", "y0", "u0", "v0", "alpha", "lambda2", "steps",
    "x_lim", "y_lim", "u_lim", "v_lim", "oracle_gap", "d0",
]
VERIFY_HEADER = [
    "a", "b", "x0", "y0", "u0", "v0", "alpha", "lambda2", "steps", "oracle_gap",
    "check_limit", "check_d_decay", "check_alpha", "check_fixed", "passed",
]


@dataclass(frozen=True)
class GridSpec:
    """Inclusive ``min:max:count`` grid; ``count == 1`` means just ``min``."""

    lo: Fraction
    hi: Fraction
    count: int

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = str(text).split(":")
        if len(parts) != 3:
            raise UsageError(f"grid must be MIN:MAX:COUNT, got {text!r}")
        try:
            lo, hi = Fraction(parts[0]), Fraction(parts[1])
            count = int(parts[2])
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"malformed grid {text!r}") from None
        if count < 1:
            raise UsageError(f"grid count must be >= 1 in {text!r}")
        if lo > hi:
            raise UsageError(f"grid min exceeds max in {text!r}")
        if lo < 0 or hi > 1:
            raise UsageError(f"grid {text!r} leaves [0, 1]")
        return cls(lo, hi, count)

    def values(self, exact: bool) -> List[Scalar]:
        if self.count == 1:
            points = [self.lo]
        else:
            n = self.count - 1
            points = [(self.lo * (n - k) + self.hi * k) / n for k in range(self.count)]
        return points if exact else [float(p) for p in points]


@dataclass(frozen=True)
class SweepRecord:
    a: Scalar
    b: Scalar
    x0: Scalar
    y0: Scalar
    u0: Scalar
    v0: Scalar
    alpha: Scalar
    lambda2: Scalar
    steps: int
    x_lim: Scalar
    y_lim: Scalar
    u_lim: Scalar
    v_lim: Scalar
    oracle_gap: Scalar
    d0: Scalar


@dataclass(frozen=True)
class RunConfig:
    mode: str
    points: tuple
    params: Optional[RecombinationParams]
    a_grid: Optional[GridSpec]
    b_grid: Optional[GridSpec]
    criterion: StopCriterion
    arithmetic: str = "floating"
    output_path: Optional[str] = None
    output_format: str = "csv"
    steps: Optional[int] = None
    jobs: int = 1

    @property
    def exact(self) -> bool:
        return self.arithmetic == "rational"


@dataclass
class RunResult:
    mode: str
    header: List[str]
    rows: List[list]
    failed: int = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twolocus", description="Two-locus gamete-frequency dynamics.")
    parser.add_argument("mode", nargs="?", choices=MODES)
    parser.add_argument("--point", action="append", help="x,y,u,v as decimals or p/q; repeatable for sweep/verify")
    parser.add_argument("--a")
    parser.add_argument("--b")
    parser.add_argument("--a-grid", dest="a_grid", help="MIN:MAX:COUNT, inclusive")
    parser.add_argument("--b-grid", dest="b_grid", help="MIN:MAX:COUNT, inclusive")
    parser.add_argument("--eps")
    parser.add_argument("--max-steps", dest="max_steps", type=int)
    parser.add_argument("--steps", type=int, help="trajectory mode: iterate exactly N steps")
    parser.add_argument("--arithmetic", choices=("rational", "floating"))
    parser.add_argument("--format", dest="output_format", choices=("csv", "json"))
    parser.add_argument("--out", dest="output_path")
    parser.add_argument("--config", help="JSON file of flat key/value settings")
    parser.add_argument("--jobs", type=int, help="worker processes for sweep/verify")
    return parser


def _read_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def _parse_number(text, exact: bool, name: str) -> Scalar:
    try:
        return parse_scalar(str(text), exact)
    except ValueError:
        raise UsageError(f"--{name}: not a number: {text!r}") from None


def load_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Merge command-line flags over an optional config file into a :class:`RunConfig`.

    Raises:
        UsageError: unknown flag or key, malformed point or grid, point not
            on the simplex, parameter outside [0, 1].
    """
    args = build_parser().parse_args(argv)
    settings = _read_config_file(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key != "config" and value is not None:
            settings[key] = value

    mode = settings.get("mode")
    if mode not in MODES:
        raise UsageError(f"mode must be one of {', '.join(MODES)}")
    arithmetic = settings.get("arithmetic", "floating")
    if arithmetic not in ("rational", "floating"):
        raise UsageError(f"arithmetic must be rational or floating, got {arithmetic!r}")
    exact = arithmetic == "rational"
    output_format = settings.get("output_format", "csv")
    if output_format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {output_format!r}")

    raw_points = settings.get("point", [DEFAULT_POINT])
    if isinstance(raw_points, str):
        raw_points = [raw_points]
    points = []
    for text in raw_points:
        try:
            points.append(parse_state(text, exact=exact))
        except TwoLocusError as exc:
            raise UsageError(f"--point {text}: {type(exc).__name__}: {exc}") from None
        except ValueError as exc:
            raise UsageError(f"--point {text}: {exc}") from None
    if mode in ("step", "trajectory", "limit") and len(points) != 1:
        raise UsageError(f"{mode} mode takes exactly one --point")

    params = None
    if "a" in settings or "b" in settings:
        if "a" not in settings or "b" not in settings:
            raise UsageError("give both --a and --b")
        a = _parse_number(settings["a"], exact, "a")
        b = _parse_number(settings["b"], exact, "b")
        try:
            params = RecombinationParams(a, b)
        except TwoLocusError as exc:
            raise UsageError(str(exc)) from None

    a_grid = b_grid = None
    if mode in ("sweep", "verify"):
        if params is not None and "a_grid" not in settings and "b_grid" not in settings:
            a_grid = GridSpec.parse(f"{settings['a']}:{settings['a']}:1")
            b_grid = GridSpec.parse(f"{settings['b']}:{settings['b']}:1")
        else:
            a_grid = GridSpec.parse(settings.get("a_grid", DEFAULT_GRID))
            b_grid = GridSpec.parse(settings.get("b_grid", DEFAULT_GRID))
    elif params is None:
        raise UsageError(f"{mode} mode needs --a and --b")

    eps_text = settings.get("eps", "1e-10")
    eps = _parse_number(eps_text, exact, "eps")
    max_steps = int(settings.get("max_steps", RATIONAL_MAX_STEPS if exact else DEFAULT_MAX_STEPS))
    try:
        criterion = StopCriterion(eps, max_steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    steps = settings.get("steps")
    if steps is not None and int(steps) < 0:
        raise UsageError("--steps must be non-negative")
    jobs = int(settings.get("jobs", 1))
    if jobs < 1:
        raise UsageError("--jobs must be at least 1")

    return RunConfig(
        mode=mode,
        points=tuple(points),
        params=params,
        a_grid=a_grid,
        b_grid=b_grid,
        criterion=criterion,
        arithmetic=arithmetic,
        output_path=settings.get("output_path"),
        output_format=output_format,
        steps=None if steps is None else int(steps),
        jobs=jobs,
    )


def _tolerance(exact: bool) -> Tolerance:
    return Tolerance.rational() if exact else Tolerance.floating()


def _sweep_cell(cell) -> list:
    a, b, point, crit, tol = cell
    p = RecombinationParams(a, b)
    report = run_to_convergence(point, p, crit, tol=tol)
    lim = report.oracle_state
    record = SweepRecord(
        a, b, *point, alpha_of(point), report.theoretical_rate, report.steps_taken,
        *lim, report.oracle_gap, linkage_disequilibrium(point),
    )
    return [getattr(record, f.name) for f in fields(SweepRecord)]


def _verify_cell(cell) -> list:
    a, b, point, crit, tol = cell
    p = RecombinationParams(a, b)
    result = verify_against_oracle(point, p, crit, tol)
    report = result.report
    checks = result.checks
    return [
        a, b, *point, alpha_of(point), report.theoretical_rate, report.steps_taken,
        report.oracle_gap, checks["limit"], checks["d_decay"], checks["alpha"], checks["fixed"],
        result.passed,
    ]


def _grid_cells(config: RunConfig) -> list:
    exact = config.exact
    tol = _tolerance(exact)
    return [
        (a, b, point, config.criterion, tol)
        for a in config.a_grid.values(exact)
        for b in config.b_grid.values(exact)
        for point in config.points
    ]


def _map_cells(func, cells: list, jobs: int) -> list:
    if jobs == 1 or len(cells) < 2:
        return [func(cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map yields in submission order, so output order is grid order
        return list(pool.map(func, cells, chunksize=max(1, len(cells) // (4 * jobs))))


def execute(config: RunConfig) -> RunResult:
    """Run the configured mode and return its table."""
    exact = config.exact
    tol = _tolerance(exact)

    if config.mode == "step":
        nxt = step_additive(config.points[0], config.params)
        return RunResult("step", STEP_HEADER, [[*nxt, linkage_disequilibrium(nxt)]])

    if config.mode == "trajectory":
        point, p = config.points[0], config.params
        if config.steps is not None:
            orbit = iterate(point, p, config.steps)
        else:
            orbit = run_to_convergence(point, p, config.criterion, tol=tol).trajectory
        rows = [[n, *s, d] for n, s, d in zip(orbit.steps, orbit.states, orbit.d_values)]
        return RunResult("trajectory", TRAJECTORY_HEADER, rows)

    if config.mode == "limit":
        point, p = config.points[0], config.params
        alpha = alpha_of(point)
        lim = predicted_limit(point, p, tol)
        row = [*point, alpha, eigenvalues(alpha, p).lambda2, *lim]
        return RunResult("limit", LIMIT_HEADER, [row])

    cells = _grid_cells(config)
    if config.mode == "sweep":
        return RunResult("sweep", SWEEP_HEADER, _map_cells(_sweep_cell, cells, config.jobs))

    rows = _map_cells(_verify_cell, cells, config.jobs)
    failed = sum(1 for row in rows if not row[-1])
    return RunResult("verify", VERIFY_HEADER, rows, failed)


def _csv_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return format_scalar(value)


def _json_value(value: Any):
    if isinstance(value, (bool, int)):
        return value
    if isinstance(value, Fraction):
        return format_scalar(value)
    return float(value)


def render(result: RunResult, output_format: str = "csv") -> str:
    if output_format == "json":
        records = [
            {key: _json_value(v) for key, v in zip(result.header, row)} for row in result.rows
        ]
        return json.dumps(records, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.header)
    for row in result.rows:
        writer.writerow([_csv_value(v) for v in row])
    return buf.getvalue()


def emit(result: RunResult, output_format: str = "csv", path: Optional[str] = None) -> str:
    """Write ``result`` to ``path`` (stdout when ``None``) and return the text.

    Raises:
        IoError: the file cannot be written.
    """
    text = render(result, output_format)
    if path is None:
        sys.stdout.write(text)
        return text
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return text


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = load_config(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = execute(config)
        emit(result, config.output_format, config.output_path)
    except MaxStepsExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MAX_STEPS
    except IoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TwoLocusError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if result.mode == "verify":
        total = len(result.rows)
        print(f"verify: {total - result.failed}/{total} cells passed", file=sys.stderr)
        if result.failed:
            return EXIT_VERIFY_FAILED
    return EXIT_OK
