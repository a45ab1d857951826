"""Scenario-driven command line front end.

A scenario is a flat key-value text file (``key = value`` per line, ``#``
comments).  Running one produces four artifacts in the output directory,
all deterministic for a fixed seed and kernel backend:

* ``<fixture>_alpha.csv``: tail-ratio profile over the threshold grid;
* ``<fixture>_report.csv`` / ``<fixture>_report.json``: per-n study rows;
* ``<fixture>_summary.txt``: one-page verdict summary.

Exit codes: 0 success, 2 scenario parse/validation error (with line and
column), 3 unknown fixture, 4 runtime numeric error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .conditions import (SingularityVerdict, UniformityVerdict,
                         check_uniform_convergence, classify_singularity,
                         default_s_grid)
from .errors import ScenarioParseError, UnknownFixtureError
from .montecarlo import convergence_study
from .sequences import (fixture, fixture_description, fixture_names,
                        total_variance, total_variance_trend)

DEFAULT_N_GRID = (10, 100, 1000)
DEFAULT_SAMPLES = 100_000
DEFAULT_EPS = 0.5
DEFAULT_SEED = 42
DEFAULT_ALPHA_PREFIX = 50
DEFAULT_TOL = 1e-6


@dataclass
class Scenario:
    """Declarative description of one study run."""

    fixture: str
    n_grid: tuple[int, ...] = DEFAULT_N_GRID
    samples: int = DEFAULT_SAMPLES
    eps: float = DEFAULT_EPS
    s_grid: tuple[float, ...] = field(
        default_factory=lambda: tuple(default_s_grid()))
    seed: int = DEFAULT_SEED
    alpha_prefix: int = DEFAULT_ALPHA_PREFIX
    tol: float = DEFAULT_TOL
    out_dir: str = "."
    workers: int = 1


def _parse_int(raw: str, line: int, column: int, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ScenarioParseError(f"{key} expects an integer, got {raw!r}",
                                 line, column) from None


def _parse_float(raw: str, line: int, column: int, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ScenarioParseError(f"{key} expects a number, got {raw!r}",
                                 line, column) from None


def _parse_list(raw: str, line: int, column: int, key: str, conv):
    items = [part.strip() for part in raw.split(",")]
    if any(not part for part in items):
        raise ScenarioParseError(f"{key} expects a comma-separated list",
                                 line, column)
    return tuple(conv(part, line, column, key) for part in items)


_SCENARIO_KEYS = ("fixture", "n_grid", "samples", "eps", "s_grid", "seed",
                  "alpha_prefix", "tol", "out_dir", "workers")


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document; errors carry line/column."""
    seen: dict[str, object] = {}
    lines = text.splitlines()
    for lineno, rawline in enumerate(lines, start=1):
        stripped = rawline.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ScenarioParseError("expected 'key = value'", lineno, 1)
        key_part, value_part = stripped.split("=", 1)
        key = key_part.strip()
        value = value_part.strip()
        value_col = rawline.index("=") + 2
        if key not in _SCENARIO_KEYS:
            raise ScenarioParseError(f"unknown key {key!r}", lineno,
                                     rawline.index(key_part.strip()) + 1)
        if not value:
            raise ScenarioParseError(f"{key} has no value", lineno, value_col)
        if key in seen:
            raise ScenarioParseError(f"duplicate key {key!r}", lineno, 1)

        if key == "fixture" or key == "out_dir":
            seen[key] = value
        elif key == "n_grid":
            grid = _parse_list(value, lineno, value_col, key, _parse_int)
            if any(n < 1 for n in grid):
                raise ScenarioParseError("n_grid entries must be >= 1",
                                         lineno, value_col)
            seen[key] = grid
        elif key == "s_grid":
            grid = _parse_list(value, lineno, value_col, key, _parse_float)
            if any(s < 0 for s in grid) or any(
                    b <= a for a, b in zip(grid, grid[1:])):
                raise ScenarioParseError(
                    "s_grid must be nonnegative and strictly increasing",
                    lineno, value_col)
            seen[key] = grid
        elif key in ("samples", "alpha_prefix", "workers"):
            number = _parse_int(value, lineno, value_col, key)
            if number < 1:
                raise ScenarioParseError(f"{key} must be >= 1", lineno,
                                         value_col)
            seen[key] = number
        elif key == "seed":
            number = _parse_int(value, lineno, value_col, key)
            if not 0 <= number < 2 ** 64:
                raise ScenarioParseError("seed must fit in 64 bits", lineno,
                                         value_col)
            seen[key] = number
        else:  # eps, tol
            number = _parse_float(value, lineno, value_col, key)
            if not number > 0:
                raise ScenarioParseError(f"{key} must be > 0", lineno,
                                         value_col)
            seen[key] = number

    if "fixture" not in seen:
        raise ScenarioParseError("missing required key 'fixture'",
                                 len(lines) + 1, 1)
    return Scenario(**seen)  # type: ignore[arg-type]


def load_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def clt_expectation(singularity: SingularityVerdict,
                    uniformity: UniformityVerdict, trend: str) -> str:
    """Verdict line derived purely from the three condition checks.

    Normal convergence is predicted only when the hypotheses hold (the
    sequence is non-singular and tails decay uniformly) and the total
    variance diverges; failing hypotheses yield 'out-of-hypothesis', never
    'no', since the equivalence says nothing there.
    """
    if singularity is not SingularityVerdict.NON_SINGULAR:
        return "out-of-hypothesis (singular sequence)"
    if uniformity is UniformityVerdict.SINGULAR_TRIVIAL:
        return "out-of-hypothesis (singular sequence)"
    if uniformity is UniformityVerdict.FAILS:
        return "out-of-hypothesis (uniform convergence fails)"
    if trend == "diverging":
        return "yes"
    if trend in ("bounded", "zero"):
        return "no (total variance bounded)"
    return "indeterminate (total variance trend unclear)"


def _ks_trend(values: list[float]) -> str:
    if not values:
        return "n/a (all rows degenerate)"
    if all(b <= a for a, b in zip(values, values[1:])):
        return "nonincreasing"
    return "mixed"


def _summary_text(scenario: Scenario, report, profile, singularity,
                  trend: str, trend_detail: str, expectation: str) -> str:
    ks_values = [row.ks for row in report.rows if not row.degenerate]
    ks_cells = ", ".join(
        f"n={row.n}: " + ("degenerate" if row.degenerate else f"{row.ks:.6f}")
        for row in report.rows)
    lines = [
        f"study: {scenario.fixture}",
        f"seed: {scenario.seed}",
        f"samples per n: {scenario.samples}",
        f"epsilon: {scenario.eps:g}",
        f"backend: {report.backend}",
        "",
        f"singularity: {singularity.value}",
        f"uniform convergence: {profile.verdict.value}",
        f"  {profile.detail}",
        f"total variance: {trend} ({trend_detail})",
        f"KS by n: {ks_cells}",
        f"KS trend: {_ks_trend(ks_values)}",
        "",
        f"CLT expected: {expectation}",
    ]
    return "\n".join(lines) + "\n"


def run_scenario(path, seed: Optional[int] = None, out: Optional[str] = None,
                 samples: Optional[int] = None, workers: Optional[int] = None,
                 quiet: bool = False) -> int:
    """Execute a scenario file; returns the process exit code."""
    try:
        scenario = load_scenario(path)
    except ScenarioParseError as exc:
        print(f"{path}:{exc.line}:{exc.column}: {exc.message}",
              file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{path}:0:0: cannot read scenario: {exc}", file=sys.stderr)
        return 2

    if seed is not None:
        scenario = replace(scenario, seed=seed)
    if out is not None:
        scenario = replace(scenario, out_dir=str(out))
    if samples is not None:
        scenario = replace(scenario, samples=samples)
    if workers is not None:
        scenario = replace(scenario, workers=workers)

    try:
        seq = fixture(scenario.fixture)
    except UnknownFixtureError as exc:
        print(str(exc), file=sys.stderr)
        return 3

    try:
        profile = check_uniform_convergence(seq, scenario.s_grid,
                                            prefix=scenario.alpha_prefix,
                                            tol=scenario.tol)
        singularity = classify_singularity(seq, prefix=scenario.alpha_prefix)
        report = convergence_study(seq, scenario.n_grid, scenario.samples,
                                   scenario.eps, scenario.seed,
                                   workers=scenario.workers,
                                   s_grid=scenario.s_grid,
                                   alpha_prefix=scenario.alpha_prefix,
                                   tol=scenario.tol)
        n_ref = max(scenario.n_grid)
        trend = total_variance_trend(seq, n_ref)
        v_lo = total_variance(seq, n_ref).total_variance
        v_hi = total_variance(seq, 8 * n_ref).total_variance
        trend_detail = f"B^2 = {v_lo:g} at n={n_ref}, {v_hi:g} at n={8 * n_ref}"
        expectation = clt_expectation(singularity, profile.verdict, trend)

        out_dir = Path(scenario.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = scenario.fixture
        profile.write_csv(out_dir / f"{stem}_alpha.csv")
        report.write_csv(out_dir / f"{stem}_report.csv")
        report.write_json(out_dir / f"{stem}_report.json")
        summary = _summary_text(scenario, report, profile, singularity,
                                trend, trend_detail, expectation)
        (out_dir / f"{stem}_summary.txt").write_text(summary,
                                                     encoding="utf-8")
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 4

    if not quiet:
        print(summary, end="")
        print(f"artifacts written to {out_dir.resolve()}")
    return 0


def list_fixtures() -> str:
    """One line per registered fixture: name and regime description."""
    names = fixture_names()
    width = max(len(name) for name in names)
    return "\n".join(f"{name:<{width}}  {fixture_description(name)}"
                     for name in names)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cltkit",
        description="Condition checks and Monte Carlo studies for "
                    "normalized sums of independent sequences.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run a scenario file")
    run_parser.add_argument("scenario", help="path to the scenario document")
    run_parser.add_argument("--seed", type=int, default=None,
                            help="override the scenario seed (u64)")
    run_parser.add_argument("--out", default=None,
                            help="override the output directory")
    run_parser.add_argument("--samples", type=int, default=None,
                            help="override samples per n")
    run_parser.add_argument("--workers", type=int, default=None,
                            help="worker threads for the simulation engine")
    run_parser.add_argument("--quiet", action="store_true",
                            help="suppress the summary on stdout")

    sub.add_parser("list-fixtures", help="list registered sequence fixtures")

    args = parser.parse_args(argv)
    if args.command == "list-fixtures":
        print(list_fixtures())
        return 0
    return run_scenario(args.scenario, seed=args.seed, out=args.out,
                        samples=args.samples, workers=args.workers,
                        quiet=args.quiet)


if __name__ == "__main__":
    sys.exit(main())
