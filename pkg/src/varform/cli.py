"""Command-line front end.

Three subcommands: ``test`` runs the specification test(s) on a user CSV,
``simulate`` runs Monte Carlo size/power scenarios, ``sweep`` traces the
rejection rate of the nonparametric-mode test across bandwidth constants.
All randomness flows from the required ``--seed``; given the same flags
and seed the output files are byte-identical (the timestamp header line
is suppressed with ``--no-timestamp``).

Exit codes: 0 success (regardless of the reject decision), 2 configuration
errors, 3 data errors, 4 calibration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report
from .competitors import run_competitor
from .dataset import load_dataset
from .dcov_test import TestConfig, run_test
from .errors import CalibrationError, ConfigurationError, DataError
from .mean import MeanModelSpec
from .simlab import (
    DEFAULT_SWEEP_GRID,
    MODELS,
    MODES,
    TESTS,
    PowerTable,
    SimulationScenario,
    bandwidth_sweep,
    monte_carlo,
)

_EXIT_CONFIGURATION = 2
_EXIT_DATA = 3
_EXIT_CALIBRATION = 4


def _comma_list(raw: str) -> list[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]


def _parse_floats(raw: str, flag: str) -> list[float]:
    try:
        values = [float(v) for v in _comma_list(raw)]
    except ValueError as exc:
        raise ConfigurationError(f"{flag} expects comma-separated reals: {exc}")
    if not values:
        raise ConfigurationError(f"{flag} must list at least one value")
    return values


def _parse_tests(raw: str) -> tuple[str, ...]:
    names = _comma_list(raw)
    if names == ["all"]:
        return TESTS
    for name in names:
        if name not in TESTS:
            raise ConfigurationError(
                f"unknown test {name!r}; choose from {TESTS} or 'all'"
            )
    if not names:
        raise ConfigurationError("--tests must list at least one test")
    return tuple(dict.fromkeys(names))


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--seed", type=int, required=True, help="master seed (required; no wall-clock seeding)"
    )
    sub.add_argument(
        "--B",
        type=int,
        default=500,
        dest="bootstrap_b",
        help="bootstrap replicates (default 500)",
    )
    sub.add_argument(
        "--alpha", type=float, default=0.05, help="significance level (default 0.05)"
    )
    sub.add_argument(
        "--bandwidth-c",
        type=float,
        default=1.2,
        help="bandwidth constant c in h = c * n**(-1/(p+4)) (default 1.2)",
    )
    sub.add_argument(
        "--threads",
        type=int,
        default=1,
        help="parallelism cap; results are independent of this value",
    )
    sub.add_argument(
        "--out", default=".", help="output directory (default current directory)"
    )
    sub.add_argument(
        "--no-timestamp",
        action="store_true",
        help="omit the generated-at header line for byte-stable files",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varform",
        description=(
            "Specification test of a parametric conditional-variance form "
            "in regression, bootstrap-calibrated, with competitor tests and "
            "a Monte Carlo harness."
        ),
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    test = subparsers.add_parser(
        "test", help="run the specification test(s) on a CSV dataset"
    )
    test.add_argument("--input", required=True, help="CSV file with a header row")
    test.add_argument("--y", required=True, help="response column name")
    test.add_argument(
        "--x", required=True, help="comma-separated covariate column names"
    )
    test.add_argument(
        "--mean",
        default="linear",
        help="mean estimator: a registered family id (linear, affine) or "
        "'nw' for kernel regression (default linear)",
    )
    test.add_argument(
        "--variance",
        required=True,
        help="variance family id (constant, abs-linear, quad, sin-abs, "
        "power-of-mean)",
    )
    test.add_argument(
        "--test",
        default="dcov",
        choices=list(TESTS) + ["all"],
        help="which statistic(s) to run (default dcov)",
    )
    _add_common_flags(test)

    simulate = subparsers.add_parser(
        "simulate", help="Monte Carlo size/power for the built-in models"
    )
    simulate.add_argument("--model", required=True, choices=list(MODELS))
    simulate.add_argument(
        "--mode",
        default="nonlinear",
        choices=list(MODES),
        help="mean-estimation mode (default nonlinear)",
    )
    simulate.add_argument("--p", type=int, required=True, help="covariate dimension")
    simulate.add_argument("--n", type=int, required=True, help="sample size")
    simulate.add_argument(
        "--a",
        required=True,
        help="comma-separated deviation amplitudes; 0 is the null "
        "(grid points share seeds)",
    )
    simulate.add_argument(
        "--reps", type=int, default=300, help="Monte Carlo replications (default 300)"
    )
    simulate.add_argument(
        "--tests",
        default="dcov",
        help="comma-separated subset of dcov,cvm,wz or 'all' (default dcov)",
    )
    _add_common_flags(simulate)

    sweep = subparsers.add_parser(
        "sweep",
        help="rejection rate across bandwidth constants (nonparametric mode)",
    )
    sweep.add_argument("--model", required=True, choices=list(MODELS))
    sweep.add_argument("--p", type=int, required=True, help="covariate dimension")
    sweep.add_argument("--n", type=int, required=True, help="sample size")
    sweep.add_argument(
        "--a", type=float, required=True, help="deviation amplitude; 0 is the null"
    )
    sweep.add_argument(
        "--grid",
        default=",".join(str(c) for c in DEFAULT_SWEEP_GRID),
        help="comma-separated bandwidth constants (default 0.6,0.8,1.0,1.2,1.4)",
    )
    sweep.add_argument(
        "--reps", type=int, default=300, help="Monte Carlo replications (default 300)"
    )
    sweep.add_argument(
        "--test",
        default="dcov",
        choices=list(TESTS),
        help="which statistic to sweep (default dcov)",
    )
    _add_common_flags(sweep)

    return parser


def _cmd_test(args: argparse.Namespace) -> int:
    ds = load_dataset(args.input, args.y, _comma_list(args.x))
    if args.mean == "nw":
        mean_spec = MeanModelSpec(kind="nonparametric")
    else:
        mean_spec = MeanModelSpec(kind="parametric", family=args.mean)
    config = TestConfig(
        mean=mean_spec,
        variance_family=args.variance,
        bootstrap_b=args.bootstrap_b,
        alpha=args.alpha,
        seed=args.seed,
        bandwidth_c=args.bandwidth_c,
    )
    which = TESTS if args.test == "all" else (args.test,)
    outdir = Path(args.out)
    stamp = not args.no_timestamp

    first_report = None
    for name in which:
        if name == "dcov":
            result = run_test(ds, config, threads=args.threads)
        else:
            result = run_competitor(ds, config, name, threads=args.threads)
        if first_report is None:
            first_report = result
        suffix = "" if len(which) == 1 else f"_{name}"
        summary = report.render_summary(result, name)
        report.write_text(outdir / f"summary{suffix}.txt", summary, stamp)
        report.write_text(
            outdir / f"bootstrap_stats{suffix}.csv",
            report.render_bootstrap_csv(result.bootstrap_stats),
            stamp,
        )
        sys.stdout.write(summary + "\n")

    report.write_text(
        outdir / "residuals.csv",
        report.render_residuals_csv(
            ds, first_report.mean_fit, first_report.variance_fit
        ),
        stamp,
    )
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    amplitudes = _parse_floats(args.a, "--a")
    tests = _parse_tests(args.tests)
    table = PowerTable(rows=())
    for a in amplitudes:
        scenario = SimulationScenario(
            model=args.model,
            n=args.n,
            p=args.p,
            a=a,
            mode=args.mode,
            reps=args.reps,
            bootstrap_b=args.bootstrap_b,
            alpha=args.alpha,
            bandwidth_c=args.bandwidth_c,
            tests=tests,
            seed=args.seed,
        )
        table = table.merged(monte_carlo(scenario, threads=args.threads))

    outdir = Path(args.out)
    stamp = not args.no_timestamp
    report.write_text(outdir / "power_table.csv", table.to_csv_text(), stamp)
    report.write_text(outdir / "power_table.md", table.to_markdown(), stamp)
    sys.stdout.write(table.to_markdown())
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    grid = tuple(_parse_floats(args.grid, "--grid"))
    curve = bandwidth_sweep(
        args.model,
        args.n,
        args.p,
        args.a,
        grid,
        args.reps,
        args.seed,
        bootstrap_b=args.bootstrap_b,
        alpha=args.alpha,
        test=args.test,
        threads=args.threads,
    )
    outdir = Path(args.out)
    report.write_text(outdir / "sweep.csv", curve.to_csv_text(), not args.no_timestamp)
    sys.stdout.write(curve.to_csv_text())
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"test": _cmd_test, "simulate": _cmd_simulate, "sweep": _cmd_sweep}
    try:
        return handlers[args.subcommand](args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return _EXIT_CONFIGURATION
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return _EXIT_DATA
    except CalibrationError as exc:
        print(f"calibration error: {exc}", file=sys.stderr)
        return _EXIT_CALIBRATION


if __name__ == "__main__":
    sys.exit(main())
