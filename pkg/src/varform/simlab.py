"""Simulation models and the Monte Carlo size/power engine.

Four generators share the design X ~ N(0, I_p), error ~ N(0, 1), mean
beta0' X with beta0 = (1, ..., 1)/sqrt(p), and differ in the conditional
standard deviation sigma_model(x; a).  At a = 0 each model's variance
lies exactly in one shipped parametric family (the null); a > 0 bends it
away (the alternative).

Datasets are keyed by (seed, model, replicate) only: the amplitude a
enters after the random draws, so rejection rates across an a-grid at a
fixed seed are coupled samples.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .competitors import COMPETITORS, run_competitor
from .dataset import Dataset
from .dcov_test import TestConfig, run_test
from .errors import CalibrationError, ConfigurationError, DataError, ScenarioError
from .mean import MeanModelSpec
from .rng import RngSpec

MODELS = ("H11", "H12", "H21", "H22")
MODES = ("nonlinear", "nonparametric")
TESTS = ("dcov",) + COMPETITORS

# Null-family wiring: at a = 0 each generator's conditional variance is
# exactly this family evaluated at the generator's own theta.
_NULL_FAMILY = {
    "H11": "abs-linear",
    "H12": "abs-linear",
    "H21": "quad",
    "H22": "sin-abs",
}


def _check_model(model: str, p: int) -> None:
    if model not in MODELS:
        raise ConfigurationError(f"unknown model {model!r}; available: {MODELS}")
    if p < 1:
        raise ConfigurationError(f"p must be >= 1, got {p}")
    if model == "H12" and p % 2 != 0:
        raise ConfigurationError(
            f"model H12 needs even p (its theta zeroes the last p/2 "
            f"coordinates), got p={p}"
        )


def theta_zero(p: int) -> np.ndarray:
    """(1, ..., 1)/sqrt(p); also the mean coefficient beta0."""
    return np.ones(p) / math.sqrt(p)


def theta_one(p: int) -> np.ndarray:
    """(1, ..., 1, 0, ..., 0)/sqrt(p/2) with p/2 ones (even p only)."""
    if p % 2 != 0:
        raise ConfigurationError(f"theta_one needs even p, got {p}")
    half = p // 2
    return np.concatenate([np.ones(half), np.zeros(half)]) / math.sqrt(half)


def model_sd(model: str, x: np.ndarray, a: float) -> np.ndarray:
    """Conditional standard deviation sigma_model(x; a) for each row of x."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    _check_model(model, x.shape[1])
    if model == "H12":
        index = x @ theta_one(x.shape[1])
    else:
        index = x @ theta_zero(x.shape[1])
    if model == "H11":
        return np.sqrt(1.0 + np.abs(index + a * np.exp(index)))
    if model == "H12":
        return np.sqrt(1.0 + np.abs(index) + a * index)
    if model == "H21":
        return np.sqrt(np.abs(1.0 + index**2 + a * np.sin(index)))
    # H22 multiplies the error by the unsquared expression.
    return 1.0 + np.abs(np.sin(index)) + a * np.exp(index)


def null_family(model: str, p: int) -> tuple[str, np.ndarray]:
    """(variance family id, true theta) matching the a = 0 generator."""
    _check_model(model, p)
    theta = theta_one(p) if model == "H12" else theta_zero(p)
    return _NULL_FAMILY[model], theta


def generate(
    model: str, n: int, p: int, a: float, seed: int, replicate: int = 0
) -> Dataset:
    """One simulated dataset from the sub-seeded stream (seed, model, r).

    X and the error are drawn before a enters, so datasets at different
    amplitudes share their randomness for a fixed (seed, replicate).
    """
    _check_model(model, p)
    rng = RngSpec.coerce(seed).stream(f"gen-{model}", replicate)
    x = rng.standard_normal((n, p))
    noise = rng.standard_normal(n)
    y = x @ theta_zero(p) + model_sd(model, x, a) * noise
    return Dataset(y=y, x=x)


@dataclass(frozen=True)
class SimulationScenario:
    """One Monte Carlo cell: a model at one amplitude, run reps times.

    Desk-scale defaults (reps=300, bootstrap_b=300) resolve 0.05-level
    size bands with binomial SE about 0.013; full-scale reps=1000,
    bootstrap_b=500 remain plain field values.
    """

    model: str
    n: int
    p: int
    a: float = 0.0
    mode: str = "nonlinear"
    reps: int = 300
    bootstrap_b: int = 300
    alpha: float = 0.05
    bandwidth_c: float = 1.2
    tests: tuple[str, ...] = ("dcov",)
    seed: int = 0

    def __post_init__(self) -> None:
        _check_model(self.model, self.p)
        if self.mode not in MODES:
            raise ConfigurationError(
                f"unknown mode {self.mode!r}; available: {MODES}"
            )
        if self.reps < 1:
            raise ConfigurationError(f"reps must be >= 1, got {self.reps}")
        if self.n < 4:
            raise ConfigurationError(f"n must be >= 4, got {self.n}")
        if not self.tests:
            raise ConfigurationError("tests must not be empty")
        for t in self.tests:
            if t not in TESTS:
                raise ConfigurationError(
                    f"unknown test {t!r}; available: {TESTS}"
                )
        RngSpec.coerce(self.seed)


@dataclass(frozen=True)
class PowerRow:
    """One (scenario, test) rejection-rate entry."""

    model: str
    mode: str
    p: int
    n: int
    a: float
    test: str
    reps: int
    rate: float
    se: float
    failures: int


@dataclass(frozen=True)
class PowerTable:
    """Rejection rates with binomial standard errors and failure counts."""

    rows: tuple[PowerRow, ...]

    CSV_COLUMNS = ("model", "mode", "p", "n", "a", "test", "reps", "rate", "se", "failures")

    def merged(self, other: "PowerTable") -> "PowerTable":
        return PowerTable(rows=self.rows + other.rows)

    def rate_of(self, test: str) -> float:
        for row in self.rows:
            if row.test == test:
                return row.rate
        raise KeyError(test)

    def to_csv_text(self) -> str:
        lines = [",".join(self.CSV_COLUMNS)]
        for r in self.rows:
            lines.append(
                ",".join(
                    [
                        r.model,
                        r.mode,
                        str(r.p),
                        str(r.n),
                        repr(float(r.a)),
                        r.test,
                        str(r.reps),
                        repr(float(r.rate)),
                        repr(float(r.se)),
                        str(r.failures),
                    ]
                )
            )
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        header = "| model | mode | p | n | a | test | reps | rate | se | failures |"
        rule = "|---|---|---|---|---|---|---|---|---|---|"
        lines = [header, rule]
        for r in self.rows:
            lines.append(
                f"| {r.model} | {r.mode} | {r.p} | {r.n} | {r.a:g} | {r.test} "
                f"| {r.reps} | {r.rate:.4f} | {r.se:.4f} | {r.failures} |"
            )
        return "\n".join(lines) + "\n"


def _scenario_config(scn: SimulationScenario, test: str, rep: int) -> TestConfig:
    family_id, _ = null_family(scn.model, scn.p)
    kind = "parametric" if scn.mode == "nonlinear" else "nonparametric"
    return TestConfig(
        mean=MeanModelSpec(kind=kind, family="linear"),
        variance_family=family_id,
        bootstrap_b=scn.bootstrap_b,
        alpha=scn.alpha,
        seed=RngSpec.coerce(scn.seed).derive(f"mc-{test}", rep),
        bandwidth_c=scn.bandwidth_c,
    )


def _one_replicate(scn: SimulationScenario, rep: int) -> dict[str, bool | None]:
    """Run every selected test on replicate ``rep``; None marks a failure."""
    ds = generate(scn.model, scn.n, scn.p, scn.a, scn.seed, replicate=rep)
    outcomes: dict[str, bool | None] = {}
    for test in scn.tests:
        config = _scenario_config(scn, test, rep)
        try:
            if test == "dcov":
                outcomes[test] = run_test(ds, config).reject
            else:
                outcomes[test] = run_competitor(ds, config, test).reject
        except (CalibrationError, DataError):
            outcomes[test] = None
    return outcomes


def monte_carlo(scn: SimulationScenario, threads: int = 1) -> PowerTable:
    """Empirical rejection rates for one scenario.

    Rate = rejections / reps exactly; replicates that fail calibration
    count toward ``failures`` (never as rejections) and abort the
    scenario when any test loses more than 5% of them.
    """
    if threads < 1:
        raise ConfigurationError(f"threads must be >= 1, got {threads}")
    if threads == 1:
        outcomes = [_one_replicate(scn, r) for r in range(scn.reps)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(
                pool.map(lambda r: _one_replicate(scn, r), range(scn.reps))
            )

    rows = []
    for test in scn.tests:
        rejections = sum(1 for o in outcomes if o[test] is True)
        failures = sum(1 for o in outcomes if o[test] is None)
        if failures > 0.05 * scn.reps:
            raise ScenarioError(
                f"{failures} of {scn.reps} replicates failed for test "
                f"{test!r} in scenario {scn.model} a={scn.a} n={scn.n}"
            )
        rate = rejections / scn.reps
        rows.append(
            PowerRow(
                model=scn.model,
                mode=scn.mode,
                p=scn.p,
                n=scn.n,
                a=scn.a,
                test=test,
                reps=scn.reps,
                rate=rate,
                se=math.sqrt(rate * (1.0 - rate) / scn.reps),
                failures=failures,
            )
        )
    return PowerTable(rows=tuple(rows))


@dataclass(frozen=True)
class SweepPoint:
    """One bandwidth-sweep entry."""

    c: float
    rate: float
    se: float


@dataclass(frozen=True)
class SweepCurve:
    """Rejection rate against the bandwidth constant c."""

    points: tuple[SweepPoint, ...]

    def to_csv_text(self) -> str:
        lines = ["c,rate,se"]
        for pt in self.points:
            lines.append(
                f"{repr(float(pt.c))},{repr(float(pt.rate))},{repr(float(pt.se))}"
            )
        return "\n".join(lines) + "\n"


DEFAULT_SWEEP_GRID = (0.6, 0.8, 1.0, 1.2, 1.4)


def bandwidth_sweep(
    model: str,
    n: int,
    p: int,
    a: float,
    c_grid: tuple[float, ...] = DEFAULT_SWEEP_GRID,
    reps: int = 300,
    seed: int = 0,
    *,
    bootstrap_b: int = 300,
    alpha: float = 0.05,
    test: str = "dcov",
    threads: int = 1,
) -> SweepCurve:
    """Nonparametric-mode rejection rate at each bandwidth constant.

    The same seed drives every grid point, so the curve is a coupled
    sample and a one-point grid reproduces the matching monte_carlo entry
    exactly.
    """
    if not c_grid:
        raise ConfigurationError("c_grid must not be empty")
    for c in c_grid:
        if not c > 0:
            raise ConfigurationError(f"bandwidth constants must be positive, got {c}")
    base = SimulationScenario(
        model=model,
        n=n,
        p=p,
        a=a,
        mode="nonparametric",
        reps=reps,
        bootstrap_b=bootstrap_b,
        alpha=alpha,
        tests=(test,),
        seed=seed,
    )
    points = []
    for c in c_grid:
        table = monte_carlo(replace(base, bandwidth_c=float(c)), threads=threads)
        row = table.rows[0]
        points.append(SweepPoint(c=float(c), rate=row.rate, se=row.se))
    return SweepCurve(points=tuple(points))
