"""Residual-bootstrap calibration shared by all tests.

Every test statistic in this package is calibrated the same way: B
replicate statistics are generated in bootstrap worlds, the critical value
is the upper-alpha order statistic of the surviving replicates, and the
p-value adds one to both numerator and denominator so it never reaches
zero.  Replicates run on independent seeded streams keyed by replicate
index, which makes the result identical for any thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CalibrationError, ConfigurationError, DataError
from .rng import RngSpec

# Total attempts per replicate before it is recorded as failed; retries
# use fresh randomness so a pathological resample is not replayed.
BOOTSTRAP_ATTEMPTS = 3
# The run aborts if more than this fraction of replicates fail.
FAILURE_BUDGET = 0.05


@dataclass(frozen=True)
class CalibrationSummary:
    """Decision quantities extracted from the bootstrap sample."""

    critical_value: float
    p_value: float
    reject: bool
    b_effective: int
    failures: int


def run_bootstrap(
    rng_spec: RngSpec,
    b_total: int,
    replicate: Callable[[np.random.Generator], float],
    threads: int = 1,
) -> np.ndarray:
    """Length-``b_total`` array of replicate statistics, NaN where failed.

    ``replicate`` maps a generator to one bootstrap statistic; exceptions
    from degenerate resamples (DataError and linear-algebra failures)
    trigger a retry on a fresh stream, up to BOOTSTRAP_ATTEMPTS in total.
    """
    if threads < 1:
        raise ConfigurationError(f"threads must be >= 1, got {threads}")

    def one(b: int) -> float:
        for attempt in range(BOOTSTRAP_ATTEMPTS):
            tag = "boot" if attempt == 0 else f"boot-a{attempt}"
            rng = rng_spec.stream(tag, b)
            try:
                return replicate(rng)
            except (DataError, np.linalg.LinAlgError):
                continue
        return math.nan

    if threads == 1:
        stats = [one(b) for b in range(b_total)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            stats = list(pool.map(one, range(b_total)))
    return np.asarray(stats, dtype=np.float64)


def summarize(
    statistic: float, boot_stats: np.ndarray, alpha: float
) -> CalibrationSummary:
    """Critical value, p-value and decision from the bootstrap sample.

    The critical value is the ceil((1 - alpha) * B)-th order statistic of
    the surviving replicates; the p-value is (1 + #{boot >= stat}) /
    (B + 1).  Raises CalibrationError when too many replicates failed.
    """
    b_total = boot_stats.size
    finite = boot_stats[np.isfinite(boot_stats)]
    failures = b_total - finite.size
    if failures > FAILURE_BUDGET * b_total:
        raise CalibrationError(
            f"{failures} of {b_total} bootstrap replicates failed after "
            f"{BOOTSTRAP_ATTEMPTS} attempts each"
        )
    b_eff = int(finite.size)
    ordered = np.sort(finite)
    crit_index = math.ceil((1.0 - alpha) * b_eff)
    critical_value = float(ordered[crit_index - 1])
    p_value = float((1 + np.count_nonzero(finite >= statistic)) / (b_eff + 1))
    return CalibrationSummary(
        critical_value=critical_value,
        p_value=p_value,
        reject=bool(statistic > critical_value),
        b_effective=b_eff,
        failures=int(failures),
    )
