"""Plain-text and CSV serialization of test reports.

Every float is written with repr(float(v)) so files round-trip exactly
and identical runs produce identical bytes.  File writers prepend a
timestamp comment line by default; callers that need byte-stable output
across runs suppress it.
"""

from __future__ import annotations

import datetime
from pathlib import Path

import numpy as np

from .competitors import CompetitorReport
from .dataset import Dataset
from .dcov_test import TestReport
from .mean import MeanFit
from .variance import VarianceFit


def format_value(value) -> str:
    """Stable textual form: exact floats, lowercase booleans, plain ints."""
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, np.ndarray):
        return "[" + ", ".join(repr(float(v)) for v in value) + "]"
    return str(value)


def render_summary(report: TestReport | CompetitorReport, test_name: str) -> str:
    """Key-value summary of one test run, one ``key: value`` per line."""
    pairs: list[tuple[str, object]] = [("test", test_name)]
    diag = dict(report.diagnostics)
    for key in ("n", "p", "mean_kind", "variance_family"):
        if key in diag:
            pairs.append((key, diag.pop(key)))
    pairs.append(("statistic", report.statistic))
    if isinstance(report, TestReport):
        pairs.append(("u_n", report.u_n))
    pairs.extend(
        [
            ("p_value", report.p_value),
            ("critical_value", report.critical_value),
            ("reject", report.reject),
        ]
    )
    if report.mean_fit.beta_hat is not None:
        pairs.append(("beta_hat", report.mean_fit.beta_hat))
    pairs.append(("theta_hat", report.variance_fit.theta_hat))
    for key in sorted(diag):
        pairs.append((key, diag[key]))
    return "".join(f"{k}: {format_value(v)}\n" for k, v in pairs)


def render_bootstrap_csv(bootstrap_stats: np.ndarray) -> str:
    """Replicate-indexed bootstrap statistics; failed replicates are nan."""
    lines = ["replicate,statistic"]
    for b, value in enumerate(bootstrap_stats):
        lines.append(f"{b},{repr(float(value))}")
    return "\n".join(lines) + "\n"


def render_residuals_csv(
    ds: Dataset, mean_fit: MeanFit, variance_fit: VarianceFit
) -> str:
    """Per-observation table for residual scatter diagnostics."""
    header = (
        [f"x{j + 1}" for j in range(ds.p)]
        + ["y", "fitted", "sigma", "eta_hat"]
    )
    eta = (ds.y - mean_fit.fitted_values) / variance_fit.sigma_values
    lines = [",".join(header)]
    for i in range(ds.n):
        cells = [repr(float(v)) for v in ds.x[i]]
        cells += [
            repr(float(ds.y[i])),
            repr(float(mean_fit.fitted_values[i])),
            repr(float(variance_fit.sigma_values[i])),
            repr(float(eta[i])),
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def timestamp_line() -> str:
    return (
        "# generated "
        + datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        + "\n"
    )


def write_text(path: str | Path, body: str, timestamp: bool = True) -> Path:
    """Write ``body`` to ``path``, optionally prefixed by a timestamp line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    prefix = timestamp_line() if timestamp else ""
    path.write_text(prefix + body, encoding="utf-8")
    return path
