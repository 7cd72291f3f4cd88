"""Competitor specification tests calibrated by the same bootstrap.

Two benchmarks for the distance-covariance test:

* a Cramer-von Mises statistic comparing the empirical distribution of
  nonparametrically standardized residuals with that of parametrically
  standardized residuals, and
* a kernel-weighted quadratic-form statistic whose marks are the gaps
  between squared residuals and the fitted parametric variance.

Both are calibrated with the plain residual bootstrap used by the main
test, so all three tests see identical bootstrap worlds for a given seed.
For the Cramer-von Mises test this is a deviation from smooth-bootstrap
conventions and is flagged in the report diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import calibrate
from .dataset import Dataset, ResidualSet, standardize_residuals
from .dcov_test import TestConfig, _fit_mean, _make_mean_refitter
from .errors import ConfigurationError, DimensionError
from .mean import KernelSpec, MeanFit, default_bandwidth, nw_weights
from .rng import RngSpec
from .variance import (
    VARIANCE_FLOOR,
    VarianceFit,
    fit_variance,
    fit_variance_arrays,
    variance_family,
)

COMPETITORS = ("cvm", "wz")


@dataclass(eq=False)
class CompetitorReport:
    """Outcome of one competitor test run."""

    which: str
    statistic: float
    p_value: float
    critical_value: float
    reject: bool
    mean_fit: MeanFit
    variance_fit: VarianceFit
    bootstrap_stats: np.ndarray
    diagnostics: dict


def _as_values(residuals: ResidualSet | np.ndarray) -> np.ndarray:
    values = residuals.values if isinstance(residuals, ResidualSet) else residuals
    return np.asarray(values, dtype=np.float64)


def ecdf(sample: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Right-continuous empirical distribution function of ``sample``.

    F(t) = #{sample <= t} / n, evaluated at each of ``points``.
    """
    sample = np.sort(np.asarray(sample, dtype=np.float64))
    points = np.asarray(points, dtype=np.float64)
    return np.searchsorted(sample, points, side="right") / sample.size


def cvm_statistic(
    eps_hat: ResidualSet | np.ndarray, eta_hat: ResidualSet | np.ndarray
) -> float:
    """Sum of squared ECDF gaps, evaluated at the first residual set.

    T = sum_i [F_eps(eps_i) - F_eta(eps_i)]^2 where F_eps and F_eta are
    the right-continuous ECDFs of the nonparametrically and parametrically
    standardized residuals; the n and 1/n of the integral form cancel.
    """
    eps = _as_values(eps_hat)
    eta = _as_values(eta_hat)
    if eps.shape != eta.shape:
        raise DimensionError(
            f"residual sets differ in shape: {eps.shape} vs {eta.shape}"
        )
    gaps = ecdf(eps, eps) - ecdf(eta, eps)
    return float(np.sum(gaps**2))


def wz_statistic_marks(x: np.ndarray, marks: np.ndarray, kernel: KernelSpec) -> float:
    """Kernel-weighted quadratic form (1/(n(n-1)h^p)) sum_{i!=j} K_ij u_i u_j.

    K is the standard normal product kernel evaluated at (x_i - x_j) / h;
    the h^p normalization is part of the statistic.  Off-diagonal only, so
    the statistic can take either sign.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    marks = np.asarray(marks, dtype=np.float64)
    n = x.shape[0]
    if marks.shape != (n,):
        raise DimensionError(f"marks have shape {marks.shape}, expected ({n},)")
    if n < 2:
        raise ConfigurationError("need at least 2 points for the quadratic form")
    # nw_weights already computes K((x_i - x_j)/h) / h^p with zero diagonal.
    w, _ = nw_weights(x, kernel)
    return float(marks @ w @ marks / (n * (n - 1)))


def wz_statistic(
    ds: Dataset, mean_fit: MeanFit, var_fit: VarianceFit, kernel: KernelSpec
) -> float:
    """Quadratic-form statistic with marks (y_i - mhat_i)^2 - sigma2_i."""
    marks = (ds.y - mean_fit.fitted_values) ** 2 - var_fit.sigma_values**2
    return wz_statistic_marks(ds.x, marks, kernel)


def _nonparametric_sigma(
    w: np.ndarray, denom: np.ndarray, raw_residuals: np.ndarray
) -> np.ndarray:
    """Leave-one-out kernel smooth of squared residuals, floored, rooted."""
    sigma2 = (w @ raw_residuals**2) / denom
    return np.sqrt(np.maximum(sigma2, VARIANCE_FLOOR))


def run_competitor(
    ds: Dataset, config: TestConfig, which: str, threads: int = 1
) -> CompetitorReport:
    """Run one competitor test under the shared bootstrap calibration.

    Identical to the main test's flow: fit mean and parametric variance,
    compute the statistic, then resample standardized residuals, rebuild
    responses under the fitted null, refit both nuisances, and recompute
    the statistic per replicate.
    """
    if which not in COMPETITORS:
        raise ConfigurationError(
            f"unknown competitor {which!r}; available: {COMPETITORS}"
        )
    rng_spec = RngSpec.coerce(config.seed)
    n = ds.n
    kernel = KernelSpec(default_bandwidth(n, ds.p, config.bandwidth_c))

    mean_kernel = kernel if config.mean.kind == "nonparametric" else None
    mean_fit = _fit_mean(ds, config, mean_kernel)
    variance_fit = fit_variance(
        ds, mean_fit, config.variance_family, config.theta_init
    )
    family = variance_family(config.variance_family)
    theta_warm = variance_fit.theta_hat

    w, denom = nw_weights(ds.x, kernel)

    def statistic_of(
        y: np.ndarray, mean_values: np.ndarray, sigma_values: np.ndarray
    ) -> float:
        raw = y - mean_values
        if which == "cvm":
            eps_hat = raw / _nonparametric_sigma(w, denom, raw)
            eta_hat = raw / sigma_values
            return cvm_statistic(eps_hat, eta_hat)
        marks = raw**2 - sigma_values**2
        return float(marks @ w @ marks / (n * (n - 1)))

    statistic = statistic_of(ds.y, mean_fit.fitted_values, variance_fit.sigma_values)

    eta_hat = (ds.y - mean_fit.fitted_values) / variance_fit.sigma_values
    eps = standardize_residuals(eta_hat).values
    refit_mean = _make_mean_refitter(ds, config, mean_kernel, mean_fit)

    def replicate(rng: np.random.Generator) -> float:
        idx = rng.integers(0, n, size=n)
        y_star = mean_fit.fitted_values + variance_fit.sigma_values * eps[idx]
        mean_star = refit_mean(y_star)
        r2_star = (y_star - mean_star.fitted_values) ** 2
        mv_star = mean_star.fitted_values if family.needs_mean else None
        var_star = fit_variance_arrays(
            ds.x,
            r2_star,
            family,
            theta_init=theta_warm,
            mean_values=mv_star,
            restarts=1,
        )
        return statistic_of(y_star, mean_star.fitted_values, var_star.sigma_values)

    boot_stats = calibrate.run_bootstrap(
        rng_spec, config.bootstrap_b, replicate, threads
    )
    summary = calibrate.summarize(statistic, boot_stats, config.alpha)

    diagnostics = {
        "n": n,
        "p": ds.p,
        "bootstrap_b": config.bootstrap_b,
        "bootstrap_effective": summary.b_effective,
        "bootstrap_failures": summary.failures,
        "alpha": config.alpha,
        "mean_kind": config.mean.kind,
        "mean_converged": mean_fit.converged,
        "variance_family": config.variance_family,
        "variance_converged": variance_fit.converged,
        "variance_floored": variance_fit.floored,
        "bandwidth": kernel.bandwidth,
        "bandwidth_c": config.bandwidth_c,
    }
    if which == "cvm":
        diagnostics["bootstrap_note"] = "plain residual bootstrap (not smooth)"

    return CompetitorReport(
        which=which,
        statistic=float(statistic),
        p_value=summary.p_value,
        critical_value=summary.critical_value,
        reject=summary.reject,
        mean_fit=mean_fit,
        variance_fit=variance_fit,
        bootstrap_stats=boot_stats,
        diagnostics=diagnostics,
    )
