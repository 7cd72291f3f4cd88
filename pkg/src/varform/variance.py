"""Parametric conditional-variance families and their least-squares fit.

The fit minimizes sum_i [(y_i - mhat_i)^2 - sigma2(x_i, theta)]^2 over
theta.  Several shipped families involve absolute values, so the objective
is only piecewise smooth; the optimizer is Nelder-Mead with deterministic
restarts rather than a gradient method.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .dataset import Dataset
from .errors import ConfigurationError, FamilyEvaluationError
from .mean import MeanFit

# Fitted variances are clipped from below at this floor before taking
# square roots, so bootstrap worlds never divide by zero.
VARIANCE_FLOOR = 1e-8

_RESTARTS_DEFAULT = 5
_MAXITER_DEFAULT = 500
_XATOL = 1e-8
_FATOL = 1e-8
# Restart perturbations come from a fixed stream so that fits are pure
# functions of their inputs, independent of any user-facing seed.
_RESTART_SEED = 0x5EED_0F_5EED


@dataclass(frozen=True)
class VarianceFamily:
    """A parametric family sigma2(x, theta) for the conditional variance.

    ``dim(p)`` gives the parameter length for p covariates.  ``_eval``
    returns raw (unfloored) variances; families with ``needs_mean`` True
    receive the fitted mean values as third argument.  ``theta_init(p, r2)``
    maps the covariate dimension and the mean squared residual to a
    starting point.
    """

    id: str
    dim: Callable[[int], int]
    _eval: Callable[..., np.ndarray]
    theta_init: Callable[[int, float], np.ndarray]
    needs_mean: bool = False

    def evaluate(
        self,
        x: np.ndarray,
        theta: np.ndarray,
        mean_values: np.ndarray | None = None,
    ) -> np.ndarray:
        """Floored variance values sigma2(x_i, theta) as an (n,) array."""
        theta = np.asarray(theta, dtype=np.float64).reshape(-1)
        d = self.dim(x.shape[1] if x.ndim == 2 else 1)
        if theta.shape[0] != d:
            raise ConfigurationError(
                f"family {self.id!r} needs {d} parameter(s), got {theta.shape[0]}"
            )
        if self.needs_mean:
            if mean_values is None:
                raise ConfigurationError(
                    f"family {self.id!r} requires fitted mean values"
                )
            raw = self._eval(x, theta, np.asarray(mean_values, dtype=np.float64))
        else:
            raw = self._eval(x, theta)
        raw = np.asarray(raw, dtype=np.float64)
        if not np.isfinite(raw).all():
            raise FamilyEvaluationError(
                f"family {self.id!r} produced non-finite variances at theta={theta!r}"
            )
        return np.maximum(raw, VARIANCE_FLOOR)


_VARIANCE_FAMILIES: dict[str, VarianceFamily] = {}


def register_variance_family(family: VarianceFamily, replace: bool = False) -> None:
    """Add a user-defined variance family to the registry."""
    if family.id in _VARIANCE_FAMILIES and not replace:
        raise ConfigurationError(f"variance family {family.id!r} already registered")
    _VARIANCE_FAMILIES[family.id] = family


def variance_family(family_id: str) -> VarianceFamily:
    try:
        return _VARIANCE_FAMILIES[family_id]
    except KeyError:
        raise ConfigurationError(
            f"unknown variance family {family_id!r}; "
            f"registered: {sorted(_VARIANCE_FAMILIES)}"
        ) from None


register_variance_family(
    VarianceFamily(
        id="constant",
        dim=lambda p: 1,
        _eval=lambda x, t: np.full(x.shape[0], t[0]),
        theta_init=lambda p, r2: np.array([r2]),
    )
)

register_variance_family(
    VarianceFamily(
        id="abs-linear",
        dim=lambda p: p,
        _eval=lambda x, t: 1.0 + np.abs(x @ t),
        theta_init=lambda p, r2: np.ones(p) / np.sqrt(p),
    )
)

register_variance_family(
    VarianceFamily(
        id="quad",
        dim=lambda p: p,
        _eval=lambda x, t: 1.0 + (x @ t) ** 2,
        theta_init=lambda p, r2: np.ones(p) / np.sqrt(p),
    )
)

register_variance_family(
    VarianceFamily(
        id="sin-abs",
        dim=lambda p: p,
        _eval=lambda x, t: (1.0 + np.abs(np.sin(x @ t))) ** 2,
        theta_init=lambda p, r2: np.ones(p) / np.sqrt(p),
    )
)

register_variance_family(
    VarianceFamily(
        id="power-of-mean",
        dim=lambda p: 2,
        # theta0 * (m^2)^theta1 stays real for negative fitted means.
        _eval=lambda x, t, m: t[0] * (m**2) ** t[1],
        theta_init=lambda p, r2: np.array([r2, 0.0]),
        needs_mean=True,
    )
)


@dataclass(eq=False)
class VarianceFit:
    """Result of a variance fit.

    ``sigma_values`` are the floored standard deviations sigma(x_i,
    theta_hat).  ``floored`` records whether the floor was active anywhere
    at the solution.  ``n_restarts_used`` counts optimizer starts.
    """

    theta_hat: np.ndarray
    objective: float
    sigma_values: np.ndarray
    converged: bool
    n_restarts_used: int
    floored: bool


def _restart_points(theta0: np.ndarray, restarts: int) -> list[np.ndarray]:
    points = [theta0]
    if restarts > 1:
        rng = np.random.default_rng(np.random.SeedSequence(_RESTART_SEED))
        scale = 0.5 * max(1.0, float(np.linalg.norm(theta0)))
        for _ in range(restarts - 1):
            points.append(theta0 + scale * rng.standard_normal(theta0.shape[0]))
    return points


def fit_variance_arrays(
    x: np.ndarray,
    squared_residuals: np.ndarray,
    family: VarianceFamily,
    theta_init: np.ndarray | None = None,
    mean_values: np.ndarray | None = None,
    *,
    restarts: int = _RESTARTS_DEFAULT,
    maxiter: int = _MAXITER_DEFAULT,
) -> VarianceFit:
    """Core Nelder-Mead fit on raw arrays (used directly by the bootstrap).

    Runs ``restarts`` deterministic starts (the supplied initial point plus
    perturbations of it) and keeps the strictly best objective, first start
    winning ties.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    r2 = np.asarray(squared_residuals, dtype=np.float64)
    if restarts < 1:
        raise ConfigurationError(f"restarts must be >= 1, got {restarts}")

    if theta_init is None:
        theta0 = family.theta_init(x.shape[1], float(np.mean(r2)))
    else:
        theta0 = np.asarray(theta_init, dtype=np.float64).reshape(-1)
    d = family.dim(x.shape[1])
    if theta0.shape[0] != d:
        raise ConfigurationError(
            f"theta_init has length {theta0.shape[0]}, family {family.id!r} needs {d}"
        )

    def objective(theta: np.ndarray) -> float:
        try:
            sigma2 = family.evaluate(x, theta, mean_values)
        except FamilyEvaluationError:
            return np.inf
        return float(np.sum((r2 - sigma2) ** 2))

    best = None
    for start in _restart_points(theta0, restarts):
        result = minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={"xatol": _XATOL, "fatol": _FATOL, "maxiter": maxiter},
        )
        if best is None or result.fun < best.fun:
            best = result

    theta_hat = np.asarray(best.x, dtype=np.float64)
    sigma2_hat = family.evaluate(x, theta_hat, mean_values)
    floored = bool(np.any(sigma2_hat == VARIANCE_FLOOR))
    return VarianceFit(
        theta_hat=theta_hat,
        objective=float(best.fun),
        sigma_values=np.sqrt(sigma2_hat),
        converged=bool(best.success),
        n_restarts_used=restarts,
        floored=floored,
    )


def fit_variance(
    ds: Dataset,
    mean_fit: MeanFit,
    family_id: str,
    theta_init: np.ndarray | None = None,
    *,
    restarts: int = _RESTARTS_DEFAULT,
    maxiter: int = _MAXITER_DEFAULT,
) -> VarianceFit:
    """Fit a variance family to the squared mean-fit residuals."""
    family = variance_family(family_id)
    r2 = (ds.y - mean_fit.fitted_values) ** 2
    mean_values = mean_fit.fitted_values if family.needs_mean else None
    return fit_variance_arrays(
        ds.x,
        r2,
        family,
        theta_init,
        mean_values,
        restarts=restarts,
        maxiter=maxiter,
    )


def sigma_at(
    family_id: str,
    theta: np.ndarray,
    x: np.ndarray,
    mean_values: np.ndarray | None = None,
) -> np.ndarray:
    """Floored standard deviations sigma(x_i, theta) for given parameters."""
    family = variance_family(family_id)
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    return np.sqrt(family.evaluate(x, theta, mean_values))
