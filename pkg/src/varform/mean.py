"""Regression-mean estimation.

Two routes: parametric nonlinear least squares over a registered mean
family, and leave-one-out kernel regression with a Gaussian product kernel.
The kernel weight matrix depends only on the covariates, so callers that
refit repeatedly on new responses (the bootstrap) can reuse it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial.distance import cdist

from .dataset import Dataset
from .errors import (
    ConfigurationError,
    DataError,
    IsolatedPointError,
    RankDeficiencyError,
    SizeError,
)

# Denominators below this are treated as numerically empty neighborhoods.
_NW_DENOM_FLOOR = 1e-300


@dataclass(frozen=True)
class KernelSpec:
    """Gaussian product kernel with bandwidth h > 0.

    The kernel is the q-variate standard normal density evaluated at u/h,
    scaled by h**-q.
    """

    bandwidth: float
    kind: str = "gaussian-product"

    def __post_init__(self) -> None:
        if self.kind != "gaussian-product":
            raise ConfigurationError(f"unknown kernel kind {self.kind!r}")
        if not (self.bandwidth > 0 and np.isfinite(self.bandwidth)):
            raise ConfigurationError(f"bandwidth must be positive, got {self.bandwidth}")


def default_bandwidth(n: int, p: int, c: float = 1.2) -> float:
    """Rate-rule bandwidth c * n**(-1/(p+4))."""
    if n < 1 or p < 1:
        raise ConfigurationError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    if not c > 0:
        raise ConfigurationError(f"bandwidth constant must be positive, got {c}")
    return float(c * n ** (-1.0 / (p + 4)))


@dataclass(frozen=True)
class MeanFamily:
    """A parametric mean function m(x, beta).

    ``predict(x, beta)`` maps an (n, p) covariate matrix to n fitted values.
    Families linear in beta may supply ``design(x)`` returning the (n, d)
    design matrix, which unlocks the closed-form least-squares solution.
    ``jacobian(x, beta)``, when given, must return the (n, d) matrix of
    partial derivatives; otherwise finite differences are used.
    """

    id: str
    dim: Callable[[int], int]
    predict: Callable[[np.ndarray, np.ndarray], np.ndarray]
    design: Callable[[np.ndarray], np.ndarray] | None = None
    jacobian: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None


_MEAN_FAMILIES: dict[str, MeanFamily] = {}


def register_mean_family(family: MeanFamily, replace: bool = False) -> None:
    """Add a user-defined mean family to the registry."""
    if family.id in _MEAN_FAMILIES and not replace:
        raise ConfigurationError(f"mean family {family.id!r} already registered")
    _MEAN_FAMILIES[family.id] = family


def mean_family(family_id: str) -> MeanFamily:
    try:
        return _MEAN_FAMILIES[family_id]
    except KeyError:
        raise ConfigurationError(
            f"unknown mean family {family_id!r}; registered: {sorted(_MEAN_FAMILIES)}"
        ) from None


register_mean_family(
    MeanFamily(
        id="linear",
        dim=lambda p: p,
        predict=lambda x, beta: x @ beta,
        design=lambda x: x,
        jacobian=lambda x, beta: x,
    )
)

register_mean_family(
    MeanFamily(
        id="affine",
        dim=lambda p: p + 1,
        predict=lambda x, beta: beta[0] + x @ beta[1:],
        design=lambda x: np.column_stack([np.ones(x.shape[0]), x]),
        jacobian=lambda x, beta: np.column_stack([np.ones(x.shape[0]), x]),
    )
)


@dataclass(frozen=True, eq=False)
class MeanModelSpec:
    """How the regression mean is estimated.

    kind "parametric" fits the named family by least squares; kind
    "nonparametric" uses leave-one-out kernel regression with the
    bandwidth supplied by the test configuration.
    """

    kind: str = "parametric"
    family: str = "linear"
    beta_init: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("parametric", "nonparametric"):
            raise ConfigurationError(f"unknown mean model kind {self.kind!r}")


@dataclass(eq=False)
class MeanFit:
    """Result of a mean fit.

    ``beta_hat`` is None for kernel fits.  ``objective`` is the sum of
    squared errors of ``fitted_values`` against the responses.  ``predict``
    evaluates the fitted mean at new covariate rows when the fit is
    parametric (kernel fits are defined at the sample points only).
    """

    fitted_values: np.ndarray
    beta_hat: np.ndarray | None
    objective: float
    converged: bool
    predict: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)


def fit_mean_parametric(
    ds: Dataset,
    family_id: str,
    beta_init: np.ndarray | None = None,
    *,
    gtol: float = 1e-8,
    max_iter: int = 200,
) -> MeanFit:
    """Least-squares fit of a registered mean family.

    Families that expose a design matrix are solved in closed form (with a
    rank check); the rest go through damped Gauss-Newton iterations.  The
    returned objective is never above the objective at ``beta_init``.
    Non-convergence is reported through ``converged``, not raised.
    """
    fam = mean_family(family_id)
    d = fam.dim(ds.p)
    y, x = ds.y, ds.x

    if fam.design is not None:
        design = fam.design(x)
        beta, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
        if rank < d:
            raise RankDeficiencyError(
                f"design matrix for family {family_id!r} has rank {rank} < {d}"
            )
        fitted = design @ beta
        converged = True
    else:
        if beta_init is None:
            beta_init = np.zeros(d)
        beta_init = np.asarray(beta_init, dtype=np.float64).reshape(-1)
        if beta_init.shape[0] != d:
            raise ConfigurationError(
                f"beta_init has length {beta_init.shape[0]}, family needs {d}"
            )
        if not np.isfinite(beta_init).all():
            raise DataError("beta_init contains non-finite entries")

        def residuals(beta: np.ndarray) -> np.ndarray:
            return y - fam.predict(x, beta)

        jac = (lambda beta: -fam.jacobian(x, beta)) if fam.jacobian else "2-point"
        method = "lm" if ds.n >= d else "trf"
        result = least_squares(
            residuals,
            beta_init,
            jac=jac,
            method=method,
            gtol=gtol,
            max_nfev=max_iter * (d + 1),
        )
        beta = result.x
        fitted = fam.predict(x, beta)
        converged = bool(result.success)
        # Levenberg damping only accepts improving steps, but guard anyway.
        if np.sum((y - fitted) ** 2) > np.sum(residuals(beta_init) ** 2):
            beta = beta_init
            fitted = fam.predict(x, beta)
            converged = False

    objective = float(np.sum((y - fitted) ** 2))
    beta = np.asarray(beta, dtype=np.float64)
    return MeanFit(
        fitted_values=np.asarray(fitted, dtype=np.float64),
        beta_hat=beta,
        objective=objective,
        converged=converged,
        predict=lambda xnew, _b=beta: fam.predict(np.atleast_2d(xnew), _b),
    )


def nw_weights(x: np.ndarray, kernel: KernelSpec) -> tuple[np.ndarray, np.ndarray]:
    """Leave-one-out kernel weight matrix and its row sums.

    Returns (w, denom) where w[i, j] is the kernel weight of point j in the
    neighborhood of point i (zero on the diagonal) and denom[i] is the row
    sum.  Raises if any neighborhood is numerically empty.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    n, p = x.shape
    h = kernel.bandwidth
    d2 = cdist(x, x, metric="sqeuclidean")
    w = np.exp(-d2 / (2.0 * h * h)) * ((2.0 * np.pi) ** (-p / 2.0) / h**p)
    np.fill_diagonal(w, 0.0)
    denom = w.sum(axis=1)
    bad = np.nonzero(denom < _NW_DENOM_FLOOR)[0]
    if bad.size:
        raise IsolatedPointError(
            f"kernel denominator underflowed at sample point(s) {bad.tolist()}; "
            f"bandwidth {h} leaves them isolated"
        )
    return w, denom


def fit_mean_nw(ds: Dataset, kernel: KernelSpec) -> MeanFit:
    """Leave-one-out Nadaraya-Watson estimate at every sample point."""
    if ds.n < 2:
        raise SizeError("kernel regression needs at least 2 points")
    w, denom = nw_weights(ds.x, kernel)
    fitted = (w @ ds.y) / denom
    return MeanFit(
        fitted_values=fitted,
        beta_hat=None,
        objective=float(np.sum((ds.y - fitted) ** 2)),
        converged=True,
        predict=None,
    )
