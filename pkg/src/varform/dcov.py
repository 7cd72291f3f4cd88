"""Pairwise distance matrices, U-centering, and the unbiased
distance-covariance estimator.

Everything here operates on plain float64 ndarrays.  The estimator follows
the n(n-3) normalization whose expectation equals the squared population
distance covariance; unlike the V-statistic version it can be negative.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ConfigurationError, DataError, DimensionError, SizeError
from .rng import RngSpec

JointSampler = Callable[[np.random.Generator, int], "tuple[np.ndarray, np.ndarray]"]


def _as_points(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise DataError(f"point set must be an n x q matrix, got ndim={pts.ndim}")
    if pts.shape[0] < 1 or pts.shape[1] < 1:
        raise SizeError(f"point set must be non-empty, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise DataError("non-finite entries in point set")
    return pts


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    """Euclidean distance matrix of the rows of an n x q point set.

    A 1-d input is treated as n scalar points.  The result is symmetric
    with an exactly zero diagonal.
    """
    pts = _as_points(points)
    return cdist(pts, pts)


def u_center(d: np.ndarray) -> np.ndarray:
    """U-center a distance matrix.

    For i != j the entry becomes

        d[i,j] - row_i/(n-2) - row_j/(n-2) + grand/((n-1)(n-2))

    with row sums taken over the full row (the zero diagonal contributes
    nothing) and ``grand`` the sum of all entries; the diagonal is set to 0.
    Every off-diagonal row sum of the result is zero, which is what makes
    the product estimator below unbiased.
    """
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {d.shape}")
    n = d.shape[0]
    if n < 3:
        raise SizeError(f"U-centering divides by n-2; need n >= 3, got {n}")
    # np.sum reduces contiguous axes with pairwise (tree) accumulation, which
    # keeps the near-cancelling sums accurate at large n.
    row = d.sum(axis=1)
    grand = row.sum()
    a = d - row[:, None] / (n - 2) - row[None, :] / (n - 2) + grand / ((n - 1) * (n - 2))
    np.fill_diagonal(a, 0.0)
    return a


def dcov_unbiased(a: np.ndarray, b: np.ndarray) -> float:
    """Unbiased squared-distance-covariance estimate from two U-centered
    matrices:  sum_{i != j} a[i,j] b[i,j] / (n (n-3)).

    The value may be negative; callers must not clamp it.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"U-centered matrices must match: {a.shape} vs {b.shape}")
    n = a.shape[0]
    if n < 4:
        raise SizeError(f"the estimator divides by n(n-3); need n >= 4, got {n}")
    # Diagonals are zero by construction, so the full elementwise sum equals
    # the i != j sum.
    return float((a * b).sum() / (n * (n - 3)))


def dcov_population_oracle(sampler: JointSampler, m: int, seed: "int | RngSpec") -> float:
    """Monte Carlo estimate of the population squared distance covariance.

    Draws an i.i.d. sample of size ``m`` from ``sampler`` and plugs it into
    the conditional-expectation (doubly centered) form of the population
    quantity, averaging the product of centered distances over ordered
    pairs of distinct indices.  The conditional expectations use
    leave-self-out means (divisor m-1) and the grand mean uses m(m-1), so
    this shares no code path with :func:`dcov_unbiased`.

    Intended as a population-level reference for validating the
    finite-sample estimator; cost is O(m^2) time and memory.

    Parameters
    ----------
    sampler : callable
        ``sampler(rng, m)`` returning a pair of arrays with m rows each.
    m : int
        Monte Carlo sample size, at least 1000.
    seed : int or RngSpec
        Master seed for the draw.
    """
    if m < 1000:
        raise ConfigurationError(f"population oracle needs m >= 1000, got {m}")
    rng = RngSpec.coerce(seed).stream("population-oracle")
    z, w = sampler(rng, m)
    dz = pairwise_distances(z)
    dw = pairwise_distances(w)
    if dz.shape != dw.shape:
        raise DimensionError("sampler returned mismatched sample sizes")

    def centered(d: np.ndarray) -> np.ndarray:
        r = d.sum(axis=1) / (m - 1)  # leave-self-out mean; diagonal is 0
        g = d.sum() / (m * (m - 1))
        return d - r[:, None] - r[None, :] + g

    u = centered(dz)
    v = centered(dw)
    prod = u * v
    np.fill_diagonal(prod, 0.0)
    return float(prod.sum() / (m * (m - 1)))
