"""Dataset container, residual vectors, and CSV ingestion.

CSV files are expected to carry a header row, use '.' as the decimal point,
no thousands separators, and UTF-8 encoding.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    DataError,
    DegenerateResidualsError,
    SizeError,
)

# The unbiased dependence estimator divides by n(n-3) and its centering by n-2.
MIN_ROWS = 4

ResidualKind = Literal["raw-eta-hat", "standardized", "bootstrap-star"]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable sample of n real responses with p-dimensional covariates.

    Attributes
    ----------
    y : (n,) ndarray
        Responses.
    x : (n, p) ndarray
        Covariate rows, aligned with ``y``.
    """

    y: np.ndarray
    x: np.ndarray

    def __post_init__(self) -> None:
        y = _frozen(np.asarray(self.y, dtype=np.float64).reshape(-1))
        x = np.asarray(self.x, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2:
            raise DataError(f"covariates must be a 2-d matrix, got ndim={x.ndim}")
        x = _frozen(x)
        if x.shape[0] != y.shape[0]:
            raise DataError(
                f"covariate rows ({x.shape[0]}) do not match responses ({y.shape[0]})"
            )
        if y.shape[0] < MIN_ROWS:
            raise SizeError(f"need at least {MIN_ROWS} rows, got {y.shape[0]}")
        if x.shape[1] < 1:
            raise DataError("need at least one covariate column")
        if not np.isfinite(y).all():
            raise DataError("non-finite entries in responses")
        if not np.isfinite(x).all():
            raise DataError("non-finite entries in covariates")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True, eq=False)
class ResidualSet:
    """A length-n residual vector tagged with how it was produced."""

    values: np.ndarray
    kind: ResidualKind

    def __post_init__(self) -> None:
        if self.kind not in ("raw-eta-hat", "standardized", "bootstrap-star"):
            raise ConfigurationError(f"unknown residual kind {self.kind!r}")
        object.__setattr__(
            self, "values", _frozen(np.asarray(self.values, dtype=np.float64).reshape(-1))
        )

    def __len__(self) -> int:
        return self.values.shape[0]


def load_dataset(path: str, y_column: str, x_columns: Sequence[str]) -> Dataset:
    """Read a CSV file into a :class:`Dataset`.

    Parameters
    ----------
    path : str
        CSV file with a header row.
    y_column : str
        Name of the response column.
    x_columns : sequence of str
        Ordered covariate column names.

    Raises
    ------
    ConfigurationError
        If a named column is missing from the header.
    DataError
        If the file cannot be read, or a referenced cell does not parse as
        a finite real; the message names the offending row and column.
    SizeError
        If fewer than four data rows are present.
    """
    x_columns = list(x_columns)
    if not x_columns:
        raise ConfigurationError("at least one covariate column is required")
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        wanted = [y_column] + x_columns
        missing = [c for c in wanted if c not in header]
        if missing:
            raise ConfigurationError(
                f"{path}: missing column(s) {missing}; header has {header}"
            )
        idx = [header.index(c) for c in wanted]

        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            parsed = []
            for col_name, col_idx in zip(wanted, idx):
                if col_idx >= len(row):
                    raise DataError(
                        f"{path}: row {lineno} has no value for column {col_name!r}"
                    )
                cell = row[col_idx].strip()
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: row {lineno}, column {col_name!r}: "
                        f"cannot parse {cell!r} as a real number"
                    ) from None
                if not np.isfinite(value):
                    raise DataError(
                        f"{path}: row {lineno}, column {col_name!r}: "
                        f"non-finite value {cell!r}"
                    )
                parsed.append(value)
            rows.append(parsed)

    if len(rows) < MIN_ROWS:
        raise SizeError(f"{path}: need at least {MIN_ROWS} data rows, got {len(rows)}")
    data = np.asarray(rows, dtype=np.float64)
    return Dataset(y=data[:, 0], x=data[:, 1:])


def save_dataset(
    ds: Dataset,
    path: str,
    y_column: str = "y",
    x_columns: Sequence[str] | None = None,
) -> None:
    """Write a dataset back to CSV; values round-trip bit-for-bit."""
    if x_columns is None:
        x_columns = [f"x{j + 1}" for j in range(ds.p)]
    x_columns = list(x_columns)
    if len(x_columns) != ds.p:
        raise ConfigurationError(
            f"{len(x_columns)} covariate names for {ds.p} columns"
        )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([y_column] + x_columns)
        for i in range(ds.n):
            # repr() is the shortest exact decimal form of a float
            writer.writerow([repr(float(ds.y[i]))] + [repr(float(v)) for v in ds.x[i]])


def standardize_residuals(r: ResidualSet | np.ndarray) -> ResidualSet:
    """Center and scale residuals to sample mean 0 and 1/n-variance 1.

    The divisor is the uncorrected (1/n) standard deviation, so the output
    satisfies mean(out) = 0 and mean(out**2) = 1 exactly up to rounding.
    Applying the transform twice gives the same result as applying it once.
    A bare array is accepted in place of a ResidualSet.

    Raises
    ------
    DegenerateResidualsError
        If the residuals have zero sample variance.
    """
    v = r.values if isinstance(r, ResidualSet) else np.asarray(r, dtype=np.float64)
    centered = v - v.mean()
    scale = np.sqrt(np.mean(centered**2))
    if scale == 0.0 or not np.isfinite(scale):
        raise DegenerateResidualsError(
            "residuals are constant; cannot standardize a zero-variance sample"
        )
    return ResidualSet(values=centered / scale, kind="standardized")
