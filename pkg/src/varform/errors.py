"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigurationError -> 2, DataError and
its subclasses -> 3, CalibrationError -> 4.
"""


class VarformError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(VarformError):
    """Invalid configuration: unknown family or model, bad option value,
    missing column."""


class DataError(VarformError):
    """Input data violates a precondition (non-finite cells, bad shapes)."""


class SizeError(DataError):
    """Sample too small for the requested operation."""


class DimensionError(DataError):
    """Mismatched dimensions between paired inputs."""


class DegenerateResidualsError(DataError):
    """Residuals have zero sample variance and cannot be standardized."""


class IsolatedPointError(DataError):
    """A kernel-regression denominator underflowed at some sample point."""


class RankDeficiencyError(DataError):
    """Design matrix of a closed-form least-squares fit is rank deficient."""


class FamilyEvaluationError(DataError):
    """A variance family returned a non-finite value."""


class CalibrationError(VarformError):
    """Too many bootstrap replicates failed to produce a statistic."""


class ScenarioError(CalibrationError):
    """Too many Monte Carlo replicates failed for some test."""
