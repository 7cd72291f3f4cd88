"""Specification testing of parametric conditional-variance forms.

The package tests whether the conditional variance of a regression error
belongs to a chosen parametric family, using the unbiased distance
covariance between covariates and model-standardized residuals, calibrated
by a residual bootstrap.  It ships two competitor tests, simulation
generators, and a Monte Carlo size/power engine.
"""

from .calibrate import CalibrationSummary
from .competitors import (
    COMPETITORS,
    CompetitorReport,
    cvm_statistic,
    ecdf,
    run_competitor,
    wz_statistic,
    wz_statistic_marks,
)
from .dataset import (
    Dataset,
    ResidualSet,
    load_dataset,
    save_dataset,
    standardize_residuals,
)
from .dcov import dcov_population_oracle, dcov_unbiased, pairwise_distances, u_center
from .dcov_test import (
    TestConfig,
    TestReport,
    compute_residuals,
    run_test,
    test_statistic,
)
from .errors import (
    CalibrationError,
    ConfigurationError,
    DataError,
    DegenerateResidualsError,
    DimensionError,
    FamilyEvaluationError,
    IsolatedPointError,
    RankDeficiencyError,
    ScenarioError,
    SizeError,
    VarformError,
)
from .mean import (
    KernelSpec,
    MeanFamily,
    MeanFit,
    MeanModelSpec,
    default_bandwidth,
    fit_mean_nw,
    fit_mean_parametric,
    mean_family,
    nw_weights,
    register_mean_family,
)
from .rng import RngSpec
from .simlab import (
    DEFAULT_SWEEP_GRID,
    MODELS,
    MODES,
    TESTS,
    PowerRow,
    PowerTable,
    SimulationScenario,
    SweepCurve,
    SweepPoint,
    bandwidth_sweep,
    generate,
    model_sd,
    monte_carlo,
    null_family,
    theta_one,
    theta_zero,
)
from .variance import (
    VARIANCE_FLOOR,
    VarianceFamily,
    VarianceFit,
    fit_variance,
    fit_variance_arrays,
    register_variance_family,
    sigma_at,
    variance_family,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "CalibrationSummary",
    "COMPETITORS",
    "CompetitorReport",
    "ConfigurationError",
    "DataError",
    "Dataset",
    "DEFAULT_SWEEP_GRID",
    "DegenerateResidualsError",
    "DimensionError",
    "FamilyEvaluationError",
    "IsolatedPointError",
    "KernelSpec",
    "MeanFamily",
    "MeanFit",
    "MeanModelSpec",
    "MODELS",
    "MODES",
    "PowerRow",
    "PowerTable",
    "RankDeficiencyError",
    "ResidualSet",
    "RngSpec",
    "ScenarioError",
    "SimulationScenario",
    "SizeError",
    "SweepCurve",
    "SweepPoint",
    "TestConfig",
    "TestReport",
    "TESTS",
    "VarformError",
    "VarianceFamily",
    "VarianceFit",
    "VARIANCE_FLOOR",
    "bandwidth_sweep",
    "compute_residuals",
    "cvm_statistic",
    "dcov_population_oracle",
    "dcov_unbiased",
    "default_bandwidth",
    "ecdf",
    "fit_mean_nw",
    "fit_mean_parametric",
    "fit_variance",
    "fit_variance_arrays",
    "generate",
    "load_dataset",
    "mean_family",
    "model_sd",
    "monte_carlo",
    "null_family",
    "nw_weights",
    "pairwise_distances",
    "register_mean_family",
    "register_variance_family",
    "run_competitor",
    "run_test",
    "save_dataset",
    "sigma_at",
    "standardize_residuals",
    "test_statistic",
    "theta_one",
    "theta_zero",
    "u_center",
    "variance_family",
    "wz_statistic",
    "wz_statistic_marks",
]
