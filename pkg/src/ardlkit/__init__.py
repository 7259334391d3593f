"""ARDL bounds-testing toolkit: unit roots, lag selection, cointegration
bounds test, long-run/short-run estimation and post-estimation diagnostics."""

from __future__ import annotations

__version__ = "0.1.0"

from .ardl import (  # noqa: E402
    ArdlFit,
    ArdlSpec,
    BoundsResult,
    EcmResult,
    LongRunResult,
    bounds_f_test,
    fit_ardl,
    long_run,
    pesaran_critical_values,
    select_lags,
    to_ecm,
)
from .diagnostics import (  # noqa: E402
    StabilityPath,
    TestResult,
    cusum,
    cusumsq,
    heteroskedasticity_test,
    lm_serial_correlation,
    normality_test,
    ramsey_reset,
    recursive_residuals,
)
from .regress import OlsFit, f_test_linear_restrictions, hac_long_run_variance, info_criteria, ols  # noqa: E402
from .tsdata import Dataset, Deterministic, TimeSeries, TransformSpec, build_design, load_dataset, transform  # noqa: E402
from .unitroot import UnitRootResult, adf_test, df_critical_values, pp_test  # noqa: E402
