"""Post-estimation checks: serial correlation, heteroskedasticity, normality,
functional form and recursive-residual stability paths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _tables
from .errors import ArdlKitError, DegenerateInputError, DegreesOfFreedomError, ParameterError, StabilityError
from .regress import RANK_TOL, OlsFit, chi2_sf, f_test_linear_restrictions, ols

__all__ = [
    "TestResult",
    "StabilityPath",
    "lm_serial_correlation",
    "heteroskedasticity_test",
    "normality_test",
    "ramsey_reset",
    "recursive_residuals",
    "cusum",
    "cusumsq",
    "run_diagnostics",
]

_CONSTANT_TOL = 1e-12


@dataclass(frozen=True)
class TestResult:
    __test__ = False

    name: str
    statistic: float
    df: tuple[int, ...]
    p_value: float

    def rejects(self, level: float = 0.05) -> bool:
        return self.p_value < level


@dataclass(frozen=True, eq=False)
class StabilityPath:
    kind: str
    t_index: np.ndarray
    path: np.ndarray
    lower_band: np.ndarray
    upper_band: np.ndarray

    @property
    def stable(self) -> bool:
        return bool(np.all((self.path >= self.lower_band) & (self.path <= self.upper_band)))

    @property
    def verdict(self) -> str:
        return "stable" if self.stable else "unstable"

    def rows(self) -> list[tuple[int, float, float, float]]:
        return [
            (int(t), float(p), float(lo), float(hi))
            for t, p, lo, hi in zip(self.t_index, self.path, self.lower_band, self.upper_band)
        ]


def _ols_of(fit) -> OlsFit:
    return fit.ols if hasattr(fit, "ols") else fit


def _years_of(fit, n: int) -> np.ndarray:
    years = getattr(fit, "years", None)
    return np.asarray(years) if years is not None else np.arange(1, n + 1)


def _constant_columns(X: np.ndarray) -> np.ndarray:
    if X.shape[0] == 0:
        return np.zeros(X.shape[1], bool)
    return np.ptp(X, axis=0) <= _CONSTANT_TOL * np.maximum(np.abs(X).max(axis=0), 1.0)


def lm_serial_correlation(fit, lags: int = 2) -> TestResult:
    """Breusch-Godfrey LM test: T R^2 of residuals on regressors and ``lags``
    zero-padded lagged residuals, against chi2(lags)."""
    o = _ols_of(fit)
    m = int(lags)
    if m < 1:
        raise ParameterError("LM test needs at least one lag")
    T, k = o.X.shape
    if T - k - m <= 0:
        raise DegreesOfFreedomError(f"{T} observations cannot support {k} regressors and {m} lags")
    e = np.asarray(o.residuals)
    lagged = np.zeros((T, m))
    for j in range(1, m + 1):
        lagged[j:, j - 1] = e[:-j]
    aux = ols(e, np.hstack([o.X, lagged]))
    stat = T * aux.rsquared
    return TestResult("serial_correlation_lm", float(stat), (m,), chi2_sf(stat, m))


def heteroskedasticity_test(fit, kind: str = "bpg") -> TestResult:
    """Breusch-Pagan-Godfrey (default) or ARCH(1) LM test.

    BPG regresses squared residuals on a constant and the non-constant
    regressors; df is the number of non-constant regressors.
    """
    o = _ols_of(fit)
    e2 = np.asarray(o.residuals) ** 2
    T = e2.size
    kind = kind.lower()
    if kind == "bpg":
        Z = o.X[:, ~_constant_columns(o.X)]
        df = Z.shape[1]
        if df == 0:
            raise ParameterError("no non-constant regressors to test against")
        if T - df - 1 <= 0:
            raise DegreesOfFreedomError(f"{T} observations for {df + 1} auxiliary coefficients")
        aux = ols(e2, np.column_stack([np.ones(T), Z]))
        stat = T * aux.rsquared
        return TestResult("heteroskedasticity_bpg", float(stat), (df,), chi2_sf(stat, df))
    if kind == "arch":
        if T < 4:
            raise DegreesOfFreedomError("ARCH test needs at least four residuals")
        aux = ols(e2[1:], np.column_stack([np.ones(T - 1), e2[:-1]]))
        stat = (T - 1) * aux.rsquared
        return TestResult("heteroskedasticity_arch", float(stat), (1,), chi2_sf(stat, 1))
    raise ParameterError(f"unknown heteroskedasticity test {kind!r}")


def normality_test(residuals) -> TestResult:
    """Jarque-Bera with moment-based (divisor T) skewness and kurtosis."""
    e = np.asarray(_ols_of(residuals).residuals if hasattr(residuals, "residuals") else residuals, float)
    e = e.ravel()
    T = e.size
    if T < 8:
        raise DegreesOfFreedomError(f"normality test needs at least 8 residuals, got {T}")
    d = e - e.mean()
    m2 = float(np.mean(d**2))
    if m2 <= (_CONSTANT_TOL * max(1.0, float(np.abs(e).max()))) ** 2:
        raise DegenerateInputError("residuals are constant")
    S = float(np.mean(d**3)) / m2**1.5
    K = float(np.mean(d**4)) / m2**2
    jb = T / 6.0 * (S**2 + (K - 3.0) ** 2 / 4.0)
    return TestResult("normality_jb", jb, (2,), chi2_sf(jb, 2))


def ramsey_reset(fit, max_power: int = 2) -> TestResult:
    """RESET F test on fitted-value powers 2..max_power added to the design."""
    o = _ols_of(fit)
    if max_power < 2:
        raise ParameterError("max_power must be at least 2")
    yhat = o.fitted
    scale = float(np.abs(yhat).max()) or 1.0
    z = yhat / scale  # rescaling leaves F unchanged and keeps powers well conditioned
    powers = np.column_stack([z**p for p in range(2, max_power + 1)])
    labels = o.column_labels + tuple(f"fitted^{p}" for p in range(2, max_power + 1))
    big = ols(o.y, np.hstack([o.X, powers]), labels)
    m = max_power - 1
    F, p = f_test_linear_restrictions(big, o, m)
    return TestResult("reset", F, (m, big.df_resid), p)


def recursive_residuals(fit) -> np.ndarray:
    """One-step-ahead standardised prediction errors w_t for t = k+1..T.

    Raises
    ------
    StabilityError
        If the expanding window ending before observation t (1-based) is
        rank deficient; ``index`` is that t.
    """
    o = _ols_of(fit)
    X, y = np.asarray(o.X), np.asarray(o.y)
    T, k = X.shape
    if T <= k + 1:
        raise DegreesOfFreedomError(f"recursive residuals need T > k + 1 (T={T}, k={k})")
    w = np.empty(T - k)
    for t in range(k, T):
        Xs = X[:t]
        if k:
            U, s, Vt = np.linalg.svd(Xs, full_matrices=False)
            if s[0] == 0 or s[-1] < RANK_TOL * s[0]:
                raise StabilityError(f"recursive window singular at observation {t + 1}", t + 1)
            b = Vt.T @ ((U.T @ y[:t]) / s)
            h = Vt @ X[t] / s
            w[t - k] = (y[t] - X[t] @ b) / math.sqrt(1.0 + float(h @ h))
        else:
            w[t - k] = y[t]
    return w


def cusum(fit, level: float = 0.05) -> StabilityPath:
    """Cumulative sum of recursive residuals scaled by their sample std."""
    o = _ols_of(fit)
    T, k = o.X.shape
    w = recursive_residuals(o)
    sd = float(np.std(w, ddof=1))
    if not sd > 0:
        raise DegenerateInputError("recursive residuals have no variation")
    a = _tables.CUSUM_A[level]
    m = T - k
    r = np.arange(1, m + 1)
    band = a * math.sqrt(m) + 2.0 * a * r / math.sqrt(m)
    years = _years_of(fit, T)[k:]
    return StabilityPath("CUSUM", years, np.cumsum(w) / sd, -band, band)


def cusumsq(fit) -> StabilityPath:
    """Cumulative share of squared recursive residuals with 5% bands."""
    o = _ols_of(fit)
    T, k = o.X.shape
    w = recursive_residuals(o)
    total = float(w @ w)
    if not total > 0:
        raise DegenerateInputError("recursive residuals are all zero")
    m = T - k
    if m < 2:
        raise DegreesOfFreedomError("CUSUMSQ needs at least two recursive residuals")
    path = np.cumsum(w**2) / total
    path[-1] = 1.0
    line = np.arange(1, m + 1) / m
    c0 = _tables.cusumsq_c0(m)
    years = _years_of(fit, T)[k:]
    return StabilityPath("CUSUMSQ", years, path, line - c0, line + c0)


@dataclass(frozen=True, eq=False)
class DiagnosticBlock:
    tests: dict[str, TestResult]
    cusum: StabilityPath | None = field(repr=False)
    cusumsq: StabilityPath | None = field(repr=False)
    errors: dict[str, str] = field(default_factory=dict)


def run_diagnostics(fit, lm_lags: int = 2, het: str = "bpg", reset_power: int = 2) -> DiagnosticBlock:
    """Every diagnostic on one fit; individual failures are recorded, not raised."""
    tests: dict[str, TestResult] = {}
    errors: dict[str, str] = {}
    jobs = {
        "serial_correlation": lambda: lm_serial_correlation(fit, lm_lags),
        "heteroskedasticity": lambda: heteroskedasticity_test(fit, het),
        "normality": lambda: normality_test(_ols_of(fit).residuals),
        "reset": lambda: ramsey_reset(fit, reset_power),
    }
    for key, job in jobs.items():
        try:
            tests[key] = job()
        except ArdlKitError as exc:
            errors[key] = f"{type(exc).__name__}: {exc}"
    paths: dict[str, StabilityPath | None] = {}
    for key, job in (("cusum", lambda: cusum(fit)), ("cusumsq", lambda: cusumsq(fit))):
        try:
            paths[key] = job()
        except ArdlKitError as exc:
            paths[key] = None
            errors[key] = f"{type(exc).__name__}: {exc}"
    return DiagnosticBlock(tests, paths["cusum"], paths["cusumsq"], errors)
