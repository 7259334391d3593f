"""Augmented Dickey-Fuller and Phillips-Perron unit-root tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _tables
from .errors import DegreesOfFreedomError, ParameterError
from .regress import OlsFit, hac_long_run_variance, info_criteria, newey_west_bandwidth, ols
from .tsdata import Deterministic, TimeSeries

__all__ = [
    "UnitRootResult",
    "adf_test",
    "pp_test",
    "df_critical_values",
    "stars_for",
    "schwert_max_lag",
]


def df_critical_values(effective_T: int, det: Deterministic | str, level: float) -> float:
    """Finite-sample Dickey-Fuller critical value from the MacKinnon surface."""
    det = Deterministic.parse(det)
    if det is Deterministic.NONE:
        raise ParameterError("critical values are tabulated for constant and constant_trend only")
    if effective_T < 10:
        raise ParameterError(f"effective sample {effective_T} below 10")
    level = _level(level)
    b0, b1, b2 = _tables.MACKINNON_1991[det.value][level]
    T = float(effective_T)
    return b0 + b1 / T + b2 / T**2


def _level(level: float | str) -> float:
    if isinstance(level, str):
        level = float(level.strip().rstrip("%")) / 100.0
    for known in _tables.DF_LEVELS:
        if abs(level - known) < 1e-12:
            return known
    raise ParameterError(f"no critical values at level {level}")


def stars_for(statistic: float, crit: dict[float, float]) -> str:
    """``***``/``**``/``*`` when the (left-tailed) statistic is below the 1/5/10% value."""
    if statistic < crit[0.01]:
        return "***"
    if statistic < crit[0.05]:
        return "**"
    if statistic < crit[0.10]:
        return "*"
    return ""


@dataclass(frozen=True)
class UnitRootResult:
    test: str
    det: Deterministic
    statistic: float
    lags: int
    effective_T: int
    crit: dict[float, float] = field(repr=False)
    name: str = ""
    criterion: str | None = None

    @property
    def stars(self) -> str:
        return stars_for(self.statistic, self.crit)

    def rejects(self, level: float = 0.05) -> bool:
        return self.statistic < self.crit[_level(level)]


def _values(s: TimeSeries | np.ndarray) -> tuple[np.ndarray, str]:
    if isinstance(s, TimeSeries):
        return np.asarray(s.valid, float), s.name
    return np.asarray(s, float).ravel(), ""


def _ndet(det: Deterministic) -> int:
    return len(det.labels)


def schwert_max_lag(nobs: int) -> int:
    return int(math.floor(12.0 * (nobs / 100.0) ** 0.25))


def _adf_design(y: np.ndarray, det: Deterministic, p: int, start: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows for Delta y_t with t indexing dy from ``start`` (>= p) onwards."""
    dy = np.diff(y)
    rows = np.arange(start, dy.size)
    cols = []
    if det is not Deterministic.NONE:
        cols.append(np.ones(rows.size))
    if det is Deterministic.TREND:
        cols.append(rows + 2.0)
    cols.append(y[rows])  # y_{t-1} for dy index t
    for j in range(1, p + 1):
        cols.append(dy[rows - j])
    return dy[rows], np.column_stack(cols)


def _crit(T: int, det: Deterministic) -> dict[float, float]:
    return {lvl: df_critical_values(T, det, lvl) for lvl in _tables.DF_LEVELS}


def adf_test(
    s: TimeSeries | np.ndarray,
    det: Deterministic | str = Deterministic.CONSTANT,
    lags: int | None = None,
    criterion: str = "sic",
    pmax: int | None = None,
) -> UnitRootResult:
    """ADF t test on the coefficient of y_{t-1}.

    With ``lags`` given the augmentation order is fixed.  Otherwise every
    order 0..pmax is fitted on the common pmax-trimmed sample, the
    ``criterion`` minimiser is kept, and the test regression is refitted at
    that order on its own longest sample.  ``pmax`` defaults to the Schwert
    bound, capped so the common sample keeps two residual degrees of freedom.
    """
    det = Deterministic.parse(det)
    y, name = _values(s)
    n = y.size
    ncols0 = _ndet(det) + 1
    feasible = (n - 3 - ncols0) // 2
    if lags is not None:
        p = int(lags)
        if p < 0:
            raise ParameterError("lag order must be non-negative")
        used_criterion = None
    else:
        if pmax is None:
            pmax = min(schwert_max_lag(n), feasible)
        if pmax < 0 or pmax > feasible:
            raise DegreesOfFreedomError(
                f"{n} observations cannot support ADF lag search up to {pmax}"
            )
        best = None
        for cand in range(pmax + 1):
            yy, X = _adf_design(y, det, cand, pmax)
            ic = info_criteria(ols(yy, X)).get(criterion)
            if best is None or ic < best[0]:
                best = (ic, cand)
        p = best[1]
        used_criterion = criterion.lower()
    yy, X = _adf_design(y, det, p, p)
    if yy.size - X.shape[1] < 1:
        raise DegreesOfFreedomError(f"{n} observations cannot support ADF({p})")
    fit = ols(yy, X)
    g = _ndet(det)
    stat = float(fit.coefficients[g] / math.sqrt(fit.coef_covariance[g, g]))
    return UnitRootResult("ADF", det, stat, p, fit.nobs, _crit(fit.nobs, det), name, used_criterion)


def dickey_fuller_fit(s: TimeSeries | np.ndarray, det: Deterministic | str) -> OlsFit:
    """The unaugmented Dickey-Fuller regression shared by ADF(0) and PP."""
    det = Deterministic.parse(det)
    y, _ = _values(s)
    yy, X = _adf_design(y, det, 0, 0)
    return ols(yy, X)


def pp_test(
    s: TimeSeries | np.ndarray,
    det: Deterministic | str = Deterministic.CONSTANT,
    bandwidth: int | None = None,
    lrv: float | None = None,
) -> UnitRootResult:
    """Phillips-Perron Z_t.

    ``Z_t = sqrt(g0/l2) t - (l2 - g0) T se / (2 sqrt(l2) s)`` where ``g0`` is
    the residual variance (divisor T), ``l2`` the Bartlett long-run variance,
    ``s`` the regression standard error and ``se`` the OLS standard error
    of the y_{t-1} coefficient.  ``lrv`` overrides the long-run variance
    (used to check the degenerate case l2 = g0).
    """
    det = Deterministic.parse(det)
    _, name = _values(s)
    fit = dickey_fuller_fit(s, det)
    T = fit.nobs
    if T - fit.nparams < 1:
        raise DegreesOfFreedomError("series too short for the Dickey-Fuller regression")
    L = newey_west_bandwidth(T) if bandwidth is None else int(bandwidth)
    u = fit.residuals
    g0 = float(u @ u) / T
    l2 = hac_long_run_variance(u, L) if lrv is None else float(lrv)
    g = _ndet(det)
    se = math.sqrt(fit.coef_covariance[g, g])
    t = fit.coefficients[g] / se
    s_reg = math.sqrt(fit.sigma2)
    stat = math.sqrt(g0 / l2) * t - (l2 - g0) * T * se / (2.0 * math.sqrt(l2) * s_reg)
    return UnitRootResult("PP", det, float(stat), L, T, _crit(T, det), name)
