"""Least-squares core: OLS via SVD, information criteria, HAC variance, F tests."""

from __future__ import annotations

import math
import warnings
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import (
    CollinearityError,
    DegreesOfFreedomError,
    IncompatibleFitsError,
    ParameterError,
)

__all__ = [
    "OlsFit",
    "InfoCriteria",
    "ols",
    "info_criteria",
    "hac_long_run_variance",
    "f_test_linear_restrictions",
    "chi2_sf",
    "f_sf",
    "t_sf2",
    "RANK_TOL",
]

RANK_TOL = 1e-10


class ClampedVarianceWarning(RuntimeWarning):
    """The long-run variance estimate was clamped to stay positive."""


@dataclass(frozen=True, eq=False)
class OlsFit:
    """Everything downstream code needs from a least-squares fit."""

    coefficients: np.ndarray
    coef_covariance: np.ndarray
    residuals: np.ndarray
    sigma2: float
    loglik: float
    nobs: int
    nparams: int
    column_labels: tuple[str, ...]
    y: np.ndarray
    X: np.ndarray

    @property
    def ssr(self) -> float:
        return float(self.residuals @ self.residuals)

    @property
    def fitted(self) -> np.ndarray:
        return self.y - self.residuals

    @property
    def df_resid(self) -> int:
        return self.nobs - self.nparams

    @property
    def bse(self) -> np.ndarray:
        return np.sqrt(np.diag(self.coef_covariance))

    @property
    def tvalues(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.coefficients / self.bse

    @property
    def pvalues(self) -> np.ndarray:
        return np.array([t_sf2(t, self.df_resid) for t in self.tvalues])

    @property
    def rsquared(self) -> float:
        """Centered R^2."""
        tss = float(np.sum((self.y - self.y.mean()) ** 2))
        return 1.0 - self.ssr / tss if tss > 0 else 0.0

    def index(self, label: str) -> int:
        try:
            return self.column_labels.index(label)
        except ValueError:
            raise KeyError(f"no column {label!r} in fit") from None

    def coef(self, label: str) -> float:
        return float(self.coefficients[self.index(label)])


@dataclass(frozen=True)
class InfoCriteria:
    aic: float
    sic: float

    def get(self, name: str) -> float:
        name = name.lower()
        if name in ("sic", "bic", "sbc", "schwarz"):
            return self.sic
        if name in ("aic", "akaike"):
            return self.aic
        raise ParameterError(f"unknown information criterion {name!r}")


def _ro(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


def ols(y: np.ndarray, X: np.ndarray, labels: Sequence[str] | None = None) -> OlsFit:
    """Ordinary least squares through a thin SVD of ``X``.

    Raises
    ------
    DegreesOfFreedomError
        If ``X`` does not have more rows than columns.
    CollinearityError
        If the smallest singular value falls below ``RANK_TOL`` times the
        largest.  The error names the columns loading on the null space.
    """
    y = np.asarray(y, dtype=float).ravel()
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if y.size != n:
        raise ParameterError(f"y has {y.size} rows but X has {n}")
    labels = tuple(labels) if labels is not None else tuple(f"x{j}" for j in range(k))
    if len(labels) != k:
        raise ParameterError("one label per column required")
    if n <= k:
        raise DegreesOfFreedomError(f"{n} observations for {k} coefficients")

    if k == 0:
        U, s, Vt = np.empty((n, 0)), np.empty(0), np.empty((0, 0))
    else:
        U, s, Vt = np.linalg.svd(X, full_matrices=False)
    if k and (s[0] == 0 or s[-1] < RANK_TOL * s[0]):
        bad = s < RANK_TOL * max(s[0], 1e-300)
        null = np.abs(Vt[bad]).max(axis=0)
        offenders = [labels[j] for j in np.flatnonzero(null > 1e-3 * null.max())]
        raise CollinearityError(
            f"design is rank deficient (condition {s[0] / max(s[-1], 1e-300):.3g}); "
            f"collinear columns: {', '.join(offenders)}",
            offenders,
        )
    beta = Vt.T @ ((U.T @ y) / s)
    resid = y - X @ beta
    ssr = float(resid @ resid)
    sigma2 = ssr / (n - k)
    xtx_inv = (Vt.T / s**2) @ Vt
    cov = sigma2 * xtx_inv
    cov = 0.5 * (cov + cov.T)
    with np.errstate(divide="ignore"):
        loglik = -0.5 * n * (math.log(2 * math.pi) + np.log(ssr / n) + 1.0)
    return OlsFit(
        coefficients=_ro(beta),
        coef_covariance=_ro(cov),
        residuals=_ro(resid),
        sigma2=sigma2,
        loglik=float(loglik),
        nobs=n,
        nparams=k,
        column_labels=labels,
        y=_ro(y),
        X=_ro(X),
    )


def info_criteria(fit: OlsFit) -> InfoCriteria:
    """AIC = -2 logL + 2k and SIC = -2 logL + k ln T (levels, not per-observation)."""
    k, T = fit.nparams, fit.nobs
    return InfoCriteria(aic=-2.0 * fit.loglik + 2.0 * k, sic=-2.0 * fit.loglik + k * math.log(T))


def autocovariances(u: np.ndarray, max_lag: int) -> np.ndarray:
    """gamma_j = T^-1 sum_t u_t u_{t-j} for j = 0..max_lag (no demeaning)."""
    u = np.asarray(u, dtype=float)
    T = u.size
    return np.array([u[j:] @ u[: T - j] / T for j in range(max_lag + 1)])


def hac_long_run_variance(u: np.ndarray, bandwidth: int) -> float:
    """Bartlett-weighted long-run variance of a residual series.

    ``gamma_0 + 2 sum_{j<=L} (1 - j/(L+1)) gamma_j``.  Autocovariances use
    divisor T and no demeaning (inputs are regression residuals).  The
    result is floored at ``1e-8 * gamma_0`` with a ``ClampedVarianceWarning``.
    """
    u = np.asarray(u, dtype=float).ravel()
    L = int(bandwidth)
    if L < 0 or L >= u.size:
        raise ParameterError(f"bandwidth {bandwidth} outside [0, {u.size - 1}]")
    gamma = autocovariances(u, L)
    weights = 1.0 - np.arange(1, L + 1) / (L + 1.0)
    lrv = float(gamma[0] + 2.0 * weights @ gamma[1:])
    floor = gamma[0] * 1e-8
    if lrv < floor:
        warnings.warn(
            f"long-run variance {lrv:.3g} clamped to {floor:.3g}", ClampedVarianceWarning, stacklevel=2
        )
        lrv = floor
    return lrv


def newey_west_bandwidth(nobs: int) -> int:
    """floor(4 (T/100)^(2/9))."""
    return int(math.floor(4.0 * (nobs / 100.0) ** (2.0 / 9.0)))


def f_test_linear_restrictions(
    fit: OlsFit, restricted_fit: OlsFit, num_restrictions: int
) -> tuple[float, float]:
    """Classical F statistic comparing a nested restricted fit to ``fit``.

    Differences in SSR below rounding level (both fits exact) count as zero.
    """
    m = int(num_restrictions)
    if m < 1:
        raise ParameterError("need at least one restriction")
    if fit.nobs != restricted_fit.nobs or not np.array_equal(fit.y, restricted_fit.y):
        raise IncompatibleFitsError("fits use different samples or dependent variables")
    if restricted_fit.nparams + m != fit.nparams:
        raise IncompatibleFitsError(
            f"restricted fit has {restricted_fit.nparams} parameters; "
            f"expected {fit.nparams} - {m}"
        )
    ssr_u, ssr_r = fit.ssr, restricted_fit.ssr
    diff = ssr_r - ssr_u
    if diff <= 64 * np.finfo(float).eps * float(fit.y @ fit.y):
        return 0.0, 1.0
    df2 = fit.df_resid
    if ssr_u == 0.0:
        return math.inf, 0.0
    F = (diff / m) / (ssr_u / df2)
    return float(F), f_sf(F, m, df2)


def chi2_sf(x: float, df: float) -> float:
    return float(stats.chi2.sf(x, df))


def f_sf(x: float, df1: float, df2: float) -> float:
    return float(stats.f.sf(x, df1, df2))


def t_sf2(t: float, df: float) -> float:
    """Two-sided p-value of a t statistic."""
    if not math.isfinite(t):
        return 0.0 if not math.isnan(t) else math.nan
    return float(2.0 * stats.t.sf(abs(t), df))
