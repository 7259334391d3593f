"""ARDL estimation, lag selection, bounds testing, long-run and ECM forms.

Conditional error-correction regressions are written so that they are an
exact reparameterisation of the levels ARDL on the same sample: a regressor
with q_i >= 1 enters as the level x_{i,t-1} plus Delta x_{i,t-j},
j = 0..q_i-1, while a regressor with q_i = 0 enters only as the level x_{i,t}.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _tables
from .errors import (
    ArdlKitError,
    CollinearityError,
    DegreesOfFreedomError,
    NearUnitRootError,
    ParameterError,
    SelectionError,
)
from .regress import OlsFit, f_test_linear_restrictions, info_criteria, ols, t_sf2
from .tsdata import Dataset, Deterministic, build_design, deterministic_columns

__all__ = [
    "ArdlSpec",
    "ArdlFit",
    "BoundsRow",
    "BoundsResult",
    "LongRunResult",
    "EcmResult",
    "select_lags",
    "evaluate_lag_grid",
    "fit_ardl",
    "bounds_f_test",
    "bounds_verdict",
    "pesaran_critical_values",
    "long_run",
    "to_ecm",
    "coef_stars",
]

CASES = ("I", "II", "III", "IV", "V")
UNIT_ROOT_TOL = 1e-8
ECM_IDENTITY_TOL = 1e-6


def coef_stars(p: float) -> str:
    if not p < 0.10:
        return ""
    return "***" if p < 0.01 else "**" if p < 0.05 else "*"


def _case(case: str | int) -> str:
    if isinstance(case, int) and 1 <= case <= 5:
        return CASES[case - 1]
    c = str(case).strip().upper()
    if c not in CASES:
        raise ParameterError(f"unknown bounds-test case {case!r}")
    return c


def case_deterministic(case: str) -> Deterministic:
    """Deterministic terms of the levels model implied by a PSS case."""
    return {
        "I": Deterministic.NONE,
        "II": Deterministic.CONSTANT,
        "III": Deterministic.CONSTANT,
        "IV": Deterministic.TREND,
        "V": Deterministic.TREND,
    }[_case(case)]


def restricted_deterministic(case: str) -> tuple[str, ...]:
    """Deterministic terms that belong to the levels relationship under ``case``."""
    return {"I": (), "II": ("const",), "III": (), "IV": ("trend",), "V": ()}[_case(case)]


@dataclass(frozen=True)
class ArdlSpec:
    """ARDL(p, q_1, ..., q_k) with deterministic terms ``det``."""

    dep: str
    regressors: tuple[str, ...]
    p: int
    q: tuple[int, ...]
    det: Deterministic = Deterministic.CONSTANT

    def __post_init__(self) -> None:
        object.__setattr__(self, "regressors", tuple(self.regressors))
        object.__setattr__(self, "q", tuple(int(x) for x in self.q))
        object.__setattr__(self, "det", Deterministic.parse(self.det))
        if self.p < 1:
            raise ParameterError("dependent-variable lag order p must be >= 1")
        if len(self.q) != len(self.regressors):
            raise ParameterError("one lag order per regressor required")
        if any(x < 0 for x in self.q):
            raise ParameterError("regressor lag orders must be >= 0")
        names = (self.dep,) + self.regressors
        if len(set(names)) != len(names):
            raise ParameterError("variables must be distinct")

    @property
    def order(self) -> tuple[int, ...]:
        return (self.p,) + self.q

    @property
    def k(self) -> int:
        return len(self.regressors)

    @property
    def max_lag(self) -> int:
        return max(self.order)

    @property
    def n_params(self) -> int:
        return len(self.det.labels) + self.p + sum(x + 1 for x in self.q)

    def __str__(self) -> str:
        return f"ARDL({', '.join(map(str, self.order))})"


@dataclass(frozen=True, eq=False)
class ArdlFit:
    spec: ArdlSpec
    ols: OlsFit
    years: np.ndarray
    data: Dataset = field(repr=False)
    trim: int = 0

    @property
    def effective_span(self) -> tuple[int, int]:
        return int(self.years[0]), int(self.years[-1])

    @property
    def ar_coefficients(self) -> np.ndarray:
        d = len(self.spec.det.labels)
        return self.ols.coefficients[d : d + self.spec.p]

    @property
    def ar_sum(self) -> float:
        return float(self.ar_coefficients.sum())


def fit_ardl(spec: ArdlSpec, ds: Dataset, trim: int | None = None) -> ArdlFit:
    """OLS on the levels design (column order documented in ``build_design``)."""
    d = build_design(ds, spec.dep, spec.p, list(zip(spec.regressors, spec.q)), spec.det, trim)
    sub = ds.select((spec.dep,) + spec.regressors)
    used = spec.max_lag if trim is None else trim
    return ArdlFit(spec, ols(d.y, d.X, d.labels), d.years, sub, used)


def evaluate_lag_grid(
    ds: Dataset,
    dep: str,
    regressors: Sequence[str],
    pmax: int = 2,
    qmax: int = 2,
    criterion: str = "aic",
    det: Deterministic | str = Deterministic.CONSTANT,
    workers: int | None = None,
) -> list[tuple[tuple[int, ...], float | None]]:
    """Criterion value for every (p, q_1..q_k) on the common max-lag-trimmed sample.

    Infeasible candidates (collinear designs) carry ``None``.  The result is
    in grid order regardless of ``workers``.
    """
    if pmax < 1 or qmax < 0:
        raise ParameterError("need pmax >= 1 and qmax >= 0")
    det = Deterministic.parse(det)
    regressors = tuple(regressors)
    trim = max(pmax, qmax)
    grid = [
        (p,) + q
        for p in range(1, pmax + 1)
        for q in itertools.product(range(qmax + 1), repeat=len(regressors))
    ]

    def score(order: tuple[int, ...]) -> float | None:
        spec = ArdlSpec(dep, regressors, order[0], order[1:], det)
        try:
            fit = fit_ardl(spec, ds, trim=trim)
        except (CollinearityError, DegreesOfFreedomError):
            return None
        return info_criteria(fit.ols).get(criterion)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scores = list(pool.map(score, grid))
    else:
        scores = [score(o) for o in grid]
    return list(zip(grid, scores))


def select_lags(
    ds: Dataset,
    dep: str,
    regressors: Sequence[str],
    pmax: int = 2,
    qmax: int = 2,
    criterion: str = "aic",
    det: Deterministic | str = Deterministic.CONSTANT,
    workers: int | None = None,
) -> ArdlSpec:
    """Exhaustive information-criterion search over p in 1..pmax, q_i in 0..qmax.

    Ties go to fewer parameters, then the lexicographically smaller order.
    """
    det = Deterministic.parse(det)
    scored = [
        (ic, sum(o[1:]) + o[0] + len(o) - 1, o)
        for o, ic in evaluate_lag_grid(ds, dep, regressors, pmax, qmax, criterion, det, workers)
        if ic is not None and not math.isnan(ic)
    ]
    if not scored:
        raise SelectionError(f"no estimable candidate for {dep} on the lag grid")
    _, _, best = min(scored)
    return ArdlSpec(dep, tuple(regressors), best[0], best[1:], det)


def pesaran_critical_values(k: int, case: str | int, level: float) -> tuple[float, float]:
    """(I0, I1) bounds for the F test with ``k`` long-run forcing variables."""
    c = _case(case)
    table = _tables.PSS_TABLE[c]
    if k not in table:
        raise ParameterError(f"k = {k} outside the tabulated range 0..10")
    for lvl in _tables.PSS_LEVELS:
        if abs(level - lvl) < 1e-12:
            return table[k][lvl]
    raise ParameterError(f"no bounds at level {level}; choose from {_tables.PSS_LEVELS}")


def bounds_verdict(F: float, i0: float, i1: float) -> str:
    if F > i1:
        return "cointegrated"
    if F < i0:
        return "not_cointegrated"
    return "inconclusive"


@dataclass(frozen=True)
class BoundsRow:
    level: float
    i0: float
    i1: float
    verdict: str


@dataclass(frozen=True, eq=False)
class BoundsResult:
    F: float
    k: int
    case: str
    num_restrictions: int
    rows: tuple[BoundsRow, ...]
    ecm: OlsFit = field(repr=False)

    def row(self, level: float) -> BoundsRow:
        for r in self.rows:
            if abs(r.level - level) < 1e-12:
                return r
        raise KeyError(level)

    def verdict(self, level: float = 0.05) -> str:
        return self.row(level).verdict

    @property
    def stars(self) -> str:
        """Stars for exceeding the upper bound at 1/5/10 percent."""
        for lvl, s in ((0.01, "***"), (0.05, "**"), (0.10, "*")):
            if self.F > self.row(lvl).i1:
                return s
        return ""


def _ecm_design(
    spec: ArdlSpec, ds: Dataset, det: Deterministic, trim: int | None = None
) -> tuple[np.ndarray, dict[str, np.ndarray], list[str], list[str], np.ndarray]:
    """Delta y, named columns, level-term labels, short-run labels, years."""
    names = (spec.dep,) + spec.regressors
    sub = ds.select(names)
    first, last = sub.common_span
    trim = spec.max_lag if trim is None else trim
    if trim >= last - first + 1:
        raise DegreesOfFreedomError("lag depth leaves no observations")
    years = np.arange(first + trim, last + 1)

    def lagged(name: str, j: int) -> np.ndarray:
        return sub[name].window(first + trim - j, last - j)

    cols: dict[str, np.ndarray] = {}
    det_block = deterministic_columns(det, years, first)
    for j, lab in enumerate(det.labels):
        cols[lab] = det_block[:, j]
    levels = [f"{spec.dep}(-1)"]
    cols[levels[0]] = lagged(spec.dep, 1)
    for name, q in zip(spec.regressors, spec.q):
        lab = f"{name}(-1)" if q >= 1 else name
        cols[lab] = lagged(name, 1 if q >= 1 else 0)
        levels.append(lab)
    short = []
    for j in range(1, spec.p):
        lab = f"D({spec.dep}(-{j}))"
        cols[lab] = lagged(spec.dep, j) - lagged(spec.dep, j + 1)
        short.append(lab)
    for name, q in zip(spec.regressors, spec.q):
        for j in range(q):
            lab = f"D({name})" if j == 0 else f"D({name}(-{j}))"
            cols[lab] = lagged(name, j) - lagged(name, j + 1)
            short.append(lab)
    dy = lagged(spec.dep, 0) - lagged(spec.dep, 1)
    return dy, cols, levels, short, years


def _fit_columns(y: np.ndarray, cols: dict[str, np.ndarray], labels: Sequence[str]) -> OlsFit:
    X = np.column_stack([cols[l] for l in labels]) if labels else np.empty((y.size, 0))
    return ols(y, X, labels)


def bounds_f_test(spec: ArdlSpec, ds: Dataset, case: str | int = "III") -> BoundsResult:
    """PSS F test for no levels relationship in the conditional ECM.

    Under ``case`` the restricted deterministic terms (constant in II, trend
    in IV) are tested jointly with the lagged levels, so m = k + 1 or k + 2.
    ``spec.det`` is replaced by the deterministic set the case implies.
    """
    c = _case(case)
    det = case_deterministic(c)
    spec = ArdlSpec(spec.dep, spec.regressors, spec.p, spec.q, det)
    dy, cols, levels, short, _ = _ecm_design(spec, ds, det)
    tested = list(restricted_deterministic(c)) + levels
    free_det = [d for d in det.labels if d not in tested]
    full = _fit_columns(dy, cols, list(det.labels) + levels + short)
    restricted = _fit_columns(dy, cols, free_det + short)
    F, _ = f_test_linear_restrictions(full, restricted, len(tested))
    rows = []
    for lvl in _tables.PSS_LEVELS:
        i0, i1 = pesaran_critical_values(spec.k, c, lvl)
        rows.append(BoundsRow(lvl, i0, i1, bounds_verdict(F, i0, i1)))
    return BoundsResult(F, spec.k, c, len(tested), tuple(rows), full)


@dataclass(frozen=True, eq=False)
class LongRunResult:
    labels: tuple[str, ...]
    theta: np.ndarray
    se: np.ndarray
    df_resid: int
    ar_sum: float

    @property
    def tvalues(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.theta / self.se

    @property
    def pvalues(self) -> np.ndarray:
        return np.array([t_sf2(t, self.df_resid) for t in self.tvalues])

    @property
    def stars(self) -> tuple[str, ...]:
        return tuple(coef_stars(p) for p in self.pvalues)

    def __getitem__(self, label: str) -> float:
        return float(self.theta[self.labels.index(label)])

    def as_dict(self) -> dict[str, float]:
        return {l: float(v) for l, v in zip(self.labels, self.theta)}


def long_run(fit: ArdlFit) -> LongRunResult:
    """theta_i = sum_j beta_ij / (1 - sum a_i), with delta-method standard errors.

    Deterministic terms are scaled the same way and reported first.
    """
    spec = fit.spec
    beta = fit.ols.coefficients
    cov = fit.ols.coef_covariance
    d = len(spec.det.labels)
    ar_idx = list(range(d, d + spec.p))
    A = float(beta[ar_idx].sum())
    denom = 1.0 - A
    if abs(denom) <= UNIT_ROOT_TOL:
        raise NearUnitRootError(
            f"1 - sum(a_i) = {denom:.3g}; sum of autoregressive coefficients {A:.12g}", A
        )
    groups: list[tuple[str, list[int]]] = [(lab, [j]) for j, lab in enumerate(spec.det.labels)]
    pos = d + spec.p
    for name, q in zip(spec.regressors, spec.q):
        groups.append((name, list(range(pos, pos + q + 1))))
        pos += q + 1
    theta = np.empty(len(groups))
    se = np.empty(len(groups))
    for g, (_, idx) in enumerate(groups):
        B = float(beta[idx].sum())
        theta[g] = B / denom
        grad = np.zeros(beta.size)
        grad[idx] = 1.0 / denom
        grad[ar_idx] = B / denom**2
        se[g] = math.sqrt(max(float(grad @ cov @ grad), 0.0))
    return LongRunResult(tuple(l for l, _ in groups), theta, se, fit.ols.df_resid, A)


@dataclass(frozen=True, eq=False)
class EcmResult:
    ols: OlsFit
    ect: float
    ect_se: float
    identity_gap: float
    case: str

    @property
    def labels(self) -> tuple[str, ...]:
        return self.ols.column_labels

    @property
    def stable_adjustment(self) -> bool:
        return -2.0 < self.ect < 0.0

    @property
    def ect_pvalue(self) -> float:
        return t_sf2(self.ect / self.ect_se, self.ols.df_resid)

    @property
    def stars(self) -> tuple[str, ...]:
        return tuple(coef_stars(p) for p in self.ols.pvalues)

    def coefficients(self) -> dict[str, float]:
        return {l: float(v) for l, v in zip(self.labels, self.ols.coefficients)}

    def short_run(self) -> dict[str, tuple[float, float, float]]:
        """label -> (coefficient, standard error, p-value), excluding ECT(-1)."""
        out = {}
        for l, b, s, p in zip(self.labels, self.ols.coefficients, self.ols.bse, self.ols.pvalues):
            if l != "ECT(-1)":
                out[l] = (float(b), float(s), float(p))
        return out


def _default_case(det: Deterministic) -> str:
    return {Deterministic.NONE: "I", Deterministic.CONSTANT: "III", Deterministic.TREND: "V"}[det]


def to_ecm(fit: ArdlFit, case: str | int | None = None) -> EcmResult:
    """Re-estimate the error-correction form with the long-run relation imposed.

    ECT_{t-1} = y_{t-1} - theta'x minus any deterministic terms the case
    restricts to the levels relation (none by default).  The coefficient on
    it must equal sum(a_i) - 1 from the levels fit.
    """
    spec = fit.spec
    c = _default_case(spec.det) if case is None else _case(case)
    if spec.det is not case_deterministic(c):
        raise ParameterError(f"case {c} needs a {case_deterministic(c).value} levels fit")
    lr = long_run(fit)
    dy, cols, levels, short, _ = _ecm_design(spec, fit.data, spec.det, fit.trim)
    restricted = restricted_deterministic(c)
    ect = cols[levels[0]].copy()
    for name, lab in zip(spec.regressors, levels[1:]):
        ect -= lr[name] * cols[lab]
    for lab in restricted:
        ect -= lr[lab] * cols[lab]
    cols["ECT(-1)"] = ect
    free_det = [d for d in spec.det.labels if d not in restricted]
    res = _fit_columns(dy, cols, free_det + short + ["ECT(-1)"])
    lam = res.coef("ECT(-1)")
    gap = abs(lam - (lr.ar_sum - 1.0))
    if gap > ECM_IDENTITY_TOL:
        raise ArdlKitError(f"ECM adjustment {lam:.10g} disagrees with sum(a)-1 = {lr.ar_sum - 1:.10g}")
    j = res.index("ECT(-1)")
    return EcmResult(res, lam, float(res.bse[j]), gap, c)
