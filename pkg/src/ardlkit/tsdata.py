"""Year-indexed series, aligned datasets, transforms and design matrices.

Missing observations are only representable as a contiguous prefix (the
slots consumed by differencing or lagging).  Everything here is immutable.
"""

from __future__ import annotations

import csv
import math
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    DegreesOfFreedomError,
    DomainError,
    IntegrityError,
    ParameterError,
    ParseError,
    SchemaError,
)

__all__ = [
    "Deterministic",
    "TimeSeries",
    "Dataset",
    "TransformSpec",
    "Design",
    "load_dataset",
    "transform",
    "build_design",
]


class Deterministic(str, Enum):
    """Deterministic terms entering a regression."""

    NONE = "none"
    CONSTANT = "constant"
    TREND = "constant_trend"

    @classmethod
    def parse(cls, value: str | Deterministic) -> Deterministic:
        if isinstance(value, Deterministic):
            return value
        aliases = {
            "n": cls.NONE,
            "none": cls.NONE,
            "c": cls.CONSTANT,
            "const": cls.CONSTANT,
            "constant": cls.CONSTANT,
            "ct": cls.TREND,
            "trend": cls.TREND,
            "constant_trend": cls.TREND,
        }
        try:
            return aliases[str(value).strip().lower()]
        except KeyError:
            raise ParameterError(f"unknown deterministic spec {value!r}") from None

    @property
    def labels(self) -> tuple[str, ...]:
        return {"none": (), "constant": ("const",), "constant_trend": ("const", "trend")}[
            self.value
        ]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """One observation per calendar year, starting at ``start_year``.

    The first ``n_missing`` entries of ``values`` are NaN; all others are
    finite.
    """

    name: str
    start_year: int
    values: np.ndarray
    n_missing: int = 0

    def __post_init__(self) -> None:
        vals = _readonly(np.ravel(self.values))
        object.__setattr__(self, "values", vals)
        if vals.size < 1:
            raise IntegrityError(f"series {self.name!r} is empty")
        if not 0 <= self.n_missing <= vals.size:
            raise IntegrityError(f"series {self.name!r}: bad missing-prefix count")
        if not np.all(np.isnan(vals[: self.n_missing])):
            raise IntegrityError(f"series {self.name!r}: missing prefix holds values")
        if not np.all(np.isfinite(vals[self.n_missing :])):
            raise IntegrityError(
                f"series {self.name!r}: non-finite value outside the missing prefix"
            )

    def __len__(self) -> int:
        return self.values.size

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.start_year + len(self))

    @property
    def end_year(self) -> int:
        return self.start_year + len(self) - 1

    @property
    def first_valid_year(self) -> int:
        return self.start_year + self.n_missing

    @property
    def valid(self) -> np.ndarray:
        """The non-missing values."""
        return self.values[self.n_missing :]

    def window(self, first_year: int, last_year: int) -> np.ndarray:
        if first_year < self.first_valid_year or last_year > self.end_year:
            raise IntegrityError(
                f"series {self.name!r} does not cover {first_year}-{last_year}"
            )
        lo = first_year - self.start_year
        return self.values[lo : lo + (last_year - first_year + 1)]

    def renamed(self, name: str) -> TimeSeries:
        return TimeSeries(name, self.start_year, self.values, self.n_missing)


@dataclass(frozen=True, eq=False)
class Dataset:
    """A named collection of series with unique names."""

    series: tuple[TimeSeries, ...]
    _index: dict[str, TimeSeries] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        series = tuple(self.series)
        object.__setattr__(self, "series", series)
        index: dict[str, TimeSeries] = {}
        for s in series:
            if s.name in index:
                raise IntegrityError(f"duplicate series name {s.name!r}")
            index[s.name] = s
        object.__setattr__(self, "_index", index)
        if series and self.common_span[0] > self.common_span[1]:
            raise IntegrityError("series have no overlapping non-missing years")

    @classmethod
    def from_columns(
        cls, years: Sequence[int], columns: Mapping[str, Sequence[float]]
    ) -> Dataset:
        years = [int(y) for y in years]
        _check_years(years)
        return cls(tuple(TimeSeries(n, years[0], np.asarray(v, float)) for n, v in columns.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.series)

    @property
    def common_span(self) -> tuple[int, int]:
        """First and last year at which every series is observed."""
        first = max(s.first_valid_year for s in self.series)
        last = min(s.end_year for s in self.series)
        return first, last

    @property
    def n_common(self) -> int:
        first, last = self.common_span
        return last - first + 1

    def __getitem__(self, name: str) -> TimeSeries:
        try:
            return self._index[name]
        except KeyError:
            raise SchemaError(f"variable {name!r} not in dataset") from None

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.series)

    def select(self, names: Iterable[str]) -> Dataset:
        return Dataset(tuple(self[n] for n in names))

    def with_series(self, s: TimeSeries) -> Dataset:
        """Return a copy with ``s`` added, replacing any series of the same name."""
        kept = tuple(x for x in self.series if x.name != s.name)
        return Dataset(kept + (s,))


def _check_years(years: Sequence[int]) -> None:
    seen: set[int] = set()
    for y in years:
        if y in seen:
            raise IntegrityError(f"year {y} listed more than once")
        seen.add(y)
    ordered = sorted(years)
    if list(years) != ordered:
        raise IntegrityError("years must be listed in ascending order")
    for a, b in zip(ordered, ordered[1:]):
        if b != a + 1:
            raise IntegrityError(f"gap in the year axis between {a} and {b}")


_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def load_dataset(path: str | Path, schema: Iterable[str] | None = None) -> Dataset:
    """Read a comma-separated file with a leading ``year`` column.

    Empty cells are allowed only as a leading run in a column (missing
    prefix).  Numbers use a dot decimal separator regardless of locale.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise SchemaError(f"{path}: file is empty")
    header = [h.strip() for h in rows[0]]
    if header[0].lower() != "year":
        raise SchemaError(f"{path}: first column must be 'year', found {header[0]!r}")
    names = header[1:]
    if len(set(names)) != len(names):
        raise SchemaError(f"{path}: duplicate column names")
    for name in schema or ():
        if name not in names:
            raise SchemaError(f"{path}: missing column {name!r}")

    years: list[int] = []
    cols: list[list[float]] = [[] for _ in names]
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"{path}: row {lineno} has {len(row)} cells, expected {len(header)}")
        cell = row[0].strip()
        if not re.fullmatch(r"[+-]?\d+", cell):
            raise ParseError(f"{path}: row {lineno}, column 'year': {cell!r} is not an integer")
        years.append(int(cell))
        for j, raw in enumerate(row[1:]):
            raw = raw.strip()
            if raw == "":
                cols[j].append(math.nan)
            elif _NUMBER.match(raw):
                cols[j].append(float(raw))
            else:
                raise ParseError(f"{path}: row {lineno}, column {names[j]!r}: {raw!r} is not a number")
    _check_years(years)

    series = []
    for name, vals in zip(names, cols):
        arr = np.array(vals)
        nan = np.isnan(arr)
        n_missing = int(np.argmin(nan)) if not nan.all() else arr.size
        if n_missing == arr.size or nan[n_missing:].any():
            raise IntegrityError(f"{path}: column {name!r} has missing values after its first observation")
        series.append(TimeSeries(name, years[0], arr, n_missing))
    return Dataset(tuple(series))


@dataclass(frozen=True)
class TransformSpec:
    """One of ``log``, ``log_shift(c)``, ``diff``, ``lag(k)``, ``identity``."""

    kind: str
    param: float | int | None = None

    _KINDS = ("log", "log_shift", "diff", "lag", "identity")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ParameterError(f"unknown transform {self.kind!r}")
        if self.kind == "lag" and (not isinstance(self.param, int) or self.param < 1):
            raise ParameterError("lag(k) needs an integer k >= 1")
        if self.kind == "log_shift" and (self.param is None or not math.isfinite(self.param)):
            raise ParameterError("log_shift(c) needs a finite c")

    @classmethod
    def parse(cls, text: str) -> TransformSpec:
        """Parse ``"log"``, ``"log_shift(10)"``, ``"lag(2)"`` and friends."""
        m = re.fullmatch(r"\s*([a-z_]+)\s*(?:\(\s*([^)]*)\s*\))?\s*", text.lower())
        if not m:
            raise ParameterError(f"cannot parse transform {text!r}")
        kind, arg = m.group(1), m.group(2)
        kind = {"ln": "log", "difference": "diff", "first_difference": "diff", "none": "identity"}.get(kind, kind)
        try:
            if kind == "lag":
                return cls("lag", int(arg) if arg else 1)
            if kind == "log_shift":
                if not arg:
                    raise ParameterError("log_shift needs a shift argument")
                return cls("log_shift", float(arg))
        except ValueError:
            raise ParameterError(f"bad argument in transform {text!r}") from None
        if arg:
            raise ParameterError(f"transform {kind!r} takes no argument")
        return cls(kind)

    def __str__(self) -> str:
        if self.param is None:
            return self.kind
        return f"{self.kind}({self.param:g})"


def transform(s: TimeSeries, t: TransformSpec | str) -> TimeSeries:
    """Apply ``t`` elementwise (log) or along the year axis (diff, lag).

    The year axis is preserved; differencing and lagging grow the missing
    prefix by their depth.
    """
    if isinstance(t, str):
        t = TransformSpec.parse(t)
    vals = s.values
    valid = s.valid
    if t.kind == "identity":
        return s
    if t.kind in ("log", "log_shift"):
        shift = 0.0 if t.kind == "log" else float(t.param)
        shifted = valid + shift
        bad = np.flatnonzero(shifted <= 0)
        if bad.size:
            year = s.first_valid_year + int(bad[0])
            raise DomainError(
                f"{t} of {s.name!r} undefined: value {valid[bad[0]]:g} in {year}"
            )
        out = np.full(len(s), np.nan)
        out[s.n_missing :] = np.log(shifted)
        return TimeSeries(s.name, s.start_year, out, s.n_missing)
    depth = 1 if t.kind == "diff" else int(t.param)
    if valid.size <= depth:
        raise DegreesOfFreedomError(
            f"{t} needs more than {depth} observations; {s.name!r} has {valid.size}"
        )
    out = np.full(len(s), np.nan)
    if t.kind == "diff":
        out[s.n_missing + 1 :] = np.diff(valid)
    else:
        out[s.n_missing + depth :] = vals[s.n_missing : len(s) - depth]
    return TimeSeries(s.name, s.start_year, out, s.n_missing + depth)


@dataclass(frozen=True, eq=False)
class Design:
    """Regression arrays plus the labels and years of their rows/columns."""

    y: np.ndarray
    X: np.ndarray
    labels: tuple[str, ...]
    years: np.ndarray

    @property
    def span(self) -> tuple[int, int]:
        return int(self.years[0]), int(self.years[-1])

    @property
    def nobs(self) -> int:
        return self.y.size


def deterministic_columns(det: Deterministic, years: np.ndarray, origin: int) -> np.ndarray:
    """Constant and/or linear trend; the trend counts years from ``origin`` (=1)."""
    cols = []
    if det in (Deterministic.CONSTANT, Deterministic.TREND):
        cols.append(np.ones(years.size))
    if det is Deterministic.TREND:
        cols.append((years - origin + 1).astype(float))
    return np.column_stack(cols) if cols else np.empty((years.size, 0))


def build_design(
    ds: Dataset,
    dep: str,
    p: int,
    regressors: Mapping[str, int] | Sequence[tuple[str, int]],
    det: Deterministic | str = Deterministic.CONSTANT,
    trim: int | None = None,
) -> Design:
    """Levels design for y_t on deterministic terms, y lags 1..p, x_i lags 0..q_i.

    Column order is fixed: deterministic terms, ``y(-1)..y(-p)``, then each
    regressor's ``x, x(-1)..x(-q)`` in declaration order.  Rows start
    ``trim`` years into the common span (default: the largest lag used), so
    several specifications can share one estimation sample.
    """
    det = Deterministic.parse(det)
    regs = list(regressors.items()) if isinstance(regressors, Mapping) else list(regressors)
    names = [dep] + [n for n, _ in regs]
    if len(set(names)) != len(names):
        raise ParameterError("dependent variable and regressors must be distinct")
    if p < 0 or any(q < 0 for _, q in regs):
        raise ParameterError("lag orders must be non-negative")
    sub = ds.select(names)
    first, last = sub.common_span
    n = last - first + 1
    max_lag = max([p] + [q for _, q in regs])
    trim = max_lag if trim is None else trim
    if trim < max_lag:
        raise ParameterError(f"trim {trim} is shorter than the largest lag {max_lag}")
    if trim >= n:
        raise DegreesOfFreedomError(f"lag depth {trim} leaves no observations out of {n}")
    years = np.arange(first + trim, last + 1)

    def lagged(name: str, k: int) -> np.ndarray:
        return sub[name].window(first + trim - k, last - k)

    cols = [deterministic_columns(det, years, first)]
    labels = list(det.labels)
    for j in range(1, p + 1):
        cols.append(lagged(dep, j)[:, None])
        labels.append(f"{dep}(-{j})")
    for name, q in regs:
        for j in range(q + 1):
            cols.append(lagged(name, j)[:, None])
            labels.append(name if j == 0 else f"{name}(-{j})")
    X = np.hstack(cols)
    if years.size <= X.shape[1]:
        raise DegreesOfFreedomError(
            f"{years.size} usable observations for {X.shape[1]} coefficients"
        )
    return Design(_readonly(lagged(dep, 0)), _readonly(X), tuple(labels), years)
