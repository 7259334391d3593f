from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ardlkit.errors import (
    DegreesOfFreedomError,
    DomainError,
    IntegrityError,
    ParameterError,
    ParseError,
    SchemaError,
)
from ardlkit.tsdata import (
    Dataset,
    Deterministic,
    TimeSeries,
    TransformSpec,
    build_design,
    load_dataset,
    transform,
)
from conftest import write_csv

finite = st.floats(-1e6, 1e6, allow_nan=False)


class TestLoadDataset:
    def test_bundled_snapshot_shape(self, snapshot):
        assert set(snapshot.names) == {
            "SDI", "ECON", "SOCI", "POLI", "GLOB", "GDP", "OPEN", "ACCOU", "CONSMP"
        }
        assert snapshot.common_span == (2000, 2021)
        assert all(len(s.valid) == 22 for s in snapshot.series)

    def test_single_observation(self, tmp_path):
        ds = load_dataset(write_csv(tmp_path / "a.csv", "year,x\n2000,1.0\n"))
        assert ds.names == ("x",)
        assert len(ds["x"]) == 1
        assert ds["x"].valid[0] == 1.0

    def test_duplicate_year(self, tmp_path):
        f = write_csv(tmp_path / "d.csv", "year,x\n2004,1\n2005,2\n2005,3\n2006,4\n")
        with pytest.raises(IntegrityError, match="2005"):
            load_dataset(f)

    def test_year_gap(self, tmp_path):
        f = write_csv(tmp_path / "g.csv", "year,x\n2000,1\n2002,2\n")
        with pytest.raises(IntegrityError, match="gap"):
            load_dataset(f)

    def test_missing_schema_column_named(self, tmp_path):
        f = write_csv(tmp_path / "s.csv", "year,x\n2000,1\n")
        with pytest.raises(SchemaError, match="'GDP'"):
            load_dataset(f, ["x", "GDP"])

    def test_parse_error_reports_row_and_column(self, tmp_path):
        f = write_csv(tmp_path / "p.csv", "year,x,y\n2000,1,2\n2001,3,abc\n")
        with pytest.raises(ParseError, match=r"row 3.*'y'"):
            load_dataset(f)

    def test_comma_decimal_rejected(self, tmp_path):
        f = write_csv(tmp_path / "c.csv", 'year,x\n2000,"1,5"\n')
        with pytest.raises(ParseError):
            load_dataset(f)

    def test_leading_missing_prefix(self, tmp_path):
        f = write_csv(tmp_path / "m.csv", "year,x,y\n2000,,1\n2001,,2\n2002,5,3\n")
        ds = load_dataset(f)
        assert ds["x"].n_missing == 2
        assert ds.common_span == (2002, 2002)

    def test_internal_gap_rejected(self, tmp_path):
        f = write_csv(tmp_path / "i.csv", "year,x\n2000,1\n2001,\n2002,3\n")
        with pytest.raises(IntegrityError):
            load_dataset(f)

    def test_year_must_lead(self, tmp_path):
        f = write_csv(tmp_path / "y.csv", "x,year\n1,2000\n")
        with pytest.raises(SchemaError):
            load_dataset(f)


class TestTransform:
    def test_log_of_exponentials(self):
        s = TimeSeries("a", 2000, np.array([math.e, math.e**2]))
        np.testing.assert_allclose(transform(s, "log").values, [1.0, 2.0], rtol=0, atol=1e-15)

    def test_first_difference(self):
        out = transform(TimeSeries("a", 2000, np.array([1.0, 3.0, 6.0])), "diff")
        assert out.n_missing == 1
        assert np.isnan(out.values[0])
        np.testing.assert_array_equal(out.valid, [2.0, 3.0])

    def test_lag(self):
        out = transform(TimeSeries("a", 2000, np.array([1.0, 2.0, 3.0])), TransformSpec("lag", 1))
        assert out.n_missing == 1
        np.testing.assert_array_equal(out.valid, [1.0, 2.0])
        assert out.start_year == 2000 and len(out) == 3

    def test_log_of_negative_names_year(self, snapshot):
        with pytest.raises(DomainError, match=r"ACCOU.*20\d\d"):
            transform(snapshot["ACCOU"], "log")

    def test_log_shift(self):
        s = TimeSeries("a", 2000, np.array([-2.0, 0.0]))
        np.testing.assert_allclose(transform(s, "log_shift(3)").valid, np.log([1.0, 3.0]))
        with pytest.raises(DomainError):
            transform(s, "log_shift(2)")

    def test_diff_needs_two_points(self):
        with pytest.raises(DegreesOfFreedomError):
            transform(TimeSeries("a", 2000, np.array([1.0])), "diff")

    @pytest.mark.parametrize("text", ["log_shift", "lag(x)", "lag(0)", "cube", "diff(2)"])
    def test_bad_specs(self, text):
        with pytest.raises(ParameterError):
            TransformSpec.parse(text)

    @pytest.mark.parametrize("text", ["log", "identity", "diff", "lag(2)", "log_shift(10)"])
    def test_spec_round_trip(self, text):
        assert TransformSpec.parse(str(TransformSpec.parse(text))) == TransformSpec.parse(text)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(finite, min_size=2, max_size=40), st.integers(1, 5))
    def test_length_preserved_and_prefix_equals_depth(self, xs, k):
        s = TimeSeries("a", 1990, np.array(xs))
        if len(xs) > k:
            lagged = transform(s, TransformSpec("lag", k))
            assert len(lagged) == len(s) and lagged.n_missing == k
        d = transform(s, "diff")
        assert len(d) == len(s) and d.n_missing == 1

    @settings(max_examples=60, deadline=None)
    @given(st.lists(finite, min_size=1, max_size=50))
    def test_diff_inverts_cumsum(self, xs):
        x = np.array(xs)
        c = np.concatenate([[0.0], np.cumsum(x)])
        d = transform(TimeSeries("c", 0, c), "diff").valid
        scale = max(1.0, np.abs(c).max())
        assert np.max(np.abs(d - x)) <= 1e-12 * scale


class TestDeterministic:
    @pytest.mark.parametrize(
        "alias,expected",
        [("c", "constant"), ("const", "constant"), ("ct", "constant_trend"), ("trend", "constant_trend"), ("n", "none")],
    )
    def test_aliases(self, alias, expected):
        assert Deterministic.parse(alias).value == expected

    def test_unknown(self):
        with pytest.raises(ParameterError):
            Deterministic.parse("quadratic")


class TestBuildDesign:
    def _ds(self, n, k=2, seed=0):
        r = np.random.default_rng(seed)
        return Dataset.from_columns(
            range(2000, 2000 + n), {f"v{j}": r.standard_normal(n) for j in range(k)}
        )

    def test_twenty_rows_from_twenty_two(self):
        d = build_design(self._ds(22), "v0", 2, {"v1": 1})
        assert d.nobs == 20
        assert d.span == (2002, 2021)

    def test_ardl_1_0_columns(self):
        ds = Dataset.from_columns(range(5), {"y": [1.0, 2.0, 4.0, 8.0, 16.0], "x": [5.0, 6.0, 7.0, 8.0, 9.0]})
        d = build_design(ds, "y", 1, {"x": 0})
        assert d.labels == ("const", "y(-1)", "x")
        np.testing.assert_array_equal(
            d.X, [[1, 1, 6], [1, 2, 7], [1, 4, 8], [1, 8, 9]]
        )
        np.testing.assert_array_equal(d.y, [2, 4, 8, 16])

    def test_column_order(self):
        d = build_design(self._ds(30, 3), "v0", 2, [("v2", 1), ("v1", 0)], "ct")
        assert d.labels == ("const", "trend", "v0(-1)", "v0(-2)", "v2", "v2(-1)", "v1")
        np.testing.assert_array_equal(d.X[:, 1], np.arange(3, 31))

    def test_lag_too_deep(self):
        with pytest.raises(DegreesOfFreedomError):
            build_design(self._ds(22), "v0", 25, {"v1": 0})

    def test_more_columns_than_rows(self):
        with pytest.raises(DegreesOfFreedomError):
            build_design(self._ds(8, 4), "v0", 2, {"v1": 2, "v2": 2, "v3": 2})

    def test_unknown_variable(self):
        with pytest.raises(SchemaError, match="nope"):
            build_design(self._ds(10), "v0", 1, {"nope": 0})

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 3), st.lists(st.integers(0, 3), min_size=1, max_size=3), st.integers(25, 40))
    def test_row_count_property(self, p, qs, n):
        ds = self._ds(n, len(qs) + 1)
        d = build_design(ds, "v0", p, [(f"v{j + 1}", q) for j, q in enumerate(qs)])
        assert d.nobs == n - max([p] + qs)

    def test_respects_missing_prefix(self):
        ds = self._ds(22)
        ds = ds.with_series(transform(ds["v1"], "diff"))
        d = build_design(ds, "v0", 1, {"v1": 1})
        assert d.span == (2002, 2021)
