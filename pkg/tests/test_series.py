import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from ecmkit.errors import AlignmentError, DegenerateSeriesError, InvalidOrderError
from ecmkit.series import TimeSeries, acf, align, align_all, ccf, difference

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def ts(values, start=2000, name="s"):
    return TimeSeries(name, start, values)


class TestTimeSeries:
    def test_years(self):
        s = ts([1, 2, 3], start=1994)
        assert s.end_year == 1996
        assert_array_equal(s.years, [1994, 1995, 1996])

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError, match="non-finite"):
            ts([1.0, np.nan, 2.0])
        with pytest.raises(ValueError):
            ts([np.inf])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            ts([])

    def test_values_immutable(self):
        s = ts([1.0, 2.0])
        with pytest.raises(ValueError):
            s.values[0] = 5.0


class TestDifference:
    def test_constant(self):
        assert_array_equal(difference(ts([5, 5, 5, 5]), 1).values, [0, 0, 0])

    def test_first(self):
        assert_array_equal(difference(ts([1, 2, 4, 7]), 1).values, [1, 2, 3])

    def test_second_equals_twice_first(self):
        s = ts([1, 2, 4, 7])
        once = difference(s, 1).as_series()
        twice = difference(once, 1).values
        assert_array_equal(twice, [1, 1])
        assert_array_equal(difference(s, 2).values, twice)

    def test_order_zero_is_identity(self):
        s = ts([3.5, 1.25, 9.0])
        assert_array_equal(difference(s, 0).values, s.values)

    def test_start_year_shifts(self):
        d = difference(ts([1, 2, 4, 7], start=1994), 2)
        assert d.start_year == 1996

    @pytest.mark.parametrize("d", [4, 10, -1])
    def test_invalid_order(self, d):
        with pytest.raises(InvalidOrderError):
            difference(ts([1, 2, 4, 7]), d)

    @given(st.lists(finite, min_size=3, max_size=40))
    def test_composition(self, values):
        s = ts(values)
        twice = difference(difference(s, 1).as_series(), 1).values
        assert_array_equal(difference(s, 2).values, twice)


def direct_acf(x, k):
    # textbook definition, written independently of the library loop
    x = np.asarray(x, float)
    n, m = x.size, x.mean()
    c0 = sum((x[t] - m) ** 2 for t in range(n)) / n
    ck = sum((x[t] - m) * (x[t + k] - m) for t in range(n - k)) / n
    return ck / c0


class TestAcf:
    def test_lag_zero_is_one(self, rng):
        assert acf(ts(rng.standard_normal(30)), 5).values[0] == 1.0

    def test_matches_direct_covariances(self, rng):
        x = rng.standard_normal(200)
        res = acf(ts(x), 10)
        assert_allclose(res.values, [direct_acf(x, k) for k in range(11)], rtol=1e-12, atol=1e-14)

    def test_white_noise_inside_band(self):
        x = np.random.default_rng(11).standard_normal(200)
        res = acf(ts(x), 10)
        assert res.band == pytest.approx(1.959963984540054 / np.sqrt(200))
        inside = np.abs(res.values[1:]) <= res.band
        assert inside.sum() >= 8

    def test_linear_trend(self):
        x = np.arange(1, 51, dtype=float)
        r1 = acf(ts(x), 1).values[1]
        assert r1 == pytest.approx(direct_acf(x, 1), rel=1e-12)
        assert r1 > 0.9

    def test_constant_series(self):
        with pytest.raises(DegenerateSeriesError):
            acf(ts([2.0] * 10), 3)

    def test_max_lag_bounds(self):
        with pytest.raises(InvalidOrderError):
            acf(ts([1.0, 2.0, 3.0]), 3)

    @given(st.lists(finite, min_size=5, max_size=60).filter(lambda v: np.ptp(v) > 1e-3))
    def test_bounded(self, values):
        res = acf(ts(values), len(values) - 1)
        assert np.all(np.abs(res.values) <= 1.0)


class TestCcf:
    def test_self_lag_zero(self, rng):
        s = ts(rng.standard_normal(40))
        assert ccf(s, s, 3).at(0) == pytest.approx(1.0, abs=1e-15)

    def test_shift_peak(self, rng):
        # y follows x by two periods
        z = rng.standard_normal(202)
        x = ts(z[2:], name="x")
        y = ts(z[:-2], name="y")
        assert np.array_equal(y.values[2:], x.values[:-2])
        res = ccf(x, y, 5)
        assert res.lags[np.argmax(np.abs(res.values))] == 2
        res = ccf(y, x, 5)
        assert res.lags[np.argmax(np.abs(res.values))] == -2

    def test_independent_noise(self):
        r = np.random.default_rng(5)
        res = ccf(ts(r.standard_normal(200)), ts(r.standard_normal(200)), 5)
        assert np.max(np.abs(res.values)) < 0.25

    def test_misaligned(self):
        with pytest.raises(AlignmentError):
            ccf(ts([1.0, 2, 3, 5], start=2000), ts([1.0, 2, 3, 5], start=2001), 1)

    @given(st.lists(st.tuples(finite, finite), min_size=6, max_size=50)
           .filter(lambda v: np.ptp([a for a, _ in v]) > 1e-3 and np.ptp([b for _, b in v]) > 1e-3))
    @settings(max_examples=60)
    def test_swap_antisymmetry_and_bounds(self, pairs):
        x = ts([a for a, _ in pairs], name="x")
        y = ts([b for _, b in pairs], name="y")
        k = len(pairs) - 1
        xy, yx = ccf(x, y, k), ccf(y, x, k)
        assert_allclose(xy.values, yx.values[::-1], rtol=0, atol=1e-12)
        assert np.all(np.abs(xy.values) <= 1.0)


class TestAlign:
    def test_trims_to_overlap(self):
        x = ts(np.arange(17.0), start=1994, name="x")
        y = ts(np.arange(20.0), start=1991, name="y")
        ax, ay = align(x, y)
        assert (ax.start_year, ax.end_year) == (1994, 2010)
        assert (ay.start_year, ay.end_year) == (1994, 2010)
        assert_array_equal(ay.values, np.arange(3.0, 20.0))

    def test_identical_ranges_unchanged(self):
        x, y = ts([1.0, 2.0], name="x"), ts([3.0, 4.0], name="y")
        assert align(x, y) == (x, y)

    def test_no_overlap(self):
        with pytest.raises(AlignmentError):
            align(ts(np.ones(6), start=1990), ts(np.ones(5), start=1996))

    def test_idempotent(self):
        x = ts(np.arange(10.0), start=1990, name="x")
        y = ts(np.arange(8.0), start=1995, name="y")
        once = align(x, y)
        assert align(*once) == once

    def test_align_all(self):
        a = ts(np.arange(5.0), 2000, "a")
        b = ts(np.arange(5.0), 2001, "b")
        c = ts(np.arange(5.0), 2002, "c")
        out = align_all([a, b, c])
        assert {(s.start_year, s.end_year) for s in out} == {(2002, 2004)}
