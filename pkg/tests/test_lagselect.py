import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from ecmkit.errors import InsufficientObservationsError
from ecmkit.lagselect import SmallSampleWarning, select_lag_order
from ecmkit.simulate import ar_process, as_series, var_process

A1 = np.array([[0.5, 0.2], [0.0, 0.3]])


@pytest.fixture(scope="module")
def bivariate():
    return var_process([A1], 250, np.random.default_rng(31))


def test_formulas_consistent(bivariate):
    t = select_lag_order(bivariate, 5)
    T, K = t.nobs, 2
    for r in t.rows:
        kbar = K * r.lag + 1
        m = K * kbar
        assert r.aic == pytest.approx(r.logdet + 2 * m / T, abs=1e-10)
        assert r.hqic == pytest.approx(r.logdet + 2 * m * math.log(math.log(T)) / T, abs=1e-10)
        assert r.sbic == pytest.approx(r.logdet + m * math.log(T) / T, abs=1e-10)
        assert r.fpe == pytest.approx(math.exp(r.logdet) * ((T + kbar) / (T - kbar)) ** K, rel=1e-10)
        assert r.loglik == pytest.approx(-T * K / 2 * (1 + math.log(2 * math.pi)) - T / 2 * r.logdet, rel=1e-12)
    for prev, r in zip(t.rows, t.rows[1:]):
        assert r.lr_stat == pytest.approx(T * (prev.logdet - r.logdet), rel=1e-10)
        assert r.lr_p_value == pytest.approx(stats.chi2.sf(r.lr_stat, K * K), rel=1e-10)
    for crit in ("aic", "hqic", "sbic", "fpe"):
        assert t.chosen[crit] == int(np.argmin(t.column(crit)))


def test_common_sample(bivariate):
    t = select_lag_order(as_series(bivariate, ["a", "b"], 1900), 4)
    assert t.nobs == 246
    assert (t.sample_start, t.sample_end) == (1904, 2149)
    assert {r.df_resid for r in t.rows} == {246 - (2 * p + 1) for p in range(5)}


def test_matches_statsmodels(bivariate):
    sm = pytest.importorskip("statsmodels.tsa.api")
    ref = sm.VAR(bivariate).select_order(5)
    t = select_lag_order(bivariate, 5)
    np.testing.assert_allclose(t.column("aic"), ref.ics["aic"], rtol=1e-10)
    np.testing.assert_allclose(t.column("sbic"), ref.ics["bic"], rtol=1e-10)
    np.testing.assert_allclose(t.column("hqic"), ref.ics["hqic"], rtol=1e-10)
    np.testing.assert_allclose(t.column("fpe"), ref.ics["fpe"], rtol=1e-10)


def test_lr_general_to_specific():
    y = ar_process([0.5, 0.3], 400, np.random.default_rng(5))
    t = select_lag_order(y, 6)
    lr = t.chosen["lr"]
    assert t.rows[lr].lr_p_value < 0.05
    assert all(r.lr_p_value >= 0.05 for r in t.rows[lr + 1:])


def test_hqic_recovers_ar2():
    streams = np.random.SeedSequence(41).spawn(500)
    hits = sum(select_lag_order(ar_process([0.5, 0.3], 400, np.random.default_rng(s)), 6).chosen["hqic"] == 2
               for s in streams)
    assert hits / 500 >= 0.90


def test_sbic_white_noise():
    streams = np.random.SeedSequence(42).spawn(500)
    hits = sum(select_lag_order(np.random.default_rng(s).standard_normal(400), 6).chosen["sbic"] == 0
               for s in streams)
    assert hits / 500 >= 0.95


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(30, 80), k=st.integers(1, 2), max_lag=st.integers(1, 4))
@settings(max_examples=40, deadline=None)
def test_sbic_never_longer_than_aic(seed, n, k, max_lag):
    y = np.cumsum(np.random.default_rng(seed).standard_normal((n, k)), axis=0)
    t = select_lag_order(y, max_lag)
    assert t.nobs >= 16
    assert t.chosen["sbic"] <= t.chosen["aic"]


def test_insufficient_sample():
    with pytest.raises(InsufficientObservationsError):
        select_lag_order(np.random.default_rng(0).standard_normal((12, 2)), 4)


def test_small_sample_warning():
    y = np.cumsum(np.random.default_rng(1).standard_normal(17))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        t = select_lag_order(y, 4)
    if any(t.rows[t.chosen[c]].df_resid < 5 for c in ("aic", "hqic", "sbic", "fpe")):
        assert any(issubclass(w.category, SmallSampleWarning) for w in caught)
    assert t.nobs == 13
    assert t.rows[4].df_resid == 8
