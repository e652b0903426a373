"""Augmented Dickey-Fuller and Phillips-Perron unit-root tests.

Both tests are left-tailed: the unit-root null is rejected when the
statistic falls below the critical value. Critical values come from
MacKinnon's (2010) response surfaces for a single series,

    cv(T) = b0 + b1 / T + b2 / T**2 + b3 / T**3,

evaluated at the number of observations in the test regression.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSeriesError, InsufficientObservationsError, InvalidOrderError
from .ols import RegressionResult, fit
from .series import TimeSeries, difference

LEVELS = (0.01, 0.05, 0.10)


class Deterministic(str, enum.Enum):
    NONE = "none"
    CONSTANT = "constant"
    CONSTANT_AND_TREND = "constant_and_trend"

    @classmethod
    def parse(cls, value) -> Deterministic:
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"n": "none", "nc": "none", "c": "constant", "ct": "constant_and_trend",
                   "trend": "constant_and_trend"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown deterministic spec {value!r}; expected one of {choices}") from None

    @property
    def n_terms(self) -> int:
        return {"none": 0, "constant": 1, "constant_and_trend": 2}[self.value]


# (b0, b1, b2, b3) per level; MacKinnon (2010), Table 1, N = 1
_SURFACES = {
    Deterministic.NONE: {
        0.01: (-2.56574, -2.2358, -3.627, 0.0),
        0.05: (-1.94100, -0.2686, -3.365, 31.223),
        0.10: (-1.61682, 0.2656, -2.714, 25.364),
    },
    Deterministic.CONSTANT: {
        0.01: (-3.43035, -6.5393, -16.786, -79.433),
        0.05: (-2.86154, -2.8903, -4.234, -40.040),
        0.10: (-2.56677, -1.5384, -2.809, 0.0),
    },
    Deterministic.CONSTANT_AND_TREND: {
        0.01: (-3.95877, -9.0531, -28.428, -134.155),
        0.05: (-3.41049, -4.3904, -9.036, -45.374),
        0.10: (-3.12705, -2.5856, -3.925, -22.380),
    },
}


def critical_values(det: Deterministic | str, nobs: int) -> dict[float, float]:
    det = Deterministic.parse(det)
    out = {}
    for level, (b0, b1, b2, b3) in _SURFACES[det].items():
        inv = 1.0 / nobs
        out[level] = b0 + b1 * inv + b2 * inv**2 + b3 * inv**3
    return out


def classify_stationarity(statistic: float, critical_value: float) -> bool:
    """True when the unit-root null is rejected (the series looks stationary)."""
    return statistic < critical_value


def level_label(level: float) -> str:
    return f"{level * 100:g}%"


@dataclass(frozen=True)
class UnitRootResult:
    test_name: str
    statistic: float
    lags_or_bandwidth: int
    critical_values: dict[float, float]
    reject_at: dict[float, bool]
    deterministic: Deterministic
    nobs_effective: int
    series_name: str = ""
    regression: RegressionResult | None = field(default=None, repr=False, compare=False)

    def rejects(self, level: float) -> bool:
        return self.reject_at[level]

    def describe(self, level: float) -> str:
        verdict = "reject unit root" if self.reject_at[level] else "cannot reject unit root"
        return (
            f"{self.test_name} {self.series_name}: stat {self.statistic:.4f} vs "
            f"{level_label(level)} critical {self.critical_values[level]:.4f} -> {verdict}"
        )


def _result(name, stat, lags, det, nobs, series_name, reg) -> UnitRootResult:
    cvs = critical_values(det, nobs)
    return UnitRootResult(
        test_name=name,
        statistic=float(stat),
        lags_or_bandwidth=int(lags),
        critical_values=cvs,
        reject_at={lvl: classify_stationarity(stat, cv) for lvl, cv in cvs.items()},
        deterministic=det,
        nobs_effective=int(nobs),
        series_name=series_name,
        regression=reg,
    )


def _df_regression(y: np.ndarray, lags: int, det: Deterministic) -> RegressionResult:
    """Regress the first difference on the lagged level, lagged differences and deterministics."""
    dy = np.diff(y)
    n = dy.size - lags
    cols, labels = [], []
    if det is not Deterministic.NONE:
        cols.append(np.ones(n))
        labels.append("const")
    if det is Deterministic.CONSTANT_AND_TREND:
        cols.append(np.arange(lags + 2, lags + 2 + n, dtype=float))
        labels.append("trend")
    cols.append(y[lags : lags + n])
    labels.append("L1.level")
    for j in range(1, lags + 1):
        cols.append(dy[lags - j : lags - j + n])
        labels.append(f"L{j}.diff")
    return fit(np.column_stack(cols), dy[lags:], labels)


def _check_inputs(s: TimeSeries, lags: int, det: Deterministic) -> None:
    if lags < 0 or int(lags) != lags:
        raise InvalidOrderError(f"lag count must be a non-negative integer, got {lags!r}")
    if np.ptp(s.values) == 0:
        raise DegenerateSeriesError(f"series {s.name!r} is constant; unit-root tests are undefined")
    n = len(s) - lags - 1
    k = det.n_terms + 1 + lags
    if n <= k:
        raise InsufficientObservationsError(
            f"{s.name!r}: {len(s)} observations leave {n} usable rows for {k} regressors "
            f"(lags={lags}, deterministic={det.value})"
        )


def adf_test(s: TimeSeries, lags: int, det: Deterministic | str = Deterministic.CONSTANT) -> UnitRootResult:
    """Augmented Dickey-Fuller t-test on the lagged-level coefficient."""
    det = Deterministic.parse(det)
    _check_inputs(s, lags, det)
    reg = _df_regression(s.values, int(lags), det)
    j = reg.index("L1.level")
    return _result("ADF", reg.t_stats[j], lags, det, reg.nobs, s.name, reg)


def default_bandwidth(nobs: int) -> int:
    """Newey-West automatic bandwidth ``floor(4 (T/100)^(2/9))``."""
    return int(math.floor(4 * (nobs / 100) ** (2 / 9)))


def long_run_variance(u: np.ndarray, bandwidth: int) -> float:
    """Bartlett-kernel (Newey-West) long-run variance of a mean-zero series."""
    n = u.size
    lrv = u @ u / n
    for j in range(1, bandwidth + 1):
        w = 1 - j / (bandwidth + 1)
        lrv += 2 * w * (u[j:] @ u[:-j]) / n
    return float(lrv)


def pp_test(s: TimeSeries, bandwidth: int | None = None,
            det: Deterministic | str = Deterministic.CONSTANT) -> UnitRootResult:
    """Phillips-Perron Z-tau statistic.

    The Dickey-Fuller t-ratio from the unaugmented regression is rescaled with
    a Newey-West estimate of the residual long-run variance. With
    ``bandwidth=0`` the correction vanishes and the plain DF t-ratio is returned.
    """
    det = Deterministic.parse(det)
    _check_inputs(s, 0, det)
    if bandwidth is None:
        bandwidth = default_bandwidth(len(s))
    if bandwidth < 0 or int(bandwidth) != bandwidth:
        raise InvalidOrderError(f"bandwidth must be a non-negative integer, got {bandwidth!r}")
    if bandwidth >= len(s) - 1:
        raise InvalidOrderError(f"bandwidth {bandwidth} must be below the {len(s) - 1} regression rows")
    reg = _df_regression(s.values, 0, det)
    j = reg.index("L1.level")
    t = reg.t_stats[j]
    if bandwidth == 0:
        return _result("PP", t, 0, det, reg.nobs, s.name, reg)

    n = reg.nobs
    u = reg.residuals
    gamma0 = reg.rss / n
    lam2 = long_run_variance(u, int(bandwidth))
    s_hat = math.sqrt(reg.sigma2)
    se = reg.std_errors[j]
    lam = math.sqrt(lam2)
    z = math.sqrt(gamma0 / lam2) * t - (lam2 - gamma0) / (2 * lam) * (n * se / s_hat)
    return _result("PP", z, bandwidth, det, n, s.name, reg)


@dataclass(frozen=True)
class IntegrationOrder:
    """Estimated order of integration with the tests that decided it.

    ``order`` is 0, 1, or 2; 2 stands for "two or more" whenever the last
    difference examined still fails to reject the unit root.
    """

    series_name: str
    order: int
    evidence: tuple[UnitRootResult, ...]
    level: float
    selected_lags: tuple[int, ...] = ()

    @property
    def label(self) -> str:
        return "I(2+)" if self.order >= 2 else f"I({self.order})"


def _adf_lags_for(s: TimeSeries, det: Deterministic, max_lag: int | None, criterion: str) -> int:
    from .lagselect import select_lag_order

    feasible = _max_feasible_lags(len(s), det)
    if max_lag is None:
        max_lag = int(math.ceil(12 * (len(s) / 100) ** 0.25))
    # an AR(p) in the series corresponds to p - 1 augmentation lags
    max_lag = min(max_lag, feasible + 1)
    if max_lag < 1:
        return 0
    table = select_lag_order([s], max_lag)
    return max(table.chosen[criterion] - 1, 0)


def _max_feasible_lags(n: int, det: Deterministic) -> int:
    # rows n - lags - 1 must exceed regressors det + 1 + lags, and the
    # one-equation selection sample n - (lags + 1) must exceed lags + 2
    best = -1
    for lags in range(n):
        rows = n - lags - 1
        if rows > det.n_terms + 1 + lags and n - (lags + 1) > lags + 2:
            best = lags
        else:
            break
    return best


def classify_integration(
    s: TimeSeries,
    det: Deterministic | str = Deterministic.CONSTANT,
    max_order: int = 1,
    level: float = 0.05,
    max_lag: int | None = None,
    criterion: str = "aic",
    lags: int | None = None,
) -> IntegrationOrder:
    """Difference ``s`` until the ADF test rejects or ``max_order`` is reached.

    The augmentation order at each stage is chosen by ``criterion`` from a
    lag-selection table on the series being tested, unless ``lags`` fixes it.
    """
    if max_order not in (1, 2):
        raise ValueError(f"max_order must be 1 or 2, got {max_order}")
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level}")
    det = Deterministic.parse(det)
    evidence, chosen = [], []
    current = s
    for d in range(max_order + 1):
        if d:
            current = difference(s, d).as_series()
        p = lags if lags is not None else _adf_lags_for(current, det, max_lag, criterion)
        res = adf_test(current, p, det)
        evidence.append(res)
        chosen.append(p)
        if res.reject_at[level]:
            return IntegrationOrder(s.name, d, tuple(evidence), level, tuple(chosen))
    return IntegrationOrder(s.name, 2, tuple(evidence), level, tuple(chosen))
