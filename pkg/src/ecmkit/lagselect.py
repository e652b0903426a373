"""VAR lag-order selection: information criteria and sequential LR tests."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import InsufficientObservationsError
from .series import TimeSeries, stack

CRITERIA = ("aic", "hqic", "sbic", "fpe", "lr")


class SmallSampleWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LagRow:
    lag: int
    loglik: float
    logdet: float
    lr_stat: float
    lr_df: int
    lr_p_value: float
    fpe: float
    aic: float
    hqic: float
    sbic: float
    n_params: int
    df_resid: int


@dataclass(frozen=True)
class LagSelectionTable:
    variables: tuple[str, ...]
    max_lag: int
    nobs: int
    sample_start: int
    sample_end: int
    rows: tuple[LagRow, ...]
    chosen: dict[str, int]
    lr_level: float = 0.05

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    @property
    def warnings(self) -> tuple[str, ...]:
        out = []
        for crit in ("aic", "hqic", "sbic", "fpe"):
            row = self.rows[self.chosen[crit]]
            if row.df_resid < 5:
                out.append(
                    f"{crit.upper()} chose lag {row.lag} leaving {row.df_resid} residual "
                    f"degrees of freedom per equation"
                )
        return tuple(out)


def _design(y: np.ndarray, p: int, trim: int) -> np.ndarray:
    """Intercept plus ``p`` lags of every column, rows ``trim..T-1``."""
    T = y.shape[0]
    cols = [np.ones((T - trim, 1))]
    for j in range(1, p + 1):
        cols.append(y[trim - j : T - j])
    return np.hstack(cols)


def select_lag_order(data, max_lag: int, lr_level: float = 0.05,
                     variables=None, start_year: int = 0) -> LagSelectionTable:
    """Fit VAR(0)..VAR(max_lag) on a common sample and tabulate the criteria.

    ``data`` is a sequence of aligned :class:`TimeSeries` or a ``T x K``
    array. All criteria are per observation; ties go to the smaller lag.
    """
    if isinstance(data, np.ndarray):
        y = np.asarray(data, dtype=float)
        if y.ndim == 1:
            y = y[:, None]
        names = tuple(variables or (f"y{i}" for i in range(y.shape[1])))
    else:
        y, names, start_year = stack(data)
        names = tuple(names)
    if max_lag < 0 or int(max_lag) != max_lag:
        raise ValueError(f"max_lag must be a non-negative integer, got {max_lag!r}")
    T_full, K = y.shape
    T = T_full - max_lag
    kbar_max = K * max_lag + 1
    if T <= kbar_max:
        raise InsufficientObservationsError(
            f"{T_full} observations minus {max_lag} presample rows leave {T}, "
            f"not enough for {kbar_max} regressors per equation"
        )
    target = y[max_lag:]
    rows, logdets = [], []
    for p in range(max_lag + 1):
        x = _design(y, p, max_lag)
        beta, *_ = np.linalg.lstsq(x, target, rcond=None)
        u = target - x @ beta
        sigma = u.T @ u / T
        sign, logdet = np.linalg.slogdet(sigma)
        if sign <= 0:
            logdet = -math.inf
        kbar = K * p + 1
        m = K * kbar
        loglik = -T * K / 2 * (1 + math.log(2 * math.pi)) - T / 2 * logdet
        if p == 0:
            lr, lr_p = math.nan, math.nan
        else:
            lr = T * (logdets[-1] - logdet)
            lr_p = float(stats.chi2.sf(lr, K * K))
        rows.append(LagRow(
            lag=p,
            loglik=loglik,
            logdet=logdet,
            lr_stat=lr,
            lr_df=K * K,
            lr_p_value=lr_p,
            fpe=math.exp(logdet) * ((T + kbar) / (T - kbar)) ** K,
            aic=logdet + 2 * m / T,
            hqic=logdet + 2 * m * math.log(math.log(T)) / T,
            sbic=logdet + m * math.log(T) / T,
            n_params=m,
            df_resid=T - kbar,
        ))
        logdets.append(logdet)

    chosen = {c: int(np.argmin([getattr(r, c) for r in rows])) for c in ("aic", "hqic", "sbic", "fpe")}
    chosen["lr"] = 0
    for r in reversed(rows[1:]):
        if r.lr_p_value < lr_level:
            chosen["lr"] = r.lag
            break
    if T >= 16:
        assert chosen["sbic"] <= chosen["aic"], "SBIC chose a longer lag than AIC"

    table = LagSelectionTable(
        variables=names,
        max_lag=int(max_lag),
        nobs=T,
        sample_start=start_year + max_lag,
        sample_end=start_year + T_full - 1,
        rows=tuple(rows),
        chosen=chosen,
        lr_level=lr_level,
    )
    for msg in table.warnings:
        warnings.warn(msg, SmallSampleWarning, stacklevel=2)
    return table
