"""Ordinary least squares with small-sample inference.

Estimates come from a QR factorisation of the design matrix, never from the
normal equations: lagged levels of series measured in millions sit next to
an intercept column, and forming ``X'X`` squares that conditioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg, stats

from .errors import CollinearityError, DegenerateFitError, InsufficientObservationsError

RANK_TOL = 1e-10


@dataclass(frozen=True)
class DesignMatrix:
    values: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 2:
            raise ValueError("design matrix must be two-dimensional")
        labels = tuple(self.labels)
        if len(labels) != arr.shape[1]:
            raise ValueError(f"{arr.shape[1]} columns but {len(labels)} labels")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_columns(cls, columns: dict[str, Sequence[float]]) -> DesignMatrix:
        return cls(np.column_stack([np.asarray(v, float) for v in columns.values()]), tuple(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class RegressionResult:
    labels: tuple[str, ...]
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    residuals: np.ndarray = field(repr=False)
    fitted: np.ndarray = field(repr=False)
    cov_params: np.ndarray = field(repr=False)
    rss: float
    loglik: float
    nobs: int
    df_resid: int

    @property
    def sigma2(self) -> float:
        return self.rss / self.df_resid

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def coef(self, label: str) -> float:
        return float(self.coefficients[self.index(label)])


def _offending_column(x: np.ndarray, labels: Sequence[str]) -> int:
    """Index of the first column that adds nothing to the span of earlier ones."""
    for j in range(x.shape[1]):
        sv = np.linalg.svd(x[:, : j + 1], compute_uv=False)
        if sv[-1] <= RANK_TOL * sv[0]:
            return j
    return x.shape[1] - 1


def _check_rank(x: np.ndarray, labels: Sequence[str]) -> None:
    norms = np.linalg.norm(x, axis=0)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        j = int(zero[0])
        raise CollinearityError(f"regressor {labels[j]!r} is identically zero", labels[j])
    # equilibrate columns so scale differences don't masquerade as rank loss
    xs = x / norms
    sv = np.linalg.svd(xs, compute_uv=False)
    if sv[-1] <= RANK_TOL * sv[0]:
        j = _offending_column(xs, labels)
        raise CollinearityError(
            f"design matrix is rank deficient: regressor {labels[j]!r} is a linear "
            "combination of the preceding columns",
            labels[j],
        )


def gaussian_loglik(rss: float, nobs: int) -> float:
    return -nobs / 2 * (math.log(2 * math.pi) + math.log(rss / nobs) + 1)


def fit(X: DesignMatrix | np.ndarray, y, labels: Sequence[str] | None = None) -> RegressionResult:
    """Least-squares fit of ``y`` on the columns of ``X``.

    Standard errors use ``rss / df_resid``; p-values are two-sided from the
    t distribution with ``df_resid`` degrees of freedom.
    """
    if isinstance(X, DesignMatrix):
        x, labels = X.values, X.labels
    else:
        x = np.asarray(X, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        labels = tuple(labels) if labels is not None else tuple(f"x{i}" for i in range(x.shape[1]))
    y = np.asarray(y, dtype=float).ravel()
    n, k = x.shape
    if y.size != n:
        raise ValueError(f"y has {y.size} observations, design matrix has {n} rows")
    if n <= k:
        raise InsufficientObservationsError(
            f"{n} observations cannot identify {k} coefficients with residual degrees of freedom"
        )
    _check_rank(x, labels)

    q, r = np.linalg.qr(x)
    beta = linalg.solve_triangular(r, q.T @ y)
    fitted = x @ beta
    resid = y - fitted
    rss = float(resid @ resid)
    df = n - k
    rinv = linalg.solve_triangular(r, np.eye(k))
    cov = (rss / df) * (rinv @ rinv.T)
    se = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, beta / se, np.nan)
    p = 2 * stats.t.sf(np.abs(t), df)
    ll = gaussian_loglik(rss, n) if rss > 0 else math.inf
    return RegressionResult(
        labels=tuple(labels),
        coefficients=beta,
        std_errors=se,
        t_stats=t,
        p_values=p,
        residuals=resid,
        fitted=fitted,
        cov_params=cov,
        rss=rss,
        loglik=ll,
        nobs=n,
        df_resid=df,
    )


def loglikelihood(result: RegressionResult) -> float:
    """Gaussian log-likelihood at the ML variance ``rss / nobs``."""
    if result.rss <= 0:
        raise DegenerateFitError("residual sum of squares is zero; the likelihood is unbounded")
    return gaussian_loglik(result.rss, result.nobs)
