"""VAR and VECM estimation, Granger causality, and the cointegration gate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import InsufficientObservationsError, InvalidOrderError, InvalidRankError, LabelError
from .ols import RegressionResult, fit
from .series import TimeSeries, stack
from .unitroot import IntegrationOrder


def _as_matrix(data, variables=None) -> tuple[np.ndarray, list[str], int]:
    if isinstance(data, np.ndarray):
        y = np.asarray(data, dtype=float)
        if y.ndim == 1:
            y = y[:, None]
        names = list(variables or (f"y{i}" for i in range(y.shape[1])))
        return y, names, 0
    return stack(data)


def _lag_labels(names: Sequence[str], p: int, prefix: str = "") -> list[str]:
    return [f"L{j}.{prefix}{n}" for j in range(1, p + 1) for n in names]


def _lagged(y: np.ndarray, p: int) -> np.ndarray:
    T = y.shape[0]
    if p == 0:
        return np.empty((T, 0))
    return np.hstack([y[p - j : T - j] for j in range(1, p + 1)])


@dataclass(frozen=True)
class _SystemFit:
    intercept: np.ndarray
    coefs: np.ndarray
    extra: np.ndarray
    equations: tuple[RegressionResult, ...]
    residuals: np.ndarray
    residual_cov: np.ndarray
    nobs: int


def _fit_system(y: np.ndarray, p: int, names: Sequence[str], exog: np.ndarray | None = None,
                exog_labels: Sequence[str] = (), prefix: str = "") -> _SystemFit:
    """Equation-by-equation OLS of ``y[t]`` on intercept, ``exog[t]`` and ``p`` lags of ``y``.

    ``exog`` rows must already be aligned with ``y[p:]``.
    """
    T, K = y.shape
    n = T - p
    n_reg = 1 + len(exog_labels) + K * p
    if n <= n_reg:
        raise InsufficientObservationsError(
            f"{T} observations with {p} lags leave {n} rows for {n_reg} regressors per equation"
        )
    parts = [np.ones((n, 1))]
    if exog is not None and exog.size:
        parts.append(exog)
    parts.append(_lagged(y, p))
    x = np.hstack(parts)
    labels = ["const", *exog_labels, *_lag_labels(names, p, prefix)]
    eqs = tuple(fit(x, y[p:, i], labels) for i in range(K))
    b = np.array([e.coefficients for e in eqs])  # K x n_reg
    ne = len(exog_labels)
    coefs = b[:, 1 + ne :].reshape(K, p, K).transpose(1, 0, 2) if p else np.zeros((0, K, K))
    resid = np.column_stack([e.residuals for e in eqs])
    cov = resid.T @ resid / n
    cov = (cov + cov.T) / 2
    return _SystemFit(b[:, 0], coefs, b[:, 1 : 1 + ne], eqs, resid, cov, n)


@dataclass(frozen=True)
class VarModel:
    """VAR(p) estimates.

    ``coefficient_matrices[j][r, c]`` is the effect of variable ``c`` at lag
    ``j + 1`` on variable ``r``.
    """

    p: int
    variables: tuple[str, ...]
    intercept: np.ndarray
    coefficient_matrices: np.ndarray
    residual_cov: np.ndarray
    residuals: np.ndarray = field(repr=False)
    equations: tuple[RegressionResult, ...] = field(repr=False)
    nobs: int = 0
    sample_start: int = 0

    @property
    def k(self) -> int:
        return len(self.variables)

    def index(self, label: str) -> int:
        try:
            return self.variables.index(label)
        except ValueError:
            raise LabelError(f"unknown variable {label!r}; model has {list(self.variables)}") from None

    def companion(self) -> np.ndarray:
        K, p = self.k, self.p
        top = np.hstack(list(self.coefficient_matrices))
        if p == 1:
            return top
        return np.vstack([top, np.eye(K * (p - 1), K * p)])

    def is_stable(self) -> bool:
        return bool(np.all(np.abs(np.linalg.eigvals(self.companion())) < 1))


def fit_var(data, p: int, variables=None) -> VarModel:
    """Estimate a VAR(p) with intercept by equation-wise OLS."""
    if p < 1 or int(p) != p:
        raise InvalidOrderError(f"VAR lag order must be a positive integer, got {p!r}")
    y, names, start = _as_matrix(data, variables)
    K = y.shape[1]
    if y.shape[0] - p <= K * p + 1:
        raise InsufficientObservationsError(
            f"VAR({p}) in {K} variables needs more than {K * p + 1 + p} observations, got {y.shape[0]}"
        )
    s = _fit_system(y, int(p), names)
    return VarModel(
        p=int(p),
        variables=tuple(names),
        intercept=s.intercept,
        coefficient_matrices=s.coefs,
        residual_cov=s.residual_cov,
        residuals=s.residuals,
        equations=s.equations,
        nobs=s.nobs,
        sample_start=start + p,
    )


@dataclass(frozen=True)
class GrangerResult:
    cause: str
    effect: str
    statistic: float
    df: int
    p_value: float
    reject_at_5pct: bool
    test: str = "wald"
    df_denom: int | None = None

    @property
    def wald_stat(self) -> float:
        return self.statistic if self.test == "wald" else self.statistic * self.df

    def rejects(self, level: float) -> bool:
        return self.p_value < level


def granger_test(model: VarModel, cause: str, effect: str, test: str = "wald") -> GrangerResult:
    """Test that all lags of ``cause`` are jointly zero in the ``effect`` equation.

    ``test="wald"`` gives the chi-squared form; ``test="f"`` divides the Wald
    statistic by its degrees of freedom and uses F(p, df_resid).
    """
    if cause == effect:
        raise ValueError("cause and effect must differ")
    c, e = model.index(cause), model.index(effect)
    if test not in ("wald", "f"):
        raise ValueError(f"test must be 'wald' or 'f', got {test!r}")
    eq = model.equations[e]
    K = model.k
    idx = [1 + j * K + c for j in range(model.p)]
    b = eq.coefficients[idx]
    v = eq.cov_params[np.ix_(idx, idx)]
    w = float(b @ np.linalg.solve(v, b))
    df = model.p
    if test == "wald":
        pval = float(stats.chi2.sf(w, df))
        return GrangerResult(cause, effect, w, df, pval, pval < 0.05, "wald")
    f = w / df
    pval = float(stats.f.sf(f, df, eq.df_resid))
    return GrangerResult(cause, effect, f, df, pval, pval < 0.05, "f", eq.df_resid)


def granger_matrix(model: VarModel, test: str = "wald") -> list[GrangerResult]:
    return [granger_test(model, c, e, test) for e in model.variables for c in model.variables if c != e]


@dataclass(frozen=True)
class GateDecision:
    decision: str
    reason: str

    @property
    def required(self) -> bool:
        return self.decision == "required"


def cointegration_precheck(orders: Sequence[IntegrationOrder]) -> GateDecision:
    """Cointegration testing only makes sense with two or more I(1) variables."""
    orders = list(orders)
    labels = ", ".join(f"{o.series_name or '?'} {o.label}" for o in orders)
    n_i1 = sum(o.order == 1 for o in orders)
    if n_i1 >= 2:
        return GateDecision("required", f"{n_i1} variables are I(1) ({labels}); cointegration is possible")
    return GateDecision(
        "skip",
        f"only {n_i1} variable(s) I(1) ({labels}); cointegration needs at least two I(1) "
        "variables, so the VECM is fitted with rank 0",
    )


@dataclass(frozen=True)
class VecmModel:
    """Error-correction form ``dy[t] = c + alpha ect[t-1] + sum_j Gamma_j dy[t-j] + u[t]``.

    ``ect = beta' y - mu`` uses the first-stage long-run regressions. With
    ``rank = 0`` the model is a VAR(p - 1) in first differences.
    """

    p: int
    rank: int
    variables: tuple[str, ...]
    intercept: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    long_run_intercept: np.ndarray
    gamma: np.ndarray
    residual_cov: np.ndarray
    residuals: np.ndarray = field(repr=False)
    equations: tuple[RegressionResult, ...] = field(repr=False)
    long_run: tuple[RegressionResult, ...] = field(default=(), repr=False)
    nobs: int = 0
    sample_start: int = 0

    @property
    def k(self) -> int:
        return len(self.variables)

    def index(self, label: str) -> int:
        try:
            return self.variables.index(label)
        except ValueError:
            raise LabelError(f"unknown variable {label!r}; model has {list(self.variables)}") from None

    def level_var_matrices(self) -> np.ndarray:
        """Coefficient matrices of the equivalent VAR(p) in levels."""
        K, p = self.k, self.p
        pi = self.alpha @ self.beta.T if self.rank else np.zeros((K, K))
        a = np.zeros((p, K, K))
        a[0] = np.eye(K) + pi
        for j in range(p - 1):
            a[j] += self.gamma[j]
            a[j + 1] -= self.gamma[j]
        return a

    def difference_var(self) -> VarModel | None:
        """Rank-0 model viewed as a VAR(p - 1) in differences (None if p = 1)."""
        if self.rank:
            raise InvalidRankError("only rank-0 models have a pure difference-VAR form")
        if self.p == 1:
            return None
        return VarModel(self.p - 1, self.variables, self.intercept, self.gamma, self.residual_cov,
                        self.residuals, self.equations, self.nobs, self.sample_start)


def fit_vecm(data, p: int, rank: int = 0, variables=None) -> VecmModel:
    """Estimate a VECM by OLS, with Engle-Granger long-run relations when ``rank > 0``.

    For ``rank = r`` the first ``r`` variables are each regressed (in levels,
    with intercept) on the last ``K - r``; the residuals are the equilibrium
    errors entering the short-run equations at lag one. ``rank = K`` uses the
    lagged levels themselves.
    """
    if p < 1 or int(p) != p:
        raise InvalidOrderError(f"VECM lag order must be a positive integer, got {p!r}")
    y, names, start = _as_matrix(data, variables)
    T, K = y.shape
    if rank < 0 or rank > K or int(rank) != rank:
        raise InvalidRankError(f"cointegration rank must lie in 0..{K}, got {rank!r}")
    p, rank = int(p), int(rank)
    dy = np.diff(y, axis=0)
    q = p - 1
    beta = np.zeros((K, rank))
    mu = np.zeros(rank)
    long_run = []
    exog, exog_labels = None, []
    if rank:
        if rank == K:
            beta = np.eye(K)
        else:
            rest = y[:, rank:]
            rest_names = names[rank:]
            for i in range(rank):
                res = fit(np.column_stack([np.ones(T), rest]), y[:, i], ["const", *rest_names])
                long_run.append(res)
                beta[i, i] = 1.0
                beta[rank:, i] = -res.coefficients[1:]
                mu[i] = res.coefficients[0]
        ect = y @ beta - mu  # T x rank
        # dy[t] (t >= q) pairs with ect at the previous level observation
        exog = ect[q : T - 1]
        exog_labels = [f"ect{i + 1}" for i in range(rank)]
    s = _fit_system(dy, q, names, exog, exog_labels, prefix="D.")
    return VecmModel(
        p=p,
        rank=rank,
        variables=tuple(names),
        intercept=s.intercept,
        alpha=s.extra,
        beta=beta,
        long_run_intercept=mu,
        gamma=s.coefs,
        residual_cov=s.residual_cov,
        residuals=s.residuals,
        equations=s.equations,
        long_run=tuple(long_run),
        nobs=s.nobs,
        sample_start=start + 1 + q,
    )
