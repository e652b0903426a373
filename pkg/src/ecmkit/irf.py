"""Impulse responses from the moving-average representation of a VAR or VECM."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DecompositionError, LabelError
from .var import VarModel, VecmModel


@dataclass(frozen=True)
class IrfResult:
    """Responses indexed ``[h, response, impulse]`` for ``h = 0..horizon``.

    For a VECM, ``responses`` holds the responses of the differenced
    variables and ``level_responses`` their cumulative sums (the level
    responses). For a VAR, ``level_responses`` is None.
    """

    horizon: int
    variables: tuple[str, ...]
    responses: np.ndarray
    orthogonalized: bool
    level_responses: np.ndarray | None = None

    def _idx(self, label: str) -> int:
        try:
            return self.variables.index(label)
        except ValueError:
            raise LabelError(f"unknown variable {label!r}; IRF covers {list(self.variables)}") from None

    def response(self, impulse: str, response: str, levels: bool = False) -> np.ndarray:
        arr = self.level_responses if levels else self.responses
        if arr is None:
            raise ValueError("this IRF has no level responses")
        return arr[:, self._idx(response), self._idx(impulse)]

    def long_rows(self, levels: bool = False) -> list[tuple[str, str, int, float]]:
        """``(impulse, response, horizon, value)`` rows, impulse-major."""
        arr = self.level_responses if levels else self.responses
        if arr is None:
            raise ValueError("this IRF has no level responses")
        rows = []
        for j, imp in enumerate(self.variables):
            for i, resp in enumerate(self.variables):
                for h in range(self.horizon + 1):
                    rows.append((imp, resp, h, float(arr[h, i, j])))
        return rows


def ma_matrices(coefs: np.ndarray, horizon: int, k: int | None = None) -> np.ndarray:
    """``Psi_0 = I``, ``Psi_h = sum_{j=1..min(h,p)} A_j Psi_{h-j}``."""
    p = coefs.shape[0]
    K = coefs.shape[1] if p else k
    psi = np.zeros((horizon + 1, K, K))
    psi[0] = np.eye(K)
    for h in range(1, horizon + 1):
        for j in range(1, min(h, p) + 1):
            psi[h] += coefs[j - 1] @ psi[h - j]
    return psi


def cholesky_factor(cov: np.ndarray) -> np.ndarray:
    eig = np.linalg.eigvalsh(cov)
    if eig[0] <= 0:
        raise DecompositionError(
            f"residual covariance is not positive definite (smallest eigenvalue {eig[0]:.6g}); "
            "orthogonalized responses are undefined",
            float(eig[0]),
        )
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(
            f"Cholesky factorisation failed (smallest eigenvalue {eig[0]:.6g})", float(eig[0])
        ) from exc


def _permutation(variables: Sequence[str], order: Sequence[str] | None) -> list[int]:
    if order is None:
        return list(range(len(variables)))
    order = list(order)
    if sorted(order) != sorted(variables) or len(set(order)) != len(order):
        raise LabelError(f"ordering {order} must be a permutation of {list(variables)}")
    return [list(variables).index(v) for v in order]


def compute_irf(model: VarModel | VecmModel, horizon: int, orthogonalized: bool = False,
                order: Sequence[str] | None = None) -> IrfResult:
    """Impulse responses up to ``horizon``.

    Orthogonalized responses use the lower Cholesky factor of the residual
    covariance after reordering the variables by ``order`` (default: model
    order), so shocks to earlier variables move later ones on impact but not
    the reverse.
    """
    if horizon < 1 or int(horizon) != horizon:
        raise ValueError(f"horizon must be a positive integer, got {horizon!r}")
    perm = _permutation(model.variables, order)
    names = tuple(model.variables[i] for i in perm)
    ix = np.ix_(perm, perm)
    K = len(perm)
    cov = model.residual_cov[ix]
    chol = cholesky_factor(cov) if orthogonalized else None

    def _shock(psi):
        return psi @ chol if orthogonalized else psi

    if isinstance(model, VarModel):
        coefs = np.array([a[ix] for a in model.coefficient_matrices])
        psi = ma_matrices(coefs, int(horizon), K)
        return IrfResult(int(horizon), names, _shock(psi), orthogonalized)

    if model.rank == 0:
        coefs = np.array([g[ix] for g in model.gamma]).reshape(-1, K, K)
        diff = _shock(ma_matrices(coefs, int(horizon), K))
        levels = np.cumsum(diff, axis=0)
    else:
        coefs = np.array([a[ix] for a in model.level_var_matrices()])
        levels = _shock(ma_matrices(coefs, int(horizon), K))
        diff = np.diff(levels, axis=0, prepend=np.zeros((1, K, K)))
    return IrfResult(int(horizon), names, diff, orthogonalized, levels)
