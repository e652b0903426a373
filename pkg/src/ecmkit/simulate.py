"""Seeded data-generating processes and a small Monte Carlo harness.

Replication ``i`` always draws from the ``i``-th child of
``numpy.random.SeedSequence(seed)``, so results do not depend on how
replications are scheduled.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

from .series import TimeSeries

BURN_IN = 100


def rng_streams(seed: int, n: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def random_walk(n: int, rng: np.random.Generator) -> np.ndarray:
    return np.cumsum(rng.standard_normal(n))


def ar_process(phis: Sequence[float], n: int, rng: np.random.Generator, burn: int = BURN_IN) -> np.ndarray:
    phis = np.asarray(phis, float)
    p = phis.size
    e = rng.standard_normal(n + burn)
    y = np.zeros(n + burn)
    for t in range(p, n + burn):
        y[t] = phis @ y[t - p : t][::-1] + e[t]
    return y[burn:]


def var_process(coefs: Sequence[np.ndarray], n: int, rng: np.random.Generator,
                cov: np.ndarray | None = None, intercept=None, burn: int = BURN_IN) -> np.ndarray:
    """Simulate ``y[t] = c + sum_j A_j y[t-j] + e[t]`` with Gaussian ``e``."""
    coefs = np.asarray(coefs, float)
    p, K, _ = coefs.shape
    e = rng.standard_normal((n + burn, K))
    if cov is not None:
        e = e @ np.linalg.cholesky(cov).T
    c = np.zeros(K) if intercept is None else np.asarray(intercept, float)
    y = np.zeros((n + burn, K))
    for t in range(p, n + burn):
        y[t] = c + e[t]
        for j in range(p):
            y[t] += coefs[j] @ y[t - 1 - j]
    return y[burn:]


def lending_growth_pair(n: int, rng: np.random.Generator, coef: float = 0.8) -> tuple[np.ndarray, np.ndarray]:
    """A stationary driver ``x`` and an integrated ``y`` with ``dy[t] = coef * x[t-1] + e[t]``.

    ``x`` Granger-causes the growth of ``y``; nothing feeds back into ``x``.
    """
    e = rng.standard_normal((n + 1, 2))
    x = e[:, 0]
    dy = np.empty(n + 1)
    dy[0] = e[0, 1]
    dy[1:] = coef * x[:-1] + e[1:, 1]
    y = np.cumsum(dy)
    return x[1:], y[1:]


def as_series(values: np.ndarray, names: Sequence[str], start_year: int = 1900) -> list[TimeSeries]:
    values = np.asarray(values, float)
    if values.ndim == 1:
        values = values[:, None]
    return [TimeSeries(name, start_year, values[:, i]) for i, name in enumerate(names)]


def _run_chunk(args):
    fn, seeds = args
    return [bool(fn(np.random.default_rng(s))) for s in seeds]


def rejection_rate(fn: Callable[[np.random.Generator], bool], n_reps: int, seed: int,
                   workers: int = 1) -> float:
    """Fraction of replications where ``fn(rng)`` is true.

    With ``workers > 1`` replications run in a process pool; ``fn`` must then
    be picklable (a module-level function).
    """
    seeds = np.random.SeedSequence(seed).spawn(n_reps)
    if workers <= 1:
        hits = [bool(fn(np.random.default_rng(s))) for s in seeds]
    else:
        chunks = [seeds[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_run_chunk, [(fn, c) for c in chunks]))
        hits = [h for part in parts for h in part]
    return sum(hits) / n_reps
