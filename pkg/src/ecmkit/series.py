"""Annual time-series container and elementary transformations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import AlignmentError, DegenerateSeriesError, InvalidOrderError


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """A named annual series; observation ``i`` belongs to ``start_year + i``."""

    name: str
    start_year: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _frozen_array(self.values)
        if arr.size < 1:
            raise ValueError(f"series {self.name!r} is empty")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise ValueError(
                f"series {self.name!r} has a non-finite value in year {self.start_year + bad}"
            )
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "start_year", int(self.start_year))

    def __len__(self) -> int:
        return self.values.size

    @property
    def end_year(self) -> int:
        return self.start_year + len(self) - 1

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.end_year + 1)

    def window(self, first_year: int, last_year: int) -> TimeSeries:
        """Restrict to ``[first_year, last_year]`` (inclusive)."""
        lo = max(first_year, self.start_year)
        hi = min(last_year, self.end_year)
        if lo > hi:
            raise AlignmentError(
                f"series {self.name!r} ({self.start_year}-{self.end_year}) has no "
                f"observations in {first_year}-{last_year}"
            )
        i = lo - self.start_year
        return TimeSeries(self.name, lo, self.values[i : i + hi - lo + 1])

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.name == other.name
            and self.start_year == other.start_year
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


@dataclass(frozen=True)
class DifferencedSeries:
    """The ``order``-th difference of ``base``.

    The first observation of the differenced values belongs to year
    ``base.start_year + order``.
    """

    base: TimeSeries
    order: int
    values: np.ndarray = field(repr=False)

    @property
    def start_year(self) -> int:
        return self.base.start_year + self.order

    def as_series(self, name: str | None = None) -> TimeSeries:
        if name is None:
            name = self.base.name if self.order == 0 else f"D{self.order}.{self.base.name}"
        return TimeSeries(name, self.start_year, self.values)


def difference(s: TimeSeries, d: int = 1) -> DifferencedSeries:
    """d-th difference of ``s``; ``d = 0`` returns the values unchanged."""
    if d < 0 or int(d) != d:
        raise InvalidOrderError(f"difference order must be a non-negative integer, got {d!r}")
    if d >= len(s):
        raise InvalidOrderError(
            f"difference order {d} needs more than {d} observations; {s.name!r} has {len(s)}"
        )
    return DifferencedSeries(s, int(d), _frozen_array(np.diff(s.values, n=int(d))))


def _centered(s: TimeSeries) -> np.ndarray:
    x = s.values - s.values.mean()
    if not np.any(x):
        raise DegenerateSeriesError(f"series {s.name!r} has zero sample variance")
    return x


@dataclass(frozen=True)
class AcfResult:
    lags: np.ndarray
    values: np.ndarray
    band: float
    nobs: int


def acf(s: TimeSeries, max_lag: int, level: float = 0.95) -> AcfResult:
    """Sample autocorrelations for lags ``0..max_lag``.

    Every lag is normalised by the lag-0 sum of squares, so the sequence is
    positive semidefinite and bounded by one in absolute value. ``band`` is
    the white-noise half-width ``z / sqrt(T)``.
    """
    n = len(s)
    if max_lag < 1 or max_lag >= n:
        raise InvalidOrderError(f"max_lag must lie in 1..{n - 1}, got {max_lag}")
    x = _centered(s)
    denom = x @ x
    vals = np.array([1.0] + [x[: n - k] @ x[k:] / denom for k in range(1, max_lag + 1)])
    vals = np.clip(vals, -1.0, 1.0)
    band = stats.norm.ppf(0.5 + level / 2) / np.sqrt(n)
    return AcfResult(np.arange(max_lag + 1), vals, float(band), n)


@dataclass(frozen=True)
class CcfResult:
    lags: np.ndarray
    values: np.ndarray
    band: float
    nobs: int

    def at(self, lag: int) -> float:
        return float(self.values[int(lag) - int(self.lags[0])])


def ccf(x: TimeSeries, y: TimeSeries, max_lag: int, level: float = 0.95) -> CcfResult:
    """Cross-correlations for lags ``-max_lag..max_lag``.

    Positive lag ``k`` pairs ``x[t]`` with ``y[t + k]``: a peak at ``k > 0``
    means ``y`` lags (follows) ``x`` by ``k`` periods.
    """
    if x.start_year != y.start_year or len(x) != len(y):
        raise AlignmentError(
            f"ccf needs aligned series; {x.name!r} covers {x.start_year}-{x.end_year}, "
            f"{y.name!r} covers {y.start_year}-{y.end_year}"
        )
    n = len(x)
    if max_lag < 1 or max_lag >= n:
        raise InvalidOrderError(f"max_lag must lie in 1..{n - 1}, got {max_lag}")
    a, b = _centered(x), _centered(y)
    denom = np.sqrt((a @ a) * (b @ b))
    vals = []
    for k in range(-max_lag, max_lag + 1):
        if k >= 0:
            vals.append(a[: n - k] @ b[k:])
        else:
            vals.append(a[-k:] @ b[: n + k])
    vals = np.clip(np.array(vals) / denom, -1.0, 1.0)
    band = stats.norm.ppf(0.5 + level / 2) / np.sqrt(n)
    return CcfResult(np.arange(-max_lag, max_lag + 1), vals, float(band), n)


def align(x: TimeSeries, y: TimeSeries) -> tuple[TimeSeries, TimeSeries]:
    """Restrict both series to their overlapping years."""
    lo = max(x.start_year, y.start_year)
    hi = min(x.end_year, y.end_year)
    if lo > hi:
        raise AlignmentError(
            f"no overlapping years: {x.name!r} covers {x.start_year}-{x.end_year}, "
            f"{y.name!r} covers {y.start_year}-{y.end_year}"
        )
    return x.window(lo, hi), y.window(lo, hi)


def align_all(series) -> list[TimeSeries]:
    """Multi-series version of :func:`align`."""
    series = list(series)
    if not series:
        raise AlignmentError("nothing to align")
    lo = max(s.start_year for s in series)
    hi = min(s.end_year for s in series)
    if lo > hi:
        spans = ", ".join(f"{s.name!r} {s.start_year}-{s.end_year}" for s in series)
        raise AlignmentError(f"no overlapping years among {spans}")
    return [s.window(lo, hi) for s in series]


def stack(series) -> tuple[np.ndarray, list[str], int]:
    """Aligned series -> ``(T x K array, names, start_year)``."""
    series = list(series)
    if not series:
        raise ValueError("no series given")
    first = series[0]
    for s in series[1:]:
        if s.start_year != first.start_year or len(s) != len(first):
            raise AlignmentError(
                f"series {s.name!r} ({s.start_year}-{s.end_year}) is not aligned with "
                f"{first.name!r} ({first.start_year}-{first.end_year})"
            )
    names = [s.name for s in series]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate series names: {names}")
    return np.column_stack([s.values for s in series]), names, first.start_year
