"""Approximate entropy, used as the common smoothing-level axis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from linesmooth.core import SeriesLike, as_series
from linesmooth.errors import NonPositiveTolerance, TooShort

# rows per block when counting template matches; bounds memory at ~8 MB
_BLOCK_CELLS = 1_000_000


@dataclass(frozen=True)
class ApExParams:
    """Embedding length ``m`` and tolerance as a fraction of the input's std."""

    m: int = 2
    r_factor: float = 0.2

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not self.r_factor > 0:
            raise ValueError("r_factor must be > 0")

    def tolerance(self, x: SeriesLike) -> float:
        """Absolute tolerance anchored to the raw input series (population std)."""
        return self.r_factor * float(np.std(as_series(x).values))


def _phi(v: np.ndarray, m: int, r: float) -> float:
    count = v.shape[0] - m + 1
    block = max(1, _BLOCK_CELLS // count)
    logs = np.empty(count)
    for start in range(0, count, block):
        stop = min(count, start + block)
        dist = np.zeros((stop - start, count))
        for k in range(m):
            np.maximum(dist, np.abs(v[start + k:stop + k, None] - v[None, k:k + count]), out=dist)
        matches = np.count_nonzero(dist <= r, axis=1)
        logs[start:stop] = np.log(matches / count)
    return float(logs.mean())


def approx_entropy(y: SeriesLike, params: ApExParams = ApExParams(), r_abs: float | None = None) -> float:
    """Approximate entropy ``Phi^m(r) - Phi^(m+1)(r)`` with self-matches counted.

    ``r_abs`` defaults to ``params.tolerance(y)``; pass the tolerance of the
    unsmoothed input to compare smoothed variants on one scale. A zero
    tolerance (constant input) is defined to give 0. Negative results from
    rounding are clamped to 0.
    """
    v = as_series(y).values
    m = params.m
    if v.shape[0] <= m + 1:
        raise TooShort(f"need more than {m + 1} samples, got {v.shape[0]}")
    if r_abs is None:
        r_abs = params.tolerance(y)
        if r_abs == 0:
            return 0.0
    if not r_abs > 0:
        raise NonPositiveTolerance(f"tolerance must be > 0, got {r_abs}")
    return max(0.0, _phi(v, m, r_abs) - _phi(v, m + 1, r_abs))
