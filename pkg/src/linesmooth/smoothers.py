"""The twelve line-chart smoothing techniques.

Each technique is driven by a single smoothing level (see :class:`SmootherSpec`).
Local methods clamp to the edge value outside the series. Subsampling methods
return the retained points and their linear (or monotone, for ``topology``)
reconstruction on the full grid.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from numpy.polynomial import chebyshev as cheb

from linesmooth.core import PointSet, Series, SeriesLike, _frozen, as_series, resample_to_grid
from linesmooth.errors import DegreeTooLargeForWindow, LevelOutOfRange, ZeroCutoff
from linesmooth.metrics import persistence_pairs

RANK_KINDS = ("median", "min", "max")
CONV_KINDS = ("gaussian", "mean", "savitzky_golay")
FREQ_KINDS = ("cutoff", "butterworth", "chebyshev")
SUBSAMPLE_KINDS = ("uniform", "douglas_peucker", "topology")
KINDS = RANK_KINDS + CONV_KINDS + FREQ_KINDS + SUBSAMPLE_KINDS


@dataclass(frozen=True)
class SmootherSpec:
    """A technique and its smoothing level.

    ``level`` means: half-width ``k`` (rank, mean, savitzky_golay), sigma in
    samples (gaussian), retained frequency count (cutoff, butterworth,
    chebyshev), stride (uniform), residual threshold (douglas_peucker) or
    persistence threshold (topology).
    """

    kind: str
    level: float
    order: int = 5
    ripple_db: float = 1.0
    degree: int = 3

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown smoother kind {self.kind!r}")
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.ripple_db <= 0:
            raise ValueError("ripple_db must be > 0")
        if self.degree < 2:
            raise ValueError("degree must be >= 2")


@dataclass(frozen=True, eq=False)
class SmoothResult:
    series: Series
    retained: Optional[PointSet] = None


def _int_level(level: float, name: str) -> int:
    if level < 0 or not float(level).is_integer():
        raise LevelOutOfRange(f"{name} must be a non-negative integer, got {level}")
    return int(level)


def _windows(v: np.ndarray, k: int) -> np.ndarray:
    return sliding_window_view(np.pad(v, k, mode="edge"), 2 * k + 1)


# --- rank filters ------------------------------------------------------------

def rank_filter(x: SeriesLike, kind: str, k: int) -> SmoothResult:
    """Median / min / max over the clamped window ``x[i-k .. i+k]``."""
    x = as_series(x)
    k = _int_level(k, "k")
    if k > x.n:
        raise LevelOutOfRange(f"k={k} exceeds series length {x.n}")
    w = _windows(x.values, k)
    reduce = {"median": np.median, "min": np.min, "max": np.max}[kind]
    return SmoothResult(Series(_frozen(reduce(w, axis=1))))


# --- convolutional filters ---------------------------------------------------

def gaussian_stencil(sigma: float) -> np.ndarray:
    if not sigma > 0:
        raise LevelOutOfRange(f"sigma must be > 0, got {sigma}")
    k = math.ceil(4 * sigma)
    j = np.arange(-k, k + 1, dtype=float)
    w = np.exp(-0.5 * (j / sigma) ** 2)
    return w / w.sum()


def mean_stencil(k: int) -> np.ndarray:
    return np.full(2 * k + 1, 1.0 / (2 * k + 1))


@lru_cache(maxsize=256)
def _savgol_cached(k: int, degree: int) -> np.ndarray:
    j = np.arange(-k, k + 1, dtype=float)
    vander = np.vander(j, degree + 1, increasing=True)
    # row 0 of the pseudo-inverse evaluates the fitted polynomial at j = 0
    coeffs = np.linalg.pinv(vander)[0]
    coeffs.flags.writeable = False
    return coeffs


def savgol_stencil(k: int, degree: int = 3) -> np.ndarray:
    if 2 * k + 1 < degree + 1:
        raise DegreeTooLargeForWindow(f"window {2 * k + 1} too small for degree {degree}")
    return _savgol_cached(k, degree).copy()


def stencil(spec: SmootherSpec) -> np.ndarray:
    if spec.kind == "gaussian":
        return gaussian_stencil(spec.level)
    k = _int_level(spec.level, "k")
    if spec.kind == "mean":
        return mean_stencil(k)
    if spec.kind == "savitzky_golay":
        return savgol_stencil(k, spec.degree)
    raise ValueError(f"{spec.kind} is not a convolutional kind")


def convolve(x: SeriesLike, spec: SmootherSpec) -> SmoothResult:
    x = as_series(x)
    s = stencil(spec)
    k = (s.shape[0] - 1) // 2
    out = _windows(x.values, k) @ s
    return SmoothResult(Series(_frozen(out)))


# --- frequency filters -------------------------------------------------------

def frequency_gain(spec: SmootherSpec, n: int) -> np.ndarray:
    """Gain for one-sided DFT bins ``0..floor(n/2)``; DC always passes."""
    c = float(spec.level)
    half = n // 2
    if not 0 <= c <= half:
        raise LevelOutOfRange(f"cutoff {c} outside [0, {half}]")
    f = np.arange(half + 1, dtype=float)
    if spec.kind == "cutoff":
        g = (f <= c).astype(float)
    else:
        if c == 0:
            raise ZeroCutoff(f"{spec.kind} needs a cutoff > 0")
        ratio = f / c
        if spec.kind == "butterworth":
            g = (1.0 + ratio ** (2 * spec.order)) ** -0.5
        else:
            eps2 = 10.0 ** (spec.ripple_db / 10.0) - 1.0
            t = cheb.chebval(ratio, [0] * spec.order + [1])
            g = (1.0 + eps2 * t ** 2) ** -0.5
    g[0] = 1.0
    return g


def frequency_filter(x: SeriesLike, spec: SmootherSpec) -> SmoothResult:
    """Zero-phase low-pass: scale each DFT bin by its gain, then invert."""
    x = as_series(x)
    g = frequency_gain(spec, x.n)
    out = np.fft.irfft(np.fft.rfft(x.values) * g, n=x.n)
    return SmoothResult(Series(_frozen(out)))


# --- subsampling -------------------------------------------------------------

def _subsampled(x: Series, indices) -> SmoothResult:
    ps = PointSet.from_series(x, indices)
    return SmoothResult(resample_to_grid(ps, x.n), ps)


def uniform_subsample(x: SeriesLike, stride: int) -> SmoothResult:
    x = as_series(x)
    s = _int_level(stride, "stride")
    if not 1 <= s <= x.n - 1:
        raise LevelOutOfRange(f"stride must be in [1, {x.n - 1}], got {s}")
    idx = list(range(0, x.n, s))
    idx.append(x.n - 1)
    return _subsampled(x, idx)


def _segment_peak(v: np.ndarray, a: int, b: int):
    """Largest vertical residual strictly inside ``(a, b)`` against the chord."""
    if b - a < 2:
        return 0.0, -1
    t = np.arange(1, b - a, dtype=float) / (b - a)
    resid = np.abs(v[a + 1:b] - (v[a] + t * (v[b] - v[a])))
    i = int(np.argmax(resid))
    return float(resid[i]), a + 1 + i


def douglas_peucker(x: SeriesLike, tau: float) -> SmoothResult:
    """Greedy insertion of the worst-fit sample until every residual is ``<= tau``.

    Residuals are vertical distances to the current piecewise-linear output.
    Segments sit in a priority queue keyed by ``(-residual, index)`` so ties go
    to the smallest index.
    """
    x = as_series(x)
    if tau < 0:
        raise LevelOutOfRange(f"tau must be >= 0, got {tau}")
    v = x.values
    retained = {0, x.n - 1}
    heap = []

    def push(a, b):
        r, i = _segment_peak(v, a, b)
        if i >= 0:
            heapq.heappush(heap, (-r, i, a, b))

    push(0, x.n - 1)
    while heap and -heap[0][0] > tau:
        _, i, a, b = heapq.heappop(heap)
        retained.add(i)
        push(a, i)
        push(i, b)
    return _subsampled(x, retained)


def _flat_run_starts(v: np.ndarray) -> np.ndarray:
    """For each index, the first index of its run of equal values."""
    n = v.shape[0]
    new_run = np.empty(n, dtype=bool)
    new_run[0] = True
    new_run[1:] = v[1:] != v[:-1]
    starts = np.flatnonzero(new_run)
    return starts[np.cumsum(new_run) - 1]


def critical_indices(v: np.ndarray) -> np.ndarray:
    """Endpoints plus strict extrema of the run-collapsed series.

    A flat extremum is represented by the first index of its run.
    """
    n = v.shape[0]
    starts = np.flatnonzero(np.r_[True, v[1:] != v[:-1]])
    cv = v[starts]
    crit = {0, n - 1}
    if cv.shape[0] >= 3:
        mid = cv[1:-1]
        ext = ((mid > cv[:-2]) & (mid > cv[2:])) | ((mid < cv[:-2]) & (mid < cv[2:]))
        crit.update(int(s) for s in starts[1:-1][ext])
    return np.array(sorted(crit), dtype=np.int64)


def pav(y: np.ndarray, increasing: bool = True) -> np.ndarray:
    """Least-squares monotone fit by pool-adjacent-violators."""
    y = np.asarray(y, dtype=float)
    if not increasing:
        return -pav(-y, True)
    means, sizes = [], []
    for val in y:
        means.append(float(val))
        sizes.append(1)
        while len(means) > 1 and means[-2] > means[-1]:
            s = sizes[-2] + sizes[-1]
            m = (means[-2] * sizes[-2] + means[-1] * sizes[-1]) / s
            means[-2:] = [m]
            sizes[-2:] = [s]
    return np.repeat(means, sizes)


def _monotone_span(v: np.ndarray, a: int, b: int) -> np.ndarray:
    """Monotone fit of ``v[a..b]`` with both ends pinned to their values."""
    left, right = v[a], v[b]
    out = np.empty(b - a + 1)
    out[0], out[-1] = left, right
    if b - a >= 2:
        inc = right >= left
        fit = pav(v[a + 1:b], increasing=inc)
        lo, hi = (left, right) if inc else (right, left)
        # clipping the unconstrained fit solves the box-constrained problem
        out[1:-1] = np.clip(fit, lo, hi)
    return out


def topology_simplify(x: SeriesLike, eps: float) -> SmoothResult:
    """Cancel persistence pairs below ``eps`` and fit monotone spans between survivors.

    Endpoints and the global minimum/maximum always survive.
    """
    x = as_series(x)
    if eps < 0:
        raise LevelOutOfRange(f"eps must be >= 0, got {eps}")
    v = x.values
    n = x.n
    rep = _flat_run_starts(v)
    crit = set(critical_indices(v).tolist())
    pairs, (gmin, gmax) = persistence_pairs(v)
    protected = {0, n - 1, int(rep[gmin]), int(rep[gmax])}
    for b, d in pairs:
        if v[d] - v[b] < eps:
            crit.difference_update({int(rep[b]), int(rep[d])} - protected)
    keep = sorted(crit | {0, n - 1})
    out = np.empty(n)
    for a, b in zip(keep[:-1], keep[1:]):
        out[a:b + 1] = _monotone_span(v, a, b)
    return SmoothResult(Series(_frozen(out)), PointSet.from_series(x, keep))


# --- dispatch ----------------------------------------------------------------

def smooth(x: SeriesLike, spec: SmootherSpec) -> SmoothResult:
    """Apply ``spec`` to ``x``; the output always has the input's length."""
    kind = spec.kind
    if kind in RANK_KINDS:
        return rank_filter(x, kind, spec.level)
    if kind in CONV_KINDS:
        return convolve(x, spec)
    if kind in FREQ_KINDS:
        return frequency_filter(x, spec)
    if kind == "uniform":
        return uniform_subsample(x, spec.level)
    if kind == "douglas_peucker":
        return douglas_peucker(x, spec.level)
    return topology_simplify(x, spec.level)
