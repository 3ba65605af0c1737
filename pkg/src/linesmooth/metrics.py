"""Effectiveness measures comparing an input series with its smoothed version.

Every measure returns 0 for a perfect reproduction and grows with error.
The two peak measures work on sublevel-set persistence diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.stats import rankdata

from linesmooth.core import SeriesLike, as_series
from linesmooth.errors import LengthMismatch, ZeroVariance

__all__ = [
    "METRICS",
    "METRIC_IDS",
    "PersistenceDiagram",
    "bottleneck",
    "delta_area",
    "freq_preservation",
    "l1_norm",
    "linf_norm",
    "pearson_mod",
    "persistence_diagram",
    "persistence_pairs",
    "spearman",
    "spectrum",
    "wasserstein1",
]


def _pair(x: SeriesLike, y: SeriesLike) -> Tuple[np.ndarray, np.ndarray]:
    xv, yv = as_series(x).values, as_series(y).values
    if xv.shape != yv.shape:
        raise LengthMismatch(f"lengths differ: {xv.shape[0]} vs {yv.shape[0]}")
    return xv, yv


# --- value variation ---------------------------------------------------------

def l1_norm(x: SeriesLike, y: SeriesLike) -> float:
    xv, yv = _pair(x, y)
    return float(np.sum(np.abs(xv - yv)))


def linf_norm(x: SeriesLike, y: SeriesLike) -> float:
    xv, yv = _pair(x, y)
    return float(np.max(np.abs(xv - yv)))


def delta_area(x: SeriesLike, y: SeriesLike) -> float:
    """Absolute difference of the two sample sums."""
    xv, yv = _pair(x, y)
    return float(abs(np.sum(xv) - np.sum(yv)))


# --- persistence -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Finite (birth, death) pairs plus the essential (global min, global max) pair.

    ``indices`` holds the sample positions of each finite pair's minimum and
    maximum, in the same row order as ``pairs``.
    """

    pairs: np.ndarray
    essential: Tuple[float, float]
    indices: np.ndarray
    essential_indices: Tuple[int, int]

    def __len__(self) -> int:
        return int(self.pairs.shape[0]) + 1


def persistence_pairs(values: np.ndarray):
    """Elder-rule pairing of the lower-star filtration on a path graph.

    Vertices enter in ``(value, index)`` order. A vertex with no entered
    neighbour starts a component; a vertex joining two components kills the
    younger one. Returns ``(pairs, (gmin, gmax))`` where ``pairs`` is a list
    of ``(birth_index, death_index)`` with zero-persistence pairs dropped.
    """
    v = np.asarray(values, dtype=float)
    n = v.shape[0]
    order = np.lexsort((np.arange(n), v))
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)

    parent = np.full(n, -1, dtype=np.int64)
    birth = np.empty(n, dtype=np.int64)  # per root: index of its minimum

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    pairs = []
    for i in order:
        parent[i] = i
        birth[i] = i
        roots = {find(j) for j in (i - 1, i + 1) if 0 <= j < n and parent[j] >= 0}
        if not roots:
            continue
        if len(roots) == 1:
            (r,) = roots
            parent[i] = r
            continue
        ra, rb = roots
        # the component whose minimum entered later is the younger one
        young, old = (ra, rb) if rank[birth[ra]] > rank[birth[rb]] else (rb, ra)
        if v[i] > v[birth[young]]:
            pairs.append((int(birth[young]), int(i)))
        parent[young] = old
        parent[i] = old
    return pairs, (int(order[0]), int(order[-1]))


def persistence_diagram(x: SeriesLike) -> PersistenceDiagram:
    """Sublevel-set persistence diagram of the piecewise-linear series."""
    v = as_series(x).values
    idx_pairs, (gmin, gmax) = persistence_pairs(v)
    idx = np.array(idx_pairs, dtype=np.int64).reshape(-1, 2)
    pairs = np.column_stack([v[idx[:, 0]], v[idx[:, 1]]]) if idx.size else np.empty((0, 2))
    return PersistenceDiagram(pairs, (float(v[gmin]), float(v[gmax])), idx, (gmin, gmax))


def _augmented_costs(p: np.ndarray, q: np.ndarray, ground: str) -> np.ndarray:
    """Cost matrix over points plus diagonal slots, size ``(m+k) x (m+k)``.

    Row ``m+j`` / column ``k+i`` stand for diagonal copies; any off-diagonal
    point may use any diagonal slot, diagonal-to-diagonal is free.
    """
    m, k = p.shape[0], q.shape[0]
    if ground == "l1":
        pq = np.abs(p[:, None, :] - q[None, :, :]).sum(axis=2)
        dp, dq = p[:, 1] - p[:, 0], q[:, 1] - q[:, 0]
    else:
        pq = np.abs(p[:, None, :] - q[None, :, :]).max(axis=2)
        dp, dq = (p[:, 1] - p[:, 0]) / 2.0, (q[:, 1] - q[:, 0]) / 2.0
    c = np.zeros((m + k, m + k))
    c[:m, :k] = pq
    c[:m, k:] = dp[:, None]
    c[m:, :k] = dq[None, :]
    return c


def wasserstein1(dx: PersistenceDiagram, dy: PersistenceDiagram) -> float:
    """1-Wasserstein distance with L1 ground distance.

    Diagonal projection costs ``death - birth``; the essential pairs are
    matched to each other.
    """
    (b1, d1), (b2, d2) = dx.essential, dy.essential
    total = abs(b1 - b2) + abs(d1 - d2)
    p, q = dx.pairs, dy.pairs
    if p.shape[0] + q.shape[0] == 0:
        return float(total)
    c = _augmented_costs(p, q, "l1")
    rows, cols = linear_sum_assignment(c)
    return float(total + c[rows, cols].sum())


def bottleneck(dx: PersistenceDiagram, dy: PersistenceDiagram) -> float:
    """Bottleneck distance with L-infinity ground distance.

    Diagonal projection costs ``(death - birth) / 2``. Found by binary search
    over the distinct candidate costs, testing each for a perfect matching.
    """
    (b1, d1), (b2, d2) = dx.essential, dy.essential
    ess = max(abs(b1 - b2), abs(d1 - d2))
    p, q = dx.pairs, dy.pairs
    size = p.shape[0] + q.shape[0]
    if size == 0:
        return float(ess)
    c = _augmented_costs(p, q, "linf")
    candidates = np.unique(c)

    def feasible(t: float) -> bool:
        graph = csr_matrix(c <= t)
        match = maximum_bipartite_matching(graph, perm_type="column")
        return bool(np.all(match >= 0))

    lo, hi = 0, candidates.shape[0] - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(max(ess, candidates[lo]))


def _wasserstein_metric(x: SeriesLike, y: SeriesLike) -> float:
    _pair(x, y)
    return wasserstein1(persistence_diagram(x), persistence_diagram(y))


def _bottleneck_metric(x: SeriesLike, y: SeriesLike) -> float:
    _pair(x, y)
    return bottleneck(persistence_diagram(x), persistence_diagram(y))


# --- frequency ---------------------------------------------------------------

def spectrum(x: SeriesLike) -> np.ndarray:
    """Magnitudes of the one-sided DFT, bins ``0..floor(n/2)``."""
    return np.abs(np.fft.rfft(as_series(x).values))


def freq_preservation(x: SeriesLike, y: SeriesLike, complex_diff: bool = False) -> float:
    """L2 distance between the one-sided spectra of ``x`` and ``y``.

    By default the magnitude spectra are compared. With ``complex_diff`` the
    complex DFT coefficients are subtracted first, which also penalises phase
    shifts.
    """
    xv, yv = _pair(x, y)
    fx, fy = np.fft.rfft(xv), np.fft.rfft(yv)
    diff = np.abs(fx - fy) if complex_diff else np.abs(fx) - np.abs(fy)
    return float(np.sqrt(np.sum(diff ** 2)))


# --- value / order -----------------------------------------------------------

# relative to the data scale; below this a std is indistinguishable from 0
_VAR_EPS = 1e-12


def _pearson(xv: np.ndarray, yv: np.ndarray) -> float:
    xc, yc = xv - xv.mean(), yv - yv.mean()
    sx, sy = np.sqrt(np.mean(xc ** 2)), np.sqrt(np.mean(yc ** 2))
    for s, v in ((sx, xv), (sy, yv)):
        if s <= _VAR_EPS * max(1.0, float(np.max(np.abs(v)))):
            raise ZeroVariance("series has zero variance")
    r = np.mean(xc * yc) / (sx * sy)
    return float(1.0 - np.clip(r, -1.0, 1.0))


def pearson_mod(x: SeriesLike, y: SeriesLike) -> float:
    """``1 - corr(x, y)``: 0 for perfect positive, 2 for perfect negative correlation."""
    return _pearson(*_pair(x, y))


def spearman(x: SeriesLike, y: SeriesLike) -> float:
    """:func:`pearson_mod` on average ranks."""
    xv, yv = _pair(x, y)
    return _pearson(rankdata(xv), rankdata(yv))


METRICS: Dict[str, Callable[[SeriesLike, SeriesLike], float]] = {
    "l1": l1_norm,
    "linf": linf_norm,
    "delta_area": delta_area,
    "wasserstein1": _wasserstein_metric,
    "bottleneck": _bottleneck_metric,
    "freq_preservation": freq_preservation,
    "pearson_mod": pearson_mod,
    "spearman": spearman,
}
METRIC_IDS = tuple(METRICS)
