"""Evaluation framework: sweep smoothing levels, fit entropy curves, rank methods.

For one dataset and one metric, every method is run at up to 100 levels.
Each output gives a point (ApEx of the output, metric value). A robust linear
or logarithmic model is fitted to those points and integrated over an ApEx
interval shared by all methods. Smaller area ranks better.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from linesmooth import metrics as M
from linesmooth.core import Series, SeriesLike, as_series
from linesmooth.entropy import ApExParams, approx_entropy
from linesmooth.errors import (
    AllLevelsFailed,
    BadInterval,
    DatasetTooShort,
    DataError,
    DegenerateSamples,
    InconsistentMethodSets,
    LineSmoothError,
)
from linesmooth.smoothers import FREQ_KINDS, KINDS, RANK_KINDS, SmootherSpec, smooth

LEVEL_COUNT = 100
LOG_OFFSET = 1e-6
TUKEY_C = 4.685
MAX_ITER = 50
COEF_TOL = 1e-8
TIE_TOL = 1e-12

GRADES = ("A", "B", "C", "D", "-")

# Cluster is split into its trends/points variants, as in the task table.
TASKS: Dict[str, Tuple[str, ...]] = {
    "retrieve_value": ("l1", "linf"),
    "determine_range": ("l1", "linf"),
    "compute_derived_value": ("delta_area",),
    "find_extrema": ("wasserstein1", "bottleneck"),
    "find_anomalies": ("wasserstein1", "bottleneck"),
    "characterize_distribution": ("freq_preservation",),
    "sort": ("pearson_mod", "spearman"),
    "cluster_trends": ("freq_preservation",),
    "cluster_points": ("pearson_mod", "spearman"),
}


# --- level schedules ---------------------------------------------------------

@dataclass(frozen=True)
class LevelSchedule:
    kind: str
    levels: Tuple[float, ...]


def _geometric_ints(lo: int, hi: int, count: int) -> np.ndarray:
    hi = max(lo, hi)
    return np.unique(np.rint(np.geomspace(lo, hi, count)).astype(np.int64)).astype(float)


def _quantile_levels(values: np.ndarray, count: int) -> np.ndarray:
    values = values[values > 0]
    if values.size == 0:
        return np.array([0.0])
    return np.unique(np.quantile(values, np.linspace(0.0, 1.0, count)))


def schedule_levels(kind: str, x: SeriesLike, count: int = LEVEL_COUNT, degree: int = 3) -> LevelSchedule:
    """Up to ``count`` sorted, distinct levels spanning weak to strong smoothing."""
    x = as_series(x)
    n = x.n
    if n < 8:
        raise DatasetTooShort(f"need at least 8 samples, got {n}")
    if kind in RANK_KINDS or kind == "mean":
        levels = _geometric_ints(1, n // 4, count)
    elif kind == "savitzky_golay":
        kmin = math.ceil(degree / 2)
        levels = _geometric_ints(kmin, n // 4, count)
    elif kind == "gaussian":
        levels = np.unique(np.geomspace(0.5, n / 8, count))
    elif kind in FREQ_KINDS or kind == "uniform":
        levels = _geometric_ints(1, n // 2, count)
    elif kind == "douglas_peucker":
        v = x.values
        t = np.arange(n, dtype=float) / (n - 1)
        resid = np.abs(v - (v[0] + t * (v[-1] - v[0])))
        levels = _quantile_levels(resid, count)
    elif kind == "topology":
        dgm = M.persistence_diagram(x)
        levels = _quantile_levels(dgm.pairs[:, 1] - dgm.pairs[:, 0], count)
    else:
        raise ValueError(f"unknown smoother kind {kind!r}")
    return LevelSchedule(kind, tuple(float(l) for l in levels))


# --- sweeps ------------------------------------------------------------------

@dataclass(frozen=True)
class LevelSample:
    """One smoothed output: its level, ApEx and the metric values that succeeded."""

    level: float
    apex: float
    values: Mapping[str, float]


def _metric_values(x: Series, dx, y: Series, metric_ids: Sequence[str]) -> Dict[str, float]:
    out = {}
    dy = None
    for mid in metric_ids:
        try:
            if mid in ("wasserstein1", "bottleneck"):
                if dy is None:
                    dy = M.persistence_diagram(y)
                fn = M.wasserstein1 if mid == "wasserstein1" else M.bottleneck
                val = fn(dx, dy)
            else:
                val = M.METRICS[mid](x, y)
        except DataError:
            continue
        if math.isfinite(val):
            out[mid] = val
    return out


def sweep(
    x: SeriesLike,
    schedule: LevelSchedule,
    metric_ids: Sequence[str] = M.METRIC_IDS,
    params: ApExParams = ApExParams(),
    settings: Optional[Mapping] = None,
) -> List[LevelSample]:
    """Smooth ``x`` at every scheduled level and record ApEx plus metric values.

    The ApEx tolerance is taken from ``x`` once and reused for every output.
    Levels whose smoothing fails are skipped.
    """
    x = as_series(x)
    r_abs = params.tolerance(x)
    if r_abs == 0:
        raise DataError("input series is constant; ApEx baseline is degenerate")
    dx = M.persistence_diagram(x) if {"wasserstein1", "bottleneck"} & set(metric_ids) else None
    settings = dict(settings or {})
    out = []
    for level in schedule.levels:
        try:
            y = smooth(x, SmootherSpec(schedule.kind, level, **settings)).series
        except DataError:
            continue
        apex = approx_entropy(y, params, r_abs)
        out.append(LevelSample(level, apex, _metric_values(x, dx, y, metric_ids)))
    return out


@dataclass(frozen=True)
class Fit:
    """``value = a + b * g(apex)`` with ``g`` the identity or ``ln(apex + 1e-6)``."""

    model: str
    a: float
    b: float
    r2: float

    def transform(self, x):
        x = np.asarray(x, dtype=float)
        return x if self.model == "linear" else np.log(x + LOG_OFFSET)

    def __call__(self, x):
        return self.a + self.b * self.transform(x)


@dataclass
class EntropyCurve:
    method: str
    metric: str
    samples: List[Tuple[float, float]]
    fit: Optional[Fit] = None
    area: float = math.inf
    interval: Optional[Tuple[float, float]] = None


def curve_samples(samples: Iterable[LevelSample], metric_id: str) -> List[Tuple[float, float]]:
    return [(s.apex, s.values[metric_id]) for s in samples if metric_id in s.values]


def build_curve(
    x: SeriesLike,
    kind: str,
    schedule: LevelSchedule,
    metric_id: str,
    params: ApExParams = ApExParams(),
) -> EntropyCurve:
    """Entropy-plot points for one method and metric (no fit yet)."""
    pts = curve_samples(sweep(x, schedule, (metric_id,), params), metric_id)
    if not pts:
        raise AllLevelsFailed(f"{kind}/{metric_id}: no level produced a value")
    return EntropyCurve(kind, metric_id, pts)


# --- robust regression -------------------------------------------------------

def _wls(X: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
    sw = np.sqrt(w)
    return np.linalg.lstsq(X * sw[:, None], y * sw, rcond=None)[0]


def irls_bisquare(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Tukey-bisquare IRLS starting from ordinary least squares."""
    beta = np.linalg.lstsq(X, y, rcond=None)[0]
    scale_floor = 1e-12 * max(1.0, float(np.max(np.abs(y))))
    for _ in range(MAX_ITER):
        r = y - X @ beta
        s = np.median(np.abs(r - np.median(r))) / 0.6745
        if s <= scale_floor:
            break
        u = r / (TUKEY_C * s)
        w = np.where(np.abs(u) < 1, (1 - u ** 2) ** 2, 0.0)
        if np.count_nonzero(w) < X.shape[1]:
            break
        new = _wls(X, y, w)
        done = np.max(np.abs(new - beta)) <= COEF_TOL * (1 + np.max(np.abs(beta)))
        beta = new
        if done:
            break
    return beta


def _r2(y: np.ndarray, pred: np.ndarray) -> float:
    sst = float(np.sum((y - y.mean()) ** 2))
    ssr = float(np.sum((y - pred) ** 2))
    if sst == 0:
        return 1.0 if ssr <= 1e-24 * max(1.0, float(np.sum(y ** 2))) else 0.0
    return 1.0 - ssr / sst


def fit_robust(samples: Sequence[Tuple[float, float]]) -> Fit:
    """Fit linear and logarithmic models by IRLS; keep the one with larger R^2.

    R^2 uses unweighted residuals. Ties go to the linear model.
    """
    pts = np.asarray(samples, dtype=float).reshape(-1, 2)
    x, y = pts[:, 0], pts[:, 1]
    if pts.shape[0] < 3 or np.unique(x).size < 2:
        raise DegenerateSamples("need >= 3 samples with >= 2 distinct ApEx values")
    fits = []
    for model in ("linear", "log"):
        g = x if model == "linear" else np.log(x + LOG_OFFSET)
        X = np.column_stack([np.ones_like(g), g])
        a, b = irls_bisquare(X, y)
        fits.append(Fit(model, float(a), float(b), _r2(y, a + b * g)))
    lin, log = fits
    return log if log.r2 > lin.r2 else lin


# --- integration -------------------------------------------------------------

def _antiderivative(fit: Fit, x: float) -> float:
    if fit.model == "linear":
        return fit.a * x + 0.5 * fit.b * x * x
    u = x + LOG_OFFSET
    return fit.a * x + fit.b * (u * math.log(u) - u)


def _root(fit: Fit) -> float:
    """Where the (monotone) model crosses zero."""
    if fit.model == "linear":
        return -fit.a / fit.b
    expo = -fit.a / fit.b
    if expo > 700:
        return math.inf
    return math.exp(expo) - LOG_OFFSET


def integrate_model(fit: Fit, lo: float, hi: float) -> float:
    """Exact integral of ``max(fit(x), 0)`` over ``[lo, hi]``."""
    if not lo < hi:
        raise BadInterval(f"need lo < hi, got [{lo}, {hi}]")
    if fit.model == "log" and lo <= -LOG_OFFSET:
        raise BadInterval("logarithmic model undefined at the lower bound")
    if fit.b == 0:
        return max(fit.a, 0.0) * (hi - lo)
    x0 = _root(fit)
    if fit.b > 0:
        lo = max(lo, x0)
    else:
        hi = min(hi, x0)
    if not lo < hi:
        return 0.0
    return max(0.0, _antiderivative(fit, hi) - _antiderivative(fit, lo))


# --- ranking -----------------------------------------------------------------

def _tied(a: float, b: float) -> bool:
    if a == b:
        return True
    if not (math.isfinite(a) and math.isfinite(b)):
        return False
    return abs(a - b) <= TIE_TOL * max(abs(a), abs(b))


def rank_methods(areas: Mapping[str, float]) -> Dict[str, float]:
    """Ascending ranks from 1; tied areas share the mean of their positions."""
    order = sorted(areas, key=lambda m: (areas[m], m))
    ranks: Dict[str, float] = {}
    i = 0
    while i < len(order):
        j = i + 1
        while j < len(order) and _tied(areas[order[j - 1]], areas[order[j]]):
            j += 1
        for m in order[i:j]:
            ranks[m] = (i + 1 + j) / 2.0
        i = j
    return {m: ranks[m] for m in areas}


def average_rank(rank_maps: Sequence[Mapping[str, float]]) -> Dict[str, float]:
    """Mean rank per method, ordered best (lowest) first."""
    if not rank_maps:
        return {}
    methods = set(rank_maps[0])
    for r in rank_maps[1:]:
        if set(r) != methods:
            raise InconsistentMethodSets("rank maps cover different methods")
    avg = {m: float(np.mean([r[m] for r in rank_maps])) for m in methods}
    return dict(sorted(avg.items(), key=lambda kv: (kv[1], kv[0])))


def grade_from_fraction(f: float) -> str:
    """Letter grade for the share of cells where a method ranks in the top 3."""
    if f > 0.75:
        return "A"
    if f > 0.5:
        return "B"
    if f > 0.25:
        return "C"
    if f > 0.05:
        return "D"
    return "-"


def grade(ranks: Mapping[Tuple[str, str], float], method: str) -> str:
    """Grade ``method`` from ``{(cell, method): rank}`` over every cell it appears in."""
    own = [r for (cell, m), r in ranks.items() if m == method]
    if not own:
        raise DataError(f"no ranks for {method!r}")
    return grade_from_fraction(sum(r <= 3 for r in own) / len(own))


# --- per-dataset evaluation --------------------------------------------------

@dataclass
class MetricScore:
    """Curves, shared interval, areas and ranks of every method for one metric."""

    metric: str
    curves: Dict[str, EntropyCurve]
    interval: Tuple[float, float]
    interval_mode: str
    areas: Dict[str, float]
    ranks: Dict[str, float]


def score_metric(metric_id: str, samples: Mapping[str, Sequence[Tuple[float, float]]]) -> MetricScore:
    """Fit, integrate over the common ApEx interval and rank each method's samples.

    The interval is the intersection of the methods' observed ApEx ranges, or
    their union if the intersection is empty (``interval_mode == "union"``).
    Methods that cannot be fitted get an infinite area.
    """
    curves = {}
    for method in samples:
        pts = list(samples[method])
        curve = EntropyCurve(method, metric_id, pts)
        try:
            curve.fit = fit_robust(pts)
        except DegenerateSamples:
            pass
        curves[method] = curve
    ranges = [(min(p[0] for p in c.samples), max(p[0] for p in c.samples))
              for c in curves.values() if c.fit is not None]
    mode = "intersection"
    if ranges:
        lo, hi = max(r[0] for r in ranges), min(r[1] for r in ranges)
        if not lo < hi:
            mode = "union"
            lo, hi = min(r[0] for r in ranges), max(r[1] for r in ranges)
    else:
        lo = hi = 0.0
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        mode = "degenerate"
    areas = {}
    for method, c in curves.items():
        if c.fit is None:
            areas[method] = math.inf
        else:
            c.interval = (lo, hi)
            c.area = integrate_model(c.fit, lo, hi) if mode != "degenerate" else 0.0
            areas[method] = c.area
    return MetricScore(metric_id, curves, (lo, hi), mode, areas, rank_methods(areas))


@dataclass
class DatasetEvaluation:
    sweeps: Dict[str, List[LevelSample]]
    scores: Dict[str, MetricScore]


def evaluate_dataset(
    x: SeriesLike,
    methods: Sequence[str] = KINDS,
    metric_ids: Sequence[str] = M.METRIC_IDS,
    params: ApExParams = ApExParams(),
    settings: Optional[Mapping[str, Mapping]] = None,
) -> DatasetEvaluation:
    """Sweep every method, then score every metric. ``settings`` maps kind -> extra spec fields."""
    x = as_series(x)
    if len(methods) < 2:
        raise LineSmoothError("need at least two methods to rank")
    settings = settings or {}
    sweeps = {}
    for kind in methods:
        sched = schedule_levels(kind, x, degree=settings.get(kind, {}).get("degree", 3))
        sweeps[kind] = sweep(x, sched, metric_ids, params, settings.get(kind))
    scores = {}
    for mid in metric_ids:
        per_method = {}
        for kind in methods:
            pts = curve_samples(sweeps[kind], mid)
            per_method[kind] = pts
        scores[mid] = score_metric(mid, per_method)
    return DatasetEvaluation(sweeps, scores)


# --- aggregation -------------------------------------------------------------

@dataclass
class RankReport:
    """Ranks per (dataset, metric), their averages per metric, and task grades."""

    per_dataset_ranks: Dict[Tuple[str, str], Dict[str, float]]
    average_ranks: Dict[str, Dict[str, float]] = field(default_factory=dict)
    grades: Dict[str, Dict[str, str]] = field(default_factory=dict)

    @property
    def datasets(self) -> List[str]:
        return list(dict.fromkeys(d for d, _ in self.per_dataset_ranks))

    @property
    def metrics(self) -> List[str]:
        return list(dict.fromkeys(m for _, m in self.per_dataset_ranks))

    def ranks_for(self, metric: str) -> Dict[str, Dict[str, float]]:
        return {d: r for (d, m), r in self.per_dataset_ranks.items() if m == metric}


def build_report(per_dataset_ranks: Mapping[Tuple[str, str], Mapping[str, float]]) -> RankReport:
    """Average ranks per metric and grade every method on every task whose metrics are present.

    A task's grade pools all (dataset, metric) cells of its metrics.
    """
    report = RankReport({k: dict(v) for k, v in per_dataset_ranks.items()})
    for metric in report.metrics:
        report.average_ranks[metric] = average_rank(list(report.ranks_for(metric).values()))
    present = set(report.metrics)
    for task, task_metrics in TASKS.items():
        if not set(task_metrics) <= present:
            continue
        cells = {}
        for (d, m), r in report.per_dataset_ranks.items():
            if m in task_metrics:
                for method, rank in r.items():
                    cells[((d, m), method)] = rank
        methods = sorted({method for _, method in cells})
        report.grades[task] = {method: grade(cells, method) for method in methods}
    return report
