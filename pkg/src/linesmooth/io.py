"""CSV ingestion, corpus discovery, tidy results and JSON summaries."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Sequence, TextIO, Union

from linesmooth.core import Series, validate
from linesmooth.errors import DataError, NonMonotonicTime, ParseError
from linesmooth.synth import DatasetRecord

PathLike = Union[str, Path]
TIDY_HEADER = ("dataset", "category", "method", "metric", "level", "apex", "value")


def _is_number(field: str) -> bool:
    try:
        float(field)
    except ValueError:
        return False
    return True


def parse_csv_text(text: str) -> Series:
    """Parse one-column ``value`` or two-column ``time,value`` text.

    A first line whose first field is not numeric is taken as a header.
    """
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln]
    if lines and not _is_number(lines[0][1].split(",")[0].strip()):
        lines = lines[1:]
    values: List[float] = []
    last_time = None
    width = None
    for no, ln in lines:
        fields = [f.strip() for f in ln.split(",")]
        if width is None:
            width = len(fields)
            if width not in (1, 2):
                raise ParseError(no, f"expected 1 or 2 columns, got {width}")
        elif len(fields) != width:
            raise ParseError(no, f"expected {width} columns, got {len(fields)}")
        try:
            nums = [float(f) for f in fields]
        except ValueError:
            raise ParseError(no, f"not a number: {ln!r}") from None
        if width == 2:
            if last_time is not None and not nums[0] > last_time:
                raise NonMonotonicTime(no)
            last_time = nums[0]
        values.append(nums[-1])
    return validate(values)


def load_csv(path: PathLike, name: str | None = None, category: str | None = None) -> DatasetRecord:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    series = parse_csv_text(text)
    return DatasetRecord(name or path.stem, category or path.parent.name or "default",
                         series, str(path))


def format_series_csv(values: Iterable[float]) -> str:
    return "".join(f"{float(v)!r}\n" for v in values)


def write_series_csv(values: Iterable[float], path: PathLike) -> None:
    Path(path).write_text(format_series_csv(values))


def load_corpus(source: PathLike) -> List[DatasetRecord]:
    """Load a directory of ``*.csv`` (category = parent directory) or a manifest.

    Manifest lines are ``name,category,path`` with paths relative to the
    manifest; blank lines and ``#`` comments are ignored.
    """
    source = Path(source)
    records = []
    if source.is_dir():
        for p in sorted(source.rglob("*.csv")):
            records.append(load_csv(p))
    else:
        try:
            text = source.read_text()
        except OSError as exc:
            raise DataError(f"cannot read {source}: {exc}") from exc
        for no, ln in enumerate(text.splitlines(), start=1):
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            parts = [f.strip() for f in ln.split(",")]
            if len(parts) != 3 or not all(parts):
                raise ParseError(no, "manifest lines are name,category,path")
            name, category, rel = parts
            records.append(load_csv(source.parent / rel, name, category))
    seen = set()
    for r in records:
        if r.name in seen:
            raise DataError(f"duplicate dataset name {r.name!r}")
        seen.add(r.name)
    if not records:
        raise DataError(f"no datasets found in {source}")
    return records


# --- tidy rows ---------------------------------------------------------------

@dataclass(frozen=True)
class TidyRow:
    dataset: str
    category: str
    method: str
    metric: str
    level: float
    apex: float
    value: float


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def _sort_key(r: TidyRow):
    return (r.dataset, r.method, r.metric, r.level, r.apex, r.value)


def format_tidy_csv(rows: Iterable[TidyRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TIDY_HEADER)
    for r in sorted(rows, key=_sort_key):
        w.writerow([r.dataset, r.category, r.method, r.metric,
                    _fmt(r.level), _fmt(r.apex), _fmt(r.value)])
    return buf.getvalue()


def write_tidy_csv(rows: Iterable[TidyRow], path: PathLike) -> None:
    """Write rows sorted by (dataset, method, metric, level), 9 significant digits."""
    try:
        Path(path).write_text(format_tidy_csv(rows))
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def read_tidy_csv(path: PathLike) -> List[TidyRow]:
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != TIDY_HEADER:
            raise ParseError(1, "not a tidy results file")
        rows = []
        for no, rec in enumerate(reader, start=2):
            if len(rec) != len(TIDY_HEADER):
                raise ParseError(no, "wrong number of columns")
            try:
                nums = [float(v) for v in rec[4:]]
            except ValueError:
                raise ParseError(no, "non-numeric level/apex/value") from None
            rows.append(TidyRow(*rec[:4], *nums))
    return rows


# --- JSON --------------------------------------------------------------------

def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def dataset_summary(dataset: str, category: str, scores: Mapping) -> Dict:
    """``{dataset, category, <metric>: {<method>: {model, a, b, r2, area, rank}}}``."""
    out: Dict = {"dataset": dataset, "category": category}
    for metric, score in scores.items():
        block = {}
        for method, curve in score.curves.items():
            fit = curve.fit
            block[method] = {
                "model": fit.model if fit else None,
                "a": fit.a if fit else None,
                "b": fit.b if fit else None,
                "r2": fit.r2 if fit else None,
                "area": _clean(score.areas[method]),
                "rank": score.ranks[method],
            }
        out[metric] = block
    return out


def write_json(obj, path: PathLike) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, allow_nan=False) + "\n")
