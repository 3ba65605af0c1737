"""Command-line interface.

    linesmooth smooth  IN.csv --method KIND --level X [-o OUT.csv]
    linesmooth measure IN.csv SMOOTHED.csv --metric ID
    linesmooth evaluate CORPUS_DIR|MANIFEST [--methods ...] [--metrics ...] [--out DIR]
    linesmooth rank --tidy FILE [--grades]
    linesmooth synth --kind KIND --n N --seed S [-o OUT.csv]

Exit status: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Sequence

from linesmooth import io as lio
from linesmooth.entropy import ApExParams
from linesmooth.errors import DataError
from linesmooth.metrics import METRIC_IDS, METRICS
from linesmooth.pipeline import TASKS, build_report, evaluate_dataset, score_metric
from linesmooth.smoothers import KINDS, SmootherSpec, smooth
from linesmooth.svg import render_entropy_plot, render_rank_plot
from linesmooth.synth import SYNTH_KINDS, generate_synthetic

log = logging.getLogger("linesmooth")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _global_flags(p: argparse.ArgumentParser) -> None:
    # SUPPRESS lets the flags appear before or after the subcommand
    p.add_argument("--apex-m", type=int, default=argparse.SUPPRESS, help="ApEx embedding length (2)")
    p.add_argument("--apex-r", type=float, default=argparse.SUPPRESS,
                   help="ApEx tolerance as a fraction of the input std (0.2)")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (0)")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes (1)")
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linesmooth", description="Line-chart smoothing and evaluation.")
    _global_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("smooth", help="smooth one series")
    p.add_argument("input")
    p.add_argument("--method", required=True, choices=KINDS)
    p.add_argument("--level", required=True, type=float)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--ripple-db", type=float, default=1.0)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("-o", "--output")
    _global_flags(p)

    p = sub.add_parser("measure", help="compare a series with its smoothed version")
    p.add_argument("input")
    p.add_argument("smoothed")
    p.add_argument("--metric", required=True, choices=METRIC_IDS)
    _global_flags(p)

    p = sub.add_parser("evaluate", help="run the full ranking pipeline on a corpus")
    p.add_argument("corpus")
    p.add_argument("--methods", nargs="+", choices=KINDS, default=list(KINDS))
    p.add_argument("--metrics", nargs="+", choices=METRIC_IDS, default=list(METRIC_IDS))
    p.add_argument("--out", default="results")
    _global_flags(p)

    p = sub.add_parser("rank", help="recompute ranks (and grades) from a tidy file")
    p.add_argument("--tidy", required=True)
    p.add_argument("--grades", action="store_true")
    _global_flags(p)

    p = sub.add_parser("synth", help="generate a synthetic series")
    p.add_argument("--kind", required=True, choices=SYNTH_KINDS)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("-o", "--output")
    _global_flags(p)
    return parser


def _params(args) -> ApExParams:
    try:
        return ApExParams(getattr(args, "apex_m", 2), getattr(args, "apex_r", 0.2))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_smooth(args) -> int:
    x = lio.load_csv(args.input).series
    try:
        spec = SmootherSpec(args.method, args.level, args.order, args.ripple_db, args.degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(lio.format_series_csv(smooth(x, spec).series.values), args.output)
    return EXIT_OK


def cmd_measure(args) -> int:
    x = lio.load_csv(args.input).series
    y = lio.load_csv(args.smoothed).series
    print(repr(METRICS[args.metric](x, y)))
    return EXIT_OK


def _evaluate_one(job):
    record, methods, metrics, params = job
    ev = evaluate_dataset(record.series, methods, metrics, params)
    rows = [
        lio.TidyRow(record.name, record.category, method, metric, s.level, s.apex, v)
        for method, samples in ev.sweeps.items()
        for s in samples
        for metric, v in s.values.items()
    ]
    return rows, ev.scores


def cmd_evaluate(args) -> int:
    if len(args.methods) < 2:
        raise UsageError("--methods needs at least two methods")
    params = _params(args)
    jobs = max(1, getattr(args, "jobs", 1))
    records = lio.load_corpus(args.corpus)
    work = [(r, tuple(args.methods), tuple(args.metrics), params) for r in records]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_evaluate_one, work))
    else:
        results = [_evaluate_one(w) for w in work]

    out = Path(args.out)
    (out / "summaries").mkdir(parents=True, exist_ok=True)
    (out / "plots").mkdir(parents=True, exist_ok=True)
    all_rows: List[lio.TidyRow] = []
    per_dataset_ranks = {}
    for record, (rows, scores) in zip(records, results):
        log.info("evaluated %s", record.name)
        all_rows.extend(rows)
        lio.write_json(lio.dataset_summary(record.name, record.category, scores),
                       out / "summaries" / f"{record.name}.json")
        for metric, score in scores.items():
            per_dataset_ranks[(record.name, metric)] = score.ranks
            render_entropy_plot(list(score.curves.values()),
                                out / "plots" / f"entropy_{record.name}_{metric}.svg")
    lio.write_tidy_csv(all_rows, out / "tidy.csv")
    report = build_report(per_dataset_ranks)
    for metric in report.metrics:
        render_rank_plot(report, metric, out / "plots" / f"rank_{metric}.svg")
    lio.write_json(_report_json(report), out / "ranks.json")
    return EXIT_OK


def _report_json(report) -> Dict:
    return {
        "per_dataset": {f"{d}/{m}": r for (d, m), r in report.per_dataset_ranks.items()},
        "average": report.average_ranks,
        "grades": report.grades,
    }


def report_from_tidy(rows: Sequence[lio.TidyRow]):
    grouped: Dict = defaultdict(lambda: defaultdict(list))
    for r in rows:
        grouped[(r.dataset, r.metric)][r.method].append((r.apex, r.value))
    ranks = {key: score_metric(key[1], methods).ranks for key, methods in sorted(grouped.items())}
    return build_report(ranks)


def cmd_rank(args) -> int:
    report = report_from_tidy(lio.read_tidy_csv(args.tidy))
    for metric, avg in report.average_ranks.items():
        print(f"[{metric}]")
        for method, r in avg.items():
            print(f"  {method:<16} {r:.3f}")
    if args.grades:
        tasks = [t for t in TASKS if t in report.grades]
        methods = sorted({m for g in report.grades.values() for m in g})
        print("method".ljust(16) + " ".join(t[:12].rjust(12) for t in tasks))
        for m in methods:
            print(m.ljust(16) + " ".join(report.grades[t].get(m, "").rjust(12) for t in tasks))
    return EXIT_OK


def cmd_synth(args) -> int:
    rec = generate_synthetic(args.kind, args.n, getattr(args, "seed", 0), noise=args.noise)
    _emit(lio.format_series_csv(rec.series.values), args.output)
    return EXIT_OK


COMMANDS = {
    "smooth": cmd_smooth,
    "measure": cmd_measure,
    "evaluate": cmd_evaluate,
    "rank": cmd_rank,
    "synth": cmd_synth,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                            format="%(levelname)s %(message)s")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
