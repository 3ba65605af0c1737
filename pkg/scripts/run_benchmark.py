"""Evaluate every method on a corpus and print average ranks per metric and task grades.

    python scripts/run_benchmark.py corpus/manifest.txt --out results --jobs 4

Equivalent to ``linesmooth evaluate`` followed by ``linesmooth rank --grades``,
with per-dataset timings.
"""

import argparse
import time
from pathlib import Path

from linesmooth.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("corpus")
    ap.add_argument("--out", default="results")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--methods", nargs="+")
    ap.add_argument("--metrics", nargs="+")
    args = ap.parse_args()

    argv = ["--jobs", str(args.jobs), "-v", "evaluate", args.corpus, "--out", args.out]
    if args.methods:
        argv += ["--methods", *args.methods]
    if args.metrics:
        argv += ["--metrics", *args.metrics]
    t0 = time.perf_counter()
    code = cli_main(argv)
    if code:
        raise SystemExit(code)
    print(f"evaluate finished in {time.perf_counter() - t0:.1f}s")
    raise SystemExit(cli_main(["rank", "--tidy", str(Path(args.out) / "tidy.csv"), "--grades"]))


if __name__ == "__main__":
    main()
