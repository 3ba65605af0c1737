"""Write a synthetic corpus: one directory per kind plus a manifest.

    python scripts/make_synthetic_corpus.py --out corpus --n 500 --seeds 0 1 2
"""

import argparse
from pathlib import Path

from linesmooth.io import write_series_csv
from linesmooth.synth import SYNTH_KINDS, generate_synthetic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="corpus")
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--seeds", type=int, nargs="+", default=[20240611])
    ap.add_argument("--noise", type=float, default=0.1)
    ap.add_argument("--kinds", nargs="+", choices=SYNTH_KINDS, default=list(SYNTH_KINDS))
    args = ap.parse_args()

    out = Path(args.out)
    lines = []
    for kind in args.kinds:
        (out / kind).mkdir(parents=True, exist_ok=True)
        for seed in args.seeds:
            rec = generate_synthetic(kind, args.n, seed, noise=args.noise)
            rel = Path(kind) / f"{rec.name}.csv"
            write_series_csv(rec.series.values, out / rel)
            lines.append(f"{rec.name},{rec.category},{rel.as_posix()}")
    (out / "manifest.txt").write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} series to {out}")


if __name__ == "__main__":
    main()
