"""Entropy plot of topology vs chebyshev under the l1 metric for one series.

    python scripts/eeg_entropy_plot.py eeg_channel10.csv --out eeg_l1.svg

Prints the fitted models and areas over the shared ApEx interval.
"""

import argparse

from linesmooth.io import load_csv
from linesmooth.pipeline import evaluate_dataset
from linesmooth.svg import render_entropy_plot


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("--out", default="entropy_l1.svg")
    ap.add_argument("--methods", nargs="+", default=["topology", "chebyshev"])
    ap.add_argument("--metric", default="l1")
    args = ap.parse_args()

    x = load_csv(args.csv).series
    score = evaluate_dataset(x, args.methods, (args.metric,)).scores[args.metric]
    lo, hi = score.interval
    print(f"n={x.n}  interval [{lo:.4f}, {hi:.4f}] ({score.interval_mode})")
    for method, curve in score.curves.items():
        fit = curve.fit
        desc = f"{fit.model} a={fit.a:.4g} b={fit.b:.4g} r2={fit.r2:.4f}" if fit else "no fit"
        print(f"  {method:<16} area={score.areas[method]:<12.5g} rank={score.ranks[method]:<4g} {desc}")
    render_entropy_plot(list(score.curves.values()), args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
