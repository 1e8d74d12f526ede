#!/usr/bin/env python3
"""Regenerates the observation fixtures under data/ from the error law."""

import argparse
import math
from pathlib import Path

import numpy as np


def law(c, X, K, gamma):
    return c[0] + c[1] * math.log(c[2] + X) / math.sqrt(K * gamma)


def write(path, rows):
    with open(path, "w") as f:
        f.write("X,K,gamma,error\n")
        for X, K, g, e in rows:
            f.write(f"{X:.17g},{K},{g:.17g},{e:.17g}\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    truth = (0.68, 0.50, 542.0)
    rows = [(X, K, g, law(truth, X, K, g))
            for X in (150, 400, 1000, 2500, 6000, 15000)
            for K in (256, 1024, 4096)
            for g in (2.0, 5.0)]
    write(out / "observations_synthetic.csv", rows)

    # 50% to 100% of a 60000-sample dataset, each point the mean of 10 noisy runs
    rng = np.random.default_rng(args.seed)
    full = 60000
    classification = (0.6799, 0.4978, 542.1)
    rows = []
    for frac in np.linspace(0.5, 1.0, 6):
        X = frac * full
        for K in (200, 400, 800, 1600):
            for g in (2.0, 4.0):
                runs = law(classification, X, K, g) + rng.normal(0.0, 0.01, size=10)
                rows.append((X, K, g, float(runs.mean())))
    write(out / "observations_fractions.csv", rows)


if __name__ == "__main__":
    main()
