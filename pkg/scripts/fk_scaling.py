"""Comparisons of the sliding-window F_k algorithm across a space grid.

Prints one CSV line per budget and the log-log regression of comparisons
on space.  Example: python scripts/fk_scaling.py --n 4096 --k 2 --lo 64 --hi 4096
"""
from __future__ import annotations

import argparse
import math
import statistics
import sys

from swstat.freq_moments import fk_window_all
from swstat.harness import generate_input
from swstat.meter import Meter


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--lo", type=int, default=64)
    ap.add_argument("--hi", type=int, default=4096)
    ap.add_argument("--alphabet", type=int, default=None, help="symbols drawn from [1, m] (default n)")
    ap.add_argument("--seed", type=int, default=9)
    args = ap.parse_args()

    x = generate_input("uniform", 2 * args.n - 1, args.alphabet or args.n, args.seed)
    xs, ys = [], []
    print("space_budget,comparisons,dict_ops,peak_cells")
    s = args.lo
    while s <= args.hi:
        meter = Meter()
        fk_window_all(x, args.n, args.k, s, meter=meter)
        print(f"{s},{meter.comparisons},{meter.dict_ops},{meter.peak_cells}")
        xs.append(math.log(s))
        ys.append(math.log(meter.comparisons))
        s *= 2
    if len(xs) >= 2:
        fit = statistics.linear_regression(xs, ys)
        r2 = statistics.correlation(xs, ys) ** 2
        print(f"# slope {fit.slope:.4f} intercept {fit.intercept:.3f} R^2 {r2:.5f}", file=sys.stderr)


if __name__ == "__main__":
    main()
