"""Measure the constants frozen in the test suite.

* cells per start vertex of collide_k (peak cells beyond the loop state, per start)
* C in  lookups <= C * explored * (min(k, ceil(log2 n)) + 1) * (ceil(log2 k) + 1)
* c in  backend calls of ed_window_all <= c * log2(n)^2  on all-distinct inputs
* mean comparisons / n of ed_window_average on uniform inputs (n = 1024)

Usage: python scripts/calibrate.py [--quick]
"""
from __future__ import annotations

import argparse
import math
import random
import statistics

from swstat.collide import LOOP_CELLS, collide_k
from swstat.functional_graph import TableFunction
from swstat.harness import generate_input
from swstat.meter import Meter
from swstat.sliding_ed import ExactBackend, ed_window_all, ed_window_average


def adversarial_tables(n: int) -> list[list[int]]:
    ident = list(range(1, n + 1))
    const = [1] * n
    invol = [i + 1 if i % 2 else i - 1 for i in range(1, n + 1)] if n % 2 == 0 else ident
    cycle = [i % n + 1 for i in range(1, n + 1)]
    half = n // 2
    star = [(i % half) + 1 if i <= half else 1 + (i % 3) for i in range(1, n + 1)]
    tail = [i + 1 for i in range(1, n)] + [n]
    return [ident, const, invol, cycle, star, tail]


def collide_constants(samples: int, rng: random.Random) -> tuple[int, float]:
    worst_cells = 0
    worst_ratio = 0.0
    for t in range(samples):
        n = rng.randint(16, 256)
        tables = [[rng.randint(1, n) for _ in range(n)]] + (adversarial_tables(n) if t % 50 == 0 else [])
        for table in tables:
            k = rng.randint(1, 16)
            K = [rng.randint(1, n) for _ in range(k)]
            meter = Meter()
            res = collide_k(TableFunction(table, meter), K)
            starts = len(set(K))
            per = (meter.peak_cells - LOOP_CELLS - starts) / starts
            worst_cells = max(worst_cells, math.ceil(per) + 1)
            denom = res.explored_count * (min(k, math.ceil(math.log2(n))) + 1) * (math.ceil(math.log2(k)) + 1)
            worst_ratio = max(worst_ratio, meter.dict_ops / denom)
    return worst_cells, worst_ratio


def backend_calls(sizes) -> list[tuple[int, int, float]]:
    out = []
    for n in sizes:
        x = list(range(1, 2 * n))
        be = ExactBackend()
        ed_window_all(x, n, be)
        out.append((n, be.calls, be.calls / math.log2(n) ** 2))
    return out


def average_case(n: int, trials: int, seed: int) -> float:
    vals = []
    for t in range(trials):
        x = generate_input("uniform", 2 * n - 1, n, seed + t)
        m = Meter()
        ed_window_average(x, n, m)
        vals.append(m.comparisons / n)
    return statistics.mean(vals)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    rng = random.Random(7)
    cells, ratio = collide_constants(300 if args.quick else 3000, rng)
    print(f"collide: cells per start (incl. start) <= {cells}, lookup ratio max {ratio:.3f}")
    for n, calls, c in backend_calls([64, 256, 1024] if args.quick else [64, 256, 1024, 4096]):
        print(f"sliding ED all-distinct n={n}: backend calls {calls}, calls/log2(n)^2 = {c:.2f}")
    print(f"average-case comparisons / n at n=1024: {average_case(1024, 20 if args.quick else 100, 1):.2f}")


if __name__ == "__main__":
    main()
