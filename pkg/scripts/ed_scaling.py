"""Total hash evaluations of randomized element distinctness as k varies.

For each k the budget is the smallest one that yields k; inputs carry one
planted duplicate.  Prints the per-k means and the log-log fit against k.
Example: python scripts/ed_scaling.py --n 16384 --ks 2 8 32 128 --trials 30
"""
from __future__ import annotations

import argparse
import math
import statistics
import sys

from swstat.element_distinctness import EDParams, budget_for_k, ed_decide
from swstat.harness import derive_seed, generate_input
from swstat.meter import Meter


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2 ** 14)
    ap.add_argument("--ks", type=int, nargs="+", default=[2, 8, 32, 128])
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--epsilon", type=float, default=0.125)
    ap.add_argument("--seed", type=int, default=10)
    args = ap.parse_args()

    n = args.n
    means = {}
    print("k,space_budget,trials,mean_fn_evals,rel_stderr,misses")
    for k in args.ks:
        evals, misses = [], 0
        for t in range(args.trials):
            s = derive_seed(args.seed, k, t)
            x = generate_input("planted_pair", n, 4 * n, s)
            meter = Meter()
            v = ed_decide(x, EDParams(n, 4 * n, budget_for_k(k), epsilon=args.epsilon, seed=s, k=k), meter)
            misses += v.distinct
            evals.append(meter.fn_evals)
        mean = statistics.mean(evals)
        se = statistics.stdev(evals) / math.sqrt(len(evals)) / mean if len(evals) > 1 else float("nan")
        means[k] = mean
        print(f"{k},{budget_for_k(k)},{args.trials},{mean:.1f},{se:.3f},{misses}", flush=True)
    if len(means) >= 2:
        xs = [math.log(k) for k in means]
        ys = [math.log(v) for v in means.values()]
        fit = statistics.linear_regression(xs, ys)
        r2 = statistics.correlation(xs, ys) ** 2
        print(f"# slope {fit.slope:.4f} (reference -0.5) R^2 {r2:.4f}", file=sys.stderr)


if __name__ == "__main__":
    main()
