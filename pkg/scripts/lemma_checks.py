"""Run the three statistical lemma checks with their default trial counts.

Example: python scripts/lemma_checks.py --seed 5
"""
from __future__ import annotations

import argparse

from swstat.harness import base_seed, stat_check


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=None)
    args = ap.parse_args()
    seed = args.seed if args.seed is not None else base_seed()
    ok = True
    for lemma in ("closure", "found-duplicate", "birthday"):
        for r in stat_check(lemma, seed=seed):
            print(r.line())
            ok &= r.passed
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
