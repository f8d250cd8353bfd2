"""Command line entry point: ``swstat <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import harness
from .collide import collide_k
from .element_distinctness import EDParams, ed_decide
from .freq_moments import fk_window_all
from .functional_graph import TableFunction, read_function_table
from .meter import Meter
from .oracle import OracleSpec, brute_collisions, brute_ed, brute_window_stats
from .order_stats import max_window_all
from .sliding_ed import ExactBackend, RandomizedBackend, ed_window_all, ed_window_average


def read_sequence(path: str) -> list[int]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return [int(tok) for tok in text.split()]


def _emit_values(values: Sequence[int], args, extra: dict) -> None:
    """Print the output sequence (or its digest) and a meter summary."""
    payload = dict(extra)
    if getattr(args, "digest", False):
        payload["digest"] = harness.digest(values)
    else:
        payload["values"] = list(values)
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        if "digest" in payload:
            print(payload["digest"])
        else:
            print(" ".join(str(v) for v in values))
        if "meter" in payload:
            print(json.dumps(payload["meter"], sort_keys=True))


def _parse_starts(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def cmd_collide(args) -> int:
    table = read_function_table(args.fn_file)
    meter = Meter()
    res = collide_k(TableFunction(table, meter), _parse_starts(args.starts), vertex_budget=args.budget)
    out = res.as_json()
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        for r in res.records:
            print(f"{r.v}: {' '.join(str(p) for p in sorted(r.preds))}")
        print(f"explored {res.explored_count} complete {res.complete}")
        print(json.dumps(out["meter"], sort_keys=True))
    return 0


def cmd_ed(args) -> int:
    x = read_sequence(args.input)
    meter = Meter()
    m = args.alphabet if args.alphabet is not None else max(x)
    params = EDParams(n=len(x), m=m, space_budget=args.space, epsilon=args.epsilon, seed=args.seed)
    verdict = ed_decide(x, params, meter)
    out = {"outcome": verdict.outcome, **verdict.as_json(), "meter": meter.summary()}
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        print(verdict.outcome)
        print(json.dumps(out["meter"], sort_keys=True))
    return 0


def cmd_sliding_ed(args) -> int:
    x = read_sequence(args.input)
    meter = Meter()
    if args.mode == "exact":
        out = ed_window_all(x, args.window, ExactBackend(), meter=meter)
    elif args.mode == "randomized":
        backend = RandomizedBackend(space_budget=args.space, epsilon=args.epsilon, seed=args.seed, meter=meter)
        out = ed_window_all(x, args.window, backend, mode="randomized", meter=meter)
    else:
        out = ed_window_average(x, args.window, meter)
    if args.digest:
        _emit_values(out.bits, args, {"meter": meter.summary()})
    elif args.json:
        print(json.dumps({"bits": out.bitstring(), "meter": meter.summary()}, sort_keys=True))
    else:
        print(out.bitstring())
        print(json.dumps(meter.summary(), sort_keys=True))
    return 0


def cmd_fk(args) -> int:
    x = read_sequence(args.input)
    meter = Meter()
    out = fk_window_all(x, args.window, args.k, args.space, mod2=args.mod2, meter=meter)
    _emit_values(out.values, args, {"n": out.n, "k": out.k, "mod2": out.mod2, "meter": meter.summary()})
    return 0


def cmd_order(args) -> int:
    x = read_sequence(args.input)
    meter = Meter()
    out = max_window_all(x, args.window, args.stat, meter)
    _emit_values(out.values, args, {"n": out.n, "stat": args.stat, "meter": meter.summary()})
    return 0


def cmd_oracle(args) -> int:
    if args.stat == "COLLIDE":
        if not args.fn_file or not args.starts:
            raise SystemExit("oracle --stat COLLIDE needs --fn-file and --starts")
        records, size = brute_collisions(read_function_table(args.fn_file), _parse_starts(args.starts))
        out = {"records": [r.as_json() for r in records], "explored_count": size}
        if args.json:
            print(json.dumps(out, sort_keys=True))
        else:
            for r in records:
                print(f"{r.v}: {' '.join(str(p) for p in sorted(r.preds))}")
            print(f"explored {size}")
        return 0
    x = read_sequence(args.input)
    if args.stat == "ED-SINGLE":
        w = brute_ed(x)
        print("Distinct" if w is None else f"Duplicate({w[0]}, {w[1]})")
        return 0
    spec = OracleSpec(args.stat, args.window, k=args.k, t=args.t)
    values = brute_window_stats(x, spec)
    if args.stat == "ED" and not args.digest and not args.json:
        print("".join(str(v) for v in values))
        return 0
    _emit_values(values, args, {"n": args.window, "stat": args.stat})
    return 0


def cmd_bench(args) -> int:
    grid = harness.parse_space_sweep(args.sweep_space)
    seed = args.seed if args.seed is not None else harness.base_seed()
    cfg = harness.RunConfig(alg=args.alg, n=args.n, space_grid=grid, trials=args.trials, seed=seed,
                            kind=args.kind, m=args.alphabet, k=args.k, epsilon=args.epsilon,
                            distance=args.distance, workers=args.workers)
    rows = harness.run_experiment(cfg)
    if args.csv:
        harness.write_csv(rows, args.csv)
    if args.jsonl:
        harness.write_jsonl(rows, args.jsonl)
    if not args.csv and not args.jsonl:
        harness.write_csv(rows, "/dev/stdout")
    bad = sum(1 for r in rows if not r.correct)
    print(f"{len(rows)} rows, {bad} incorrect", file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    params = {}
    if args.n:
        params["n"] = tuple(args.n) if args.lemma == "birthday" else args.n[0]
    if args.k is not None:
        params["k"] = args.k
    seed = args.seed if args.seed is not None else harness.base_seed()
    results = harness.stat_check(args.lemma, params, args.trials, seed)
    for r in results:
        print(json.dumps({"lemma": r.lemma, "empirical": r.empirical, "bound": r.bound,
                          "threshold": r.threshold, "pass": r.passed, **r.params}, sort_keys=True)
              if args.json else r.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swstat", description="Time-space tradeoff algorithms with metered costs.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("collide", help="all collisions reachable from a set of start vertices")
    c.add_argument("--fn-file", required=True, help="function table file: n, then n values in [1, n]")
    c.add_argument("--starts", required=True, help="comma separated start vertices (1-indexed)")
    c.add_argument("--budget", type=int, default=None, help="cap on distinct explored vertices")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_collide)

    e = sub.add_parser("ed", help="randomized element distinctness")
    e.add_argument("--input", required=True)
    e.add_argument("--space", type=int, required=True)
    e.add_argument("--epsilon", type=float, default=0.125)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--alphabet", type=int, default=None, help="symbol range m (default: max symbol)")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_ed)

    s = sub.add_parser("sliding-ed", help="element distinctness of every window")
    s.add_argument("--input", required=True)
    s.add_argument("--window", type=int, required=True)
    s.add_argument("--mode", choices=("exact", "randomized", "average-case"), default="exact")
    s.add_argument("--space", type=int, default=512)
    s.add_argument("--epsilon", type=float, default=0.25)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--digest", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_sliding_ed)

    f = sub.add_parser("fk", help="frequency moment F_k of every window")
    f.add_argument("--input", required=True)
    f.add_argument("--window", type=int, required=True)
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--space", type=int, required=True)
    f.add_argument("--mod2", action="store_true")
    f.add_argument("--digest", action="store_true")
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_fk)

    o = sub.add_parser("order", help="maximum or minimum of every window")
    o.add_argument("--input", required=True)
    o.add_argument("--window", type=int, required=True)
    o.add_argument("--stat", choices=("max", "min"), default="max")
    o.add_argument("--digest", action="store_true")
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_order)

    r = sub.add_parser("oracle", help="brute-force reference outputs")
    r.add_argument("--input", default=None)
    r.add_argument("--window", type=int, default=None)
    r.add_argument("--stat", required=True, type=str.upper,
                   choices=("ED", "FK", "F0MOD2", "MAX", "MIN", "OT", "ED-SINGLE", "COLLIDE"))
    r.add_argument("--k", type=int, default=0)
    r.add_argument("--t", type=int, default=1)
    r.add_argument("--fn-file", default=None)
    r.add_argument("--starts", default=None)
    r.add_argument("--digest", action="store_true")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="run an experiment sweep and write CSV / JSON lines")
    b.add_argument("--alg", required=True, choices=sorted(harness.ALGORITHMS))
    b.add_argument("--n", type=int, default=256)
    b.add_argument("--sweep-space", default="64..1024", help="LO..HI doubling grid, or one value")
    b.add_argument("--trials", type=int, default=1)
    b.add_argument("--kind", choices=harness.KINDS, default=None)
    b.add_argument("--alphabet", type=int, default=None)
    b.add_argument("--k", type=int, default=None)
    b.add_argument("--epsilon", type=float, default=0.125)
    b.add_argument("--distance", type=int, default=None)
    b.add_argument("--seed", type=int, default=None, help="base seed (default: SWSTAT_SEED or built-in)")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--csv", default=None)
    b.add_argument("--jsonl", default=None)
    b.set_defaults(func=cmd_bench)

    k = sub.add_parser("check", help="statistical check of a probability lemma")
    k.add_argument("--lemma", required=True, choices=("closure", "found-duplicate", "birthday"))
    k.add_argument("--n", type=int, nargs="+", default=None, help="domain size (several for birthday)")
    k.add_argument("--k", type=int, default=None)
    k.add_argument("--trials", type=int, default=None)
    k.add_argument("--seed", type=int, default=None)
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "oracle" and args.stat not in ("COLLIDE",) and args.input is None:
        parser.error("oracle needs --input")
    if args.command == "oracle" and args.stat not in ("COLLIDE", "ED-SINGLE") and args.window is None:
        parser.error("oracle needs --window")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"swstat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
