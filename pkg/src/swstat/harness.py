"""Input generation, experiment sweeps, statistical lemma checks and output digests."""
from __future__ import annotations

import csv
import json
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .collide import LOOP_CELLS, collide_k
from .element_distinctness import (
    CELLS_PER_START,
    EDParams,
    choose_k,
    ed_decide,
    round_cutoff,
    run_round,
)
from .freq_moments import fk_window_all
from .functional_graph import MASK64, HashChain, TableFunction, mix64
from .meter import Meter
from .oracle import OracleSpec, brute_collisions, brute_ed, brute_window_stats
from .order_stats import max_window_all
from .sliding_ed import ExactBackend, RandomizedBackend, ed_window_all, ed_window_average

DEFAULT_SEED = 0x5EED
KINDS = ("uniform", "all_distinct", "planted_pair", "constant", "function_table")
CSV_FIELDS = ("alg", "n", "space_budget", "k", "trial", "fn_evals", "comparisons",
              "dict_ops", "peak_cells", "correct", "wall_ns")

# Lemma check margins (see the notes in README): absolute for Lemma 2,
# multiplicative for Lemma 3 and for the Lemma 16 tail
CLOSURE_SLACK = 0.035
FOUND_DUPLICATE_FACTOR = 0.8
BIRTHDAY_TAIL_FACTOR = 2.0


class ArgumentError(ValueError):
    pass


class OracleMismatch(AssertionError):
    """An exact algorithm disagreed with the brute-force oracle."""


def base_seed(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("SWSTAT_SEED")
    if raw is None or raw == "":
        return default
    return int(raw, 0)


def derive_seed(seed: int, *parts: int) -> int:
    z = seed & MASK64
    for p in parts:
        z = mix64(z ^ (p & MASK64))
    return z


# ---------------------------------------------------------------------------
# inputs

def generate_input(kind: str, length: int, m: Optional[int] = None, seed: int = 0,
                   distance: Optional[int] = None) -> list[int]:
    """A deterministic sequence of ``length`` symbols in [1, m].

    ``function_table`` ignores ``m`` and returns a table of a function on
    [1, length].  For ``planted_pair`` exactly one value occurs twice, at
    positions ``distance`` apart (random distance when omitted).
    """
    if kind not in KINDS:
        raise ArgumentError(f"unknown input kind {kind!r}; expected one of {KINDS}")
    if length < 1:
        raise ArgumentError("length must be positive")
    rng = random.Random(seed)
    if kind == "function_table":
        return [rng.randint(1, length) for _ in range(length)]
    if m is None:
        m = 4 * length
    if m < 1:
        raise ArgumentError("alphabet size must be positive")
    if kind == "uniform":
        return [rng.randint(1, m) for _ in range(length)]
    if kind == "constant":
        return [rng.randint(1, m)] * length
    if kind == "all_distinct":
        if m < length:
            raise ArgumentError(f"cannot draw {length} distinct symbols from [1, {m}]")
        return rng.sample(range(1, m + 1), length)
    # planted_pair
    if length < 2:
        raise ArgumentError("planted_pair needs length >= 2")
    if m < length - 1:
        raise ArgumentError(f"planted_pair of length {length} needs m >= {length - 1}")
    if distance is None:
        distance = rng.randint(1, length - 1)
    if not 1 <= distance < length:
        raise ArgumentError(f"distance {distance} infeasible for length {length}")
    base = rng.sample(range(1, m + 1), length - 1)
    i = rng.randint(0, length - 1 - distance)
    # drop nothing: insert a copy of base[i] so that it lands at i + distance
    out = base[: i + distance] + [base[i]] + base[i + distance:]
    return out


# ---------------------------------------------------------------------------
# experiments

@dataclass(frozen=True)
class RunConfig:
    alg: str
    n: int
    space_grid: tuple = (64,)
    trials: int = 1
    seed: int = DEFAULT_SEED
    kind: Optional[str] = None
    m: Optional[int] = None
    k: Optional[int] = None
    epsilon: float = 0.125
    distance: Optional[int] = None
    workers: int = 1

    def __post_init__(self):
        if self.alg not in ALGORITHMS:
            raise ArgumentError(f"unknown algorithm {self.alg!r}; expected one of {sorted(ALGORITHMS)}")
        if self.n < 1 or self.trials < 1:
            raise ArgumentError("n and trials must be positive")
        floor = ALGORITHMS[self.alg].min_space
        for s in self.space_grid:
            if s < floor:
                raise ArgumentError(f"space {s} below the minimum {floor} for {self.alg}")


@dataclass
class Row:
    alg: str
    n: int
    space_budget: int
    k: int
    trial: int
    fn_evals: int
    comparisons: int
    dict_ops: int
    peak_cells: int
    correct: int
    wall_ns: int


@dataclass(frozen=True)
class _Alg:
    default_kind: str
    windowed: bool
    min_space: int
    run: Callable  # (x, cfg, space, seed, meter) -> (k, correct)


def _run_collide(x, cfg, space, seed, meter):
    k = cfg.k if cfg.k is not None else max(1, (space - LOOP_CELLS) // CELLS_PER_START)
    rng = random.Random(seed)
    K = [rng.randint(1, len(x)) for _ in range(k)]
    res = collide_k(TableFunction(x, meter), K)
    expect, size = brute_collisions(x, K)
    if res.records != expect or res.explored_count != size:
        raise OracleMismatch(f"collide_k disagrees with the oracle (seed {seed})")
    return k, 1


def _run_ed(x, cfg, space, seed, meter):
    n = len(x)
    params = EDParams(n=n, m=max(x), space_budget=space, epsilon=cfg.epsilon, seed=seed, k=cfg.k)
    verdict = ed_decide(x, params, meter)
    truth = brute_ed(x)
    if not verdict.distinct:
        i, j = verdict.witness
        if truth is None or x[i - 1] != x[j - 1] or i == j:
            raise OracleMismatch(f"invalid Duplicate verdict {verdict.witness} (seed {seed})")
    k = cfg.k if cfg.k is not None else (choose_k(space, n) if n >= 64 else 0)
    return k, int(verdict.distinct == (truth is None))


def _run_sliding_ed(x, cfg, space, seed, meter):
    n = cfg.n
    out = ed_window_all(x, n, ExactBackend(), meter=meter)
    if list(out.bits) != brute_window_stats(x, OracleSpec("ED", n)):
        raise OracleMismatch(f"sliding ED disagrees with the oracle (seed {seed})")
    return 0, 1


def _run_sliding_ed_rand(x, cfg, space, seed, meter):
    n = cfg.n
    backend = RandomizedBackend(space_budget=space, epsilon=cfg.epsilon, seed=seed, meter=meter)
    out = ed_window_all(x, n, backend, mode="randomized", meter=meter)
    return 0, int(list(out.bits) == brute_window_stats(x, OracleSpec("ED", n)))


def _run_sliding_ed_avg(x, cfg, space, seed, meter):
    n = cfg.n
    out = ed_window_average(x, n, meter)
    if list(out.bits) != brute_window_stats(x, OracleSpec("ED", n)):
        raise OracleMismatch(f"average-case sliding ED disagrees with the oracle (seed {seed})")
    return 0, 1


def _run_fk(x, cfg, space, seed, meter):
    n, k = cfg.n, (cfg.k if cfg.k is not None else 2)
    out = fk_window_all(x, n, k, space, meter=meter)
    if list(out.values) != brute_window_stats(x, OracleSpec("FK", n, k=k)):
        raise OracleMismatch(f"F_{k} disagrees with the oracle (seed {seed})")
    if meter.peak_cells > space:
        raise OracleMismatch(f"F_{k} used {meter.peak_cells} cells, budget {space}")
    return k, 1


def _extrema(direction):
    def run(x, cfg, space, seed, meter):
        out = max_window_all(x, cfg.n, direction, meter)
        if list(out.values) != brute_window_stats(x, OracleSpec(direction.upper(), cfg.n)):
            raise OracleMismatch(f"{direction} disagrees with the oracle (seed {seed})")
        return 0, 1
    return run


ALGORITHMS: dict[str, _Alg] = {
    "collide": _Alg("function_table", False, LOOP_CELLS + CELLS_PER_START, _run_collide),
    "ed": _Alg("planted_pair", False, 4 * CELLS_PER_START, _run_ed),
    "sliding-ed": _Alg("uniform", True, 1, _run_sliding_ed),
    "sliding-ed-rand": _Alg("uniform", True, 4 * CELLS_PER_START, _run_sliding_ed_rand),
    "sliding-ed-avg": _Alg("uniform", True, 1, _run_sliding_ed_avg),
    "fk": _Alg("uniform", True, 32, _run_fk),
    "max": _Alg("uniform", True, 1, _extrema("max")),
    "min": _Alg("uniform", True, 1, _extrema("min")),
}


def _one(args) -> Row:
    cfg, space, trial = args
    spec = ALGORITHMS[cfg.alg]
    seed = derive_seed(cfg.seed, space, trial)
    length = 2 * cfg.n - 1 if spec.windowed else cfg.n
    kind = cfg.kind or spec.default_kind
    m = cfg.m if cfg.m is not None else (cfg.n if kind == "uniform" else None)
    x = generate_input(kind, length, m, seed, cfg.distance)
    meter = Meter()
    t0 = time.perf_counter_ns()
    k, correct = spec.run(x, cfg, space, seed, meter)
    wall = time.perf_counter_ns() - t0
    return Row(cfg.alg, cfg.n, space, k, trial, meter.fn_evals, meter.comparisons,
               meter.dict_ops, meter.peak_cells, correct, wall)


def run_experiment(config: RunConfig) -> list[Row]:
    """One row per (space, trial), sorted by (space, trial)."""
    jobs = [(config, s, t) for s in config.space_grid for t in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_one, jobs))
    else:
        rows = [_one(j) for j in jobs]
    rows.sort(key=lambda r: (r.space_budget, r.trial))
    return rows


def write_csv(rows: Iterable[Row], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        w.writeheader()
        for r in rows:
            w.writerow(asdict(r))


def write_jsonl(rows: Iterable[Row], path) -> None:
    with open(path, "w") as fh:
        for r in rows:
            fh.write(json.dumps(asdict(r), sort_keys=True) + "\n")


def parse_space_sweep(text: str) -> tuple:
    """``LO..HI`` as the doubling sequence LO, 2 LO, ... up to HI; a single number is itself."""
    if ".." not in text:
        return (int(text),)
    lo_s, hi_s = text.split("..", 1)
    lo, hi = int(lo_s), int(hi_s)
    if lo < 1 or hi < lo:
        raise ArgumentError(f"bad space sweep {text!r}")
    out = []
    s = lo
    while s <= hi:
        out.append(s)
        s *= 2
    return tuple(out)


# ---------------------------------------------------------------------------
# statistical checks

@dataclass
class StatResult:
    lemma: str
    empirical: float
    bound: float
    threshold: float
    passed: bool
    params: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.lemma}: empirical={self.empirical:.6g} bound={self.bound:.6g} "
                f"threshold={self.threshold:.6g} {self.params}")


def closure_fraction(n: int, k: int, trials: int, seed: int) -> float:
    """Fraction of random (h, K) whose reachable set has at most ceil(2 sqrt(kn)) vertices."""
    cutoff = round_cutoff(k, n)
    x = generate_input("all_distinct", n, 4 * n, seed)
    hits = 0
    for t in range(trials):
        s = derive_seed(seed, t)
        rng = random.Random(s)
        K = [rng.randint(1, n) for _ in range(k)]
        res = collide_k(HashChain(x, mix64(s)), K)
        hits += res.explored_count <= cutoff
    return hits / trials


def found_duplicate_rate(n: int, k: int, rounds: int, seed: int) -> float:
    """Per-round frequency with which one budgeted round finds the planted duplicate."""
    found = 0
    for r in range(rounds):
        s = derive_seed(seed, r)
        x = generate_input("planted_pair", n, 4 * n, s)
        witness, _ = run_round(x, k, s)
        found += witness is not None
    return found / rounds


def first_duplicate_samples(n: int, rng: random.Random) -> int:
    """Samples drawn uniformly from [n] until the first repeat (inclusive)."""
    seen = set()
    count = 0
    while True:
        v = rng.randint(1, n)
        count += 1
        if v in seen:
            return count
        seen.add(v)


def stat_check(lemma: str, params: Optional[dict] = None, trials: Optional[int] = None,
               seed: Optional[int] = None) -> list[StatResult]:
    params = dict(params or {})
    seed = base_seed() if seed is None else seed
    if lemma == "closure":
        n, k = params.get("n", 1024), params.get("k", 8)
        trials = trials or 2000
        if trials < 500:
            raise ArgumentError("closure check needs at least 500 trials")
        frac = closure_fraction(n, k, trials, seed)
        bound = 8 / 9
        thr = bound - CLOSURE_SLACK
        return [StatResult("closure", frac, bound, thr, frac >= thr,
                           {"n": n, "k": k, "trials": trials, "cutoff": round_cutoff(k, n)})]
    if lemma == "found-duplicate":
        n, k = params.get("n", 1024), params.get("k", 8)
        trials = trials or 5000
        if trials < 500:
            raise ArgumentError("found-duplicate check needs at least 500 rounds")
        rate = found_duplicate_rate(n, k, trials, seed)
        bound = k / (18 * n)
        thr = FOUND_DUPLICATE_FACTOR * bound
        return [StatResult("found-duplicate", rate, bound, thr, rate >= thr,
                           {"n": n, "k": k, "rounds": trials})]
    if lemma == "birthday":
        sizes = params.get("n", (64, 256))
        if isinstance(sizes, int):
            sizes = (sizes,)
        trials = trials or 10_000
        if trials < 500:
            raise ArgumentError("birthday check needs at least 500 trials")
        out = []
        for n in sizes:
            rng = random.Random(derive_seed(seed, n))
            xs = [first_duplicate_samples(n, rng) for _ in range(trials)]
            tail = sum(v >= n / 2 for v in xs) / trials
            tb = math.exp(-n / 16)
            out.append(StatResult("birthday-tail", tail, tb, BIRTHDAY_TAIL_FACTOR * tb,
                                  tail <= BIRTHDAY_TAIL_FACTOR * tb, {"n": n, "trials": trials}))
            second = sum(v * v for v in xs) / trials
            out.append(StatResult("birthday-second-moment", second, 4 * n, 4 * n,
                                  second <= 4 * n, {"n": n, "trials": trials}))
        return out
    raise ArgumentError(f"unknown lemma {lemma!r}; expected closure, found-duplicate or birthday")


# ---------------------------------------------------------------------------
# digests

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def digest(values: Iterable[int]) -> str:
    """FNV-1a 64 over the decimal ASCII of each value followed by a newline, as 16 hex digits."""
    h = FNV_OFFSET
    for v in values:
        for byte in f"{int(v)}\n".encode("ascii"):
            h ^= byte
            h = (h * FNV_PRIME) & MASK64
    return f"{h:016x}"
