"""Randomized element distinctness by repeated, budgeted collision finding.

Each round hashes the input into a function i -> h(x_i) on its own index
set, explores the part reachable from k random starts with ``collide_k``
and checks whether any reported collision is a real duplicate.  A Duplicate
verdict always carries a verified witness, so the error is one-sided.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Optional, Sequence

from .collide import LOOP_CELLS, CollideResult, collide_k
from .functional_graph import MASK64, HashChain, mix64
from .meter import Meter

# measured worst case per start vertex: 3 redirection entries (2 cells each),
# 3 origin-log slots, the start itself and its origin-log key
CELLS_PER_START = 13
SMALL_N = 64


class ConfigurationError(ValueError):
    pass


class InputError(ValueError):
    pass


@dataclass
class EDParams:
    n: int
    m: int
    space_budget: int
    epsilon: float = 0.125
    seed: int = 0
    k: Optional[int] = None


@dataclass(frozen=True)
class EDVerdict:
    distinct: bool
    witness: Optional[tuple[int, int]]
    rounds_used: int

    @property
    def outcome(self) -> str:
        if self.distinct:
            return "Distinct"
        i, j = self.witness
        return f"Duplicate({i}, {j})"

    def as_json(self) -> dict:
        return {"distinct": self.distinct, "witness": list(self.witness) if self.witness else None,
                "rounds_used": self.rounds_used}


def min_space_budget() -> int:
    # room for k = 2 start vertices plus the loop state of collide_k
    return 2 * CELLS_PER_START + LOOP_CELLS


def choose_k(space_budget: int, n: int) -> int:
    if space_budget < min_space_budget():
        raise ConfigurationError(
            f"space budget {space_budget} below the minimum of {min_space_budget()} cells"
        )
    k = (space_budget - LOOP_CELLS) // CELLS_PER_START
    return max(2, min(k, n // 32))


def budget_for_k(k: int) -> int:
    """Smallest space budget for which ``choose_k`` yields k (ignoring the n/32 clamp)."""
    return max(min_space_budget(), CELLS_PER_START * k + LOOP_CELLS)


def round_cutoff(k: int, n: int) -> int:
    return math.ceil(2 * math.sqrt(k * n))


def round_count(n: int, k: int, epsilon: float) -> int:
    if not 0 < epsilon < 1:
        raise ConfigurationError(f"epsilon must lie in (0, 1), got {epsilon}")
    return math.ceil((18 * n / k) * math.log2(1 / epsilon))


def round_seed(base_seed: int, r: int) -> int:
    return (base_seed ^ mix64(r)) & MASK64


def run_round(x: Sequence[int], k: int, seed: int, meter: Optional[Meter] = None,
              budget: Optional[int] = -1) -> tuple[Optional[tuple[int, int]], CollideResult]:
    """One budgeted round; returns the first verified witness (or None) and the collide result.

    ``budget=-1`` means the default cutoff ceil(2 sqrt(kn)); ``None`` removes the cap.
    """
    n = len(x)
    meter = meter if meter is not None else Meter()
    fv = HashChain(x, mix64(seed), meter)
    rng = random.Random(seed)
    starts = [rng.randint(1, n) for _ in range(k)]
    if budget == -1:
        budget = round_cutoff(k, n)
    result = collide_k(fv, starts, vertex_budget=budget)
    for rec in result.records:
        preds = sorted(rec.preds)
        for a in range(len(preds)):
            for b in range(a + 1, len(preds)):
                i, j = preds[a], preds[b]
                meter.comparisons += 1
                if x[i - 1] == x[j - 1]:
                    return (i, j), result
    return None, result


def single_round(x: Sequence[int], k: int, seed: int, meter: Optional[Meter] = None) -> Optional[tuple[int, int]]:
    return run_round(x, k, seed, meter)[0]


def sorted_fallback(x: Sequence[int], meter: Meter) -> Optional[tuple[int, int]]:
    """Exact check for small inputs: sort positions by symbol and scan neighbours."""

    def cmp(a: int, b: int) -> int:
        meter.comparisons += 1
        va, vb = x[a], x[b]
        return (va > vb) - (va < vb)

    meter.hold(len(x))
    order = sorted(range(len(x)), key=cmp_to_key(cmp))
    found = None
    for a, b in zip(order, order[1:]):
        meter.comparisons += 1
        if x[a] == x[b]:
            found = (min(a, b) + 1, max(a, b) + 1)
            break
    meter.release(len(x))
    return found


def _check_symbols(x: Sequence[int], m: int) -> None:
    for pos in range(len(x)):
        v = x[pos]
        if not 1 <= v <= m:
            raise InputError(f"symbol {v} at position {pos + 1} outside [1, {m}]")


def ed_decide(x: Sequence[int], params: EDParams, meter: Optional[Meter] = None,
              check_symbols: bool = True) -> EDVerdict:
    n = len(x)
    if n < 1:
        raise InputError("empty input")
    if check_symbols:
        _check_symbols(x, params.m)
    meter = meter if meter is not None else Meter()
    if n < SMALL_N:
        witness = sorted_fallback(x, meter)
        rounds = 0
    else:
        k = params.k if params.k is not None else choose_k(params.space_budget, n)
        k = max(2, min(k, n // 32))
        witness = None
        rounds = 0
        for r in range(round_count(n, k, params.epsilon)):
            rounds += 1
            witness = single_round(x, k, round_seed(params.seed, r), meter)
            if witness is not None:
                break
    if witness is not None:
        i, j = witness
        assert i != j and x[i - 1] == x[j - 1], f"invalid witness {witness}"
        return EDVerdict(False, witness, rounds)
    return EDVerdict(True, None, rounds)
