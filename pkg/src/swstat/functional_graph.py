"""Functions on a finite domain [1, n], metered evaluation, and Floyd cycle finding.

Vertices are 1-indexed throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

from .meter import Meter

MASK64 = (1 << 64) - 1


class DomainError(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    """Raised when a capped exploration runs out of steps."""

    def __init__(self, used: int):
        super().__init__(f"step budget exhausted after {used} evaluations")
        self.used = used


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijection on 64-bit words with good avalanche."""
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


GAMMA = 0x9E3779B97F4A7C15


def symbol_hash(a: int, seed: int, n: int) -> int:
    """Keyed pseudorandom map from a symbol to [1, n].

    Counter mode: the SplitMix64 output for state ``seed + a * GAMMA``,
    reduced mod n.
    """
    z = (seed + (a + 1) * GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) % n + 1


class FunctionView:
    """Evaluation access to some f: [n] -> [n].  Every call to ``evaluate`` is metered."""

    n: int
    meter: Meter

    def evaluate(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise DomainError(f"vertex {i} outside [1, {self.n}]")
        self.meter.fn_evals += 1
        return self._f(i)

    def _f(self, i: int) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def fresh(self) -> "FunctionView":
        """Same function with a new, empty meter."""
        raise NotImplementedError

    def redirected_stepper(self, table) -> Callable[[int], int]:
        """``i -> R[i] if redirected else f(i)`` as one metered call.

        ``table`` is an OrderedMap; the lookup is charged exactly as
        ``OrderedMap.get`` would charge it and each fall-through evaluation as
        one ``fn_evals``.  Arguments must already lie in [1, n] (walks only
        visit function values and redirection targets).
        """
        meter = self.meter
        f = self._f

        def step(i: int) -> int:
            node = table._root
            depth = 0
            while node is not None:
                depth += 1
                key = node.key
                if i < key:
                    node = node.left
                elif i > key:
                    node = node.right
                else:
                    meter.dict_ops += 1
                    meter.comparisons += depth
                    return node.value
            meter.dict_ops += 1
            meter.comparisons += depth
            meter.fn_evals += 1
            return f(i)

        return step


class TableFunction(FunctionView):
    def __init__(self, table: Sequence[int], meter: Optional[Meter] = None):
        table = tuple(int(v) for v in table)
        n = len(table)
        if n == 0:
            raise DomainError("empty function table")
        for v in table:
            if not 1 <= v <= n:
                raise DomainError(f"table value {v} outside [1, {n}]")
        self.table = table
        self.n = n
        self.meter = meter if meter is not None else Meter()

    def _f(self, i: int) -> int:
        return self.table[i - 1]

    def fresh(self) -> "TableFunction":
        return TableFunction(self.table)

    def __repr__(self) -> str:
        return f"TableFunction({self.table})"


class HashChain(FunctionView):
    """f_{x,h}(i) = h(x_i) for a seeded pseudorandom h: symbols -> [1, n]."""

    def __init__(self, x: Sequence[int], seed: int, meter: Optional[Meter] = None):
        if len(x) == 0:
            raise DomainError("empty input sequence")
        self.x = x
        self.seed = seed & MASK64
        self.n = len(x)
        self.meter = meter if meter is not None else Meter()

    def _f(self, i: int) -> int:
        return symbol_hash(self.x[i - 1], self.seed, self.n)

    def evaluate(self, i: int) -> int:
        # inlined symbol_hash; this is the innermost loop of element distinctness
        n = self.n
        if not 1 <= i <= n:
            raise DomainError(f"vertex {i} outside [1, {n}]")
        self.meter.fn_evals += 1
        z = (self.seed + (self.x[i - 1] + 1) * GAMMA) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return (z ^ (z >> 31)) % n + 1

    def fresh(self) -> "HashChain":
        return HashChain(self.x, self.seed)

    def redirected_stepper(self, table) -> Callable[[int], int]:
        # same contract as the base class, with the hash inlined
        meter = self.meter
        x, seed, n = self.x, self.seed, self.n

        def step(i: int) -> int:
            node = table._root
            depth = 0
            while node is not None:
                depth += 1
                key = node.key
                if i < key:
                    node = node.left
                elif i > key:
                    node = node.right
                else:
                    meter.dict_ops += 1
                    meter.comparisons += depth
                    return node.value
            meter.dict_ops += 1
            meter.comparisons += depth
            meter.fn_evals += 1
            z = (seed + (x[i - 1] + 1) * GAMMA) & MASK64
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
            return (z ^ (z >> 31)) % n + 1

        return step


def evaluate(fv: FunctionView, i: int) -> int:
    return fv.evaluate(i)


@dataclass(frozen=True)
class CycleInfo:
    s: int
    ell: int
    w: int
    tail_pred: Optional[int]
    cycle_pred: int


def _divisors_above(i: int, floor: int) -> list[int]:
    """Proper divisors d of i with d > floor, ascending (arithmetic only)."""
    out = []
    j = 1
    while j * j <= i:
        if i % j == 0:
            for d in {j, i // j}:
                if floor < d < i:
                    out.append(d)
        j += 1
    return sorted(out)


def floyd_find(step: Callable[[int], int], start: int, step_budget: Optional[int] = None) -> CycleInfo:
    """Tortoise-and-hare search for the rho reached from ``start``.

    Returns the minimal tail length ``s`` and cycle length ``ell`` with the
    cycle entry ``w`` and the two predecessors of ``w`` (tail and cycle side).
    Uses a constant number of vertex cells.  The tortoise and hare share
    their first step, so meeting after ``i`` tortoise steps costs ``3i - 1``
    evaluations; locating the entry costs ``2s`` more.  Since ``ell`` divides
    ``i`` and exceeds ``i - s``, the cycle is only walked as far as the
    largest proper divisor of ``i`` that is still a candidate.
    """
    limit = step_budget if step_budget is not None else -1
    tortoise = step(start)
    hare_prev = tortoise
    hare = step(tortoise)
    used = 2
    i = 1
    while tortoise != hare:
        if limit >= 0 and used + 3 > limit:
            raise BudgetExhausted(used)
        tortoise = step(tortoise)
        hare_prev = step(hare)
        hare = step(hare_prev)
        used += 3
        i += 1

    # hare sits at position 2i >= s on the cycle; hare_prev is its cycle predecessor
    p, q = start, hare
    p_prev, q_prev = None, hare_prev
    s = 0
    while p != q:
        if limit >= 0 and used + 2 > limit:
            raise BudgetExhausted(used)
        p_prev, p = p, step(p)
        q_prev, q = q, step(q)
        used += 2
        s += 1
    w = p

    # ell divides i and ell > i - s; walk the cycle only as far as needed to
    # rule out (or confirm) the proper divisors of i that are still possible
    ell = i
    walked = 0
    cur = w
    for d in _divisors_above(i, i - s):
        while walked < d:
            if limit >= 0 and used + 1 > limit:
                raise BudgetExhausted(used)
            cur = step(cur)
            used += 1
            walked += 1
        if cur == w:
            ell = d
            break
    return CycleInfo(s=s, ell=ell, w=w, tail_pred=p_prev if s > 0 else None, cycle_pred=q_prev)


def read_function_table(path: str | Path) -> list[int]:
    """Parse the function-table file: first token n, then n values in [1, n]."""
    tokens = Path(path).read_text().split()
    if not tokens:
        raise DomainError(f"{path}: empty function table file")
    n = int(tokens[0])
    values = [int(t) for t in tokens[1:]]
    if len(values) != n:
        raise DomainError(f"{path}: expected {n} values, found {len(values)}")
    for v in values:
        if not 1 <= v <= n:
            raise DomainError(f"{path}: value {v} outside [1, {n}]")
    return values


def write_function_table(path: str | Path, table: Sequence[int]) -> None:
    Path(path).write_text(f"{len(table)}\n" + " ".join(str(v) for v in table) + "\n")
