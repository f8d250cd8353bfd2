"""Brute-force reference answers, evaluated straight from the definitions."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

from .collide import CollisionRecord
from .functional_graph import FunctionView

STATS = ("ED", "FK", "F0MOD2", "MAX", "MIN", "OT")


@dataclass(frozen=True)
class OracleSpec:
    statistic: str
    n: int
    k: int = 0
    t: int = 1

    def __post_init__(self):
        if self.statistic not in STATS:
            raise ValueError(f"unknown statistic {self.statistic!r}; expected one of {STATS}")
        if self.n < 1:
            raise ValueError("window length must be positive")
        if self.k < 0:
            raise ValueError("moment order must be non-negative")
        if self.statistic == "OT" and not 1 <= self.t <= self.n:
            raise ValueError(f"order statistic t={self.t} outside [1, {self.n}]")


def window_value(window: Sequence[int], spec: OracleSpec) -> int:
    freq = Counter(window)
    stat = spec.statistic
    if stat == "ED":
        return int(len(freq) == len(window))
    if stat == "FK":
        if spec.k == 0:
            return len(freq)
        return sum(c ** spec.k for c in freq.values())
    if stat == "F0MOD2":
        return len(freq) % 2
    if stat == "MAX":
        return max(window)
    if stat == "MIN":
        return min(window)
    return sorted(window)[spec.t - 1]


def brute_window_stats(x: Sequence[int], spec: OracleSpec) -> list[int]:
    n = spec.n
    if len(x) != 2 * n - 1:
        raise ValueError(f"input length {len(x)} != 2n-1 = {2 * n - 1}")
    return [window_value(x[i : i + n], spec) for i in range(n)]


def brute_ed(x: Sequence[int]) -> Optional[tuple[int, int]]:
    """First duplicate pair (1-indexed, i < j) by position of the later index, or None."""
    last: dict = {}
    for j, v in enumerate(x, start=1):
        if v in last:
            return last[v], j
        last[v] = j
    return None


def _as_callable(f: Union[FunctionView, Sequence[int], Callable[[int], int]]) -> Callable[[int], int]:
    if isinstance(f, FunctionView):
        return f.fresh().evaluate
    if callable(f):
        return f
    table = tuple(f)
    return lambda i: table[i - 1]


def reachable(f, K: Iterable[int]) -> set[int]:
    """f*(K) by marking; includes K itself."""
    step = _as_callable(f)
    seen: set[int] = set()
    stack = list(K)
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.append(step(v))
    return seen


def brute_collisions(f, K: Iterable[int]) -> tuple[list[CollisionRecord], int]:
    """All (v, preds) with >= 2 preds inside f*(K), sorted by v, and |f*(K)|."""
    K = list(K)
    if not K:
        raise ValueError("brute_collisions needs at least one start vertex")
    step = _as_callable(f)
    closure = reachable(step, K)
    preds: dict[int, set[int]] = {}
    for u in closure:
        preds.setdefault(step(u), set()).add(u)
    records = [CollisionRecord(v, frozenset(p)) for v, p in sorted(preds.items()) if len(p) >= 2]
    return records, len(closure)
