"""Element distinctness over all n windows of length n in a length 2n-1 input.

``ed_window_all`` reduces a group of m consecutive windows to two binary
searches plus one smaller sliding-window instance built from the group's
two ends, recursing with m about half the window length.  Any single-input
ED solver can back it.  ``ed_window_average`` is the errorless scan that
is fast on uniformly random inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .element_distinctness import EDParams, ed_decide, round_seed
from .meter import Meter

# windows of at most this length are answered one by one
BASE_WINDOW = 8


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class WindowOutputs:
    n: int
    bits: tuple

    def __post_init__(self):
        if len(self.bits) != self.n:
            raise ValueError(f"expected {self.n} outputs, got {len(self.bits)}")

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class GroupBounds:
    i_L: int
    i_R: int


class Concat:
    """Read-only view of a concatenation of ranges of a base sequence.

    Holds only the range endpoints, never the symbols.
    """

    __slots__ = ("base", "pieces", "length")

    def __init__(self, base: Sequence[int], pieces: tuple = None):
        self.base = base
        if pieces is None:
            pieces = ((0, len(base)),)
        self.pieces = tuple(p for p in pieces if p[1] > p[0])
        self.length = sum(b - a for a, b in self.pieces)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, idx: int) -> int:
        if idx < 0:
            idx += self.length
        for a, b in self.pieces:
            if idx < b - a:
                return self.base[a + idx]
            idx -= b - a
        raise IndexError("Concat index out of range")

    def __iter__(self):
        base = self.base
        for a, b in self.pieces:
            for i in range(a, b):
                yield base[i]

    def slice(self, start: int, stop: int) -> "Concat":
        out = []
        offset = 0
        for a, b in self.pieces:
            size = b - a
            lo = max(start - offset, 0)
            hi = min(stop - offset, size)
            if lo < hi:
                out.append((a + lo, a + hi))
            offset += size
            if offset >= stop:
                break
        return Concat(self.base, tuple(out))

    def concat(self, other: "Concat") -> "Concat":
        assert other.base is self.base
        pieces = list(self.pieces)
        for p in other.pieces:
            if pieces and pieces[-1][1] == p[0]:
                pieces[-1] = (pieces[-1][0], p[1])
            else:
                pieces.append(p)
        return Concat(self.base, tuple(pieces))

    def tolist(self) -> list:
        return list(self)


class ExactBackend:
    """Hash-set ED check on a view; counts calls and the total length examined."""

    def __init__(self):
        self.calls = 0
        self.work = 0

    def __call__(self, view) -> bool:
        self.calls += 1
        self.work += len(view)
        seen = set()
        for v in view:
            if v in seen:
                return False
            seen.add(v)
        return True


class RandomizedBackend:
    """ED through the randomized collision-finding algorithm (false 'distinct' possible)."""

    def __init__(self, space_budget: int = 512, epsilon: float = 0.25, seed: int = 0,
                 meter: Optional[Meter] = None):
        self.space_budget = space_budget
        self.epsilon = epsilon
        self.seed = seed
        self.meter = meter if meter is not None else Meter()
        self.calls = 0
        self.work = 0

    def __call__(self, view) -> bool:
        self.calls += 1
        n = len(view)
        self.work += n
        if n <= 1:
            return True
        params = EDParams(n=n, m=0, space_budget=self.space_budget, epsilon=self.epsilon,
                          seed=round_seed(self.seed, self.calls))
        return ed_decide(view, params, self.meter, check_symbols=False).distinct


class NoisyBackend:
    """Wraps a backend and flips each answer with a fixed probability (for tests)."""

    def __init__(self, inner: Callable, error: float, rng):
        self.inner = inner
        self.error = error
        self.rng = rng
        self.calls = 0

    def __call__(self, view) -> bool:
        self.calls += 1
        ans = self.inner(view)
        return (not ans) if self.rng.random() < self.error else ans


def noisy_query(backend: Callable, view, repetitions: int) -> bool:
    """Majority of ``repetitions`` independent backend answers (odd count)."""
    if repetitions < 1 or repetitions % 2 == 0:
        raise ValueError("repetitions must be a positive odd number")
    if repetitions == 1:
        return backend(view)
    yes = 0
    need = repetitions // 2 + 1
    for r in range(repetitions):
        yes += bool(backend(view))
        no = r + 1 - yes
        if yes >= need or no >= need:
            break
    return yes >= need


def default_repetitions(n: int, c1: int = 1) -> int:
    c = max(1, c1 * math.ceil(math.log2(max(n, 2))))
    return c if c % 2 == 1 else c + 1


def find_group_bounds(seg, n: int, m: int, query: Callable) -> GroupBounds:
    """Binary searches for i_L and i_R (the middle x_m..x_n is known distinct)."""
    # i_L: largest j in [1, m-1] with a duplicate in x_j..x_n; lo has one, hi does not
    lo, hi = 0, m
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if query(seg.slice(mid - 1, n)):
            hi = mid
        else:
            lo = mid
    i_L = lo
    # i_R: smallest j in [1, m-1] with a duplicate in x_m..x_{n+j}; lo has none, hi has one
    lo, hi = 0, m
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if query(seg.slice(m - 1, n + mid)):
            lo = mid
        else:
            hi = mid
    return GroupBounds(i_L, hi)


def reduce_group(seg, n: int, m: int, query: Callable, meter: Optional[Meter] = None) -> list[int]:
    """The m window bits for a segment of length n + m - 1 (window length n)."""
    if not 0 < m < n:
        raise ValueError(f"group size must satisfy 0 < m < n, got m={m}, n={n}")
    if len(seg) != n + m - 1:
        raise InputError(f"segment length {len(seg)} != n + m - 1 = {n + m - 1}")
    if not query(seg.slice(m - 1, n)):
        return [0] * m
    b = find_group_bounds(seg, n, m, query)
    sub = seg.slice(0, m - 1).concat(seg.slice(n, n + m - 1))
    rec = _solve(sub, m - 1, m, query, meter)
    return [int(b.i_L <= idx < b.i_R) & rec[idx] for idx in range(m)]


def _solve(view, n: int, t: int, query: Callable, meter: Optional[Meter]) -> list[int]:
    """t window bits, window length n, over a view of length n + t - 1."""
    if meter is not None:
        meter.hold(4 + len(view.pieces))
    try:
        if n <= BASE_WINDOW or t == 1:
            return [int(query(view.slice(s, s + n))) for s in range(t)]
        g = (n + 1) // 2
        out: list[int] = []
        for s in range(0, t, g):
            m = min(g, t - s)
            out.extend(reduce_group(view.slice(s, s + n + m - 1), n, m, query, meter))
        return out
    finally:
        if meter is not None:
            meter.release(4 + len(view.pieces))


def ed_window_all(x: Sequence[int], n: int, backend: Optional[Callable] = None, mode: str = "exact",
                  repetitions: Optional[int] = None, meter: Optional[Meter] = None) -> WindowOutputs:
    if len(x) != 2 * n - 1:
        raise InputError(f"input length {len(x)} != 2n-1 = {2 * n - 1}")
    if mode == "exact":
        backend = backend if backend is not None else ExactBackend()
        query = backend
    elif mode == "randomized":
        backend = backend if backend is not None else RandomizedBackend(meter=meter)
        reps = repetitions if repetitions is not None else default_repetitions(n)

        def query(view):
            return noisy_query(backend, view, reps)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    bits = _solve(Concat(x), n, n, query, meter)
    return WindowOutputs(n, tuple(bits))


def ed_window_average(x: Sequence[int], n: int, meter: Optional[Meter] = None,
                      debug: bool = False) -> WindowOutputs:
    """Scan each window right to left for its first duplicate and skip every window holding it."""
    if len(x) != 2 * n - 1:
        raise InputError(f"input length {len(x)} != 2n-1 = {2 * n - 1}")
    meter = meter if meter is not None else Meter()
    meter.hold(5)
    bits = [1] * n
    cmp = 0
    p = 0
    while p < n:
        end = p + n - 1
        hit = -1
        partner = -1
        j = end - 1
        while j >= p and hit < 0:
            v = x[j]
            for q in range(j + 1, end + 1):
                cmp += 1
                if x[q] == v:
                    hit, partner = j, q
                    break
            j -= 1
        if hit < 0:
            p += 1
            continue
        # windows p..hit all contain both hit and partner
        for q in range(p, min(hit, n - 1) + 1):
            if debug:
                assert q <= hit and partner <= q + n - 1
            bits[q] = 0
        p = hit + 1
    meter.comparisons += cmp
    meter.release(5)
    return WindowOutputs(n, tuple(bits))
