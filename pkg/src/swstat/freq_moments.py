"""Exact sliding-window frequency moments F_k with a bounded number of cells.

The first window is handled by repeated passes that each collect the next
batch of smallest distinct values with their counts.  The remaining
windows are produced in blocks of ``slots`` consecutive outputs: only the
symbols entering or leaving some window of the block are indexed, and a
single scan over the symbols shared by every window of the block counts
how often each indexed value occurs there.

All symbol comparisons are three-way and charged to ``Meter.comparisons``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Optional, Sequence

from .avl import OrderedMap
from .meter import Meter

# loop state outside the per-slot structures
OVERHEAD_CELLS = 16
# per output slot: two boundary indices (sorted position, group id, duplicate
# counter, occurrence-list entry each) plus up to two value nodes (key, count
# in the common region, two cursors)
CELLS_PER_SLOT = 16
NODE_CELLS = 5
FIRST_WINDOW_MIN = 3 + NODE_CELLS


class ConfigurationError(ValueError):
    pass


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class MomentOutputs:
    n: int
    k: int
    values: tuple
    mod2: bool = False


def min_space_budget() -> int:
    return OVERHEAD_CELLS + CELLS_PER_SLOT


def slots_for_budget(space_budget: int) -> int:
    if space_budget < min_space_budget():
        raise ConfigurationError(
            f"space budget {space_budget} below the minimum of {min_space_budget()} cells"
        )
    return (space_budget - OVERHEAD_CELLS) // CELLS_PER_SLOT


def power_term(c: int, k: int) -> int:
    if k == 0:
        return 1 if c > 0 else 0
    return c ** k


def fk_update(y: int, old_freq: int, new_freq: int, k: int, same_symbol: bool = False) -> int:
    """Next output from the previous one.

    ``old_freq`` / ``new_freq`` count the leaving and entering symbols in the
    n-1 positions shared by both windows.
    """
    if same_symbol:
        return y
    if k == 0:
        return y - (old_freq == 0) + (new_freq == 0)
    return y - ((old_freq + 1) ** k - old_freq ** k) + ((new_freq + 1) ** k - new_freq ** k)


def fk_update_mod2(bit: int, old_freq: int, new_freq: int, k: int) -> int:
    """``fk_update`` on parities only.  For k >= 1, c^k and c agree mod 2, so
    both bracketed differences are odd and the parity never changes."""
    if k == 0:
        return bit ^ (old_freq == 0) ^ (new_freq == 0)
    return bit


def fk_first_window(window: Sequence[int], k: int, space_budget: int, meter: Optional[Meter] = None,
                    mod2: bool = False) -> int:
    """F_k of one window by ascending batches of at most ``slots`` distinct values per pass."""
    if k < 0:
        raise ValueError("moment order must be non-negative")
    meter = meter if meter is not None else Meter()
    if space_budget < FIRST_WINDOW_MIN:
        raise ConfigurationError(
            f"space budget {space_budget} below the minimum of {FIRST_WINDOW_MIN} cells"
        )
    # 3 cells of loop state; each buffered value is a 5-cell node (key, count, children, height)
    cap = (space_budget - 3) // NODE_CELLS
    total = 0
    threshold = None
    buf = OrderedMap(meter, cells_per_entry=5)
    meter.hold(3)
    while True:
        for v in window:
            if threshold is not None:
                meter.comparisons += 1
                if v <= threshold:
                    continue
            c = buf.get(v)
            if c is not None:
                buf[v] = c + 1
            elif len(buf) < cap:
                buf[v] = 1
            else:
                top = buf.max_item()[0]
                meter.comparisons += 1
                if v < top:
                    buf.pop_max()
                    buf[v] = 1
        if len(buf) == 0:
            break
        for _, c in buf.items():
            if mod2:
                total ^= power_term(c & 1, k) & 1 if k else 1
            else:
                total += power_term(c, k)
        full = len(buf) == cap
        threshold = buf.max_item()[0]
        buf.clear()
        if not full:
            break
    meter.release(3)
    return total


@dataclass
class BlockState:
    """Index over the boundary symbols of one block of windows.

    ``keys`` holds one representative position per distinct boundary value in
    ascending value order (an implicit balanced search tree); ``group`` maps
    every boundary position to its value; ``dup`` is the duplicate counter
    of each boundary position (same value to its right among old positions,
    to its left among new positions); ``common`` counts each value in the
    region shared by all windows of the block.
    """

    start: int
    width: int
    keys: list
    group: dict
    dup: dict
    old_pos: list
    new_pos: list
    old_cur: list
    new_cur: list
    common: list

    def cells(self) -> int:
        return 4 * 2 * self.width + 4 * len(self.keys)


def _cmp_counter(x: Sequence[int], meter: Meter):
    def cmp(a: int, b: int) -> int:
        meter.comparisons += 1
        va, vb = x[a], x[b]
        return (va > vb) - (va < vb)
    return cmp


def build_block(x: Sequence[int], n: int, i: int, width: int, meter: Meter) -> BlockState:
    """Index the old positions i..i+width-1 and new positions i+n..i+n+width-1."""
    boundary = list(range(i, i + width)) + list(range(i + n, i + n + width))
    order = sorted(boundary, key=cmp_to_key(_cmp_counter(x, meter)))  # stable: ties keep position order
    keys: list = []
    group: dict = {}
    old_pos: list = []
    new_pos: list = []
    prev = None
    for pos in order:
        if prev is not None:
            meter.comparisons += 1
        if prev is None or x[pos] != x[prev]:
            keys.append(pos)
            old_pos.append([])
            new_pos.append([])
        g = len(keys) - 1
        group[pos] = g
        (old_pos if pos < i + width else new_pos)[g].append(pos)
        prev = pos
    dup: dict = {}
    for g in range(len(keys)):
        olds, news = old_pos[g], new_pos[g]
        for r, pos in enumerate(olds):
            dup[pos] = len(olds) - 1 - r
        for r, pos in enumerate(news):
            dup[pos] = r
    d = len(keys)
    return BlockState(i, width, keys, group, dup, old_pos, new_pos, [0] * d, [0] * d, [0] * d)


def fk_block_advance(x: Sequence[int], n: int, state: BlockState, y_entry: int, k: int,
                     meter: Meter, mod2: bool = False) -> list[int]:
    """Outputs y_{i+1}..y_{i+width} given y_i (0-based window starts)."""
    i, width = state.start, state.width
    keys, common = state.keys, state.common
    steps = 0
    for pos in range(i + width, i + n):
        v = x[pos]
        lo, hi = 0, len(keys) - 1
        while lo <= hi:
            mid = (lo + hi) >> 1
            steps += 1
            kv = x[keys[mid]]
            if v < kv:
                hi = mid - 1
            elif v > kv:
                lo = mid + 1
            else:
                common[mid] += 1
                break
    meter.comparisons += steps

    group, dup = state.group, state.dup
    old_pos, new_pos, old_cur, new_cur = state.old_pos, state.new_pos, state.old_cur, state.new_cur
    out = []
    y = y_entry
    for j in range(i, i + width):
        g_old, g_new = group[j], group[j + n]
        if g_old != g_new:
            # leaving symbol x_j: new occurrences at positions <= j+n-1
            news = new_pos[g_old]
            c = new_cur[g_old]
            while c < len(news) and news[c] <= j + n - 1:
                c += 1
            new_cur[g_old] = c
            old_freq = dup[j] + common[g_old] + c
            # entering symbol x_{j+n}: old occurrences at positions >= j+1
            olds = old_pos[g_new]
            c = old_cur[g_new]
            while c < len(olds) and olds[c] < j + 1:
                c += 1
            old_cur[g_new] = c
            new_freq = dup[j + n] + common[g_new] + len(olds) - c
            if mod2:
                y = fk_update_mod2(y, old_freq, new_freq, k)
            else:
                y = fk_update(y, old_freq, new_freq, k)
        out.append(y)
    return out


def fk_window_all(x: Sequence[int], n: int, k: int, space_budget: int, mod2: bool = False,
                  meter: Optional[Meter] = None) -> MomentOutputs:
    if len(x) != 2 * n - 1:
        raise InputError(f"input length {len(x)} != 2n-1 = {2 * n - 1}")
    if k < 0:
        raise ValueError("moment order must be non-negative")
    meter = meter if meter is not None else Meter()
    slots = slots_for_budget(space_budget)
    meter.hold(OVERHEAD_CELLS)
    # the first window runs before any block exists, so its buffer may use the slot cells
    y = fk_first_window(_Window(x, 0, n), k, space_budget - OVERHEAD_CELLS, meter, mod2)
    values = [y]
    i = 0
    while i < n - 1:
        width = min(slots, n - 1 - i)
        state = build_block(x, n, i, width, meter)
        held = state.cells()
        meter.hold(held)
        block = fk_block_advance(x, n, state, y, k, meter, mod2)
        meter.release(held)
        values.extend(block)
        y = block[-1]
        i += width
    meter.release(OVERHEAD_CELLS)
    return MomentOutputs(n, k, tuple(values), mod2)


class _Window:
    """x[start:start+length] without copying the input."""

    __slots__ = ("x", "start", "length")

    def __init__(self, x, start, length):
        self.x, self.start, self.length = x, start, length

    def __len__(self):
        return self.length

    def __iter__(self):
        x = self.x
        for t in range(self.start, self.start + self.length):
            yield x[t]
