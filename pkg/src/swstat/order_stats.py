"""Sliding-window maximum and minimum in O(n log n) comparisons and O(log n) cells.

The pending windows always form a contiguous run of starts.  The extremum
of the middle window of the run is found by a scan; every window of the
run that contains that position shares a suffix or prefix with the middle
window, so those outputs follow from one sweep with a running extremum.
At most half the run remains, and the loop repeats on it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .meter import Meter

# pending run (a, t), middle start c, extremum position, sweep index;
# symbols are never copied out of the read-only input
LOOP_CELLS = 5


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class ExtremaOutputs:
    n: int
    values: tuple
    direction: str


def max_window_all(x: Sequence[int], n: int, direction: str = "max",
                   meter: Optional[Meter] = None) -> ExtremaOutputs:
    if direction not in ("max", "min"):
        raise ValueError(f"direction must be 'max' or 'min', got {direction!r}")
    if n < 1 or len(x) != 2 * n - 1:
        raise InputError(f"input length {len(x)} != 2n-1 = {2 * n - 1}")
    meter = meter if meter is not None else Meter()
    sign = 1 if direction == "max" else -1
    out: list = [None] * n
    cmp = 0
    if n == 1:
        meter.hold(1)
        meter.release(1)
        return ExtremaOutputs(1, (x[0],), direction)
    meter.hold(LOOP_CELLS)

    a, t = 0, n  # pending starts a .. a+t-1
    while t > 0:
        c = a + (t + 1) // 2 - 1
        # leftmost extremum of window c
        p = c
        best = sign * x[c]
        for q in range(c + 1, c + n):
            cmp += 1
            if sign * x[q] > best:
                best, p = sign * x[q], q
        if p <= a + n - 1:
            # windows a..c all contain p; extend to the left
            run, pos = best, p
            out[c] = x[pos]
            for s in range(c - 1, a - 1, -1):
                cmp += 1
                if sign * x[s] >= run:
                    run, pos = sign * x[s], s
                out[s] = x[pos]
            t = a + t - 1 - c
            a = c + 1
        else:
            # windows c..a+t-1 all contain p; extend to the right
            run, pos = best, p
            out[c] = x[pos]
            for s in range(c + 1, a + t):
                cmp += 1
                if sign * x[s + n - 1] > run:
                    run, pos = sign * x[s + n - 1], s + n - 1
                out[s] = x[pos]
            t = c - a
    meter.comparisons += cmp
    meter.release(LOOP_CELLS)
    return ExtremaOutputs(n, tuple(out), direction)


def min_window_all(x: Sequence[int], n: int, meter: Optional[Meter] = None) -> ExtremaOutputs:
    return max_window_all(x, n, "min", meter)
