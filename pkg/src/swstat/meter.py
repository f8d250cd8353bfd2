"""Operation counters shared by every algorithm in the package.

One *cell* is one stored index, counter or symbol (O(log n) bits).  The
read-only input and the write-only output are never charged.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict


@dataclass
class Meter:
    fn_evals: int = 0
    comparisons: int = 0
    dict_ops: int = 0
    peak_cells: int = 0
    cells: int = 0

    def hold(self, n: int = 1) -> None:
        self.cells += n
        if self.cells > self.peak_cells:
            self.peak_cells = self.cells

    def release(self, n: int = 1) -> None:
        self.cells -= n
        if self.cells < 0:
            raise RuntimeError("released more cells than were held")

    def absorb(self, other: "Meter") -> None:
        """Add another meter's counters; its peak is taken on top of our current use."""
        self.fn_evals += other.fn_evals
        self.comparisons += other.comparisons
        self.dict_ops += other.dict_ops
        self.peak_cells = max(self.peak_cells, self.cells + other.peak_cells)

    def summary(self) -> dict:
        d = asdict(self)
        del d["cells"]
        return d
