"""Multi-source collision finding in a functional graph with O(k) tracked cells.

Starting from k vertices, every vertex reachable by iterating f is explored
while a small redirection table keeps all explored vertices on disjoint
cycles of the redirected graph.  A fresh walk from the next start vertex
either closes a brand-new rho or runs into one of those cycles, and the
point where it lands is the only place a new collision can appear.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .avl import OrderedMap
from .functional_graph import BudgetExhausted, DomainError, FunctionView, floyd_find
from .meter import Meter

# cells held by the loop itself: Floyd's pointers and predecessors, counters, w, w', u
LOOP_CELLS = 12


@dataclass(frozen=True)
class CollisionRecord:
    v: int
    preds: frozenset

    def as_json(self) -> dict:
        return {"v": self.v, "preds": sorted(self.preds)}


@dataclass
class CollideResult:
    records: list[CollisionRecord]
    explored_count: int
    complete: bool
    meter: Meter = field(repr=False)
    redirections: int = 0

    def as_dict(self) -> dict:
        return {(r.v): r.preds for r in self.records}

    def as_json(self) -> dict:
        return {
            "records": [r.as_json() for r in self.records],
            "explored_count": self.explored_count,
            "complete": self.complete,
            "meter": self.meter.summary(),
        }


class RedirectionTable:
    """Provisional successors for redirected vertices, plus the origin log.

    ``origin_log`` maps an original successor f(z) to the vertices z whose
    out-edge was redirected away from it.  Lookups are metered as one
    dictionary operation each.
    """

    def __init__(self, meter: Optional[Meter] = None):
        self.meter = meter if meter is not None else Meter()
        self.entries = OrderedMap(self.meter, cells_per_entry=2)
        self._origins = OrderedMap(self.meter, cells_per_entry=1)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, v: int) -> bool:
        return v in self.entries

    def lookup(self, v: int) -> Optional[int]:
        return self.entries.get(v)

    def redirect(self, v: int, target: int, original: int) -> None:
        """Aim ``v`` at ``target``; ``original`` is v's successor before this call."""
        if v not in self.entries:
            # first redirection of v: its original edge v -> original disappears
            prev = self._origins.get(original)
            self._origins[original] = (prev or ()) + (v,)
            self.meter.hold(1)
        self.entries[v] = target

    def redirected_from(self, target: int) -> tuple:
        return self._origins.get(target) or ()

    @property
    def origin_log(self) -> list[tuple[int, int]]:
        return [(t, z) for t, zs in self._origins.items() for z in zs]

    def release(self) -> None:
        extra = sum(len(zs) for _, zs in self._origins.items())
        self.entries.clear()
        self._origins.clear()
        self.meter.release(extra)


def redirected_eval(fv: FunctionView, table: RedirectionTable, i: int) -> int:
    target = table.lookup(i)
    if target is not None:
        return target
    return fv.evaluate(i)


def split_cycle(table: RedirectionTable, cycle: Sequence[int]) -> None:
    """Cut a cycle (given in cyclic order) into two of lengths within 1 of half."""
    ell = len(cycle)
    if ell < 2:
        return
    w, w2 = cycle[0], cycle[ell // 2]
    _split(table, w, cycle[1 % ell], w2, cycle[(ell // 2 + 1) % ell])


def _split(table: RedirectionTable, w: int, w_succ: int, w2: int, w2_succ: int) -> None:
    table.redirect(w, w2_succ, original=w_succ)
    table.redirect(w2, w_succ, original=w2_succ)


def collide_k(
    fv: FunctionView,
    K: Iterable[int],
    vertex_budget: Optional[int] = None,
    debug: bool = False,
) -> CollideResult:
    """Find every collision in f*(K) together with all its preimages in f*(K).

    With ``vertex_budget`` the exploration stops before the number of
    distinct explored vertices would exceed the budget; records reported up
    to that point are genuine and ``complete`` is False.
    """
    starts = list(dict.fromkeys(K))
    if not starts:
        raise ValueError("collide_k needs at least one start vertex")
    for v in starts:
        if not 1 <= v <= fv.n:
            raise DomainError(f"start vertex {v} outside [1, {fv.n}]")

    meter = fv.meter
    table = RedirectionTable(meter)
    held = len(starts) + LOOP_CELLS
    meter.hold(held)
    records: dict[int, set] = {}
    explored = 0
    complete = True
    step_cap = None if vertex_budget is None else 6 * vertex_budget + 6
    seen: set = set()

    lookup = table.entries.get
    evaluate = fv.evaluate
    step = fv.redirected_stepper(table.entries)

    for vj in starts:
        remaining = None if vertex_budget is None else vertex_budget - explored
        try:
            info = floyd_find(step, vj, step_budget=step_cap)
        except BudgetExhausted:
            complete = False
            break
        if remaining is not None and info.s > remaining:
            complete = False
            break

        # walk the cycle once: confirms whether it was explored before (old
        # cycles always carry a redirected vertex) and picks w' half way round
        w, ell = info.w, info.ell
        half = ell // 2
        old = False
        cur = w
        w_succ = w2 = w2_succ = w
        for t in range(ell):
            nxt = lookup(cur)
            if nxt is None:
                nxt = evaluate(cur)
            else:
                old = True
            if t == 0:
                w_succ = nxt
            if t == half:
                w2, w2_succ = cur, nxt
            cur = nxt

        fresh = info.s + (0 if old else ell)
        if remaining is not None and fresh > remaining:
            complete = False
            break
        explored += fresh

        if info.s > 0:
            u, u2 = info.tail_pred, info.cycle_pred
            # explored preimages of w: u, the cycle predecessor if its edge is
            # original, and every vertex whose original edge into w was redirected
            preds = {u}
            if u2 not in table:
                preds.add(u2)
            preds.update(table.redirected_from(w))
            if len(preds) >= 2:
                records.setdefault(w, set()).update(preds)
            table.redirect(u, vj, original=w)

        if ell >= 2:
            _split(table, w, w_succ, w2, w2_succ)
        elif not old:
            # mark the new self-loop so later walks recognise it as explored
            table.redirect(w, w, original=w)

        if debug:
            _check_invariants(fv, table, starts[: starts.index(vj) + 1], explored, seen)

    result = CollideResult(
        records=[CollisionRecord(v, frozenset(p)) for v, p in sorted(records.items())],
        explored_count=explored,
        complete=complete,
        meter=meter,
        redirections=len(table),
    )
    table.release()
    meter.release(held)
    return result


def _check_invariants(fv: FunctionView, table: RedirectionTable, done: list, explored: int, seen: set) -> None:
    """Debug-only: explored set equals f*(done) and sits on cycles of the redirected graph."""
    raw = fv.fresh()
    stack = [v for v in done if v not in seen]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        nxt = raw.evaluate(v)
        if nxt not in seen:
            stack.append(nxt)
    assert len(seen) == explored, (len(seen), explored)
    assert len(table) <= 3 * len(done)

    def g(i):
        t = table.entries.get(i)
        return t if t is not None else raw.evaluate(i)

    for v in seen:
        cur = g(v)
        steps = 1
        while cur != v:
            assert cur in seen, f"redirected walk from {v} left the explored set"
            assert steps <= explored, f"vertex {v} is not on a redirected cycle"
            cur = g(cur)
            steps += 1
