"""Sliding-subset disassemble/aggregate improvement ``H(s, l)``.

The current pair of tours is read as one two-vehicle route
``d1, t1_1..t1_k1, 0, t2_1..t2_k2, d2``. Two windows of ``s`` consecutive
customers (the separator is skipped when counting positions) are kept as
single customers, everything else is compressed into sub-path customers,
and the resulting small instance is solved exactly. Window ``S1`` always
holds a customer of route 1 and ``S2``, which lies after it, a customer of
route 2.

Every small instance has exactly ``2s + 6`` entities: the two depots, the
separator, the ``2s`` window customers and three sub-path customers. The
part of route 1 before ``S1`` is glued to depot ``d1``. When fewer than
three sub-paths remain, the last node of a sub-path is split off as a
customer of its own.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .instance import InfeasibleError, Instance
from .tours import TwoTourSequence, improves, sequence_length
from .vrp2 import (
    DEFAULT_EXACT_CAP,
    Vrp2Instance,
    aggregate_path,
    balanced_capacity,
    expand_route,
    separator,
    solve_vrp2_exact,
    to_vrp2,
)


@dataclass(frozen=True)
class WindowConfig:
    """Window size ``s``, slide step ``l`` and the start positions of the
    two windows in the customer list (route 1 followed by route 2)."""

    s: int
    l: int
    first: int = 0
    second: int = 0


def entity_count(v: Vrp2Instance) -> int:
    """Depots plus customers (the separator included)."""
    return v.size + 2


def _stepped(lo: int, hi: int, step: int) -> list[int]:
    if lo > hi:
        return []
    out = list(range(lo, hi + 1, step))
    if out[-1] != hi:
        out.append(hi)
    return out


def window_placements(k1: int, k2: int, s: int, l: int) -> Iterator[WindowConfig]:
    """All window placements in enumeration order.

    ``S1`` starts at 0 and slides by ``l``; for each of its positions ``S2``
    starts right after it (but no earlier than the last ``s - 1`` customers
    of route 1) and slides by ``l`` to the end of route 2. The final position
    of each slide is always included.
    """
    total = k1 + k2
    if k1 == 0 or k2 == 0:
        return
    last_first = min(k1 - 1, total - 2 * s)
    for a in _stepped(0, last_first, l):
        lo = max(a + s, k1 - s + 1)
        for b in _stepped(lo, total - s, l):
            yield WindowConfig(s, l, a, b)


def _route_parts(q: TwoTourSequence):
    t1, t2 = q.tour1[1:], q.tour2[1:]
    return t1 + t2, len(t1)


def _carve(q: TwoTourSequence, cfg: WindowConfig, inst: Instance):
    """Small instance for one placement plus the current customer order."""
    nodes, k1 = _route_parts(q)
    total = len(nodes)
    s, a, b = cfg.s, cfg.first, cfg.second
    if not (0 <= a < k1 and b >= a + s and b + s <= total and b + s - 1 >= k1):
        raise ValueError(f"invalid window placement {cfg}")
    if total - 2 * s < 3:
        raise ValueError("route too short for a fixed-size sub-instance")

    runs = []
    if a + s < k1 < b:
        runs += [(a + s, k1), (k1, b)]
    elif a + s < b:
        runs.append((a + s, b))
    if b + s < total:
        runs.append((b + s, total))
    prefix_end = a
    while len(runs) < 3:
        for idx, (st, en) in enumerate(runs):
            if en - st >= 2:
                runs[idx: idx + 1] = [(st, en - 1), (en - 1, en)]
                break
        else:
            runs.insert(0, (prefix_end - 1, prefix_end))
            prefix_end -= 1

    c = inst.matrix
    fixed = set(inst.fixed)
    pieces = [(pos, pos + 1) for pos in range(a, a + s)]
    pieces += [(pos, pos + 1) for pos in range(b, b + s)]
    pieces += runs
    pieces.sort()

    customers = [separator(0)]
    f1, f2 = set(), set()
    order = []
    placed_zero = False
    for st, en in pieces:
        if st >= k1 and not placed_zero:
            order.append(0)
            placed_zero = True
        idx = len(customers)
        customers.append(aggregate_path(nodes[st:en], c))
        if any(v in fixed for v in nodes[st:en]):
            (f1 if st < k1 else f2).add(idx)
        order.append(idx)
    if not placed_zero:
        order.append(0)

    cap = balanced_capacity(inst.n, len(inst.fixed), inst.p)
    d1_path = (0, *nodes[:prefix_end])
    demand = total - prefix_end
    w1 = cap - prefix_end
    if demand <= cap or w1 < 0:
        return None, order
    v = Vrp2Instance(c, tuple(customers), frozenset(f1), frozenset(f2), w1, cap, d1_path, 0)
    return v, order


def disassemble(q: TwoTourSequence, cfg: WindowConfig, inst: Instance) -> Vrp2Instance:
    """Small two-vehicle instance for the placement ``cfg`` of the windows."""
    v, _ = _carve(q, cfg, inst)
    if v is None:
        raise InfeasibleError("sub-instance violates the total demand > capacity assumption")
    return v


def _key(v: Vrp2Instance, order) -> tuple:
    # internal lengths add the same constant to every route, so the optimal
    # arrangement depends on these attributes alone
    tags = v.tags()
    return (v.d1, v.w1, v.w2,
            tuple((v.customers[i].left, v.customers[i].right, v.customers[i].demand, int(tags[i]))
                  for i in order))


def _solve_whole(q: TwoTourSequence, inst: Instance, exact_cap: int) -> TwoTourSequence:
    try:
        v = to_vrp2(inst)
    except ValueError:
        return q
    if v.size > exact_cap:
        return q
    best = expand_route(solve_vrp2_exact(v, exact_cap), v)
    if improves(sequence_length(best, inst.matrix), sequence_length(q, inst.matrix)):
        return best
    return q


def h_improve(q: TwoTourSequence, s: int, l: int, inst: Instance, *,
              exact_cap: int = DEFAULT_EXACT_CAP,
              deadline: Optional[float] = None,
              cache: Optional[set] = None,
              observer: Optional[Callable[[Vrp2Instance], None]] = None) -> TwoTourSequence:
    """Improve ``q`` with sliding windows until a full sweep finds nothing.

    After every improvement the sweep restarts on the new solution.
    ``deadline`` (a :func:`time.perf_counter` value) is checked between
    placements. ``cache`` collects sub-instances already known not to
    improve and may be shared between calls on the same instance.
    ``observer`` is called with every sub-instance that gets solved.
    """
    if s < 1 or l < 1:
        raise ValueError("s and l must be positive")
    if 2 * s + 4 > exact_cap:
        raise ValueError(f"sub-instances of {2 * s + 4} customers exceed the exact cap {exact_cap}")
    if cache is None:
        cache = set()
    c = inst.matrix
    length = sequence_length(q, c)
    while True:
        nodes, k1 = _route_parts(q)
        if len(nodes) <= 2 * s + 3:
            return _solve_whole(q, inst, exact_cap)
        improved = False
        for cfg in window_placements(k1, len(nodes) - k1, s, l):
            if deadline is not None and time.perf_counter() >= deadline:
                return q
            v, order = _carve(q, cfg, inst)
            if v is None:
                continue
            key = _key(v, order)
            if key in cache:
                continue
            if observer is not None:
                observer(v)
            new_q = expand_route(solve_vrp2_exact(v, exact_cap), v)
            new_length = sequence_length(new_q, c)
            if improves(new_length, length):
                q, length = new_q, new_length
                improved = True
                break
            cache.add(key)
        if not improved:
            return q
