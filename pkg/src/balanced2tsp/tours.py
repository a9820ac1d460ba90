"""Single tours, the combined two-tour sequence, and tour construction /
improvement (nearest neighbour, best-improvement 2-opt).

A tour is a list of nodes starting at node 0 with the closing edge implicit.
A :class:`TwoTourSequence` stores both tours in one node tuple
``0, a1..ak, 0, b1..bm, 0``.

Lengths are summed with :func:`math.fsum`, which is exactly rounded, so the
same multiset of edges always gives the same float no matter the order in
which a solver produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

IMPROVEMENT_EPS = 1e-9


def improves(new: float, old: float) -> bool:
    """Strict improvement by more than the relative threshold."""
    return new < old - IMPROVEMENT_EPS * (1.0 + abs(old))


def tour_length(tour: Sequence[int], matrix) -> float:
    t = np.asarray(tour, dtype=int)
    if len(t) < 2:
        return 0.0
    return math.fsum(matrix[t, np.roll(t, -1)])


def path_length(path: Sequence[int], matrix) -> float:
    t = np.asarray(path, dtype=int)
    if len(t) < 2:
        return 0.0
    return math.fsum(matrix[t[:-1], t[1:]])


@dataclass(frozen=True)
class TwoTourSequence:
    """Both period tours as one sequence ``0, tour1..., 0, tour2..., 0``.

    ``split`` is the position of the middle copy of node 0.
    """

    nodes: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(int(v) for v in self.nodes))

    @classmethod
    def from_tours(cls, tour1: Sequence[int], tour2: Sequence[int]) -> "TwoTourSequence":
        """Build from two open tours that each start at node 0."""
        t1, t2 = list(tour1), list(tour2)
        if not t1 or t1[0] != 0 or not t2 or t2[0] != 0:
            raise ValueError("tours must start at node 0")
        return cls(tuple(t1 + t2 + [0]))

    @property
    def split(self) -> int:
        for pos in range(1, len(self.nodes)):
            if self.nodes[pos] == 0:
                return pos
        return len(self.nodes) - 1

    @property
    def tour1(self) -> list[int]:
        return list(self.nodes[: self.split])

    @property
    def tour2(self) -> list[int]:
        return list(self.nodes[self.split: -1])

    def tour_sizes(self) -> tuple[int, int]:
        return len(self.tour1), len(self.tour2)

    def one_based(self) -> list[int]:
        return [v + 1 for v in self.nodes]

    def format(self, matrix) -> str:
        """Solution text: length header, then each tour as 1-based ids closed by 1."""
        lines = [f"LENGTH {sequence_length(self, matrix):.6f}"]
        for tour in (self.tour1, self.tour2):
            lines.append(" ".join(str(v + 1) for v in tour + [0]))
        return "\n".join(lines)


class Solution(NamedTuple):
    sequence: TwoTourSequence
    length: float


def sequence_length(q: TwoTourSequence, matrix) -> float:
    """Sum of consecutive-pair distances along the whole sequence."""
    return path_length(q.nodes, matrix)


def validate_sequence(q: TwoTourSequence, inst) -> list[str]:
    """All invariant violations of ``q`` against ``inst``; empty means feasible."""
    nodes = q.nodes
    n = inst.n
    problems = []
    if len(nodes) < 3 or nodes[0] != 0 or nodes[-1] != 0:
        problems.append("sequence must start and end at node 1")
        return problems
    zeros = [pos for pos, v in enumerate(nodes) if v == 0]
    if len(zeros) != 3:
        problems.append(f"node 1 must appear exactly 3 times, found {len(zeros)}")
    out_of_range = sorted({v for v in nodes if not 0 <= v < n})
    if out_of_range:
        problems.append("nodes out of range: " + ", ".join(str(v + 1) for v in out_of_range))
        return problems

    split = q.split
    first, second = nodes[1:split], nodes[split + 1:-1]
    fixed = set(inst.fixed)
    for part_name, part in (("first", first), ("second", second)):
        counts: dict[int, int] = {}
        for v in part:
            counts[v] = counts.get(v, 0) + 1
        for v, k in sorted(counts.items()):
            if v != 0 and k > 1:
                problems.append(f"node {v + 1} repeated {k} times in the {part_name} tour")
    for f in inst.fixed:
        if f == 0:
            continue
        if f not in first:
            problems.append(f"fixed node {f + 1} missing from the first tour")
        if f not in second:
            problems.append(f"fixed node {f + 1} missing from the second tour")
    for v in range(1, n):
        if v in fixed:
            continue
        k = first.count(v) + second.count(v)
        if k == 0:
            problems.append(f"node {v + 1} not visited")
        elif k > 1:
            problems.append(f"node {v + 1} is not fixed but visited {k} times")
    lo, hi = inst.size_bounds
    sizes = q.tour_sizes()
    for which, size in zip(("first", "second"), sizes):
        if not lo <= size <= hi:
            problems.append(f"balance violated: {which} tour has {size} nodes, allowed {lo}..{hi}")
    return problems


def nearest_neighbour(matrix, start: int = 0) -> list[int]:
    """Greedy tour from ``start`` (ties to the lowest index), rotated to begin at 0."""
    c = np.asarray(matrix, dtype=float)
    n = c.shape[0]
    if not 0 <= start < n:
        raise ValueError("start node out of range")
    visited = np.zeros(n, dtype=bool)
    order = [start]
    visited[start] = True
    cur = start
    for _ in range(n - 1):
        row = np.where(visited, np.inf, c[cur])
        cur = int(np.argmin(row))
        visited[cur] = True
        order.append(cur)
    k = order.index(0)
    return order[k:] + order[:k]


def two_opt(tour: Sequence[int], matrix) -> list[int]:
    """Best-improvement 2-opt until no move shortens the tour by more than
    ``IMPROVEMENT_EPS * (1 + length)``. Position 0 is never moved."""
    c = np.asarray(matrix, dtype=float)
    t = np.array(tour, dtype=int)
    k = len(t)
    if k < 4:
        return t.tolist()
    length = tour_length(t, c)
    iu = np.triu_indices(k - 1, 1)
    while True:
        # reverse t[i..j], 1 <= i < j <= k-1
        seg = t[1:]
        prev = t[:-1]
        nxt = np.roll(t, -1)[1:]
        delta = (c[prev[:, None], seg[None, :]] + c[seg[:, None], nxt[None, :]]
                 - c[prev, seg][:, None] - c[seg, nxt][None, :])
        flat = delta[iu]
        best = int(np.argmin(flat))
        gain = -flat[best]
        if gain <= IMPROVEMENT_EPS * (1.0 + length):
            return t.tolist()
        i, j = iu[0][best] + 1, iu[1][best] + 1
        t[i:j + 1] = t[i:j + 1][::-1].copy()
        length = tour_length(t, c)


def improve_tours(q: TwoTourSequence, matrix) -> TwoTourSequence:
    """Apply :func:`two_opt` to each tour of ``q``."""
    return TwoTourSequence.from_tours(two_opt(q.tour1, matrix), two_opt(q.tour2, matrix))


def swap_tours(q: TwoTourSequence) -> TwoTourSequence:
    """Exchange the two tours around the middle node."""
    return TwoTourSequence.from_tours(q.tour2, q.tour1)
