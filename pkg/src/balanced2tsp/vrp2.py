"""Two-vehicle routing reformulation and its Held-Karp style subset DP.

Both vehicle routes are handled as one route ``d1 -> ... -> 0 -> ... -> d2``
where customer 0 is a zero-demand separator: customers before it are served
by vehicle 1, customers after it by vehicle 2. Every customer may stand for a
whole sub-path of original nodes, so it has two entry ends ``left`` and
``right``, an internal traversal length and a demand.

Customer indices are positions in :attr:`Vrp2Instance.customers`; index 0 is
always the separator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numba
import numpy as np

from .instance import InfeasibleError, Instance
from .tours import TwoTourSequence, path_length

DEFAULT_EXACT_CAP = 22

FREE, FIXED1, FIXED2 = 0, 1, 2


@dataclass(frozen=True)
class AggregatedCustomer:
    left: int
    right: int
    length: float
    demand: int
    path: tuple

    def reversed(self) -> "AggregatedCustomer":
        return AggregatedCustomer(self.right, self.left, self.length, self.demand, self.path[::-1])


def aggregate_path(path: Sequence[int], matrix, demands=None) -> AggregatedCustomer:
    """Compress a non-empty node path into one customer.

    ``demands`` maps node -> demand; unit demands are used when omitted.
    """
    path = tuple(int(v) for v in path)
    if not path:
        raise ValueError("cannot aggregate an empty path")
    if demands is None:
        demand = len(path)
    else:
        demand = int(sum(demands[v] for v in path))
    return AggregatedCustomer(path[0], path[-1], path_length(path, matrix), demand, path)


@dataclass(frozen=True, eq=False)
class Vrp2Instance:
    """A two-vehicle instance over aggregated customers.

    ``d1_path`` is the fixed start of vehicle 1: the depot followed by any
    nodes glued to it. Vehicle 1 leaves from ``d1_path[-1]`` and the glued
    length is a constant part of every route. ``w1`` is the capacity left for
    customers after the glued part.
    """

    base_matrix: np.ndarray
    customers: tuple
    f1: frozenset
    f2: frozenset
    w1: int
    w2: int
    d1_path: tuple
    d2: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "f1", frozenset(self.f1))
        object.__setattr__(self, "f2", frozenset(self.f2))
        object.__setattr__(self, "d1_path", tuple(self.d1_path))
        n = self.base_matrix.shape[0]
        if not self.customers:
            raise ValueError("the separator customer 0 is required")
        zero = self.customers[0]
        if zero.demand != 0 or zero.length != 0 or zero.left != zero.right:
            raise ValueError("customer 0 must have zero demand and a single location")
        if self.f1 & self.f2:
            raise ValueError("F1 and F2 must be disjoint")
        if 0 in self.f1 or 0 in self.f2:
            raise ValueError("customer 0 cannot be fixed to a vehicle")
        k = len(self.customers)
        if any(not 0 < i < k for i in self.f1 | self.f2):
            raise ValueError("fixed customer index out of range")
        for cust in self.customers:
            if not (0 <= cust.left < n and 0 <= cust.right < n):
                raise ValueError("customer end outside the base matrix")
        if not self.d1_path or not all(0 <= v < n for v in self.d1_path) or not 0 <= self.d2 < n:
            raise ValueError("depot outside the base matrix")
        total = sum(cust.demand for cust in self.customers)
        if total <= max(self.w1, self.w2):
            raise ValueError(
                f"total demand {total} must exceed both capacities ({self.w1}, {self.w2})"
            )

    @property
    def size(self) -> int:
        return len(self.customers)

    @property
    def d1(self) -> int:
        return self.d1_path[-1]

    @property
    def d1_offset(self) -> float:
        return path_length(self.d1_path, self.base_matrix)

    @property
    def left(self) -> list:
        return [cust.left for cust in self.customers]

    @property
    def right(self) -> list:
        return [cust.right for cust in self.customers]

    @property
    def length(self) -> list:
        return [cust.length for cust in self.customers]

    @property
    def demand(self) -> list:
        return [cust.demand for cust in self.customers]

    def tags(self) -> np.ndarray:
        tag = np.zeros(self.size, dtype=np.int64)
        tag[list(self.f1)] = FIXED1
        tag[list(self.f2)] = FIXED2
        return tag


@dataclass(frozen=True)
class Vrp2Solution:
    """Customer order (containing 0) with an orientation flag per position
    (True = entered at the right end) and the total route length."""

    order: tuple
    flipped: tuple
    value: float

    @property
    def separator_position(self) -> int:
        return self.order.index(0)


def separator(node: int) -> AggregatedCustomer:
    return AggregatedCustomer(node, node, 0.0, 0, (node,))


def balanced_capacity(n: int, n_fixed: int, p: int) -> int:
    """Largest customer count per vehicle that keeps the tours balanced.

    Both tours contain the depot, so the ``n + |S| - 2`` customer visits
    split into two parts differing by at most ``p``.
    """
    return (n + n_fixed - 2 + p) // 2


def to_vrp2(inst: Instance) -> Vrp2Instance:
    """Two-vehicle form of a balanced 2-TSP instance.

    Node 0 is the depot of both vehicles and the separator's location. Each
    other node is a unit-demand customer; fixed nodes are assigned to vehicle
    1 and get a co-located copy assigned to vehicle 2.
    """
    c = inst.matrix
    customers = [separator(0)]
    f1, f2 = [], []
    for v in range(1, inst.n):
        if v in inst.fixed:
            f1.append(len(customers))
        customers.append(aggregate_path((v,), c))
    for v in inst.fixed:
        if v:
            f2.append(len(customers))
            customers.append(aggregate_path((v,), c))
    w = balanced_capacity(inst.n, len(inst.fixed), inst.p)
    return Vrp2Instance(c, tuple(customers), frozenset(f1), frozenset(f2), w, w, (0,), 0)


# ---------------------------------------------------------------------------
# subset DP
# ---------------------------------------------------------------------------

@numba.njit(cache=True)
def _subset_dp(c, lnode, rnode, lint, dem, tag, d1, d2, w1, w2):
    k = lnode.shape[0]
    full = (1 << k) - 1
    size = 1 << k
    inf = np.inf
    wsum = np.zeros(size, dtype=np.int64)
    for mask in range(1, size):
        low = mask & (-mask)
        b = 0
        while (1 << b) != low:
            b += 1
        wsum[mask] = wsum[mask ^ low] + dem[b]
    f1 = 0
    f2 = 0
    for i in range(k):
        if tag[i] == 1:
            f1 |= 1 << i
        elif tag[i] == 2:
            f2 |= 1 << i
    # exit end of i -> entry end of j; exit is R(i) when i was entered at L
    from_r = np.empty((k, 2 * k))
    from_l = np.empty((k, 2 * k))
    for i in range(k):
        for j in range(k):
            from_r[i, 2 * j] = c[rnode[i], lnode[j]]
            from_r[i, 2 * j + 1] = c[rnode[i], rnode[j]]
            from_l[i, 2 * j] = c[lnode[i], lnode[j]]
            from_l[i, 2 * j + 1] = c[lnode[i], rnode[j]]

    # value[J, 2 * i + side]: best completion entering i at left (0) or right (1)
    value = np.full((size, 2 * k), inf)
    # successor code 2 * j + side, -1 when undefined
    succ = np.full((size, 2 * k), -1, dtype=np.int16)
    codes = np.empty(2 * k, dtype=np.int64)
    cand = np.empty(2 * k)

    for jm in range(size):
        zero_in = jm & 1
        # capacity and F1 tests that do not depend on the entered customer
        if zero_in:
            if wsum[full ^ jm] > w1:
                continue
        elif wsum[jm] > w2 or jm & f1:
            continue
        # finite continuations out of subset jm
        nc = 0
        for j in range(k):
            bj = 1 << j
            if jm & bj:
                rest = jm ^ bj
                for side in range(2):
                    x = value[rest, 2 * j + side]
                    if x < inf:
                        codes[nc] = 2 * j + side
                        cand[nc] = x
                        nc += 1
        if jm != 0 and nc == 0:
            continue
        for i in range(k):
            bi = 1 << i
            if jm & bi:
                continue
            before = full ^ jm ^ bi
            if i == 0:
                if jm == 0 or before == 0:
                    continue
                if wsum[before] > w1 or wsum[jm] > w2:
                    continue
                if jm & f1 or before & f2:
                    continue
            elif zero_in:
                if tag[i] == 2 or before & f2:
                    continue
                if wsum[before] + dem[i] > w1:
                    continue
            else:
                if tag[i] == 1 or jm & f1:
                    continue
                if wsum[jm] + dem[i] > w2:
                    continue
            if jm == 0:
                value[0, 2 * i] = lint[i] + c[rnode[i], d2]
                value[0, 2 * i + 1] = lint[i] + c[lnode[i], d2]
                continue
            exclude = f2 if (zero_in and i != 0) else f1
            best_l = inf
            best_r = inf
            code_l = -1
            code_r = -1
            for t in range(nc):
                code = codes[t]
                if exclude & (1 << (code >> 1)):
                    continue
                v = from_r[i, code] + cand[t]
                if v < best_l:
                    best_l = v
                    code_l = code
                v = from_l[i, code] + cand[t]
                if v < best_r:
                    best_r = v
                    code_r = code
            if code_l >= 0:
                value[jm, 2 * i] = lint[i] + best_l
                succ[jm, 2 * i] = code_l
            if code_r >= 0:
                value[jm, 2 * i + 1] = lint[i] + best_r
                succ[jm, 2 * i + 1] = code_r

    best = inf
    first = -1
    for i in range(1, k):
        if tag[i] == 2:
            continue
        rest = full ^ (1 << i)
        for side in range(2):
            entry = lnode[i] if side == 0 else rnode[i]
            v = c[d1, entry] + value[rest, 2 * i + side]
            if v < best:
                best = v
                first = 2 * i + side

    order = np.full(k, -1, dtype=np.int64)
    flips = np.zeros(k, dtype=np.bool_)
    if first < 0:
        return best, order, flips
    code = first
    jm = full
    for pos in range(k):
        i = code >> 1
        order[pos] = i
        flips[pos] = (code & 1) == 1
        jm ^= 1 << i
        if jm == 0:
            break
        code = succ[jm, code]
    return best, order, flips


def route_value(v: Vrp2Instance, order: Sequence[int], flipped: Sequence[bool]) -> float:
    """Total route length of an oriented customer order (exactly rounded sum)."""
    c = v.base_matrix
    parts = [v.d1_offset]
    pos = v.d1
    for i, flip in zip(order, flipped):
        cust = v.customers[i]
        entry, exit_ = (cust.right, cust.left) if flip else (cust.left, cust.right)
        parts.append(c[pos, entry])
        parts.append(cust.length)
        pos = exit_
    parts.append(c[pos, v.d2])
    return math.fsum(parts)


def solve_vrp2_exact(v: Vrp2Instance, cap: int = DEFAULT_EXACT_CAP) -> Vrp2Solution:
    """Optimal two-vehicle route by the subset DP.

    ``cap`` bounds the number of customers including the separator; memory
    grows as ``size * 2**size``.
    """
    k = v.size
    if k > cap:
        raise ValueError(f"{k} customers exceed the exact-size cap {cap}")
    lnode = np.array(v.left, dtype=np.int64)
    rnode = np.array(v.right, dtype=np.int64)
    lint = np.array(v.length, dtype=float)
    dem = np.array(v.demand, dtype=np.int64)
    best, order, flips = _subset_dp(np.ascontiguousarray(v.base_matrix, dtype=float),
                                    lnode, rnode, lint, dem, v.tags(),
                                    v.d1, v.d2, v.w1, v.w2)
    if not np.isfinite(best):
        raise InfeasibleError("no feasible two-vehicle route (capacities too tight?)")
    order_t = tuple(int(i) for i in order)
    flips_t = tuple(bool(f) for f in flips)
    return Vrp2Solution(order_t, flips_t, route_value(v, order_t, flips_t))


def route_nodes(sol: Vrp2Solution, v: Vrp2Instance) -> list[int]:
    """Original node walk ``d1_path, customer paths..., d2``."""
    nodes = list(v.d1_path)
    for i, flip in zip(sol.order, sol.flipped):
        path = v.customers[i].path
        nodes.extend(path[::-1] if flip else path)
    nodes.append(v.d2)
    return nodes


def expand_route(sol: Vrp2Solution, v: Vrp2Instance) -> TwoTourSequence:
    """Replace every customer by its sub-path; the separator becomes the
    middle copy of the depot."""
    return TwoTourSequence(route_nodes(sol, v))


def solution_problems(sol: Vrp2Solution, v: Vrp2Instance) -> list[str]:
    """Violated route invariants of ``sol``; empty when feasible."""
    problems = []
    if sorted(sol.order) != list(range(v.size)):
        problems.append("order is not a permutation of the customers")
        return problems
    z = sol.separator_position
    before, after = sol.order[:z], sol.order[z + 1:]
    if any(i in v.f2 for i in before):
        problems.append("an F2 customer precedes customer 0")
    if any(i in v.f1 for i in after):
        problems.append("an F1 customer follows customer 0")
    if sum(v.customers[i].demand for i in before) > v.w1:
        problems.append("vehicle 1 over capacity")
    if sum(v.customers[i].demand for i in after) > v.w2:
        problems.append("vehicle 2 over capacity")
    return problems
