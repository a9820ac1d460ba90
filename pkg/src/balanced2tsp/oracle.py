"""Brute-force reference solvers used to verify the dynamic programs.

``brute_force_2tsp`` enumerates every balanced assignment of the free nodes
and takes each tour's exact optimum from a Held-Karp table over all node
subsets. ``brute_force_vrp2`` enumerates every ordering, every position of
the separator and every orientation of a 2-VRP instance.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .instance import InfeasibleError, Instance
from .tours import Solution, TwoTourSequence, sequence_length

MAX_2TSP_SIZE = 20
MAX_VRP2_CUSTOMERS = 9


def subset_tour_table(matrix):
    """Held-Karp over nodes ``1..n-1`` with node 0 as the anchor.

    Returns ``(best, last, parent)``: ``best[mask]`` is the optimal length of
    a closed tour through node 0 and the nodes of ``mask`` (bit ``v-1`` for
    node ``v``); ``last[mask]`` is its final node before returning to 0 and
    ``parent[mask, j]`` the node preceding ``j`` on the optimal path.
    """
    c = np.asarray(matrix, dtype=float)
    k = c.shape[0] - 1
    size = 1 << k
    g = np.full((size, k), np.inf)
    parent = np.full((size, k), -1, dtype=np.int64)
    for j in range(k):
        g[1 << j, j] = c[0, j + 1]
    masks = np.arange(size)
    pop = np.array([bin(m).count("1") for m in range(size)])
    inner = c[1:, 1:]
    for layer in range(2, k + 1):
        layer_masks = masks[pop == layer]
        for j in range(k):
            sel = layer_masks[(layer_masks >> j) & 1 == 1]
            prev = sel ^ (1 << j)
            cand = g[prev] + inner[:, j][None, :]
            arg = np.argmin(cand, axis=1)
            g[sel, j] = cand[np.arange(len(sel)), arg]
            parent[sel, j] = arg
    closing = g + c[1:, 0][None, :]
    last = np.argmin(closing, axis=1)
    best = closing[masks, last]
    best[0] = 0.0
    return best, last, parent


def _tour_from_table(mask: int, last, parent) -> list[int]:
    if mask == 0:
        return [0]
    rev = []
    j = int(last[mask])
    while mask:
        rev.append(j + 1)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj
    tour = [0] + rev[::-1]
    # canonical orientation
    flipped = [0] + tour[1:][::-1]
    return min(tour, flipped)


def brute_force_2tsp(inst: Instance, cap: int = MAX_2TSP_SIZE) -> Solution:
    """Optimal balanced pair of tours by exhaustive enumeration."""
    n = inst.n
    if n + len(inst.fixed) > cap:
        raise ValueError(f"instance too large for the oracle (n + |S| > {cap})")
    lo, hi = inst.size_bounds
    if lo > hi:
        raise InfeasibleError("empty balance window")
    best, last, parent = subset_tour_table(inst.matrix)

    fixed_mask = 0
    for f in inst.fixed:
        if f:
            fixed_mask |= 1 << (f - 1)
    free = [v for v in range(1, n) if v not in inst.fixed]
    n_fixed_tour = len(inst.fixed)  # node 0 plus the other fixed nodes
    a = np.arange(1 << len(free))
    m1 = np.full(len(a), fixed_mask)
    m2 = np.full(len(a), fixed_mask)
    bits = np.array([1 << (v - 1) for v in free], dtype=np.int64)
    sizes1 = np.full(len(a), n_fixed_tour)
    for b, bit in enumerate(bits):
        on = (a >> b) & 1 == 1
        m1 = np.where(on, m1 | bit, m1)
        m2 = np.where(on, m2, m2 | bit)
        sizes1 = sizes1 + on
    sizes2 = n + len(inst.fixed) - sizes1
    ok = (sizes1 >= lo) & (sizes1 <= hi) & (sizes2 >= lo) & (sizes2 <= hi)
    if not ok.any():
        raise InfeasibleError("no balanced assignment exists")
    total = np.where(ok, best[m1] + best[m2], np.inf)
    target = total.min()
    near = np.flatnonzero(total <= target * (1 + 1e-12) + 1e-300)
    found = None
    for idx in near:
        q = TwoTourSequence.from_tours(_tour_from_table(int(m1[idx]), last, parent),
                                       _tour_from_table(int(m2[idx]), last, parent))
        key = (sequence_length(q, inst.matrix), q.nodes)
        if found is None or key < found:
            found = key
    length, nodes = found
    return Solution(TwoTourSequence(nodes), length)


def brute_force_vrp2(v, cap: int = MAX_VRP2_CUSTOMERS):
    """Optimal two-vehicle route of a :class:`~balanced2tsp.vrp2.Vrp2Instance`
    by enumerating orderings, separator positions and orientations."""
    from .vrp2 import Vrp2Solution, route_value

    k = v.size
    if k > cap:
        raise ValueError(f"too many customers for the oracle ({k} > {cap})")
    c = v.base_matrix
    ends = [(v.left[i], v.right[i]) for i in range(k)]
    free_orient = [i for i in range(1, k) if ends[i][0] != ends[i][1]]
    const = math.fsum(v.length) + v.d1_offset
    demand = v.demand
    best = None
    for order in itertools.permutations(range(k)):
        zpos = order.index(0)
        before, after = order[:zpos], order[zpos + 1:]
        if not before or not after:
            continue
        if any(i in v.f2 for i in before) or any(i in v.f1 for i in after):
            continue
        if sum(demand[i] for i in before) > v.w1 or sum(demand[i] for i in after) > v.w2:
            continue
        for flips in itertools.product((False, True), repeat=len(free_orient)):
            flipped = dict(zip(free_orient, flips))
            pos = v.d1
            edges = []
            for i in order:
                entry, exit_ = ends[i]
                if flipped.get(i, False):
                    entry, exit_ = exit_, entry
                edges.append(c[pos, entry])
                pos = exit_
            edges.append(c[pos, v.d2])
            value = math.fsum(edges) + const
            orient = tuple(flipped.get(i, False) for i in order)
            key = (value, order, orient)
            if best is None or key < best:
                best = key
    if best is None:
        raise InfeasibleError("no feasible two-vehicle route")
    _, order, orient = best
    return Vrp2Solution(order, orient, route_value(v, order, orient))
