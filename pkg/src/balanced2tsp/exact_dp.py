"""Exact O(n^3) dynamic program for the balanced 2-TSP on Kalmanson matrices.

Nodes are inserted into the sequence ``0, ..., 0(middle), ..., 0`` in index
order. After nodes ``0..k`` are placed, a state is described by the last node
of the first tour (left frontier), the first node of the second tour's
partial tail (right frontier) and ``m``, the number of nodes in that tail
including the closing copy of node 0. One frontier is always ``k``; the other
one, ``o <= k``, is a free index. Three families of states exist per layer:

* ``left[k][o, m]``:  left frontier ``k``, right frontier ``o < k``
* ``right[k][o, m]``: right frontier ``k``, left frontier ``o < k``
* ``both[k][m]``:     both frontiers at ``k`` (``k`` fixed, or the start)

Each value is the minimal length of the remaining part of the sequence. A
state is infeasible when a fixed node lies in ``(o, k]``, because such a node
would only be on one side. The first tour comes out in increasing and the
second in decreasing node order, which is optimal whenever the matrix is
Kalmanson; on any other matrix the result is still a feasible sequence.
"""

from __future__ import annotations

import numpy as np

from .instance import InfeasibleError, Instance
from .tours import Solution, TwoTourSequence, sequence_length

INF = np.inf


def dp_boundary(i: int, m: int, inst: Instance) -> float:
    """Value of a final-layer state: the closing path through the middle node.

    ``i`` is the frontier that is not ``n - 1``; returns ``c[i][0] + c[0][n-1]``
    when the second tour size ``m`` is admissible and no fixed node lies
    strictly after ``i``, otherwise ``inf``.
    """
    n = inst.n
    c = inst.matrix
    lo, hi = inst.size_bounds
    if not inst.s_star <= i < n:
        return INF
    if not lo <= m <= hi:
        return INF
    return float(c[i, 0] + c[0, n - 1])


def _next_fixed(inst: Instance) -> np.ndarray:
    """``nf[o]`` = smallest fixed node greater than ``o`` (``n`` if none)."""
    n = inst.n
    nf = np.full(n, n, dtype=int)
    nxt = n
    for o in range(n - 1, -1, -1):
        nf[o] = nxt
        if o in inst.fixed:
            nxt = o
    return nf


def _shift(arr: np.ndarray) -> np.ndarray:
    """``out[..., m] = arr[..., m + 1]`` with ``inf`` in the last slot."""
    out = np.empty_like(arr)
    out[..., :-1] = arr[..., 1:]
    out[..., -1] = INF
    return out


def solve_kalmanson_exact(inst: Instance) -> Solution:
    """Optimal balanced pair of tours when ``inst.matrix`` is Kalmanson.

    Runs in ``Theta(n^2 (n + p))`` time with ``O(1)`` work per state and
    returns the sequence together with its length.
    """
    n = inst.n
    c = inst.matrix
    lo, hi = inst.size_bounds
    if lo > hi:
        raise InfeasibleError("empty balance window")
    fixed = np.zeros(n, dtype=bool)
    fixed[list(inst.fixed)] = True
    nf = _next_fixed(inst)
    width = hi + 2
    ms = np.arange(width)
    admissible = (ms >= lo) & (ms <= hi)

    # choice tables: True = the next node went to the second tour
    dec_left: list = [None] * n
    dec_right: list = [None] * n
    dec_both: list = [None] * n

    last = n - 1
    rows = np.arange(last)
    ok = (nf[rows] > last)[:, None] & admissible[None, :]
    left = np.where(ok, (c[last, 0] + c[0, rows])[:, None], INF)
    right = np.where(ok, (c[rows, 0] + c[0, last])[:, None], INF)
    both = np.where(admissible, c[last, 0] + c[0, last], INF) if fixed[last] else None

    for k in range(n - 2, -1, -1):
        t = k + 1
        rows = np.arange(k)
        has_both = fixed[k] or k == 0
        if fixed[t]:
            nb = _shift(both)
            new_left = (c[k, t] + c[t, rows])[:, None] + nb[None, :]
            new_right = (c[rows, t] + c[t, k])[:, None] + nb[None, :]
            new_both = c[k, t] + c[t, k] + nb if has_both else None
        else:
            right_up = _shift(right)
            # left frontier k, right frontier o
            a = c[k, t] + left[:k]
            b = c[t, rows][:, None] + right_up[k][None, :]
            dec_left[k] = b < a
            new_left = np.where(dec_left[k], b, a)
            # left frontier o, right frontier k
            a = c[rows, t][:, None] + left[k][None, :]
            b = c[t, k] + right_up[:k]
            dec_right[k] = b < a
            new_right = np.where(dec_right[k], b, a)
            new_both = None
            if has_both:
                a = c[k, t] + left[k]
                b = c[t, k] + right_up[k]
                dec_both[k] = b < a
                new_both = np.where(dec_both[k], b, a)
        feasible = (nf[rows] > k)[:, None]
        left = np.where(feasible, new_left, INF)
        right = np.where(feasible, new_right, INF)
        both = new_both

    best = both[1]
    if not np.isfinite(best):
        raise InfeasibleError("no feasible balanced pair of tours")

    first = [0]
    tail = []
    kind, o, m = "both", 0, 1
    for t in range(1, n):
        k = t - 1
        if fixed[t]:
            first.append(t)
            tail.append(t)
            kind, m = "both", m + 1
            continue
        if kind == "left":
            to_second = dec_left[k][o, m]
        elif kind == "right":
            to_second = dec_right[k][o, m]
        else:
            to_second = dec_both[k][m]
        if to_second:
            tail.append(t)
            m += 1
            if kind != "right":
                kind, o = "right", k
        else:
            first.append(t)
            if kind != "left":
                kind, o = "left", k
    q = TwoTourSequence.from_tours(first, [0] + tail[::-1])
    return Solution(q, sequence_length(q, c))
