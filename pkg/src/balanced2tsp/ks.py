"""Kalmanson-sequence heuristic: renumber the nodes along a good TSP tour and
run the exact Kalmanson DP on the renumbered matrix."""

from __future__ import annotations

import numpy as np

from .exact_dp import solve_kalmanson_exact
from .instance import Instance
from .kalmanson import permute_matrix
from .tours import Solution, TwoTourSequence, improve_tours, nearest_neighbour, sequence_length, two_opt


def renumbering_tour(inst: Instance, start: int = 0) -> list[int]:
    """Nearest neighbour from ``start`` improved by 2-opt, beginning at node 0."""
    return two_opt(nearest_neighbour(inst.matrix, start), inst.matrix)


def ks_solve(inst: Instance, start: int = 0) -> Solution:
    tau = np.asarray(renumbering_tour(inst, start))
    position = np.empty(inst.n, dtype=int)
    position[tau] = np.arange(inst.n)
    renumbered = Instance(permute_matrix(inst.matrix, tau),
                          tuple(int(position[f]) for f in inst.fixed), inst.p)
    q = solve_kalmanson_exact(renumbered).sequence
    q = TwoTourSequence(tau[list(q.nodes)])
    q = improve_tours(q, inst.matrix)
    return Solution(q, sequence_length(q, inst.matrix))


def ks_all(inst: Instance) -> list[Solution]:
    """KS results for every start node, indexed by start."""
    return [ks_solve(inst, start) for start in range(inst.n)]


def ks_multi(inst: Instance) -> Solution:
    """Best KS result over all start nodes; ties keep the lowest start."""
    best = None
    for sol in ks_all(inst):
        if best is None or sol.length < best.length:
            best = sol
    return best
