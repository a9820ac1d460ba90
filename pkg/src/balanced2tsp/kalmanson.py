"""Kalmanson matrix recognition and the master tour."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class KalmansonWitness:
    """A violated quadruple ``i < j < l < m`` (0-based).

    ``inequality`` is 1 for ``c_ij + c_lm <= c_il + c_jm`` and 2 for
    ``c_im + c_jl <= c_il + c_jm``; ``violation`` is the amount by which the
    left-hand side exceeds the right-hand side.
    """

    i: int
    j: int
    l: int
    m: int
    inequality: int
    violation: float

    def one_based(self) -> tuple[int, int, int, int]:
        return self.i + 1, self.j + 1, self.l + 1, self.m + 1


def default_tolerance(matrix) -> float:
    return 1e-9 * (1.0 + float(np.max(matrix, initial=0.0)))


def is_kalmanson(matrix, tol: Optional[float] = None) -> tuple[bool, Optional[KalmansonWitness]]:
    """Check both Kalmanson inequalities over all quadruples.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is the
    lexicographically first violating quadruple. ``tol=None`` uses
    :func:`default_tolerance`.
    """
    c = np.asarray(matrix, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError("matrix must be square")
    if not np.array_equal(c, c.T):
        raise ValueError("matrix must be symmetric")
    if tol is None:
        tol = default_tolerance(c)
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    n = c.shape[0]
    for i in range(n - 3):
        for j in range(i + 1, n - 2):
            ls = np.arange(j + 1, n - 1)
            # rows index l, columns index m; entries with m <= l are masked out
            rhs = c[i, ls][:, None] + c[j, :][None, :]
            lhs1 = c[i, j] + c[np.ix_(ls, np.arange(n))]
            lhs2 = c[i, :][None, :] + c[j, ls][:, None]
            upper = np.arange(n)[None, :] > ls[:, None]
            ex1 = np.where(upper, lhs1 - rhs, -np.inf)
            ex2 = np.where(upper, lhs2 - rhs, -np.inf)
            bad = (ex1 > tol) | (ex2 > tol)
            if bad.any():
                r, m = np.argwhere(bad)[0]
                which = 1 if ex1[r, m] > tol else 2
                amount = float(ex1[r, m] if which == 1 else ex2[r, m])
                return False, KalmansonWitness(i, j, int(ls[r]), int(m), which, amount)
    return True, None


def permute_matrix(matrix, perm: Sequence[int]) -> np.ndarray:
    """``result[a][b] = matrix[perm[a]][perm[b]]`` for a 0-based permutation."""
    c = np.asarray(matrix)
    perm = np.asarray(perm, dtype=int)
    n = c.shape[0]
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    return c[np.ix_(perm, perm)]


def cyclic_shift(n: int, k: int) -> np.ndarray:
    """The permutation ``(k, k+1, ..., n-1, 0, ..., k-1)``."""
    return (np.arange(n) + k) % n


def master_tour_length(matrix) -> float:
    """Length of the identity tour ``0, 1, ..., n-1, 0``."""
    c = np.asarray(matrix, dtype=float)
    n = c.shape[0]
    idx = np.arange(n)
    return math.fsum(c[idx, (idx + 1) % n])
