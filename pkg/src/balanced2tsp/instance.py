"""Problem instances: distance matrices, the BALANCED2TSP text format and
seeded instance generators.

Nodes are 0-based everywhere in the Python API; node 0 is the start
location. The text format and all printed output are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

ROUNDING_MODES = ("exact", "nearest")
GENERATOR_MODES = ("uniform-square", "kalmanson-convex")

# side of the square used by uniform-square generation
SQUARE_SIDE = 1000.0
CIRCLE_RADIUS = 500.0


class InstanceError(ValueError):
    """Raised when an instance violates one of its invariants."""


class ParseError(InstanceError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InfeasibleError(ValueError):
    """Raised when no feasible pair of balanced tours (or 2-VRP route) exists."""


def euclidean_matrix(coords, rounding: str = "exact") -> np.ndarray:
    """Pairwise Euclidean distances of planar points.

    ``rounding="nearest"`` rounds every distance to the nearest integer
    (half away from zero, as in TSPLIB ``nint``).
    """
    pts = np.asarray(coords, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InstanceError("coordinates must be a sequence of (x, y) pairs")
    if len(pts) < 2:
        raise InstanceError("at least 2 points are required")
    if not np.all(np.isfinite(pts)):
        raise InstanceError("non-finite coordinate")
    if rounding not in ROUNDING_MODES:
        raise InstanceError(f"unknown rounding mode {rounding!r}")
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt(diff[..., 0] ** 2 + diff[..., 1] ** 2)
    if rounding == "nearest":
        d = np.floor(d + 0.5)
    # hypot-style sums are symmetric already; make it structurally exact
    d = np.triu(d, 1)
    return d + d.T


def _check_matrix(d: np.ndarray) -> None:
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise InstanceError("distance matrix must be square")
    if d.shape[0] < 2:
        raise InstanceError("at least 2 nodes are required")
    if not np.all(np.isfinite(d)):
        raise InstanceError("distance matrix has non-finite entries")
    if np.any(d < 0):
        raise InstanceError("distance matrix has negative entries")
    if np.any(np.diag(d) != 0):
        raise InstanceError("distance matrix has a non-zero diagonal")
    if not np.array_equal(d, d.T):
        i, j = np.argwhere(d != d.T)[0]
        raise InstanceError(f"asymmetric distance matrix: d[{i + 1}][{j + 1}] != d[{j + 1}][{i + 1}]")


def tour_size_bounds(n: int, n_fixed: int, p: int) -> tuple[int, int]:
    """Inclusive bounds on the number of nodes of each tour (node 0 counted once)."""
    total = n + n_fixed
    return -((p - total) // 2), (total + p) // 2


@dataclass(frozen=True, eq=False)
class Instance:
    """A balanced 2-TSP instance.

    Attributes:
        matrix: symmetric ``n x n`` distance matrix with zero diagonal.
        fixed: sorted tuple of nodes visited in both periods; always contains 0.
        p: maximum allowed difference between the two tour sizes.
        coords: optional ``n x 2`` array of planar coordinates.
        rounding: rounding mode the matrix was derived with when ``coords`` is set.
    """

    matrix: np.ndarray
    fixed: tuple
    p: int = 1
    coords: Optional[np.ndarray] = None
    rounding: str = "exact"
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        d = np.array(self.matrix, dtype=float)
        _check_matrix(d)
        d.setflags(write=False)
        object.__setattr__(self, "matrix", d)
        n = d.shape[0]

        fixed = tuple(sorted({int(f) for f in self.fixed}))
        if 0 not in fixed:
            raise InstanceError("the start node must be a fixed node")
        if fixed[-1] >= n or fixed[0] < 0:
            raise InstanceError("fixed node out of range")
        object.__setattr__(self, "fixed", fixed)

        if int(self.p) != self.p or self.p < 0:
            raise InstanceError("p must be a non-negative integer")
        object.__setattr__(self, "p", int(self.p))

        if self.coords is not None:
            c = np.array(self.coords, dtype=float)
            if c.shape != (n, 2):
                raise InstanceError("need exactly one coordinate pair per node")
            if not np.array_equal(euclidean_matrix(c, self.rounding), d):
                raise InstanceError("matrix does not match the coordinates")
            c.setflags(write=False)
            object.__setattr__(self, "coords", c)

        lo, hi = self.size_bounds
        if lo > hi:
            raise InstanceError(
                f"parity infeasible: n + |S| = {n + len(fixed)} is odd and p = 0"
            )

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def s_star(self) -> int:
        """Largest fixed node."""
        return self.fixed[-1]

    @property
    def size_bounds(self) -> tuple[int, int]:
        return tour_size_bounds(self.n, len(self.fixed), self.p)

    def is_fixed(self, node: int) -> bool:
        return node in self._fixed_set

    @property
    def _fixed_set(self) -> frozenset:
        return frozenset(self.fixed)

    def with_p(self, p: int) -> "Instance":
        return Instance(self.matrix, self.fixed, p, self.coords, self.rounding, self.name)

    def with_fixed(self, fixed: Sequence[int]) -> "Instance":
        return Instance(self.matrix, tuple(fixed), self.p, self.coords, self.rounding, self.name)

    def same_as(self, other: "Instance") -> bool:
        if (self.fixed, self.p, self.rounding) != (other.fixed, other.p, other.rounding):
            return False
        if (self.coords is None) != (other.coords is None):
            return False
        if self.coords is not None and not np.array_equal(self.coords, other.coords):
            return False
        return np.array_equal(self.matrix, other.matrix)


def from_coords(coords, fixed, p: int = 1, rounding: str = "exact", name: str = "") -> Instance:
    coords = np.asarray(coords, dtype=float)
    return Instance(euclidean_matrix(coords, rounding), tuple(fixed), p, coords, rounding, name)


# ---------------------------------------------------------------------------
# BALANCED2TSP text format
# ---------------------------------------------------------------------------

def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _num(tok: str, lineno: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(lineno, f"expected a number, got {tok!r}") from None
    if not math.isfinite(v):
        raise ParseError(lineno, f"non-finite number {tok!r}")
    return v


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected an integer, got {tok!r}") from None


def load_instance(text: str, name: str = "") -> Instance:
    """Parse a BALANCED2TSP document into a validated :class:`Instance`."""
    lines = list(_tokens(text))
    if not lines:
        raise ParseError(1, "empty document")
    lineno, toks = lines[0]
    if toks[0] != "BALANCED2TSP":
        raise ParseError(lineno, "missing BALANCED2TSP header")
    if len(toks) != 2 or toks[1] != "1":
        raise ParseError(lineno, "unsupported format version")

    n = p = None
    fixed = None
    rounding = "exact"
    body = None
    pos = 1
    while pos < len(lines):
        lineno, toks = lines[pos]
        key = toks[0].upper()
        pos += 1
        if key == "N":
            if len(toks) != 2:
                raise ParseError(lineno, "N takes one value")
            n = _int(toks[1], lineno)
            if n < 2:
                raise ParseError(lineno, "N must be at least 2")
        elif key == "P":
            if len(toks) != 2:
                raise ParseError(lineno, "P takes one value")
            p = _int(toks[1], lineno)
        elif key == "FIXED":
            fixed = [_int(t, lineno) for t in toks[1:]]
            if not fixed:
                raise ParseError(lineno, "FIXED needs at least node 1")
        elif key == "ROUNDING":
            if len(toks) != 2 or toks[1] not in ROUNDING_MODES:
                raise ParseError(lineno, f"ROUNDING must be one of {ROUNDING_MODES}")
            rounding = toks[1]
        elif key in ("COORDS", "MATRIX"):
            body = key
            break
        else:
            raise ParseError(lineno, f"unknown keyword {toks[0]!r}")
    if n is None:
        raise ParseError(lineno, "missing N")
    if p is None:
        raise ParseError(lineno, "missing P")
    if fixed is None:
        raise ParseError(lineno, "missing FIXED")
    if body is None:
        raise ParseError(lineno, "missing COORDS or MATRIX section")

    rows = lines[pos:]
    if len(rows) != n:
        where = rows[n][0] if len(rows) > n else lineno
        raise ParseError(where, f"expected {n} data lines, found {len(rows)}")
    for f in fixed:
        if not 1 <= f <= n:
            raise InstanceError(f"fixed node {f} out of range 1..{n}")

    try:
        if body == "COORDS":
            coords = np.empty((n, 2))
            seen = set()
            for lineno, toks in rows:
                if len(toks) != 3:
                    raise ParseError(lineno, "coordinate lines are '<id> <x> <y>'")
                i = _int(toks[0], lineno)
                if not 1 <= i <= n or i in seen:
                    raise ParseError(lineno, f"bad or repeated node id {i}")
                seen.add(i)
                coords[i - 1] = (_num(toks[1], lineno), _num(toks[2], lineno))
            return from_coords(coords, [f - 1 for f in fixed], p, rounding, name)
        d = np.empty((n, n))
        for r, (lineno, toks) in enumerate(rows):
            if len(toks) != n:
                raise ParseError(lineno, f"matrix row needs {n} entries")
            d[r] = [_num(t, lineno) for t in toks]
        return Instance(d, tuple(f - 1 for f in fixed), p, name=name)
    except ParseError:
        raise
    except InstanceError as exc:
        raise InstanceError(f"validation error: {exc}") from None


def read_instance(path) -> Instance:
    from pathlib import Path

    path = Path(path)
    return load_instance(path.read_text(), name=path.stem)


def save_instance(inst: Instance) -> str:
    """Serialize to BALANCED2TSP text; floats use shortest round-trip repr."""
    out = ["BALANCED2TSP 1", f"N {inst.n}", f"P {inst.p}",
           "FIXED " + " ".join(str(f + 1) for f in inst.fixed)]
    if inst.coords is not None:
        if inst.rounding != "exact":
            out.append(f"ROUNDING {inst.rounding}")
        out.append("COORDS")
        for i, (x, y) in enumerate(inst.coords, start=1):
            out.append(f"{i} {float(x)!r} {float(y)!r}")
    else:
        out.append("MATRIX")
        for row in inst.matrix:
            out.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(out) + "\n"


def write_instance(inst: Instance, path) -> None:
    from pathlib import Path

    Path(path).write_text(save_instance(inst))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; streams are identical on every platform numpy supports."""
    return np.random.Generator(np.random.PCG64(seed))


def generate_instance(n: int, fixed_count: int, seed: int,
                      mode: str = "uniform-square", p: int = 1) -> Instance:
    """Random instance, a pure function of its arguments.

    ``uniform-square`` draws i.i.d. points in a square of side ``SQUARE_SIDE``.
    ``kalmanson-convex`` draws points on a circle, numbered by angle, so the
    distance matrix satisfies the Kalmanson conditions. Consecutive angles are
    jittered around an even grid, which keeps points well separated and the
    inequalities strict enough to survive floating-point rounding.
    The fixed set is node 0 plus ``fixed_count - 1`` nodes sampled without
    replacement.
    """
    if mode not in GENERATOR_MODES:
        raise ValueError(f"unknown generator mode {mode!r}")
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 1 <= fixed_count <= n:
        raise ValueError("fixed_count must lie in 1..n")
    rng = make_rng(seed)
    if mode == "uniform-square":
        coords = rng.uniform(0.0, SQUARE_SIDE, size=(n, 2))
    else:
        jitter = rng.uniform(-0.35, 0.35, size=n)
        theta = 2.0 * np.pi * (np.arange(n) + jitter) / n
        coords = CIRCLE_RADIUS * np.column_stack([np.cos(theta), np.sin(theta)])
        coords += CIRCLE_RADIUS
    others = rng.choice(np.arange(1, n), size=fixed_count - 1, replace=False)
    fixed = (0, *sorted(int(v) for v in others))
    return from_coords(coords, fixed, p, name=f"{mode}-n{n}-f{fixed_count}-s{seed}")
