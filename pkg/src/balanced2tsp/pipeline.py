"""Top-level driver: draw initial sequences (KS or random partition) and
improve each with sliding windows, per-tour 2-opt and tour swaps."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Optional

from .instance import Instance, make_rng
from .ks import ks_all
from .sliding import h_improve
from .tours import (
    TwoTourSequence,
    improve_tours,
    improves,
    sequence_length,
    swap_tours,
    two_opt,
)
from .vrp2 import DEFAULT_EXACT_CAP

__all__ = [
    "PRESETS",
    "Record",
    "SolverConfig",
    "preset",
    "rp_initial",
    "run_pipeline",
    "swap_tours",
]


@dataclass(frozen=True)
class SolverConfig:
    init: str = "ks"
    s: int = 5
    l: int = 3
    max_iters: Optional[int] = 36
    time_limit: Optional[float] = None
    seed: int = 0
    exact_cap: int = DEFAULT_EXACT_CAP

    def __post_init__(self) -> None:
        if self.init not in ("ks", "rp"):
            raise ValueError(f"unknown init {self.init!r} (expected 'ks' or 'rp')")
        if self.s < 1 or self.l < 1:
            raise ValueError("s and l must be positive")
        if self.max_iters is None and self.time_limit is None:
            raise ValueError("set max_iters, time_limit or both")
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.time_limit is not None and self.time_limit < 0:
            raise ValueError("time_limit must be non-negative")
        if 2 * self.s + 4 > self.exact_cap:
            raise ValueError(f"s={self.s} needs sub-instances larger than exact_cap={self.exact_cap}")


# (s, l, number of initial solutions)
PRESETS = {
    "h42x48": (4, 2, 48),
    "h53x36": (5, 3, 36),
    "h64x24": (6, 4, 24),
    "h75x12": (7, 5, 12),
}


def preset(name: str, **overrides) -> SolverConfig:
    """Config for a named preset; keyword arguments override its fields."""
    try:
        s, l, iters = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return replace(SolverConfig(s=s, l=l, max_iters=iters), **overrides)


@dataclass
class Record:
    sequence: TwoTourSequence
    length: float
    iteration: int
    seconds: float
    initial_lengths: list = field(default_factory=list)
    iterations_run: int = 0


def rp_initial(inst: Instance, seed: int) -> TwoTourSequence:
    """Random feasible pair of tours.

    All non-depot visits (free nodes, fixed nodes and one copy of every fixed
    node) are shuffled; the first half goes to tour 1 and the rest to tour 2,
    except that originals of fixed nodes always go to tour 1 and their copies
    to tour 2. Free nodes are then moved across from the boundary of the
    longer tour until the sizes are balanced, and each tour gets 2-opt.
    """
    fixed = [f for f in inst.fixed if f]
    items = [(v, "free") for v in range(1, inst.n) if v not in inst.fixed]
    items += [(v, "orig") for v in fixed] + [(v, "copy") for v in fixed]
    perm = make_rng(seed).permutation(len(items))
    half = (len(items) + 1) // 2
    t1, t2 = [], []
    for pos, idx in enumerate(perm):
        v, kind = items[idx]
        if kind == "orig" or (kind == "free" and pos < half):
            t1.append((v, kind))
        else:
            t2.append((v, kind))

    _, hi = inst.size_bounds
    while len(t1) + 1 > hi:
        pos = max(i for i, (_, kind) in enumerate(t1) if kind == "free")
        t2.insert(0, t1.pop(pos))
    while len(t2) + 1 > hi:
        pos = min(i for i, (_, kind) in enumerate(t2) if kind == "free")
        t1.append(t2.pop(pos))

    c = inst.matrix
    tour1 = two_opt([0] + [v for v, _ in t1], c)
    tour2 = two_opt([0] + [v for v, _ in t2], c)
    return TwoTourSequence.from_tours(tour1, tour2)


def _ks_initials(inst: Instance) -> Iterator[TwoTourSequence]:
    # distinct KS results, shortest first (ties by start node)
    sols = sorted(enumerate(ks_all(inst)), key=lambda t: (t[1].length, t[0]))
    seen = set()
    for _, sol in sols:
        if sol.sequence.nodes not in seen:
            seen.add(sol.sequence.nodes)
            yield sol.sequence


def _rp_initials(inst: Instance, seed: int) -> Iterator[TwoTourSequence]:
    it = 0
    while True:
        yield rp_initial(inst, seed + it)
        it += 1


def run_pipeline(inst: Instance, cfg: SolverConfig, *,
                 on_sequence: Optional[Callable[[TwoTourSequence], None]] = None) -> Record:
    """Best pair of tours found from up to ``cfg.max_iters`` initial sequences.

    Each initial sequence is improved by repeated passes of sliding windows
    followed by 2-opt on both tours, swapping the tours after every pass.
    The chain stops after two consecutive passes without improvement. The
    time limit is checked between window placements; with ``time_limit=0``
    the first initial sequence is returned as is. ``on_sequence`` sees every
    intermediate sequence.
    """
    start = time.perf_counter()
    deadline = None if cfg.time_limit is None else start + cfg.time_limit
    c = inst.matrix
    source = _ks_initials(inst) if cfg.init == "ks" else _rp_initials(inst, cfg.seed)
    cache: set = set()
    record: Optional[Record] = None

    def expired() -> bool:
        return deadline is not None and time.perf_counter() >= deadline

    for it, q in enumerate(source):
        if cfg.max_iters is not None and it >= cfg.max_iters:
            break
        if record is not None and expired():
            break
        length = sequence_length(q, c)
        if record is None:
            record = Record(q, length, it, time.perf_counter() - start)
        record.initial_lengths.append(length)
        record.iterations_run = it + 1
        if improves(length, record.length):
            record.sequence, record.length = q, length
            record.iteration, record.seconds = it, time.perf_counter() - start
        if on_sequence is not None:
            on_sequence(q)

        idle = 0
        while idle < 2 and not expired():
            q = h_improve(q, cfg.s, cfg.l, inst, exact_cap=cfg.exact_cap,
                          deadline=deadline, cache=cache)
            q = improve_tours(q, c)
            new_length = sequence_length(q, c)
            if on_sequence is not None:
                on_sequence(q)
            if improves(new_length, length):
                length = new_length
                idle = 0
            else:
                idle += 1
            if improves(length, record.length):
                record.sequence, record.length = q, length
                record.iteration, record.seconds = it, time.perf_counter() - start
            q = swap_tours(q)
    return record
