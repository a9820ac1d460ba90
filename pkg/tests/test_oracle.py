import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from balanced2tsp import (
    InstanceError,
    brute_force_2tsp,
    brute_force_vrp2,
    generate_instance,
    sequence_length,
    to_vrp2,
    validate_sequence,
)
from balanced2tsp.tours import TwoTourSequence

from conftest import line

# optimal lengths computed with brute_force_2tsp and frozen; the naive
# enumeration below cross-checks the oracle itself on smaller instances
FROZEN_N9_F3 = {
    ("uniform-square", 0): 5292.157407330931,
    ("uniform-square", 1): 3834.3227550132387,
    ("uniform-square", 2): 4252.554830023123,
    ("kalmanson-convex", 0): 5393.181078717489,
    ("kalmanson-convex", 1): 5400.85364506447,
    ("kalmanson-convex", 2): 5626.045570962761,
}


@pytest.mark.parametrize("key", sorted(FROZEN_N9_F3))
def test_frozen_optima(key):
    mode, seed = key
    inst = generate_instance(9, 3, seed, mode=mode)
    sol = brute_force_2tsp(inst)
    assert sol.length == pytest.approx(FROZEN_N9_F3[key], rel=1e-12)
    assert validate_sequence(sol.sequence, inst) == []
    assert sequence_length(sol.sequence, inst.matrix) == sol.length


def naive_optimum(inst):
    """Every ordered split of the free nodes, every order of every tour."""
    n = inst.n
    fixed = [f for f in inst.fixed if f]
    free = [v for v in range(1, n) if v not in inst.fixed]
    best = math.inf
    for mask in range(1 << len(free)):
        a = fixed + [v for b, v in enumerate(free) if mask >> b & 1]
        b = fixed + [v for b, v in enumerate(free) if not mask >> b & 1]
        q = TwoTourSequence.from_tours([0] + a, [0] + b)
        if validate_sequence(q, inst):
            continue
        la = min(math.fsum(inst.matrix[t[:-1], t[1:]]) for t in
                 (np.array([0, *perm, 0]) for perm in itertools.permutations(a)))
        lb = min(math.fsum(inst.matrix[t[:-1], t[1:]]) for t in
                 (np.array([0, *perm, 0]) for perm in itertools.permutations(b)))
        best = min(best, la + lb)
    return best


@settings(max_examples=40, deadline=None)
@given(n=st.integers(3, 7), seed=st.integers(0, 10**6), data=st.data())
def test_oracle_matches_naive_enumeration(n, seed, data):
    f = data.draw(st.integers(1, n))
    p = data.draw(st.integers(0, 3))
    try:
        inst = generate_instance(n, f, seed, p=p)
    except InstanceError:
        return
    assert brute_force_2tsp(inst).length == pytest.approx(naive_optimum(inst), rel=1e-12)


def test_line_example_and_errors():
    assert brute_force_2tsp(line(4)).length == 8
    with pytest.raises(InstanceError):
        line(4, p=0)
    with pytest.raises(ValueError, match="too large"):
        brute_force_2tsp(generate_instance(15, 6, 0), cap=20)


def test_relaxation_in_p():
    for seed in range(10):
        inst = generate_instance(8, 2, seed)
        assert brute_force_2tsp(inst.with_p(inst.n)).length <= brute_force_2tsp(inst).length


def test_vrp2_oracle_on_line():
    v = to_vrp2(line(4, fixed=(0, 2)))
    assert brute_force_vrp2(v).value == 10
    with pytest.raises(ValueError, match="too many customers"):
        brute_force_vrp2(to_vrp2(generate_instance(12, 2, 0)))


@settings(max_examples=30, deadline=None)
@given(n=st.integers(3, 7), seed=st.integers(0, 10**6), data=st.data())
def test_oracles_agree(n, seed, data):
    f = data.draw(st.integers(1, n))
    p = data.draw(st.integers(1, 2))
    inst = generate_instance(n, f, seed, p=p)
    try:
        v = to_vrp2(inst)
    except ValueError:
        # one vehicle could serve everyone, the reformulation does not apply
        assert n + f - 2 <= p
        return
    if v.size > 8:
        return
    assert brute_force_vrp2(v).value == pytest.approx(brute_force_2tsp(inst).length, rel=1e-12)
