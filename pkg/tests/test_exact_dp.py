import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from balanced2tsp import (
    InfeasibleError,
    Instance,
    brute_force_2tsp,
    dp_boundary,
    from_coords,
    generate_instance,
    solve_kalmanson_exact,
    validate_sequence,
)

from conftest import line


def test_line_examples():
    sol = solve_kalmanson_exact(line(4))
    assert sol.length == 8
    assert sorted(map(sorted, (sol.sequence.tour1, sol.sequence.tour2))) == [[0, 1], [0, 2, 3]]
    assert solve_kalmanson_exact(line(4, fixed=(0, 2))).length == 10
    for p in (0, 1, 3):
        assert solve_kalmanson_exact(line(4, fixed=(0, 1, 2, 3), p=p)).length == 12


def test_tour_orders():
    inst = generate_instance(10, 3, 4, mode="kalmanson-convex")
    q = solve_kalmanson_exact(inst).sequence
    assert q.tour1 == sorted(q.tour1)
    assert q.tour2[1:] == sorted(q.tour2[1:], reverse=True)


def test_boundary_examples():
    inst = line(4)
    assert dp_boundary(3, 2, inst) == 6
    assert dp_boundary(3, 1, inst) == math.inf
    assert dp_boundary(1, 2, line(4, fixed=(0, 2))) == math.inf


def test_too_small_or_infeasible():
    with pytest.raises(ValueError):
        Instance(np.zeros((1, 1)), (0,))




def test_random_matrices_are_upper_bounds(rng):
    for _ in range(40):
        n = int(rng.integers(4, 9))
        pts = rng.uniform(0, 100, size=(n, 2))
        fixed = (0, *rng.choice(np.arange(1, n), size=int(rng.integers(0, n - 1)), replace=False))
        p = int(rng.integers(1, 3))
        inst = from_coords(pts, fixed, p)
        sol = solve_kalmanson_exact(inst)
        assert validate_sequence(sol.sequence, inst) == []
        assert sol.length >= brute_force_2tsp(inst).length - 1e-9


@settings(max_examples=60, deadline=None)
@given(n=st.integers(4, 10), seed=st.integers(0, 10**6), data=st.data())
def test_equals_oracle_and_monotone_in_p(n, seed, data):
    f = data.draw(st.integers(1, n))
    lengths = []
    for p in range(0, 4):
        if (n + f + p) % 2 and p == 0:
            continue
        inst = generate_instance(n, f, seed, mode="kalmanson-convex", p=p)
        sol = solve_kalmanson_exact(inst)
        assert validate_sequence(sol.sequence, inst) == []
        assert sol.length == brute_force_2tsp(inst).length
        lengths.append(sol.length)
    assert lengths == sorted(lengths, reverse=True)
