import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from balanced2tsp import (
    InfeasibleError,
    TwoTourSequence,
    WindowConfig,
    brute_force_2tsp,
    disassemble,
    entity_count,
    from_coords,
    generate_instance,
    h_improve,
    rp_initial,
    sequence_length,
    validate_sequence,
    window_placements,
)
from balanced2tsp.sliding import _carve

from conftest import line


def routes(k1, k2, fixed=(0,), p=1):
    """Instance on a line with tour 1 = 1..k1 and tour 2 = k1+1..k1+k2."""
    n = k1 + k2 + 1
    inst = line(n, fixed, p)
    q = TwoTourSequence.from_tours(list(range(k1 + 1)), [0, *range(k1 + 1, n)])
    return inst, q


def paths(v):
    return [c.path for c in v.customers[1:]]


def test_first_placement_splits_the_separating_path():
    inst, q = routes(6, 5)
    cfg = next(window_placements(6, 5, 2, 2))
    assert (cfg.first, cfg.second) == (0, 5)
    v = disassemble(q, cfg, inst)
    # windows t1_1 t1_2 and t1_6 t2_1; path t1_3..t1_5 loses its last node
    assert paths(v) == [(1,), (2,), (3, 4), (5,), (6,), (7,), (8, 9, 10, 11)]
    assert v.d1_path == (0,)
    assert entity_count(v) == 10


def test_second_placement_moves_past_the_separator():
    inst, q = routes(6, 5)
    cfg = list(window_placements(6, 5, 2, 2))[1]
    assert cfg.second == 7
    v, order = _carve(q, cfg, inst)
    assert paths(v) == [(1,), (2,), (3, 4, 5, 6), (7,), (8,), (9,), (10, 11)]
    assert order.index(0) == 3
    assert entity_count(v) == 10


def test_leading_path_is_glued_to_the_depot():
    inst, q = routes(6, 5)
    cfg = next(c for c in window_placements(6, 5, 2, 2) if c.first == 2)
    v = disassemble(q, cfg, inst)
    assert v.d1_path == (0, 1, 2)
    assert v.w1 == v.w2 - 2
    assert entity_count(v) == 10


def test_placements_cover_route_ends():
    k1, k2, s, l = 7, 6, 3, 2
    cfgs = list(window_placements(k1, k2, s, l))
    total = k1 + k2
    firsts = sorted({c.first for c in cfgs})
    assert firsts == [0, 2, 4, 6]
    for a in firsts:
        seconds = [c.second for c in cfgs if c.first == a]
        assert seconds[-1] == total - s
        assert seconds == sorted(seconds)
    for c in cfgs:
        assert c.first < k1 and c.second + s - 1 >= k1 and c.second >= c.first + s


def test_invalid_placement_rejected():
    inst, q = routes(6, 5)
    with pytest.raises(ValueError):
        disassemble(q, WindowConfig(2, 1, 6, 8), inst)


def test_whole_instance_solved_when_small():
    inst = line(8)
    bad = TwoTourSequence.from_tours([0, 5, 2, 7], [0, 3, 6, 1, 4])
    out = h_improve(bad, 2, 1, inst)
    assert sequence_length(out, inst.matrix) == brute_force_2tsp(inst).length
    assert validate_sequence(out, inst) == []


def test_never_worse_and_keeps_fixed_nodes():
    inst = generate_instance(30, 6, 2)
    q = rp_initial(inst, 3)
    out = h_improve(q, 3, 2, inst)
    assert sequence_length(out, inst.matrix) <= sequence_length(q, inst.matrix)
    assert validate_sequence(out, inst) == []


def test_cap_guard():
    inst = generate_instance(30, 6, 2)
    with pytest.raises(ValueError, match="cap"):
        h_improve(rp_initial(inst, 0), 10, 2, inst)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(n=st.integers(10, 26), seed=st.integers(0, 10**6), data=st.data())
def test_every_sub_instance_has_fixed_size(n, seed, data):
    f = data.draw(st.integers(1, n // 2))
    s = data.draw(st.integers(1, 4))
    l = data.draw(st.integers(1, 3))
    inst = generate_instance(n, f, seed, p=data.draw(st.integers(1, 2)))
    q = rp_initial(inst, seed)
    seen = []
    out = h_improve(q, s, l, inst, observer=seen.append)
    for v in seen:
        assert entity_count(v) == 2 * s + 6
        # intermediate sequences all visit the same multiset of nodes
        nodes = sorted(list(v.d1_path[1:]) + [x for c in v.customers[1:] for x in c.path])
        assert nodes == sorted(x for x in q.nodes if x != 0)
    assert validate_sequence(out, inst) == []
    assert sequence_length(out, inst.matrix) <= sequence_length(q, inst.matrix)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(10, 26), seed=st.integers(0, 10**6), data=st.data())
def test_disassemble_conserves_nodes(n, seed, data):
    f = data.draw(st.integers(1, n // 2))
    s = data.draw(st.integers(1, 4))
    inst = generate_instance(n, f, seed)
    q = rp_initial(inst, seed)
    k1 = len(q.tour1) - 1
    k2 = len(q.tour2) - 1
    if k1 + k2 < 2 * s + 3:
        with pytest.raises(ValueError, match="too short"):
            disassemble(q, next(window_placements(k1, k2, s, 1)), inst)
        return
    for cfg in window_placements(k1, k2, s, 1):
        try:
            v = disassemble(q, cfg, inst)
        except InfeasibleError:
            continue
        assert entity_count(v) == 2 * s + 6
        inner = list(v.d1_path[1:]) + [x for c in v.customers[1:] for x in c.path]
        assert sorted(inner) == sorted(x for x in q.nodes if x != 0)
        for i in v.f1 | v.f2:
            assert any(x in inst.fixed for x in v.customers[i].path)
