import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mwisp.geometry import Point as P
from mwisp.instance import generate_disjoint_triangles
from mwisp.partition import TriangleSet, build_subdivision
from mwisp.separator import (CapExceeded, DisconnectedLines, NoBalancedCycle, audit_graph, build_graph,
                             cycle_sides, exhaustive_separator, find_separator, graph_from_lines,
                             vcycle_to_dict)


def grid(n, face_weight=lambda f: 1, cost=lambda s: 1):
    segs = [(P(0, 0), P(n, 0)), (P(n, 0), P(n, n)), (P(n, n), P(0, n)), (P(0, n), P(0, 0))]
    segs += [(P(i, 0), P(i, n)) for i in range(1, n)] + [(P(0, i), P(n, i)) for i in range(1, n)]
    return graph_from_lines(segs, face_weight=face_weight, cost=cost)


def random_graph(rng, N=12):
    segs = [(P(0, 0), P(N, 0)), (P(N, 0), P(N, N)), (P(N, N), P(0, N)), (P(0, N), P(0, 0))]
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.5:
            x = rng.randint(1, N - 1)
            segs.append((P(x, 0), P(x, N)))
        else:
            y = rng.randint(1, N - 1)
            segs.append((P(0, y), P(N, y)))
    return graph_from_lines(segs, face_weight=lambda f: rng.randint(1, 9), cost=lambda s: rng.randint(0, 5))


@pytest.fixture(scope="module")
def g3():
    return grid(3)


def test_grid_counts(g3):
    assert (len(g3.vertices), len(g3.edges), len(g3.faces)) == (16, 24, 9)
    assert g3.euler() == 2
    assert g3.total_weight == 9 and g3.total_cost == 24


@pytest.mark.parametrize("kbar, cost, faces", [(0, 8, 0), (1, 5, 1), (2, 2, 2)])
def test_grid_separators_frozen(g3, kbar, cost, faces):
    vc = find_separator(g3, kbar)
    assert vc.ordinary_cost == cost and vc.face_edge_count == faces
    assert vc.balanced(g3.total_weight)
    assert vc.interior_weight + vc.exterior_weight + vc.crossed_weight == 9


def test_sides_recomputed_exactly(g3):
    vc = find_separator(g3, 1)
    inside, crossed = cycle_sides(g3, vc.edge_keys)
    assert inside == vc.interior_faces and crossed == vc.crossed_faces


def test_single_heavy_face_has_no_balanced_cycle():
    g = grid(2, face_weight=lambda f: 10 if f.bbox() == (0, 0, 1, 1) else 1)
    with pytest.raises(NoBalancedCycle):
        find_separator(g, 0)
    # a face edge through the heavy face removes it from both sides
    assert find_separator(g, 1).crossed_weight == 10


def test_disconnected_lines():
    with pytest.raises(DisconnectedLines):
        graph_from_lines([(P(0, 0), P(1, 0)), (P(3, 3), P(4, 3))])


def test_exhaustive_cap(g3):
    with pytest.raises(CapExceeded):
        exhaustive_separator(g3, 1)


def test_json_walk(g3):
    d = vcycle_to_dict(find_separator(g3, 2))
    assert sum("face" in step for step in d["walk"]) == 2
    assert d["c_sep"] == "1/6"


def test_graph_from_subdivision_audits_clean():
    ts = TriangleSet.from_instance(generate_disjoint_triangles(8, 128, 3))
    g = build_graph(build_subdivision(ts, Fraction(1, 4)), ts)
    assert audit_graph(g, ts) == []
    assert g.total_weight == ts.total_weight
    kbar = max(1, math.ceil(g.total_cost / (Fraction(1, 4) * ts.total_weight)))
    vc = find_separator(g, kbar)
    assert vc.face_edge_count <= kbar and vc.c_sep <= 8


@given(st.integers(0, 10_000), st.sampled_from([0, 1, 2, 4]))
@settings(max_examples=40, deadline=None)
def test_within_twice_exhaustive(seed, kbar):
    g = random_graph(random.Random(seed))
    if len(g.edges) > 14:
        return
    try:
        ex = exhaustive_separator(g, kbar)
    except NoBalancedCycle:
        with pytest.raises(NoBalancedCycle):
            find_separator(g, kbar)
        return
    vc = find_separator(g, kbar)
    assert vc.balanced(g.total_weight) and vc.face_edge_count <= kbar
    assert vc.ordinary_cost <= 2 * ex.ordinary_cost
