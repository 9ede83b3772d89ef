import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from mwisp.dp_points import (NotGeneralPosition, additional_dp_points, basic_dp_points,
                             check_general_position)
from mwisp.geometry import Point, pt, segment_intersection
from mwisp.instance import generate, make_instance
from mwisp.perturb import to_general_position


def _brute_basic(inst, edges):
    pts = {pt(0, 0), pt(inst.N, 0), pt(inst.N, inst.N), pt(0, inst.N)}
    for x in {v.x for v in inst.vertices()}:
        vert = (pt(x, -1), pt(x, inst.N + 1))
        for e in list(edges) + [(pt(0, 0), pt(inst.N, 0)), (pt(0, inst.N), pt(inst.N, inst.N))]:
            hit = segment_intersection(vert, e)
            if isinstance(hit, Point):
                pts.add(hit)
            elif hit is not None:
                pts.update(hit)
    return pts


def test_single_triangle():
    inst = make_instance([("T", [(2, 2), (10, 2), (6, 8)], 1)], 16)
    dp = basic_dp_points(inst)
    assert dp.basic == _brute_basic(inst, dp.triangulation_edges)
    # three vertical lines, each meeting top and bottom of the square
    assert len(dp.basic) == 4 + 6 + 3 + 1
    assert set(inst.vertices()) <= dp.basic


def test_square_corners_give_centre():
    corners = {pt(0, 0), pt(8, 0), pt(8, 8), pt(0, 8)}
    assert pt(4, 4) in additional_dp_points(corners)


def test_triangle_has_no_additional_points():
    assert additional_dp_points({pt(0, 0), pt(5, 1), pt(2, 7)}) == set()


def test_collinear_vertices_rejected():
    with pytest.raises(NotGeneralPosition):
        check_general_position([pt(0, 0), pt(1, 1), pt(2, 2)])


@given(st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_additional_matches_brute_force(seed):
    rng = random.Random(seed)
    basic = {pt(rng.randint(0, 20), rng.randint(0, 20)) for _ in range(6)}
    want = set()
    segs = list(combinations(sorted(basic), 2))
    for s, t in combinations(segs, 2):
        hit = segment_intersection(s, t)
        if isinstance(hit, Point):
            want.add(hit)
    assert additional_dp_points(basic) == want - basic


@given(st.integers(0, 10_000))
@settings(max_examples=15, deadline=None)
def test_basic_matches_brute_force_and_order_invariance(seed):
    inst, _ = to_general_position(generate("triangles", 3, 3, 16, seed))
    dp = basic_dp_points(inst)
    assert dp.basic == _brute_basic(inst, dp.triangulation_edges)
    flipped = inst.with_polygons(list(reversed(inst.polygons)))
    assert basic_dp_points(flipped).basic == dp.basic
