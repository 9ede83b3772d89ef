import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mwisp.geometry import (Location, Point, Region, SelfIntersecting, Segment, canonical_ring, contains,
                            point_in_ring, polygons_touch, pt, region_intersect, region_subtract,
                            region_union, ring_area, segment_intersection, triangulate)
from support import random_ring

TRI = [pt(0, 0), pt(4, 0), pt(0, 4)]


def test_segment_intersection_cases():
    assert segment_intersection((pt(0, 0), pt(4, 4)), (pt(0, 4), pt(4, 0))) == pt(2, 2)
    assert segment_intersection((pt(0, 0), pt(4, 0)), (pt(2, 0), pt(6, 0))) == Segment(pt(2, 0), pt(4, 0))
    assert segment_intersection((pt(0, 0), pt(1, 0)), (pt(2, 0), pt(6, 0))) is None


def test_rational_crossing_is_exact():
    hit = segment_intersection((pt(0, 0), pt(3, 1)), (pt(0, 1), pt(3, 0)))
    assert hit == Point(Fraction(3, 2), Fraction(1, 2))


def test_point_location():
    assert point_in_ring(pt(1, 1), TRI) == Location.INTERIOR
    assert point_in_ring(pt(2, 0), TRI) == Location.BOUNDARY
    assert point_in_ring(pt(5, 5), TRI) == Location.EXTERIOR


def test_self_intersecting_ring_rejected():
    from mwisp.geometry import polygon
    with pytest.raises(SelfIntersecting):
        polygon([(0, 0), (4, 4), (4, 0), (0, 4)])


def test_canonical_ring_is_rotation_invariant():
    assert canonical_ring([pt(4, 0), pt(0, 4), pt(0, 0)]) == canonical_ring(TRI)


def test_open_set_touching():
    # shared edge only: the open interiors stay apart
    assert not polygons_touch(TRI, [pt(4, 0), pt(0, 4), pt(4, 4)])
    assert polygons_touch(TRI, [pt(1, 1), pt(5, 1), pt(1, 5)])


def test_containment():
    big = [pt(0, 0), pt(8, 0), pt(8, 8), pt(0, 8)]
    assert contains(big, [pt(1, 1), pt(2, 1), pt(1, 2)])
    assert contains(big, big)
    assert not contains([pt(1, 1), pt(2, 1), pt(1, 2)], big)


def test_square_boolean_ops():
    sq = Region.square(4)
    g = Region.from_polygon([pt(2, 2), pt(6, 2), pt(6, 6), pt(2, 6)])
    assert region_intersect(sq, g).area == 4
    assert region_subtract(sq, g).area == 12
    assert region_union(sq, g).area == 28


def test_subtracting_inner_square_leaves_hole():
    outer = Region.square(6)
    hole = Region.from_polygon([pt(2, 2), pt(4, 2), pt(4, 4), pt(2, 4)])
    r = region_subtract(outer, hole)
    assert r.area == 32
    assert len(list(r.rings())) == 2


def test_square_triangulation():
    tris = triangulate([pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4)])
    assert len(tris) == 2
    assert sum(ring_area(t) for t in tris) == 16


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_triangulation_area_matches_shoelace(seed):
    ring = random_ring(random.Random(seed), 30, 8)
    tris = triangulate(ring)
    assert len(tris) == len(ring) - 2
    assert sum(ring_area(t) for t in tris) == ring_area(ring)


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_area_splits_exactly(seed):
    rng = random.Random(seed)
    r = Region.from_polygon(random_ring(rng))
    g = Region.from_polygon(random_ring(rng))
    assert r.area == region_intersect(r, g).area + region_subtract(r, g).area


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_union_inclusion_exclusion(seed):
    rng = random.Random(seed)
    r = Region.from_polygon(random_ring(rng))
    g = Region.from_polygon(random_ring(rng))
    assert region_union(r, g).area == r.area + g.area - region_intersect(r, g).area
