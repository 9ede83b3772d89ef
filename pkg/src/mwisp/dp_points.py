"""Candidate corner points for DP cells.

Basic points: the corners of the square, plus every intersection of a vertical
line through an input vertex with a triangulation edge or with the bottom or
top side of the square.  Additional points: one round of pairwise
intersections of segments joining basic points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .geometry import GeometryError, Point, Segment, seg_key, segment_intersection, triangulate
from .instance import Instance


class NotGeneralPosition(GeometryError):
    pass


def check_general_position(points) -> None:
    points = list(points)
    pts = sorted(set(points))
    if len(pts) != len(points):
        raise NotGeneralPosition("coincident vertices")
    for i, c in enumerate(pts):
        seen = set()
        for a in pts[i + 1:]:
            dx, dy = a[0] - c[0], a[1] - c[1]
            key = "v" if dx == 0 else Fraction(dy) / dx
            if key in seen:
                raise NotGeneralPosition(f"three collinear vertices through {c}")
            seen.add(key)


def triangulation_edges(inst: Instance) -> frozenset:
    edges = set()
    for p in inst.polygons:
        for tri in triangulate(p.vertices):
            for i in range(3):
                edges.add(seg_key((tri[i], tri[(i + 1) % 3])))
    return frozenset(edges)


def vertical_hits(x, seg) -> list[Point]:
    """Points where the vertical line at x meets the closed segment."""
    a, b = seg
    if a[0] == b[0]:
        return [a, b] if a[0] == x else []
    lo, hi = (a, b) if a[0] < b[0] else (b, a)
    if not lo[0] <= x <= hi[0]:
        return []
    if x == lo[0]:
        return [lo]
    if x == hi[0]:
        return [hi]
    hit = segment_intersection((a, b), (Point(x, min(a[1], b[1])), Point(x, max(a[1], b[1]))))
    return [hit] if isinstance(hit, Point) else list(hit) if hit else []


@dataclass(frozen=True)
class DpPointSet:
    basic: frozenset
    triangulation_edges: frozenset
    N: int
    xs: tuple = field(default=())

    @cached_property
    def additional(self) -> frozenset:
        return additional_dp_points(self.basic)

    @property
    def corners(self) -> tuple:
        n = self.N
        return (Point(0, 0), Point(n, 0), Point(n, n), Point(0, n))

    def all_points(self) -> frozenset:
        return self.basic | self.additional


def basic_dp_points(inst: Instance, require_general_position: bool = True) -> DpPointSet:
    if require_general_position:
        check_general_position(inst.vertices())
    et = triangulation_edges(inst)
    N = inst.N
    xs = sorted({v.x for v in inst.vertices()})
    pts = {Point(0, 0), Point(N, 0), Point(N, N), Point(0, N)}
    for x in xs:
        pts.add(Point(x, 0))
        pts.add(Point(x, N))
        for e in et:
            pts.update(vertical_hits(x, e))
    return DpPointSet(frozenset(pts), et, N, tuple(xs))


def additional_dp_points(basic) -> frozenset:
    """Single-point crossings of segments between basic points, minus the basics."""
    pts = sorted(basic)
    segs = [Segment(a, b) for a, b in combinations(pts, 2)]
    boxes = [(min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1])) for a, b in segs]
    out = set()
    for i in range(len(segs)):
        x0, x1, y0, y1 = boxes[i]
        for j in range(i + 1, len(segs)):
            u0, u1, v0, v1 = boxes[j]
            if u1 < x0 or u0 > x1 or v1 < y0 or v0 > y1:
                continue
            hit = segment_intersection(segs[i], segs[j])
            if isinstance(hit, Point):
                out.add(hit)
    return frozenset(out - set(basic))
