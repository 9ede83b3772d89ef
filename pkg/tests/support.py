"""Shared builders for the test suite."""

import math
import random
from fractions import Fraction

from mwisp.geometry import GeometryError, Point, clean_ring, is_simple, polygon, signed_area2
from mwisp.instance import make_instance
from mwisp.partition import TriangleSet, WTriangle


def star_ring(rng: random.Random, N: int, K: int):
    """Random simple star-shaped ring with integer corners, or None."""
    m = rng.randint(3, K)
    r = rng.randint(2, max(2, N // 3))
    cx, cy = rng.randint(r, N - r), rng.randint(r, N - r)
    angles = sorted({rng.randrange(360) for _ in range(m)})
    pts = []
    for a in angles:
        rr = rng.uniform(r / 3, r)
        pts.append((round(cx + rr * math.cos(math.radians(a))), round(cy + rr * math.sin(math.radians(a)))))
    try:
        ring = polygon(pts)
    except GeometryError:
        return None
    ring = clean_ring(ring)
    if len(ring) < 3 or not is_simple(ring) or signed_area2(ring) == 0:
        return None
    return ring


def random_ring(rng, N=24, K=6):
    while True:
        ring = star_ring(rng, N, K)
        if ring is not None:
            return ring


def tall_fixture(m=12, N=1000):
    """One long thin heavy triangle with small triangles above and below it.

    Every stripe contains a piece of the long triangle, so it is the classic
    case where lines of L0 would cross it many times without the cut-out.
    """
    tris = [WTriangle("BIG", (Point(10, 495), Point(990, 500), Point(10, 505)), Fraction(30))]
    step = 940 // m
    for i in range(m):
        x = 30 + i * step
        y0 = 700 if i % 2 == 0 else 200
        tris.append(WTriangle(f"S{i}", (Point(x, y0), Point(x + 40, y0 + 7), Point(x + 13, y0 + 60)),
                              Fraction(1)))
    return TriangleSet(tuple(tris), N)


def chain_instance():
    """Three overlapping triangles in a row, weights 1, 3, 1."""
    return make_instance([
        ("A", [(0, 0), (4, 0), (2, 3)], 1),
        ("B", [(3, 0), (7, 0), (5, 3)], 3),
        ("C", [(6, 0), (10, 0), (8, 3)], 1),
    ], 16)
