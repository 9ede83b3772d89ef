"""Move polygon vertices into general position without changing which pairs touch.

Each vertex p of polygon P, with neighbour offsets v (to the next vertex) and
v' (to the previous one), is moved to

    p +/- (l*v + l'*v') * step,   step = (c'/10) / (4 N (Kn)^2),

with c = 1/(2N), c' = c/5 and the sign chosen so the move points into P.  The
first (l, l') in lexicographic order that keeps the point off every line
through two other vertices is taken.  Coordinates are first doubled so edge
midpoints are integral, and finally scaled back to integers by the least
common denominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .geometry import GeometryError, Point, cross, polygon
from .instance import Instance, WeightedPolygon


class PerturbationError(GeometryError):
    pass


class TooManyCollisions(PerturbationError):
    """No admissible (l, l') exists; the counting argument says this is a bug."""


@dataclass
class PerturbationReport:
    scale_factor: int
    per_vertex_choices: dict = field(default_factory=dict)
    old_new_bijection: dict = field(default_factory=dict)
    step: Fraction = Fraction(0)
    c_prime: Fraction = Fraction(0)
    max_displacement_sq: Fraction = Fraction(0)


def doubling_precondition(inst: Instance) -> Instance:
    polys = tuple(
        WeightedPolygon(p.id, tuple(Point(2 * v.x, 2 * v.y) for v in p.vertices), p.weight)
        for p in inst.polygons
    )
    return Instance(polys, 2 * inst.N, inst.K, inst.epsilon)


def _direction(c: Point, a: Point):
    dx, dy = a[0] - c[0], a[1] - c[1]
    if dx == 0:
        return None if dy == 0 else "v"
    return Fraction(dy) / dx


def _admissible(cand: Point, others) -> bool:
    seen: dict = {}
    for a in others:
        d = _direction(cand, a)
        if d is None:
            return False
        prev = seen.get(d)
        if prev is None:
            seen[d] = a
        elif prev != a:
            return False
    return True


def _row_blocked(base: Point, direction, others) -> bool:
    """True if two distinct vertices lie on the candidate row's line.

    Every candidate of such a row is collinear with them, so the row can be
    skipped without changing which candidate is found first.
    """
    tip = Point(base.x + direction[0], base.y + direction[1])
    on_line = {a for a in others if cross(base, tip, a) == 0}
    return len(on_line) >= 2


def to_general_position(inst: Instance):
    """Return (instance in general position, PerturbationReport)."""
    for p in inst.polygons:
        for v in p.vertices:
            if not (isinstance(v.x, int) and isinstance(v.y, int)):
                raise PerturbationError("input coordinates must be integers")
    work = doubling_precondition(inst)
    N = work.N
    kn = work.K * work.n
    m = kn * kn
    c = Fraction(1, 2 * N)
    c_prime = c / 5
    step = c_prime / 10 / (4 * N * m)

    current = [list(p.vertices) for p in work.polygons]
    report = PerturbationReport(scale_factor=1, step=step, c_prime=c_prime)
    for i, poly in enumerate(work.polygons):
        ring = poly.vertices
        k = len(ring)
        for j in range(k):
            p = ring[j]
            nxt, prv = ring[(j + 1) % k], ring[j - 1]
            turn = cross(prv, p, nxt)
            if turn == 0:
                raise PerturbationError(f"polygon {poly.id}: straight angle at {p}")
            sign = 1 if turn > 0 else -1
            v = (nxt.x - p.x, nxt.y - p.y)
            w = (prv.x - p.x, prv.y - p.y)
            others = [current[a][b] for a in range(len(current)) for b in range(len(current[a]))
                      if (a, b) != (i, j)]
            chosen = None
            f = sign * step
            for l1 in range(m):
                base = Point(p.x + l1 * v[0] * f, p.y + l1 * v[1] * f)
                if _row_blocked(base, w, others):
                    continue
                for l2 in range(m):
                    cand = Point(p.x + (l1 * v[0] + l2 * w[0]) * f, p.y + (l1 * v[1] + l2 * w[1]) * f)
                    if _admissible(cand, others):
                        chosen = (l1, l2, cand)
                        break
                if chosen:
                    break
            if chosen is None:
                raise TooManyCollisions(f"no admissible move for vertex {j} of {poly.id}")
            l1, l2, cand = chosen
            current[i][j] = cand
            report.per_vertex_choices[(poly.id, j)] = (l1, l2)
            d2 = (cand.x - p.x) ** 2 + (cand.y - p.y) ** 2
            report.max_displacement_sq = max(report.max_displacement_sq, Fraction(d2))

    scale = 1
    for ring in current:
        for v in ring:
            scale = lcm(scale, Fraction(v.x).denominator, Fraction(v.y).denominator)
    polys = []
    for poly, ring in zip(work.polygons, current):
        pts = [(int(v.x * scale), int(v.y * scale)) for v in ring]
        polys.append(WeightedPolygon(poly.id, polygon(pts), poly.weight))
        report.old_new_bijection[poly.id] = poly.id
    report.scale_factor = scale
    return Instance(tuple(polys), N * scale, inst.K, inst.epsilon), report


def collinear_triples(points) -> list:
    """All collinear triples among the given points, by brute force."""
    pts = list(points)
    out = []
    n = len(pts)
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                if cross(pts[a], pts[b], pts[c]) == 0:
                    out.append((pts[a], pts[b], pts[c]))
    return out
