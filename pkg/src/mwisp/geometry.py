"""Exact rational planar geometry.

Coordinates are Python ints or ``fractions.Fraction``; integral values are kept
as ints so that the common all-integer case stays fast.  Polygons are open
sets: two polygons touch only when their interiors overlap.

Rings are tuples of points.  Outer rings run counter-clockwise and holes run
clockwise, so the interior is always on the left of every directed edge.  The
boolean operations rely on that convention.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

Number = Union[int, Fraction]


class GeometryError(ValueError):
    pass


class SelfIntersecting(GeometryError):
    pass


def q(value) -> Number:
    """Coerce to an exact number, collapsing integral fractions to int."""
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, str):
        value = Fraction(value.strip())
    f = Fraction(value)
    return f.numerator if f.denominator == 1 else f


class Point(NamedTuple):
    x: Number
    y: Number

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


def pt(x, y) -> Point:
    return Point(q(x), q(y))


class Segment(NamedTuple):
    a: Point
    b: Point


def segment(a, b) -> Segment:
    a, b = pt(*a), pt(*b)
    if a == b:
        raise GeometryError(f"degenerate segment at {a}")
    return Segment(a, b)


def seg_key(s: Sequence[Point]) -> Segment:
    """Undirected normal form: endpoints in lexicographic order."""
    a, b = s
    return Segment(a, b) if a <= b else Segment(b, a)


class Orientation(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class Location(enum.IntEnum):
    EXTERIOR = -1
    BOUNDARY = 0
    INTERIOR = 1


def cross(a: Point, b: Point, c: Point) -> Number:
    """Twice the signed area of triangle abc."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orientation(a: Point, b: Point, c: Point) -> Orientation:
    d = cross(a, b, c)
    return Orientation.CCW if d > 0 else Orientation.CW if d < 0 else Orientation.COLLINEAR


def _norm(v: Number) -> Number:
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def lerp(a: Point, b: Point, t: Number) -> Point:
    return Point(_norm(a[0] + (b[0] - a[0]) * t), _norm(a[1] + (b[1] - a[1]) * t))


def midpoint(a: Point, b: Point) -> Point:
    return Point(_norm(Fraction(a[0] + b[0], 2)), _norm(Fraction(a[1] + b[1], 2)))


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True iff p lies on the closed segment ab."""
    if cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _param(a: Point, b: Point, p: Point) -> Number:
    """Position of p (assumed on line ab) along a->b; a=0, b=1."""
    if a[0] != b[0]:
        return Fraction(p[0] - a[0]) / (b[0] - a[0])
    return Fraction(p[1] - a[1]) / (b[1] - a[1])


def segment_intersection(s1: Sequence[Point], s2: Sequence[Point]):
    """Intersection of two closed segments.

    Returns None, a Point, or a Segment (collinear overlap, endpoints in
    lexicographic order so the result does not depend on argument order).
    """
    a, b = s1
    c, d = s2
    d1 = cross(a, b, c)
    d2 = cross(a, b, d)
    if d1 == 0 and d2 == 0:
        lo1, hi1 = (a, b) if a <= b else (b, a)
        lo2, hi2 = (c, d) if c <= d else (d, c)
        lo = max(lo1, lo2)
        hi = min(hi1, hi2)
        if lo > hi:
            return None
        if lo == hi:
            return lo
        return Segment(lo, hi)
    if (d1 > 0 and d2 > 0) or (d1 < 0 and d2 < 0):
        return None
    d3 = cross(c, d, a)
    d4 = cross(c, d, b)
    if (d3 > 0 and d4 > 0) or (d3 < 0 and d4 < 0):
        return None
    if d1 == 0:
        return c
    if d2 == 0:
        return d
    if d3 == 0:
        return a
    if d4 == 0:
        return b
    return lerp(a, b, Fraction(d3, d3 - d4) if isinstance(d3, int) and isinstance(d4, int) else d3 / (d3 - d4))


def segments_cross_properly(s1, s2) -> bool:
    """Transversal crossing at a point interior to both segments."""
    a, b = s1
    c, d = s2
    d1, d2 = cross(a, b, c), cross(a, b, d)
    d3, d4 = cross(c, d, a), cross(c, d, b)
    return ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4))


# --------------------------------------------------------------------- rings

def ring_edges(ring: Sequence[Point]):
    n = len(ring)
    for i in range(n):
        yield ring[i], ring[(i + 1) % n]


def signed_area2(ring: Sequence[Point]) -> Number:
    s = 0
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return s


def ring_area(ring: Sequence[Point]) -> Fraction:
    """Signed area (positive for counter-clockwise rings)."""
    return Fraction(signed_area2(ring), 2)


def clean_ring(ring: Sequence[Point]) -> tuple[Point, ...]:
    """Drop repeated vertices and vertices with a straight or folded angle."""
    pts = list(ring)
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        out: list[Point] = []
        for p in pts:
            if not out or out[-1] != p:
                out.append(p)
        if len(out) > 1 and out[0] == out[-1]:
            out.pop()
        pts = out
        n = len(pts)
        if n < 3:
            break
        for i in range(n):
            if cross(pts[i - 1], pts[i], pts[(i + 1) % n]) == 0:
                del pts[i]
                changed = True
                break
    return tuple(pts) if len(pts) >= 3 else ()


def canonical_ring(ring: Sequence[Point]) -> tuple[Point, ...]:
    """Cleaned ring rotated to start at its smallest rotation."""
    r = clean_ring(ring)
    if not r:
        return r
    n = len(r)
    m = min(r)
    best = None
    for i in range(n):
        if r[i] == m:
            cand = r[i:] + r[:i]
            if best is None or cand < best:
                best = cand
    return best


def is_simple(ring: Sequence[Point]) -> bool:
    n = len(ring)
    if n < 3 or len(set(ring)) != n:
        return False
    edges = list(ring_edges(ring))
    for i in range(n):
        a, b = edges[i]
        for j in range(i + 1, n):
            c, d = edges[j]
            hit = segment_intersection((a, b), (c, d))
            if hit is None:
                continue
            if j == i + 1:
                if hit != b:
                    return False
            elif i == 0 and j == n - 1:
                if hit != a:
                    return False
            else:
                return False
    return True


def polygon(vertices: Iterable) -> tuple[Point, ...]:
    """Validated simple polygon, returned counter-clockwise."""
    ring = tuple(pt(*v) for v in vertices)
    if len(ring) < 3:
        raise GeometryError("a polygon needs at least 3 vertices")
    if not is_simple(ring):
        raise SelfIntersecting(f"polygon boundary is not simple: {[tuple(map(str, p)) for p in ring]}")
    a = signed_area2(ring)
    if a == 0:
        raise GeometryError("polygon has zero area")
    return ring if a > 0 else ring[::-1]


def bbox(points: Iterable[Point]):
    xs, ys = zip(*points)
    return min(xs), min(ys), max(xs), max(ys)


def point_in_ring(p: Point, ring: Sequence[Point]) -> Location:
    x, y = p
    inside = False
    n = len(ring)
    for i in range(n):
        a = ring[i]
        b = ring[(i + 1) % n]
        if on_segment(p, a, b):
            return Location.BOUNDARY
        if (a[1] <= y) != (b[1] <= y):
            num = (b[0] - a[0]) * (y - a[1]) - (x - a[0]) * (b[1] - a[1])
            if (num > 0) == (b[1] - a[1] > 0):
                inside = not inside
    return Location.INTERIOR if inside else Location.EXTERIOR


def point_in_rings(p: Point, rings: Iterable[Sequence[Point]]) -> Location:
    """Even-odd classification against a set of non-crossing rings."""
    inside = False
    for ring in rings:
        loc = point_in_ring(p, ring)
        if loc is Location.BOUNDARY:
            return loc
        if loc is Location.INTERIOR:
            inside = not inside
    return Location.INTERIOR if inside else Location.EXTERIOR


# ------------------------------------------------------------------- regions

Ring = tuple  # tuple[Point, ...]


@dataclass(frozen=True)
class Region:
    """Union of disjoint polygonal components, each an outer ring plus holes.

    Rings are stored canonically so equal regions compare (and hash) equal.
    """

    components: tuple  # tuple[tuple[Ring, tuple[Ring, ...]], ...]

    @classmethod
    def from_rings(cls, components) -> "Region":
        comps = []
        for outer, holes in components:
            o = canonical_ring(outer)
            if not o:
                continue
            if signed_area2(o) < 0:
                o = canonical_ring(o[::-1])
            hs = []
            for h in holes:
                hc = canonical_ring(h)
                if not hc:
                    continue
                if signed_area2(hc) > 0:
                    hc = canonical_ring(hc[::-1])
                hs.append(hc)
            comps.append((o, tuple(sorted(hs))))
        return cls(tuple(sorted(comps)))

    @classmethod
    def from_polygon(cls, ring: Sequence[Point]) -> "Region":
        return cls.from_rings([(ring, ())])

    @classmethod
    def square(cls, n) -> "Region":
        return cls.from_polygon((pt(0, 0), pt(n, 0), pt(n, n), pt(0, n)))

    def rings(self):
        for outer, holes in self.components:
            yield outer
            yield from holes

    @property
    def area(self) -> Fraction:
        return sum((ring_area(r) for r in self.rings()), Fraction(0))

    @property
    def edge_count(self) -> int:
        return sum(len(r) for r in self.rings())

    @property
    def vertices(self) -> set:
        return {p for r in self.rings() for p in r}

    def is_empty(self) -> bool:
        return not self.components

    def split_components(self) -> list["Region"]:
        return [Region((c,)) for c in self.components]

    def bbox(self):
        return bbox(p for outer, _ in self.components for p in outer)

    def __len__(self) -> int:
        return len(self.components)


def as_region(obj) -> Region:
    return obj if isinstance(obj, Region) else Region.from_polygon(obj)


def point_in_region(p, r) -> Location:
    r = as_region(r)
    return point_in_rings(pt(*p), r.rings())


# ----------------------------------------------------- boundary classification

INSIDE, OUTSIDE, SAME, OPPOSITE = "in", "out", "same", "opp"


def _split_points(a: Point, b: Point, others: Sequence[tuple[Point, Point]]) -> list[Point]:
    cuts = {a, b}
    for c, d in others:
        hit = segment_intersection((a, b), (c, d))
        if hit is None:
            continue
        if isinstance(hit, Segment):
            cuts.add(hit.a)
            cuts.add(hit.b)
        else:
            cuts.add(hit)
    return sorted(cuts, key=lambda p: _param(a, b, p))


def classify_pieces(rings_a: Sequence[Ring], rings_b: Sequence[Ring]):
    """Split every directed edge of A at B's boundary and classify each piece.

    Yields (p, q, cls) where cls is INSIDE/OUTSIDE (piece in the open interior
    or exterior of B) or SAME/OPPOSITE (piece runs along a B edge in the same
    or opposite direction).
    """
    edges_b = [e for r in rings_b for e in ring_edges(r)]
    if edges_b:
        bx0, by0, bx1, by1 = bbox(p for r in rings_b for p in r)
    for ring in rings_a:
        for a, b in ring_edges(ring):
            if not edges_b or max(a[0], b[0]) < bx0 or min(a[0], b[0]) > bx1 \
                    or max(a[1], b[1]) < by0 or min(a[1], b[1]) > by1:
                yield a, b, OUTSIDE
                continue
            near = [e for e in edges_b
                    if not (max(e[0][0], e[1][0]) < min(a[0], b[0]) or min(e[0][0], e[1][0]) > max(a[0], b[0])
                            or max(e[0][1], e[1][1]) < min(a[1], b[1]) or min(e[0][1], e[1][1]) > max(a[1], b[1]))]
            cuts = _split_points(a, b, near)
            for p, r in zip(cuts, cuts[1:]):
                m = midpoint(p, r)
                loc = point_in_rings(m, rings_b)
                if loc is Location.INTERIOR:
                    yield p, r, INSIDE
                elif loc is Location.EXTERIOR:
                    yield p, r, OUTSIDE
                else:
                    cls = OPPOSITE
                    for c, d in near:
                        if on_segment(m, c, d):
                            dot = (r[0] - p[0]) * (d[0] - c[0]) + (r[1] - p[1]) * (d[1] - c[1])
                            cls = SAME if dot > 0 else OPPOSITE
                            break
                    yield p, r, cls


def _diamond(dx, dy) -> Fraction:
    """Exact monotone surrogate of the polar angle, in [0, 4)."""
    if dy >= 0:
        if dx >= 0:
            return Fraction(dy) / (dx + dy)
        return 1 + Fraction(-dx) / (-dx + dy)
    if dx < 0:
        return 2 + Fraction(-dy) / (-dx - dy)
    return 3 + Fraction(dx) / (dx - dy)


def angle_from(ref, vec) -> Fraction:
    """Counter-clockwise angle surrogate of vec measured from ref, in [0, 4)."""
    d = _diamond(*vec) - _diamond(*ref)
    return d + 4 if d < 0 else d


def next_clockwise(prev: Point, v: Point, candidates: Sequence[Point]) -> Point:
    """Among edges v->c pick the first met turning clockwise from v->prev.

    Following this rule keeps the face on the left of a traversal.
    """
    ref = (prev[0] - v[0], prev[1] - v[1])
    best, best_ang = None, None
    for c in candidates:
        ang = angle_from(ref, (c[0] - v[0], c[1] - v[1]))
        if ang == 0:
            ang = Fraction(4)
        if best_ang is None or ang > best_ang:
            best, best_ang = c, ang
    return best


def assemble(edges: Iterable[tuple[Point, Point]]) -> Region:
    """Build a region from directed boundary edges (interior on the left)."""
    edge_set = set()
    for a, b in edges:
        if (b, a) in edge_set:
            edge_set.discard((b, a))
        else:
            edge_set.add((a, b))
    out: dict[Point, list[Point]] = {}
    for a, b in sorted(edge_set):
        out.setdefault(a, []).append(b)
    used = set()
    rings = []
    for start in sorted(edge_set):
        if start in used:
            continue
        ring = [start[0]]
        a, b = start
        used.add(start)
        while b != start[0]:
            ring.append(b)
            cands = [c for c in out[b] if (b, c) not in used]
            if not cands:
                break
            c = next_clockwise(a, b, cands) if len(cands) > 1 else cands[0]
            used.add((b, c))
            a, b = b, c
        rings.append(tuple(ring))
    outers, holes = [], []
    for r in rings:
        r = clean_ring(r)
        if not r:
            continue
        a2 = signed_area2(r)
        if a2 > 0:
            outers.append(r)
        elif a2 < 0:
            holes.append(r)
    comps = {i: [] for i in range(len(outers))}
    for h in holes:
        probe = _ring_probe(h)
        best = None
        for i, o in enumerate(outers):
            if point_in_ring(probe, o) is Location.INTERIOR:
                if best is None or signed_area2(o) < signed_area2(outers[best]):
                    best = i
        if best is not None:
            comps[best].append(h)
    return Region.from_rings([(o, comps[i]) for i, o in enumerate(outers)])


def _ring_probe(ring: Ring) -> Point:
    """A point of the ring not shared with other rings of a valid region."""
    return midpoint(ring[0], ring[1])


def region_intersect(r, g) -> Region:
    r, g = as_region(r), as_region(g)
    ra, rb = list(r.rings()), list(g.rings())
    edges = [(p, s) for p, s, c in classify_pieces(ra, rb) if c in (INSIDE, SAME)]
    edges += [(p, s) for p, s, c in classify_pieces(rb, ra) if c == INSIDE]
    return assemble(edges)


def region_subtract(r, g) -> Region:
    r, g = as_region(r), as_region(g)
    ra, rb = list(r.rings()), list(g.rings())
    edges = [(p, s) for p, s, c in classify_pieces(ra, rb) if c in (OUTSIDE, OPPOSITE)]
    edges += [(s, p) for p, s, c in classify_pieces(rb, ra) if c == INSIDE]
    return assemble(edges)


def region_union(r, g) -> Region:
    r, g = as_region(r), as_region(g)
    ra, rb = list(r.rings()), list(g.rings())
    edges = [(p, s) for p, s, c in classify_pieces(ra, rb) if c in (OUTSIDE, SAME)]
    edges += [(p, s) for p, s, c in classify_pieces(rb, ra) if c == OUTSIDE]
    return assemble(edges)


def _bbox_disjoint(ra, rb) -> bool:
    ax0, ay0, ax1, ay1 = bbox(p for r in ra for p in r)
    bx0, by0, bx1, by1 = bbox(p for r in rb for p in r)
    return ax1 <= bx0 or bx1 <= ax0 or ay1 <= by0 or by1 <= ay0


def _rings(obj) -> list:
    if isinstance(obj, Region):
        return list(obj.rings())
    ring = tuple(obj)
    return [ring if signed_area2(ring) >= 0 else ring[::-1]]


def interiors_intersect(a, b) -> bool:
    ra, rb = _rings(a), _rings(b)
    if _bbox_disjoint(ra, rb):
        return False
    for _, _, c in classify_pieces(ra, rb):
        if c in (INSIDE, SAME):
            return True
    for _, _, c in classify_pieces(rb, ra):
        if c == INSIDE:
            return True
    return False


def polygons_touch(p, q_) -> bool:
    """True iff the open interiors of the two polygons intersect."""
    return interiors_intersect(p, q_)


def contains(outer, inner) -> bool:
    """True iff the open set ``inner`` is a subset of the open set ``outer``."""
    ra, rb = _rings(inner), _rings(outer)
    for _, _, c in classify_pieces(ra, rb):
        if c in (OUTSIDE, OPPOSITE):
            return False
    for _, _, c in classify_pieces(rb, ra):
        if c == INSIDE:
            return False
    return True


# -------------------------------------------------------------- triangulation

def triangulate(ring: Sequence[Point]) -> list[tuple[Point, Point, Point]]:
    """Ear clipping, always cutting the lowest-index ear of the current chain."""
    ring = tuple(ring)
    if not is_simple(ring):
        raise SelfIntersecting("cannot triangulate a non-simple polygon")
    if signed_area2(ring) < 0:
        ring = ring[::-1]
    idx = list(range(len(ring)))
    out = []
    while len(idx) > 3:
        n = len(idx)
        for k in range(n):
            a, b, c = ring[idx[k - 1]], ring[idx[k]], ring[idx[(k + 1) % n]]
            if cross(a, b, c) <= 0:
                continue
            blocked = False
            for j in idx:
                p = ring[j]
                if p == a or p == b or p == c:
                    continue
                if cross(a, b, p) >= 0 and cross(b, c, p) >= 0 and cross(c, a, p) >= 0:
                    blocked = True
                    break
            if not blocked:
                out.append((a, b, c))
                del idx[k]
                break
        else:
            raise SelfIntersecting("no ear found; polygon is degenerate")
    a, b, c = (ring[i] for i in idx)
    if cross(a, b, c) == 0:
        raise SelfIntersecting("degenerate final triangle")
    out.append((a, b, c))
    return out


def segment_crosses_open_polygon(s, ring: Sequence[Point]) -> bool:
    """True iff the closed segment meets the open interior of the polygon."""
    a, b = s
    cuts = _split_points(a, b, list(ring_edges(ring)))
    for p, r in zip(cuts, cuts[1:]):
        if point_in_ring(midpoint(p, r), ring) is Location.INTERIOR:
            return True
    return False
