"""Plane subdivision around a set of pairwise non-touching weighted triangles.

The construction runs in four stages:

1. vertical stripes, each holding less than delta^2 of the vertex weight
   (every triangle spreads its weight equally over its three corners);
2. cells inside each stripe, cut along a greedy selection of the triangle
   edges that cross the stripe from left to right (these selected edges form
   ``L0``);
3. extension lines ``Lext``: the boundary of the square, the vertical walls
   of every dense cell, and for each line of ``L0`` a chain of vertical
   segments and triangle edges linking it rightwards (and leftwards) to the
   boundary or to another line of ``L0``;
4. cut-out of every triangle that owns a dense cell, followed by splitting
   all lines at mutual touch points.  The faces of the resulting planar graph
   are the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .geometry import (
    GeometryError,
    Location,
    Point,
    Region,
    Segment,
    _split_points,
    midpoint,
    next_clockwise,
    on_segment,
    point_in_ring,
    polygons_touch,
    ring_edges,
    seg_key,
    segment_crosses_open_polygon,
    segment_intersection,
    signed_area2,
)
from .instance import Instance


class PartitionError(GeometryError):
    pass


class TrianglesTouch(PartitionError):
    pass


class WalkDiverged(PartitionError):
    """A connection walk revisited a line; x-progress makes this a bug."""


# ------------------------------------------------------------------ inputs

@dataclass(frozen=True)
class WTriangle:
    id: str
    vertices: tuple  # ccw
    weight: Fraction

    @property
    def edges(self) -> tuple:
        return tuple(seg_key(e) for e in ring_edges(self.vertices))


@dataclass(frozen=True)
class TriangleSet:
    triangles: tuple
    N: int

    @classmethod
    def from_instance(cls, inst: Instance, check: bool = True) -> "TriangleSet":
        tris = []
        for p in inst.polygons:
            if len(p.vertices) != 3:
                raise PartitionError(f"polygon {p.id} is not a triangle")
            tris.append(WTriangle(p.id, p.vertices, p.weight))
        ts = cls(tuple(tris), inst.N)
        if check:
            ts.check_disjoint()
        return ts

    def check_disjoint(self) -> None:
        for a, b in combinations(self.triangles, 2):
            if polygons_touch(a.vertices, b.vertices):
                raise TrianglesTouch(f"{a.id} and {b.id} overlap")

    @property
    def total_weight(self) -> Fraction:
        return sum((t.weight for t in self.triangles), Fraction(0))

    def vertex_weights(self) -> dict:
        """Corner -> w(T)/3, summed if two triangles share a corner."""
        out: dict = {}
        for t in self.triangles:
            for v in t.vertices:
                out[v] = out.get(v, Fraction(0)) + t.weight / 3
        return out

    def edges(self) -> dict:
        """Edge -> ids of the triangles it bounds (two for a shared diagonal)."""
        out: dict = {}
        for t in self.triangles:
            for e in t.edges:
                out.setdefault(e, set()).add(t.id)
        return out

    def by_id(self) -> dict:
        return {t.id: t for t in self.triangles}


def delta_for(epsilon, K: int, n: int) -> Fraction:
    """delta = eps / (K * log2(n / eps)), rounded to a rational below 1/3."""
    eps = Fraction(epsilon)
    logn = max(1, math.ceil(math.log2(max(2.0, float(Fraction(n) / eps)))))
    d = eps / (K * logn)
    return min(d, Fraction(1, 4))


def y_at(seg, x) -> Fraction:
    (ax, ay), (bx, by) = seg
    if ax == bx:
        raise PartitionError("vertical segment has no y(x)")
    return Fraction(ay) + Fraction(by - ay) * (x - ax) / (bx - ax)


def _pt(x, y) -> Point:
    x, y = Fraction(x), Fraction(y)
    return Point(x.numerator if x.denominator == 1 else x,
                 y.numerator if y.denominator == 1 else y)


# ----------------------------------------------------------------- stripes

@dataclass(frozen=True)
class Stripe:
    index: int  # 1-based
    x0: object
    x1: object
    weight: Fraction


def build_stripes(ts: TriangleSet, delta) -> list:
    """Greedy maximal stripes; vertex weight at a boundary x closes the stripe."""
    delta = Fraction(delta)
    if not 0 < delta < Fraction(1, 3):
        raise ValueError("delta must lie in (0, 1/3)")
    N = ts.N
    vw = ts.vertex_weights()
    col: dict = {}
    for v, w in vw.items():
        col[v.x] = col.get(v.x, Fraction(0)) + w
    xs = sorted(col)
    thr = delta * delta * ts.total_weight

    def open_weight(lo, hi):
        return sum((col[x] for x in xs if lo < x < hi), Fraction(0))

    bounds = [0]
    if thr > 0:
        while open_weight(bounds[-1], N) >= thr:
            cum = Fraction(0)
            for x in xs:
                if x <= bounds[-1]:
                    continue
                cum += col[x]
                if cum >= thr:
                    bounds.append(x)
                    break
    bounds.append(N)
    return [Stripe(i, bounds[i - 1], bounds[i], open_weight(bounds[i - 1], bounds[i]))
            for i in range(1, len(bounds))]


def crossing_edges(stripe: Stripe, ts: TriangleSet) -> list:
    """Edges spanning the closed stripe, ordered top to bottom."""
    out = []
    for e in ts.edges():
        a, b = e
        if a.x != b.x and min(a.x, b.x) <= stripe.x0 and max(a.x, b.x) >= stripe.x1:
            out.append(e)
    xm = Fraction(stripe.x0 + stripe.x1) / 2
    out.sort(key=lambda e: (-y_at(e, xm), e))
    return out


# ------------------------------------------------------------------- cells

@dataclass(frozen=True)
class Cell:
    stripe: int
    top: Segment  # edge or the square's top side
    bottom: Segment
    corners: tuple  # ccw: (x0,yb0), (x1,yb1), (x1,yt1), (x0,yt0)
    kind: str  # "dense" or "light"
    owner: str | None = None  # triangle whose edges are top and bottom

    @property
    def region(self) -> Region:
        return Region.from_polygon(self.corners)


def _touching(stripe: Stripe, ts: TriangleSet) -> list:
    return [t for t in ts.triangles
            if min(v.x for v in t.vertices) < stripe.x1 and max(v.x for v in t.vertices) > stripe.x0]


def _probe(t: WTriangle, stripe: Stripe) -> Point:
    """A point of the open triangle inside the open stripe."""
    lo = max(min(v.x for v in t.vertices), stripe.x0)
    hi = min(max(v.x for v in t.vertices), stripe.x1)
    x = Fraction(lo + hi) / 2
    ys = [y_at(e, x) for e in t.edges if e[0].x != e[1].x and min(e[0].x, e[1].x) <= x <= max(e[0].x, e[1].x)]
    return _pt(x, (min(ys) + max(ys)) / 2)


def gap_weights(stripe: Stripe, ts: TriangleSet, lines: list) -> list:
    """Weight of triangles touching the stripe between consecutive lines.

    Entry g covers the band between line g-1 and line g (entry 0 is above
    the first line, the last entry below the last line).
    """
    gw = [Fraction(0)] * (len(lines) + 1)
    for t in _touching(stripe, ts):
        p = _probe(t, stripe)
        g = sum(1 for e in lines if y_at(e, p.x) > p.y)
        gw[g] += t.weight
    return gw


def select_lines(gw: list, limit) -> list:
    """Greedy top-down choice of line indices (see build_cells)."""
    m = len(gw) - 1
    if m == 0 or sum(gw) <= limit:
        return []
    prefix = [Fraction(0)]
    for w in gw:
        prefix.append(prefix[-1] + w)

    def between(u, v):  # bands strictly between line u and line v (u=-1: top)
        return prefix[v + 1] - prefix[u + 1]

    chosen = []
    u = -1
    while True:
        ok = [v for v in range(u + 1, m) if between(u, v) <= limit]
        v = ok[-1] if ok else u + 1
        chosen.append(v)
        if prefix[m + 1] - prefix[v + 1] <= limit or v == m - 1:
            return chosen
        u = v


def build_cells(stripe: Stripe, ts: TriangleSet, delta, N=None):
    """Return (cells top to bottom, selected edges) for one stripe."""
    N = ts.N if N is None else N
    W = ts.total_weight
    limit = Fraction(delta) ** 4 * W
    lines = crossing_edges(stripe, ts)
    gw = gap_weights(stripe, ts, lines)
    sel = select_lines(gw, limit)
    owner = ts.edges()
    x0, x1 = stripe.x0, stripe.x1
    top_side = Segment(Point(0, N), Point(N, N))
    bottom_side = Segment(Point(0, 0), Point(N, 0))
    bounds = [(-1, top_side)] + [(i, lines[i]) for i in sel] + [(len(lines), bottom_side)]
    cells = []
    for (u, top), (v, bot) in zip(bounds, bounds[1:]):
        corners = (_pt(x0, y_at(bot, x0)), _pt(x1, y_at(bot, x1)),
                   _pt(x1, y_at(top, x1)), _pt(x0, y_at(top, x0)))
        kind = "dense" if v == u + 1 else "light"
        own = None
        common = owner[top] & owner[bot] if kind == "dense" and 0 <= u and v < len(lines) else set()
        if common:
            own = min(common)
        cells.append(Cell(stripe.index, top, bot, corners, kind, own))
    return cells, [lines[i] for i in sel]


# ------------------------------------------------------------ extension

def merge_collinear(segs) -> set:
    """Replace collinear segments overlapping in more than a point by their union."""
    groups: dict = {}
    for s in segs:
        a, b = seg_key(s)
        if a == b:
            continue
        if a.x == b.x:
            key = ("v", a.x)
        else:
            slope = Fraction(b.y - a.y) / (b.x - a.x)
            key = (slope, a.y - slope * a.x)
        groups.setdefault(key, []).append((a, b))
    out = set()
    for items in groups.values():
        items.sort()
        cur_a, cur_b = items[0]
        for a, b in items[1:]:
            if a < cur_b:
                cur_b = max(cur_b, b)
            else:
                out.add(Segment(cur_a, cur_b))
                cur_a, cur_b = a, b
        out.add(Segment(cur_a, cur_b))
    return out


def _walk_right(line, bounds, e_by_stripe, l0, N) -> list:
    out = []
    seen = set()
    cur = line
    while True:
        if cur in seen:
            raise WalkDiverged(f"walk revisited {cur}")
        seen.add(cur)
        a, b = cur
        hits = [i for i in range(1, len(bounds)) if a.x <= bounds[i] <= b.x]
        if not hits:
            return out
        i = hits[-1]
        x = bounds[i]
        p = _pt(x, y_at(cur, x))
        if p.y == N or x == N:
            return out
        right = e_by_stripe[i + 1]
        if any(e in l0 and on_segment(p, *e) for e in right):
            return out
        cands = []
        for e in right:
            y = y_at(e, x)
            if p.y <= y <= N:
                slope = Fraction(e[1].y - e[0].y) / (e[1].x - e[0].x)
                cands.append((y, slope, e))
        if not cands:
            out.append(seg_key((p, _pt(x, N))))
            return out
        y, _, e = min(cands)
        q2 = _pt(x, y)
        if q2 != p:
            out.append(seg_key((p, q2)))
        if e in l0 or y == N:
            return out
        out.append(e)
        cur = e


def _rot(p, N) -> Point:
    return Point(N - p.x, N - p.y)


def _rot_seg(s, N) -> Segment:
    return seg_key((_rot(s[0], N), _rot(s[1], N)))


def connection_walks(L0, stripes, ts: TriangleSet) -> list:
    """Chains linking every L0 line rightwards/upwards and leftwards/downwards."""
    N = ts.N
    bounds = [stripes[0].x0] + [s.x1 for s in stripes]
    e_by = {s.index: crossing_edges(s, ts) for s in stripes}
    l0 = set(L0)
    # mirrored copy for the leftward walk
    rb = [N - x for x in reversed(bounds)]
    k = len(stripes)
    re_by = {j: [_rot_seg(e, N) for e in e_by[k + 1 - j]] for j in range(1, k + 1)}
    rl0 = {_rot_seg(e, N) for e in l0}
    out = []
    for line in sorted(l0):
        out += _walk_right(line, bounds, e_by, l0, N)
        out += [_rot_seg(s, N) for s in _walk_right(_rot_seg(line, N), rb, re_by, rl0, N)]
    return out


def build_lext(stripes, cells, L0, ts: TriangleSet) -> set:
    N = ts.N
    corners = [Point(0, 0), Point(N, 0), Point(N, N), Point(0, N)]
    lines = [seg_key(e) for e in ring_edges(corners)]
    for c in cells:
        if c.kind != "dense":
            continue
        a, b, cc, d = c.corners
        lines.append(seg_key((a, d)))
        lines.append(seg_key((b, cc)))
    lines += connection_walks(L0, stripes, ts)
    return merge_collinear(lines)


# ---------------------------------------------------------------- cut-out

def clip_open_triangle(seg, tri) -> list:
    """Pieces of the closed segment outside the open triangle."""
    a, b = seg
    cuts = _split_points(a, b, list(ring_edges(tri)))
    keep = []
    for p, r in zip(cuts, cuts[1:]):
        if point_in_ring(midpoint(p, r), tri) is Location.INTERIOR:
            continue
        if keep and keep[-1][1] == p:
            keep[-1] = (keep[-1][0], r)
        else:
            keep.append((p, r))
    return [seg_key(s) for s in keep if s[0] != s[1]]


def _boxes_apart(s, t) -> bool:
    return (max(s[0].x, s[1].x) < min(t[0].x, t[1].x) or max(t[0].x, t[1].x) < min(s[0].x, s[1].x)
            or max(s[0].y, s[1].y) < min(t[0].y, t[1].y) or max(t[0].y, t[1].y) < min(s[0].y, s[1].y))


def _box_outside(seg, pts) -> bool:
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    return (max(seg[0].x, seg[1].x) <= min(xs) or min(seg[0].x, seg[1].x) >= max(xs)
            or max(seg[0].y, seg[1].y) <= min(ys) or min(seg[0].y, seg[1].y) >= max(ys))


def split_arrangement(segs) -> list:
    """Split segments so any two touch only at shared endpoints."""
    segs = sorted(merge_collinear(segs))
    cuts = {s: {s[0], s[1]} for s in segs}
    for s, t in combinations(segs, 2):
        if _boxes_apart(s, t):
            continue
        hit = segment_intersection(s, t)
        if hit is None:
            continue
        pts = [hit] if isinstance(hit, Point) else list(hit)
        for p in pts:
            cuts[s].add(p)
            cuts[t].add(p)
    out = set()
    for s, pts in cuts.items():
        a = s[0]
        order = sorted(pts, key=lambda p: (p.x - a.x) ** 2 + (p.y - a.y) ** 2)
        for p, r in zip(order, order[1:]):
            out.add(seg_key((p, r)))
    return sorted(out)


@dataclass
class Subdivision:
    N: int
    delta: Fraction
    stripes: list
    cells: list
    ebar: dict  # stripe index -> selected edges
    L0: list
    Lext: list
    L: list
    faces: list = field(default_factory=list)  # Region per bounded face
    owned: frozenset = frozenset()
    dangling: list = field(default_factory=list)
    face_walks: list = field(default_factory=list)


def owned_triangles(cells) -> frozenset:
    return frozenset(c.owner for c in cells if c.owner is not None)


def cut_out_owned(lines, ts: TriangleSet, owned) -> list:
    tris = ts.by_id()
    pieces = []
    for s in lines:
        cur = [seg_key(s)]
        for tid in sorted(owned):
            nxt = []
            tri = tris[tid].vertices
            for c in cur:
                if _box_outside(c, tri):
                    nxt.append(c)
                else:
                    nxt += clip_open_triangle(c, tri)
            cur = nxt
        pieces += cur
    for tid in sorted(owned):
        pieces += list(tris[tid].edges)
    return split_arrangement(pieces)


def trace_faces(segs):
    """Faces of a planar straight-line graph.

    Returns (bounded faces as Regions, raw face walks, dangling segments).
    A raw walk is (outer ring, holes) with every graph vertex kept, so
    consecutive walk points are always joined by a graph edge.  Dangling segments
    (degree-one chains) are removed first; they do not separate anything.
    """
    adj: dict = {}
    for a, b in segs:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    dangling = []
    stack = [v for v, nb in adj.items() if len(nb) == 1]
    while stack:
        v = stack.pop()
        if len(adj.get(v, ())) != 1:
            continue
        (u,) = adj.pop(v)
        adj[u].discard(v)
        dangling.append(seg_key((u, v)))
        if len(adj[u]) == 1:
            stack.append(u)
        elif not adj[u]:
            del adj[u]
    nbrs = {v: sorted(nb) for v, nb in adj.items()}
    used = set()
    cycles = []
    for a in sorted(nbrs):
        for b in nbrs[a]:
            if (a, b) in used:
                continue
            ring = []
            u, v = a, b
            while (u, v) not in used:
                used.add((u, v))
                ring.append(u)
                w = next_clockwise(u, v, [c for c in nbrs[v] if c != u] or [u])
                u, v = v, w
            cycles.append(tuple(ring))
    outers = [c for c in cycles if signed_area2(c) > 0]
    holes = [c for c in cycles if signed_area2(c) < 0]
    owners = {i: [] for i in range(len(outers))}
    for h in holes:
        probe = midpoint(h[0], h[1])
        best = None
        for i, o in enumerate(outers):
            if point_in_ring(probe, o) is Location.INTERIOR:
                if best is None or signed_area2(o) < signed_area2(outers[best]):
                    best = i
        if best is not None:
            owners[best].append(h)
    faces = [Region.from_rings([(o, owners[i])]) for i, o in enumerate(outers)]
    walks = [(o, tuple(owners[i])) for i, o in enumerate(outers)]
    return faces, walks, sorted(dangling)


def build_subdivision(ts: TriangleSet, delta) -> Subdivision:
    delta = Fraction(delta)
    stripes = build_stripes(ts, delta)
    cells, ebar = [], {}
    for s in stripes:
        cs, sel = build_cells(s, ts, delta)
        cells += cs
        ebar[s.index] = sel
    L0 = sorted({e for sel in ebar.values() for e in sel})
    Lext = sorted(build_lext(stripes, cells, L0, ts))
    owned = owned_triangles(cells)
    L = cut_out_owned(list(L0) + Lext, ts, owned)
    faces, walks, dangling = trace_faces(L)
    return Subdivision(ts.N, delta, stripes, cells, ebar, L0, Lext, L, faces, owned, dangling, walks)


# ------------------------------------------------------------------- audit

def is_basic_point(p, ts: TriangleSet) -> bool:
    N = ts.N
    if p in (Point(0, 0), Point(N, 0), Point(N, N), Point(0, N)):
        return True
    if p.x not in {v.x for t in ts.triangles for v in t.vertices}:
        return False
    if p.y in (0, N):
        return True
    return any(on_segment(p, *e) for t in ts.triangles for e in t.edges)


def touched_weight(region, ts: TriangleSet) -> Fraction:
    return sum((t.weight for t in ts.triangles if polygons_touch(region, t.vertices)), Fraction(0))


def lines_touching(tri, lines) -> list:
    xs = [v.x for v in tri]
    ys = [v.y for v in tri]
    out = []
    for s in lines:
        if max(s[0].x, s[1].x) <= min(xs) or min(s[0].x, s[1].x) >= max(xs):
            continue
        if max(s[0].y, s[1].y) <= min(ys) or min(s[0].y, s[1].y) >= max(ys):
            continue
        if segment_crosses_open_polygon(s, tri):
            out.append(s)
    return out


@dataclass
class AuditReport:
    violations: list = field(default_factory=list)
    stripe_count: int = 0
    max_ebar: int = 0
    max_light_weight: Fraction = Fraction(0)
    max_crossings: int = 0
    max_crossings_before: int = 0
    max_face_weight: Fraction = Fraction(0)
    n_L0: int = 0
    n_L0_Lext: int = 0
    n_L: int = 0
    n_faces: int = 0
    constants: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_subdivision(sub: Subdivision, ts: TriangleSet, delta=None) -> AuditReport:
    delta = Fraction(sub.delta if delta is None else delta)
    W = ts.total_weight
    rep = AuditReport()
    bad = rep.violations
    d2, d4 = delta ** 2, delta ** 4

    rep.stripe_count = len(sub.stripes)
    if rep.stripe_count > math.ceil(1 / d2):
        bad.append(("stripe_count", rep.stripe_count))
    for s in sub.stripes:
        if W and not s.weight < d2 * W:
            bad.append(("stripe_weight", s.index))
    for i, sel in sub.ebar.items():
        rep.max_ebar = max(rep.max_ebar, len(sel))
        if len(sel) > 2 / d4:
            bad.append(("ebar", i, len(sel)))
    by_stripe = {s.index: s for s in sub.stripes}
    for c in sub.cells:
        if c.kind == "light":
            w = touched_weight(c.corners, ts)
            rep.max_light_weight = max(rep.max_light_weight, w)
            if w > d4 * W:
                bad.append(("light_cell", c.stripe, str(w)))
        else:
            for e in crossing_edges(by_stripe[c.stripe], ts):
                if segment_crosses_open_polygon(e, c.corners):
                    bad.append(("dense_cell", c.stripe, e))

    rep.n_L0 = len(sub.L0)
    rep.n_L0_Lext = len(set(sub.L0) | set(sub.Lext))
    rep.n_L = len(sub.L)
    rep.n_faces = len(sub.faces)
    rep.constants = {
        "L0_times_delta6": Fraction(rep.n_L0) * delta ** 6,
        "L0_Lext_times_delta8": Fraction(rep.n_L0_Lext) * delta ** 8,
    }
    if rep.constants["L0_Lext_times_delta8"] > 64:
        bad.append(("line_count", rep.n_L0_Lext))

    for e in sub.L0:
        if any(segment_crosses_open_polygon(e, t.vertices) for t in ts.triangles):
            bad.append(("L0_crosses", e))
    pre = list(sub.L0) + list(sub.Lext)
    for t in ts.triangles:
        rep.max_crossings_before = max(rep.max_crossings_before, len(lines_touching(t.vertices, pre)))
        k = len(lines_touching(t.vertices, sub.L))
        rep.max_crossings = max(rep.max_crossings, k)
        if k > 4:
            bad.append(("crossings", t.id, k))

    for s in sub.L:
        for p in s:
            if not is_basic_point(p, ts):
                bad.append(("endpoint", p))
    for s, t in combinations(sub.L, 2):
        if _boxes_apart(s, t):
            continue
        hit = segment_intersection(s, t)
        if hit is not None and not (isinstance(hit, Point) and hit in s and hit in t):
            bad.append(("lines_touch", s, t))

    total_area = sum((f.area for f in sub.faces), Fraction(0))
    if total_area != sub.N * sub.N:
        bad.append(("face_area", str(total_area)))
    owned_regions = {Region.from_polygon(t.vertices) for t in ts.triangles if t.id in sub.owned}
    for f in sub.faces:
        if f in owned_regions:
            continue
        w = sum((t.weight for t in ts.triangles if polygons_touch(f, t.vertices)), Fraction(0))
        rep.max_face_weight = max(rep.max_face_weight, w)
        if w > 3 * d2 * W:
            bad.append(("face_weight", str(w)))
    return rep


# --------------------------------------------------------------------- I/O

def subdivision_to_dict(sub: Subdivision) -> dict:
    from .instance import frac_str

    def P(p):
        return [frac_str(p.x), frac_str(p.y)]

    def S(s):
        return [P(s[0]), P(s[1])]

    return {
        "N": sub.N,
        "delta": frac_str(sub.delta),
        "stripes": [[frac_str(s.x0), frac_str(s.x1), frac_str(s.weight)] for s in sub.stripes],
        "cells": [{"stripe": c.stripe, "kind": c.kind, "owner": c.owner,
                   "corners": [P(p) for p in c.corners]} for c in sub.cells],
        "L0": [S(s) for s in sub.L0],
        "Lext": [S(s) for s in sub.Lext],
        "L": [S(s) for s in sub.L],
        "owned": sorted(sub.owned),
        "faces": [[[P(p) for p in r] for r in f.rings()] for f in sub.faces],
    }
