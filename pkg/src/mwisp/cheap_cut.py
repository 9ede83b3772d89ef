"""Balanced cheap cuts and their verifier.

A cut is a simple polygon G.  Against a set of pairwise non-touching weighted
polygons it is *balanced, alpha-cheap and ell-bounded* when G has at most ell
edges, the polygons met by its boundary weigh at most alpha * W, and the
polygons strictly inside and strictly outside each weigh at most 2W/3.

``build_cheap_cut_triangles`` constructs such a cut for triangles: subdivide
the square, find a balanced separator cycle in the weighted planar graph,
replace each face edge by one of the two boundary arcs of its face, and pull
a balanced simple cycle out of the resulting closed walk.
``lift_cut_to_polygons`` turns a cut for the triangulations of polygons into
one for the polygons, walking around any polygon that a cut edge enters only
along triangulation diagonals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .geometry import (
    GeometryError,
    Location,
    Point,
    clean_ring,
    contains,
    cross,
    is_simple,
    midpoint,
    on_segment,
    point_in_ring,
    polygons_touch,
    ring_edges,
    segment_crosses_open_polygon,
    signed_area2,
    triangulate,
)
from .instance import Instance
from .partition import TriangleSet, WTriangle, build_subdivision, is_basic_point
from .separator import build_graph, find_separator


class CutError(GeometryError):
    pass


class PreconditionHeavyTriangle(CutError):
    pass


class BalanceUnrepairable(CutError):
    pass


C_CUT_CEILING = 16


def edge_ceiling(delta) -> int:
    return math.ceil(1 / Fraction(delta) ** 3)


# ----------------------------------------------------------------- verifier

@dataclass
class CutReport:
    inside: list
    crossed: list
    outside: list
    w_inside: Fraction
    w_crossed: Fraction
    w_outside: Fraction
    total: Fraction
    edges: int
    alpha_observed: Fraction
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def balanced(self) -> bool:
        return self.checks["inside"] and self.checks["outside"]


def as_weighted(polys) -> list:
    """Normalise an Instance, TriangleSet or iterable to (id, ring, weight)."""
    if isinstance(polys, Instance):
        return [(p.id, p.vertices, p.weight) for p in polys.polygons]
    if isinstance(polys, TriangleSet):
        return [(t.id, t.vertices, t.weight) for t in polys.triangles]
    return [(i, tuple(r), Fraction(w)) for i, r, w in polys]


def verify_cut(gamma, polys, alpha, ell) -> CutReport:
    items = as_weighted(polys)
    gamma = tuple(gamma)
    inside, crossed, outside = [], [], []
    for pid, ring, w in items:
        if contains(gamma, ring):
            inside.append(pid)
        elif polygons_touch(gamma, ring):
            crossed.append(pid)
        else:
            outside.append(pid)
    wt = {pid: w for pid, _, w in items}
    total = sum(wt.values(), Fraction(0))
    wi = sum((wt[i] for i in inside), Fraction(0))
    wc = sum((wt[i] for i in crossed), Fraction(0))
    wo = sum((wt[i] for i in outside), Fraction(0))
    edges = len(clean_ring(gamma))
    rep = CutReport(inside, crossed, outside, wi, wc, wo, total, edges,
                    wc / total if total else Fraction(0))
    rep.checks = {
        "edges": edges <= ell,
        "cheap": wc <= Fraction(alpha) * total,
        "inside": 3 * wi <= 2 * total,
        "outside": 3 * wo <= 2 * total,
    }
    return rep


@dataclass
class Cut:
    gamma: tuple  # ccw ring
    alpha_observed: Fraction
    ell_observed: int
    side_weights: tuple  # (inside, crossed, outside)
    report: CutReport | None = None
    info: dict = field(default_factory=dict)


def _cut_from(gamma, rep: CutReport, **info) -> Cut:
    return Cut(tuple(gamma), rep.alpha_observed, rep.edges,
               (rep.w_inside, rep.w_crossed, rep.w_outside), rep, dict(info))


# ------------------------------------------------------------- walk surgery

def collapse_backtracks(walk) -> list:
    """Cancel every immediate u -> v -> u step of a closed walk."""
    n = len(walk)
    steps = [(walk[i], walk[(i + 1) % n]) for i in range(n) if walk[i] != walk[(i + 1) % n]]
    stack = []
    for a, b in steps:
        if stack and stack[-1] == (b, a):
            stack.pop()
        else:
            stack.append((a, b))
    while len(stack) >= 2 and stack[0] == (stack[-1][1], stack[-1][0]):
        stack.pop(0)
        stack.pop()
    return [a for a, _ in stack]


def simple_cycles(walk) -> list:
    """Split a closed walk at repeated points into simple closed walks."""
    out = []
    path, pos = [], {}
    for p in list(walk) + [walk[0]] if walk else []:
        if p in pos:
            j = pos[p]
            loop = path[j:]
            if len(loop) >= 3:
                out.append(loop)
            for q in path[j + 1:]:
                del pos[q]
            path = path[:j + 1]
        else:
            pos[p] = len(path)
            path.append(p)
    return out


def _ccw(ring) -> tuple:
    ring = clean_ring(ring)
    return tuple(ring) if signed_area2(ring) > 0 else tuple(ring[::-1])


def _arc(ring, u, w, forward: bool) -> list:
    """Boundary points from u to w (inclusive) along a face walk."""
    k = len(ring)
    i, j = ring.index(u), ring.index(w)
    out = [ring[i]]
    step = 1 if forward else -1
    while i != j:
        i = (i + step) % k
        out.append(ring[i])
    return out


def _face_probe(region) -> Point:
    outer = region.components[0][0]
    for tri in triangulate(outer):
        c = Point(Fraction(tri[0].x + tri[1].x + tri[2].x) / 3, Fraction(tri[0].y + tri[1].y + tri[2].y) / 3)
        if point_in_ring(c, outer) is Location.INTERIOR:
            return c
    raise CutError("face without interior probe")


def _expand(vc, g, choice) -> list:
    """Closed point walk of a V-cycle with face edges replaced by arcs."""
    walk = []
    nodes = vc.nodes
    m = len(nodes)
    for i, nd in enumerate(nodes):
        if nd[0] == "v":
            if not walk or walk[-1] != nd[1]:
                walk.append(nd[1])
            continue
        u, w = nodes[i - 1][1], nodes[(i + 1) % m][1]
        arc = _arc(g.walks[nd[1]], u, w, choice[nd[1]])
        walk.extend(arc[1:])
    if len(walk) > 1 and walk[0] == walk[-1]:
        walk.pop()
    return walk


# ------------------------------------------------------------ triangle case

def build_cheap_cut_triangles(ts: TriangleSet, delta, max_face_choices: int = 12) -> Cut:
    delta = Fraction(delta)
    W = ts.total_weight
    for t in ts.triangles:
        if 3 * t.weight >= W:
            raise PreconditionHeavyTriangle(f"{t.id} weighs {t.weight} >= W/3")
    sub = build_subdivision(ts, delta)
    g = build_graph(sub, ts)
    M = g.total_cost
    kbar = max(1, math.ceil(M / (delta * W)))
    vc = find_separator(g, kbar)
    alpha = C_CUT_CEILING * delta
    ell = edge_ceiling(delta)

    faces = [n[1] for n in vc.nodes if n[0] == "f"]
    # for each crossed face, which arc direction leaves the face inside
    options = []
    for f in faces:
        probe = _face_probe(g.faces[f])
        pref = []
        for fwd in (True, False):
            trial = _expand(vc, g, {**{x: True for x in faces}, f: fwd})
            inside = len(trial) >= 3 and point_in_ring(probe, trial) is Location.INTERIOR
            pref.append((not inside, not fwd, fwd))
        options.append([p[2] for p in sorted(pref)])
    combos = product(*options) if len(faces) <= max_face_choices else [tuple(o[0] for o in options)]

    best = None
    for combo in combos:
        walk = collapse_backtracks(_expand(vc, g, dict(zip(faces, combo))))
        for loop in simple_cycles(walk):
            ring = _ccw(loop)
            if len(ring) < 3 or not is_simple(ring):
                continue
            rep = verify_cut(ring, ts, alpha, ell)
            if rep.ok:
                best = (ring, rep)
                break
            if best is None and rep.balanced:
                best = (ring, rep)
        if best and best[1].ok:
            break
    if best is None:
        raise BalanceUnrepairable("no balanced simple cycle in the expanded separator")
    ring, rep = best
    basic = all(is_basic_point(p, ts) for p in ring)
    return _cut_from(ring, rep, kbar=kbar, c_sep=vc.c_sep, face_edges=vc.face_edge_count,
                     c_cut=rep.alpha_observed / delta, all_basic=basic, delta=delta,
                     separator_cost=vc.ordinary_cost, total_cost=M)


# ------------------------------------------------------------ polygon case

def triangle_set_of(inst: Instance) -> tuple:
    """Triangulate every polygon, splitting its weight equally.

    Returns (TriangleSet, map polygon id -> list of triangle rings).
    """
    tris, tmap = [], {}
    for p in inst.polygons:
        parts = [_ccw(t) for t in triangulate(p.vertices)]
        tmap[p.id] = parts
        for j, t in enumerate(parts):
            tris.append(WTriangle(f"{p.id}#{j}", t, p.weight / len(parts)))
    return TriangleSet(tuple(tris), inst.N), tmap


def _diagonal_runs(e, ring):
    """Sub-segments of e between polygon vertices that run through the interior."""
    a, b = e
    on = sorted({v for v in ring if on_segment(v, a, b)} | {a, b},
                key=lambda p: (p.x - a.x) ** 2 + (p.y - a.y) ** 2)
    runs = []
    for u, v in zip(on, on[1:]):
        if u in ring and v in ring and point_in_ring(midpoint(u, v), ring) is Location.INTERIOR:
            runs.append((u, v))
    return runs


def _side_arc(ring, u, v, inside: bool) -> list:
    """Arc of the polygon boundary from u to v on the chosen side of u -> v.

    Walking the arc to the right of u -> v pulls the polygon into a ccw cut;
    the arc to the left leaves it outside.
    """
    for fwd in (True, False):
        arc = _arc(ring, u, v, fwd)
        right = cross(u, v, arc[1]) < 0
        if right == inside:
            return arc
    raise CutError("degenerate circumvention")


def lift_cut_to_polygons(cut: Cut, inst: Instance, tmap: dict, max_choices: int = 10) -> Cut:
    """Reroute cut edges that cross a polygon only along its diagonals."""
    K = max(len(p.vertices) for p in inst.polygons)
    gamma = _ccw(cut.gamma)
    polys = {p.id: p.vertices for p in inst.polygons}
    fixes = []  # (edge index, polygon id, run)
    for i, e in enumerate(ring_edges(gamma)):
        for pid, ring in polys.items():
            if not segment_crosses_open_polygon(e, ring):
                continue
            if any(segment_crosses_open_polygon(e, t) for t in tmap[pid]):
                continue
            for run in _diagonal_runs(e, ring):
                fixes.append((i, pid, run))
    alpha = K * cut.alpha_observed
    ell = K * cut.ell_observed
    if not fixes:
        rep = verify_cut(gamma, inst, alpha, ell)
        return _cut_from(gamma, rep, circumvented=[], K=K)
    pids = sorted({f[1] for f in fixes})
    combos = product((True, False), repeat=len(pids)) if len(pids) <= max_choices \
        else [tuple(True for _ in pids)]
    fallback = None
    for combo in combos:
        side = dict(zip(pids, combo))
        walk = []
        edges = list(ring_edges(gamma))
        for i, (a, b) in enumerate(edges):
            pts = [a]
            for _, pid, (u, v) in sorted((f for f in fixes if f[0] == i),
                                         key=lambda f: (f[2][0].x - a.x) ** 2 + (f[2][0].y - a.y) ** 2):
                pts += _side_arc(polys[pid], u, v, side[pid])
            walk += [p for p in pts if not walk or p != walk[-1]]
        walk = collapse_backtracks(walk)
        ring = clean_ring(walk)
        if len(ring) < 3 or not is_simple(ring):
            continue
        ring = _ccw(ring)
        rep = verify_cut(ring, inst, alpha, ell)
        if rep.ok:
            return _cut_from(ring, rep, circumvented=pids, K=K)
        if fallback is None and rep.balanced:
            fallback = (ring, rep)
    if fallback is None:
        raise BalanceUnrepairable("no side assignment keeps the lifted cut balanced and simple")
    ring, rep = fallback
    return _cut_from(ring, rep, circumvented=pids, K=K)


def build_cheap_cut_polygons(inst: Instance, delta) -> Cut:
    W = inst.total_weight()
    for p in inst.polygons:
        if 3 * p.weight >= W:
            raise PreconditionHeavyTriangle(f"{p.id} weighs {p.weight} >= W/3")
    ts, tmap = triangle_set_of(inst)
    return lift_cut_to_polygons(build_cheap_cut_triangles(ts, delta), inst, tmap)


def cut_to_dict(cut: Cut) -> dict:
    from .instance import frac_str

    rep = cut.report
    out = {
        "gamma": [[frac_str(p.x), frac_str(p.y)] for p in cut.gamma],
        "alpha_observed": frac_str(cut.alpha_observed),
        "ell_observed": cut.ell_observed,
        "side_weights": [frac_str(w) for w in cut.side_weights],
    }
    if rep is not None:
        out["report"] = {"inside": sorted(rep.inside), "crossed": sorted(rep.crossed),
                         "outside": sorted(rep.outside), "checks": rep.checks}
    return out
