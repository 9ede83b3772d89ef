"""GEO-DP: memoized recursion over polygonal cells with DP-point corners.

A cell Q is solved by trying binary splits and keeping the best sum of child
solutions, falling back to the heaviest single polygon inside Q.  Two split
shapes are tried:

* carve-outs  {P, components of Q \\ P} for each polygon P inside Q;
* cuts        components of Q n G and Q \\ G for a cut polygon G whose corners
  are basic DP-points.

Cut polygons come in two forms.  A *slab* is [0, x] x [0, N] with x the
x-coordinate of an input vertex.  A *staircase* is the part of the square left
of the path (a.x, 0) -> a -> b -> (b.x, N) (or its top-down mirror) for two
candidate points a, b with a.x < b.x.  Both have all corners at basic
DP-points because vertical lines through vertex x-coordinates meet the bottom
and top sides of the square in basic points.

Every candidate split is first bounded from above by the exact optimum of the
polygons it keeps; splits that cannot beat the incumbent are skipped.  This
never changes the returned value or the chosen split, because splits are
scanned in a fixed order and only strict improvements replace the incumbent.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .dp_points import DpPointSet, basic_dp_points
from .geometry import (
    Location,
    Point,
    Region,
    contains,
    is_simple,
    point_in_region,
    polygon,
    polygons_touch,
    clean_ring,
    region_intersect,
    region_subtract,
    signed_area2,
)
from .instance import Instance, Solution
from .oracle import IntersectionGraph, build_intersection_graph, exact_mwis

FAMILIES = ("carve", "restricted", "exhaustive")


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    k: int = 64
    ell: int = 6
    family: str = "exhaustive"
    max_cells: int = 20000
    epsilon: Fraction = Fraction(1, 4)
    strict_budget: bool = False

    def __post_init__(self):
        if self.k < 4:
            raise ValueError("k must be at least 4")
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")


@dataclass
class DpEntry:
    weight: Fraction
    chosen: frozenset
    split: Optional[tuple] = None  # (kind, label, child keys)
    polys: frozenset = frozenset()


@dataclass
class Stats:
    cells_expanded: int = 0
    splits_tried: int = 0
    splits_pruned: int = 0
    splits_rejected_k: int = 0
    budget_exceeded: bool = False
    wall_time: float = 0.0
    suggested_k: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def suggested_k(n: int, epsilon: Fraction, ell: int) -> int:
    """Edge budget that the approximation argument asks for."""
    j = math.ceil(math.log(float(Fraction(n * n) / epsilon), 1.5)) if n > 1 else 0
    return (j + 1) ** 2 * (ell + 4) ** 2


def _staircase(a: Point, b: Point, N: int, upward: bool):
    if upward:
        raw = [Point(0, 0), Point(a.x, 0), a, b, Point(b.x, N), Point(0, N)]
    else:
        raw = [Point(0, 0), Point(b.x, 0), b, a, Point(a.x, N), Point(0, N)]
    ring = clean_ring(raw)
    if len(ring) < 3 or not is_simple(ring) or signed_area2(ring) == 0:
        return None
    return ring if signed_area2(ring) > 0 else ring[::-1]


class GeoDP:
    def __init__(self, inst: Instance, cfg: SolverConfig, dp: Optional[DpPointSet] = None):
        self.inst = inst
        self.cfg = cfg
        self.dp = dp or basic_dp_points(inst)
        self.polys = {p.id: p for p in inst.polygons}
        self.graph: IntersectionGraph = build_intersection_graph(inst)
        self.memo: dict = {}
        self.stats = Stats(suggested_k=suggested_k(inst.n, cfg.epsilon, cfg.ell))
        self._ub_cache: dict = {}
        self._cls_cache: dict = {}
        self._gammas_cache: dict = {}
        self.root = Region.square(inst.N)

    # ---------------------------------------------------------- helpers
    def upper_bound(self, ids) -> Fraction:
        ids = frozenset(ids)
        hit = self._ub_cache.get(ids)
        if hit is None:
            if len(ids) <= 24:
                sub = IntersectionGraph({i: self.graph.weights[i] for i in ids},
                                        {i: self.graph.adjacency[i] & ids for i in ids})
                hit = exact_mwis(sub).total_weight
            else:
                hit = sum((self.graph.weights[i] for i in ids), Fraction(0))
            self._ub_cache[ids] = hit
        return hit

    def polys_in(self, region: Region, candidates) -> frozenset:
        return frozenset(i for i in candidates if contains(region, self.polys[i].vertices))

    def classify(self, gamma, pid) -> str:
        key = (gamma, pid)
        c = self._cls_cache.get(key)
        if c is None:
            ring = self.polys[pid].vertices
            if contains(gamma, ring):
                c = "in"
            elif not polygons_touch(gamma, ring):
                c = "out"
            else:
                c = "cross"
            self._cls_cache[key] = c
        return c

    def _fallback(self, ids) -> DpEntry:
        if not ids:
            return DpEntry(Fraction(0), frozenset(), None, frozenset())
        best = min(ids, key=lambda i: (-self.polys[i].weight, i))
        return DpEntry(self.polys[best].weight, frozenset([best]), None, frozenset(ids))

    # ------------------------------------------------------- candidates
    def gamma_candidates(self, q: Region, ids) -> list:
        """Cut polygons for cell q, in scan order."""
        cfg = self.cfg
        if cfg.family == "carve" or cfg.ell < 4:
            return []
        N = self.inst.N
        x0, _, x1, _ = q.bbox()
        out = []
        for x in self.dp.xs:
            if x0 < x < x1:
                out.append(("slab", polygon([(0, 0), (x, 0), (x, N), (0, N)])))
        if cfg.ell < 6:
            pts_src = []
        elif cfg.family == "restricted":
            pts_src = sorted({v for i in ids for v in self.polys[i].vertices})
        else:
            pts_src = sorted(p for p in self.dp.basic
                             if x0 <= p.x <= x1 and point_in_region(p, q) is not Location.EXTERIOR)
        for ia, a in enumerate(pts_src):
            for b in pts_src[ia + 1:]:
                if a.x == b.x:
                    continue
                for up in (True, False):
                    key = (a, b, up)
                    g = self._gammas_cache.get(key, 0)
                    if g == 0:
                        g = _staircase(a, b, N, up)
                        self._gammas_cache[key] = g
                    if g is not None and len(g) <= cfg.ell:
                        out.append(("stair", g))
        return out

    def enumerate_splits(self, q: Region, ids=None) -> Iterator[tuple]:
        """Yield (kind, gamma, pieces) for every admissible split of q."""
        if ids is None:
            ids = self.polys_in(q, self.polys)
        for pid in sorted(ids, key=lambda i: (-self.polys[i].weight, i)):
            ring = self.polys[pid].vertices
            pieces = [Region.from_polygon(ring)] + region_subtract(q, ring).split_components()
            if all(p.edge_count <= self.cfg.k for p in pieces):
                yield "carve", Region.from_polygon(ring), pieces
        for kind, g in self.gamma_candidates(q, ids):
            pieces = region_intersect(q, g).split_components() + region_subtract(q, g).split_components()
            if len(pieces) >= 2 and all(p.edge_count <= self.cfg.k for p in pieces):
                yield kind, Region.from_polygon(g), pieces

    # ------------------------------------------------------------ solve
    def solve_cell(self, q: Region, ids: frozenset) -> DpEntry:
        hit = self.memo.get(q)
        if hit is not None:
            return hit
        if len(ids) <= 1:
            entry = self._fallback(ids)
            self.memo[q] = entry
            return entry
        if len(self.memo) >= self.cfg.max_cells:
            self.stats.budget_exceeded = True
            if self.cfg.strict_budget:
                raise BudgetExceeded(f"more than {self.cfg.max_cells} cells")
            return self._fallback(ids)
        self.stats.cells_expanded += 1
        ub_all = self.upper_bound(ids)
        best_w, best_sol, best_split = Fraction(-1), frozenset(), None

        def consider(kind, label, child_specs):
            nonlocal best_w, best_sol, best_split
            total, chosen, keys = Fraction(0), set(), []
            for region, cids in child_specs:
                e = self.solve_cell(region, cids)
                total += e.weight
                chosen |= e.chosen
                keys.append(region)
            if total > best_w:
                best_w, best_sol, best_split = total, frozenset(chosen), (kind, label, tuple(keys))

        # carve-outs
        for pid in sorted(ids, key=lambda i: (-self.polys[i].weight, i)):
            if best_w >= ub_all:
                break
            self.stats.splits_tried += 1
            rest = frozenset(i for i in ids if i != pid and i not in self.graph.adjacency[pid])
            if self.polys[pid].weight + self.upper_bound(rest) <= best_w:
                self.stats.splits_pruned += 1
                continue
            ring = self.polys[pid].vertices
            comps = region_subtract(q, ring).split_components()
            if len(ring) > self.cfg.k or any(c.edge_count > self.cfg.k for c in comps):
                self.stats.splits_rejected_k += 1
                continue
            specs = [(Region.from_polygon(ring), frozenset([pid]))]
            specs += self._distribute(comps, rest)
            consider("carve", pid, specs)

        # cuts
        if best_w < ub_all:
            for kind, g in self.gamma_candidates(q, ids):
                if best_w >= ub_all:
                    break
                cls = {i: self.classify(g, i) for i in ids}
                inside = frozenset(i for i, c in cls.items() if c == "in")
                outside = frozenset(i for i, c in cls.items() if c == "out")
                if inside == ids or outside == ids:
                    continue
                self.stats.splits_tried += 1
                if self.upper_bound(inside) + self.upper_bound(outside) <= best_w:
                    self.stats.splits_pruned += 1
                    continue
                a = region_intersect(q, g).split_components()
                b = region_subtract(q, g).split_components()
                if any(c.edge_count > self.cfg.k for c in a + b):
                    self.stats.splits_rejected_k += 1
                    continue
                specs = self._distribute(a, inside) + self._distribute(b, outside)
                consider(kind, g, specs)

        fb = self._fallback(ids)
        if best_w > fb.weight:
            entry = DpEntry(best_w, best_sol, best_split, ids)
        else:
            entry = DpEntry(fb.weight, fb.chosen, None, ids)
        self.memo[q] = entry
        return entry

    def _distribute(self, comps, ids) -> list:
        if len(comps) == 1:
            return [(comps[0], frozenset(ids))]
        out = []
        left = set(ids)
        for c in comps:
            mine = self.polys_in(c, sorted(left))
            left -= mine
            out.append((c, mine))
        return out

    def solve(self):
        t = time.perf_counter()
        ids = frozenset(self.polys)
        entry = self.solve_cell(self.root, self.polys_in(self.root, sorted(ids)))
        self.stats.wall_time = time.perf_counter() - t
        return Solution(entry.chosen, entry.weight), self.stats


def solve(inst: Instance, cfg: SolverConfig = SolverConfig(), dp: Optional[DpPointSet] = None):
    """Run GEO-DP; returns (Solution, Stats)."""
    return GeoDP(inst, cfg, dp).solve()


def solve_with_trace(inst: Instance, cfg: SolverConfig = SolverConfig(), dp: Optional[DpPointSet] = None):
    g = GeoDP(inst, cfg, dp)
    sol, stats = g.solve()
    return sol, stats, extract_trace(g)


# ------------------------------------------------------------------- traces

@dataclass
class TraceNode:
    region: Region
    polys: frozenset
    chosen: frozenset
    kind: Optional[str] = None
    label: object = None
    children: list = field(default_factory=list)


def extract_trace(g: GeoDP) -> TraceNode:
    def build(region):
        e = g.memo.get(region)
        if e is None:
            return TraceNode(region, frozenset(), frozenset())
        node = TraceNode(region, e.polys, e.chosen)
        if e.split is not None:
            node.kind, node.label = e.split[0], e.split[1]
            node.children = [build(c) for c in e.split[2]]
        return node
    return build(g.root)


@dataclass
class TraceReport:
    certified: bool
    sibling_overlaps: list = field(default_factory=list)
    crowded_leaves: list = field(default_factory=list)
    level_ratios: list = field(default_factory=list)
    level_losses: list = field(default_factory=list)
    depth: int = 0


def certify_trace(inst: Instance, trace: TraceNode, reference=None) -> TraceReport:
    """Check the split tree: disjoint siblings, <= 1 chosen polygon per leaf,
    and the fraction of the reference solution surviving at each depth."""
    weights = {p.id: p.weight for p in inst.polygons}
    ref = frozenset(reference if reference is not None else trace.chosen)
    total = sum((weights[i] for i in ref), Fraction(0))
    rep = TraceReport(True)
    levels = []

    def walk(node, depth):
        while len(levels) <= depth:
            levels.append([])
        levels[depth].append(node)
        if not node.children:
            if len(node.chosen) > 1:
                rep.crowded_leaves.append(node.region)
            return
        kids = node.children
        for i in range(len(kids)):
            for j in range(i + 1, len(kids)):
                if region_intersect(kids[i].region, kids[j].region).area != 0:
                    rep.sibling_overlaps.append((depth, i, j))
        for c in kids:
            walk(c, depth + 1)

    walk(trace, 0)
    rep.depth = len(levels) - 1
    prev = Fraction(1)
    for depth, nodes in enumerate(levels):
        # leaves persist into deeper levels
        members = list(nodes)
        for d in range(depth):
            members += [n for n in levels[d] if not n.children and _leaf_depth(n, levels) == d]
        kept = set()
        for n in members:
            kept |= n.polys & ref
        ratio = (sum((weights[i] for i in kept), Fraction(0)) / total) if total else Fraction(1)
        rep.level_ratios.append(ratio)
        rep.level_losses.append(1 - ratio / prev if prev else Fraction(0))
        prev = ratio
    rep.certified = not rep.sibling_overlaps and not rep.crowded_leaves
    return rep


def _leaf_depth(node, levels) -> int:
    for d, nodes in enumerate(levels):
        if any(n is node for n in nodes):
            return d
    return -1
