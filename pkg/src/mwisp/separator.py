"""Weighted planar graph of a subdivision and balanced V-cycle separators.

A V-cycle is a closed Jordan curve that runs along graph edges (ordinary
edges, which cost what they touch) and may also cut straight through a face
between two of its corners (face edges, free but limited in number).  We model
it as a simple cycle in the augmented graph G+ that has one node per vertex,
one node per bounded face, and a spoke from every face node to each corner
occurrence on the face's boundary walk.  Crossing a face means entering and
leaving its node by two spokes.

G+ splits the square into wedges (corner u, corner v, face node f), one per
boundary step u -> v of f.  The two sides of a cycle are read off by merging
wedges across every G+ edge the cycle does not use.  A face counts towards a
side only when all its wedges lie on that side; faces the cycle passes
through count towards neither.

The search enumerates fundamental cycles of shortest-path trees of G+ under a
few spoke penalties.  For a spanning tree, the non-tree edges form a spanning
tree of the wedge adjacency (tree-cotree duality), so each fundamental cycle's
enclosed wedges are one cotree subtree and its weight is read in O(1).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import GeometryError, polygons_touch, seg_key, segment_crosses_open_polygon
from .partition import Subdivision, TriangleSet, lines_touching


class SeparatorError(GeometryError):
    pass


class DisconnectedLines(SeparatorError):
    pass


class NoBalancedCycle(SeparatorError):
    pass


class CapExceeded(SeparatorError):
    pass


OUT = "OUT"


@dataclass(frozen=True)
class PEdge:
    key: tuple  # ("e", segment) or ("s", face index, corner index)
    a: tuple  # G+ node
    b: tuple
    cost: Fraction
    sides: tuple  # the two wedges it separates


@dataclass
class PlanarGraph:
    vertices: list  # sorted points
    edges: dict  # segment -> cost
    faces: list  # Regions
    walks: list  # face index -> boundary walk (ring of points)
    face_weights: list
    plus_edges: list = field(default_factory=list)
    wedge_weight: dict = field(default_factory=dict)
    wedge_face: dict = field(default_factory=dict)
    dangling: frozenset = frozenset()

    @property
    def total_weight(self) -> Fraction:
        return sum(self.face_weights, Fraction(0))

    @property
    def total_cost(self) -> Fraction:
        return sum(self.edges.values(), Fraction(0))

    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces) + 1


def _connected(points, segs) -> bool:
    parent = {p: p for p in points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in segs:
        parent[find(a)] = find(b)
    return len({find(p) for p in points}) <= 1


def edge_cost(seg, ts: TriangleSet) -> Fraction:
    return sum((t.weight for t in ts.triangles if lines_touching(t.vertices, [seg])), Fraction(0))


def build_graph(sub: Subdivision, ts: TriangleSet) -> PlanarGraph:
    segs = list(sub.L)
    pts = sorted({p for s in segs for p in s})
    if not _connected(pts, segs):
        raise DisconnectedLines("lines of the subdivision do not form a connected graph")
    costs = {s: edge_cost(s, ts) for s in segs}

    fw = [Fraction(0)] * len(sub.faces)
    for t in ts.triangles:
        hit = [i for i, f in enumerate(sub.faces) if polygons_touch(f, t.vertices)]
        for i in hit:
            fw[i] += t.weight / len(hit)

    walks = []
    for outer, holes in sub.face_walks:
        if holes:
            raise DisconnectedLines("face with a hole")
        walks.append(tuple(outer))
    g = PlanarGraph(pts, costs, list(sub.faces), walks, fw, dangling=frozenset(sub.dangling))
    _augment(g)
    if g.euler() != 2:
        raise SeparatorError(f"Euler characteristic {g.euler()} != 2")
    return g


def graph_from_lines(segs, face_weight=None, cost=None) -> PlanarGraph:
    """Planar graph straight from segments (used for small hand-made graphs).

    ``face_weight`` maps a face Region to its weight and ``cost`` a segment to
    its cost; both default to zero.
    """
    from .partition import split_arrangement, trace_faces

    segs = split_arrangement(segs)
    pts = sorted({p for s in segs for p in s})
    if not _connected(pts, segs):
        raise DisconnectedLines("segments do not form a connected graph")
    faces, walks, dangling = trace_faces(segs)
    if any(h for _, h in walks):
        raise DisconnectedLines("face with a hole")
    fw = [Fraction(face_weight(f)) if face_weight else Fraction(0) for f in faces]
    costs = {s: Fraction(cost(s)) if cost else Fraction(0) for s in segs}
    g = PlanarGraph(pts, costs, faces, [tuple(o) for o, _ in walks], fw, dangling=frozenset(dangling))
    _augment(g)
    return g


def _augment(g: PlanarGraph) -> None:
    left = {}
    for fi, ring in enumerate(g.walks):
        k = len(ring)
        for i in range(k):
            left[(ring[i], ring[(i + 1) % k])] = (fi, i)
            g.wedge_weight[(fi, i)] = g.face_weights[fi] / k
            g.wedge_face[(fi, i)] = fi
    for s, c in sorted(g.edges.items()):
        if s in g.dangling:
            continue
        a, b = s
        g.plus_edges.append(PEdge(("e", s), ("v", a), ("v", b), c,
                                  (left.get((a, b), OUT), left.get((b, a), OUT))))
    for fi, ring in enumerate(g.walks):
        k = len(ring)
        for i in range(k):
            g.plus_edges.append(PEdge(("s", fi, i), ("v", ring[i]), ("f", fi), Fraction(0),
                                      ((fi, (i - 1) % k), (fi, i))))


# ------------------------------------------------------------------ cycles

@dataclass
class VCycle:
    nodes: list  # closed G+ walk (first node not repeated)
    edge_keys: list
    points: list  # vertex points in order, face nodes dropped
    face_edges: list  # (u, face index, w)
    face_edge_count: int
    ordinary_cost: Fraction
    interior_weight: Fraction
    exterior_weight: Fraction
    crossed_weight: Fraction
    interior_faces: frozenset
    crossed_faces: frozenset
    c_sep: Fraction = Fraction(0)

    def balanced(self, total) -> bool:
        return 3 * self.interior_weight <= 2 * total and 3 * self.exterior_weight <= 2 * total


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def cycle_sides(g: PlanarGraph, keys) -> tuple:
    """Exact (interior faces, crossed faces) of the cycle given by G+ edge keys."""
    cut = set(keys)
    parent = {w: w for w in g.wedge_weight}
    parent[OUT] = OUT
    for e in g.plus_edges:
        if e.key in cut:
            continue
        x, y = _find(parent, e.sides[0]), _find(parent, e.sides[1])
        if x != y:
            parent[x] = y
    out_root = _find(parent, OUT)
    inside_faces, outside_faces = set(), set()
    for w, fi in g.wedge_face.items():
        (outside_faces if _find(parent, w) == out_root else inside_faces).add(fi)
    crossed = inside_faces & outside_faces
    return frozenset(inside_faces - crossed), frozenset(crossed)


def make_vcycle(g: PlanarGraph, nodes, keys) -> VCycle:
    by_key = {e.key: e for e in g.plus_edges}
    m = len(nodes)
    face_edges = []
    for i, nd in enumerate(nodes):
        if nd[0] == "f":
            face_edges.append((nodes[i - 1][1], nd[1], nodes[(i + 1) % m][1]))
    cost = sum((by_key[k].cost for k in keys), Fraction(0))
    inside, crossed = cycle_sides(g, keys)
    W = g.total_weight
    wi = sum((g.face_weights[f] for f in inside), Fraction(0))
    wc = sum((g.face_weights[f] for f in crossed), Fraction(0))
    return VCycle(list(nodes), list(keys), [nd[1] for nd in nodes if nd[0] == "v"], face_edges,
                  len(face_edges), cost, wi, W - wi - wc, wc, inside, crossed)


def _canonical(nodes, keys):
    """Rotate/reflect a closed walk so equal cycles compare equal."""
    m = len(nodes)
    best = None
    for seq_n, seq_k in ((nodes, keys), (nodes[::-1], [keys[(m - 2 - i) % m] for i in range(m)])):
        for r in range(m):
            cand = (tuple(seq_n[r:] + seq_n[:r]), tuple(seq_k[r:] + seq_k[:r]))
            if best is None or cand < best:
                best = cand
    return list(best[0]), list(best[1])


def _sort_key(n):
    return (n[0], n[1]) if n[0] == "f" else (n[0], n[1].x, n[1].y)


def _walk_key(nodes):
    return tuple(_sort_key(n) for n in nodes)


def _face_edge_ok(nodes) -> bool:
    m = len(nodes)
    for i, nd in enumerate(nodes):
        if nd[0] == "f" and nodes[i - 1] == nodes[(i + 1) % m]:
            return False
    return len(set(nodes)) == m


def _lcm_den(values) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return d


class _Search:
    """Integer-indexed copy of G+ for the fundamental-cycle search.

    Node ids follow the (kind, x, y) order, so comparing id tuples orders
    walks the same way as comparing the points themselves.
    """

    def __init__(self, g: PlanarGraph, penalties):
        self.g = g
        edges = g.plus_edges
        nodes = sorted({e.a for e in edges} | {e.b for e in edges}, key=_sort_key)
        self.nodes = nodes
        nid = {n: i for i, n in enumerate(nodes)}
        self.is_face = [n[0] == "f" for n in nodes]
        self.cscale = _lcm_den([e.cost for e in edges] + [lam / 2 for lam in penalties])
        wedges = sorted(g.wedge_weight)
        self.wid = {OUT: 0, **{w: i + 1 for i, w in enumerate(wedges)}}
        self.wscale = _lcm_den(g.wedge_weight.values())
        self.wedge_w = [0] + [int(g.wedge_weight[w] * self.wscale) for w in wedges]
        self.wedge_face = [-1] + [g.wedge_face[w] for w in wedges]
        self.ea = [nid[e.a] for e in edges]
        self.eb = [nid[e.b] for e in edges]
        self.ecost = [int(e.cost * self.cscale) for e in edges]
        self.spoke = [e.key[0] == "s" for e in edges]
        self.wside = [(self.wid[e.sides[0]], self.wid[e.sides[1]]) for e in edges]
        nf = len(g.faces)
        self.fside = [tuple(0 if x == OUT else 1 + g.wedge_face[x] for x in e.sides) for e in edges]
        self.face_w = [0] + [int(w * self.wscale) for w in g.face_weights]
        self.n_dual_faces = nf + 1
        self.total = sum(self.face_w)

    def adjacency(self, use) -> list:
        adj = [[] for _ in self.nodes]
        for i in use:
            adj[self.ea[i]].append((i, self.eb[i]))
            adj[self.eb[i]].append((i, self.ea[i]))
        for lst in adj:
            lst.sort(key=lambda t: (t[1], t[0]))
        return adj

    def tree(self, adj, root, spoke_len):
        big = len(self.nodes) + 1
        dist = {root: 0}
        pnode, pedge = {root: -1}, {root: -1}
        heap = [(0, root)]
        done = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for i, v in adj[u]:
                step = spoke_len if self.spoke[i] else self.ecost[i]
                nd = d + step * big + 1
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    pnode[v], pedge[v] = u, i
                    heapq.heappush(heap, (nd, v))
        return pnode, pedge

    def cycles(self, use, pnode, pedge, sides, dual_w):
        """Yield (node ids, edge ids, enclosed dual weight) per non-tree edge."""
        tree = {e for e in pedge.values() if e >= 0}
        dadj: dict = {}
        for i in use:
            if i in tree:
                continue
            x, y = sides[i]
            dadj.setdefault(x, []).append((y, i))
            dadj.setdefault(y, []).append((x, i))
        dpar = {0: None}
        order = [0]
        for x in order:
            for y, i in dadj.get(x, ()):
                if y not in dpar:
                    dpar[y] = (x, i)
                    order.append(y)
        sub = {x: dual_w[x] for x in order}
        for x in reversed(order):
            if dpar[x]:
                sub[dpar[x][0]] += sub[x]
        below = {p[1]: sub[x] for x, p in dpar.items() if p}
        for i in use:
            if i in tree or i not in below:
                continue
            a, b = self.ea[i], self.eb[i]
            if a not in pnode or b not in pnode:
                continue
            pa, ka = [a], []
            seen = {a: 0}
            x = a
            while pnode[x] >= 0:
                ka.append(pedge[x])
                x = pnode[x]
                seen[x] = len(pa)
                pa.append(x)
            pb, kb = [b], []
            y = b
            while y not in seen:
                kb.append(pedge[y])
                y = pnode[y]
                pb.append(y)
            cut = seen[y]
            yield pa[:cut + 1] + pb[:-1][::-1], ka[:cut] + kb[::-1] + [i], below[i]

    def balanced_exact(self, cyc_edges) -> bool:
        cut = set(cyc_edges)
        parent = list(range(len(self.wedge_w)))
        for i, (x, y) in enumerate(self.wside):
            if i in cut:
                continue
            x, y = _find(parent, x), _find(parent, y)
            if x != y:
                parent[x] = y
        root = _find(parent, 0)
        ins, outs = set(), set()
        for w in range(1, len(self.wedge_w)):
            (outs if _find(parent, w) == root else ins).add(self.wedge_face[w])
        crossed = ins & outs
        wi = sum(self.face_w[f + 1] for f in ins - crossed)
        wc = sum(self.face_w[f + 1] for f in crossed)
        return 3 * wi <= 2 * self.total and 3 * (self.total - wi - wc) <= 2 * self.total


def _canonical_ids(nodes, edges):
    """Rotate/reflect an id cycle to start at its smallest node, smaller side first."""
    m = len(nodes)
    r = nodes.index(min(nodes))
    fwd_n = nodes[r:] + nodes[:r]
    fwd_e = edges[r:] + edges[:r]
    rev_n = [fwd_n[0]] + fwd_n[1:][::-1]
    rev_e = fwd_e[::-1]
    if m > 2 and rev_n < fwd_n:
        return rev_n, rev_e
    return fwd_n, fwd_e


def find_separator(g: PlanarGraph, kbar: int, penalties=None, max_exact_checks: int = 4000) -> VCycle:
    """Cheapest balanced V-cycle with at most kbar face edges.

    Candidates are the fundamental cycles of shortest-path trees of G+ rooted
    at every face node (one tree per spoke penalty), plus those of G alone
    rooted at every vertex.  Ties go to fewer face edges, then to the
    smallest walk.
    """
    M = g.total_cost
    unit = M / kbar if kbar and M else Fraction(1)
    if penalties is None:
        penalties = [Fraction(0), unit / 8, unit / 2, 2 * unit]
    S = _Search(g, penalties)
    cands = {}

    def collect(cycles):
        for nodes, edges, win in cycles:
            if len(set(nodes)) != len(nodes):
                continue
            m = len(nodes)
            nf = 0
            ok = True
            for j, nd in enumerate(nodes):
                if S.is_face[nd]:
                    nf += 1
                    if nodes[j - 1] == nodes[(j + 1) % m]:
                        ok = False
                        break
            if not ok or nf > kbar:
                continue
            ck = frozenset(edges)
            if ck in cands:
                continue
            cost = sum(S.ecost[i] for i in edges)
            screened = 3 * win <= 2 * S.total and 3 * (S.total - win) <= 2 * S.total
            cands[ck] = (cost, nf, nodes, edges, screened)

    everything = range(len(g.plus_edges))
    adj = S.adjacency(everything)
    roots = [i for i, f in enumerate(S.is_face) if f] or [0]
    for lam in penalties:
        for r in roots:
            pnode, pedge = S.tree(adj, r, int(lam / 2 * S.cscale))
            collect(S.cycles(everything, pnode, pedge, S.wside, S.wedge_w))

    # ordinary cycles only: the dual of G is its faces
    plain = [i for i in everything if not S.spoke[i]]
    gadj = S.adjacency(plain)
    for r in sorted({S.ea[i] for i in plain} | {S.eb[i] for i in plain}):
        pnode, pedge = S.tree(gadj, r, 0)
        collect(S.cycles(plain, pnode, pedge, S.fside, S.face_w))

    groups: dict = {}
    for c in cands.values():
        groups.setdefault((c[0], c[1]), []).append(c)
    checks = 0
    for key in sorted(groups):
        ordered = sorted((_canonical_ids(c[2], c[3]) + (c[4],) for c in groups[key]),
                         key=lambda c: c[0])
        for nodes, edges, screened in ordered:
            if not screened:
                if checks >= max_exact_checks:
                    continue
                checks += 1
                if not S.balanced_exact(edges):
                    continue
            vc = make_vcycle(g, [S.nodes[i] for i in nodes], [g.plus_edges[i].key for i in edges])
            if vc.balanced(g.total_weight):
                vc.c_sep = vc.ordinary_cost / unit if M else Fraction(0)
                return vc
    raise NoBalancedCycle(f"no balanced cycle with <= {kbar} face edges")


def exhaustive_separator(g: PlanarGraph, kbar: int, cap: int = 14) -> VCycle:
    """Cheapest balanced V-cycle by enumerating every simple cycle of G+."""
    if len(g.edges) > cap:
        raise CapExceeded(f"{len(g.edges)} edges > cap {cap}")
    W = g.total_weight
    adj: dict = {}
    for e in g.plus_edges:
        adj.setdefault(e.a, []).append((e, e.b))
        adj.setdefault(e.b, []).append((e, e.a))
    order = sorted(adj, key=_sort_key)
    rank = {n: i for i, n in enumerate(order)}
    best = None
    seen = set()

    def consider(nodes, keys):
        nonlocal best
        if not _face_edge_ok(nodes):
            return
        nf = sum(1 for n in nodes if n[0] == "f")
        if nf > kbar:
            return
        ck = frozenset(keys)
        if ck in seen:
            return
        seen.add(ck)
        nodes, keys = _canonical(nodes, keys)
        vc = make_vcycle(g, nodes, keys)
        if not vc.balanced(W):
            return
        key = (vc.ordinary_cost, vc.face_edge_count, _walk_key(vc.nodes))
        if best is None or key < best[0]:
            best = (key, vc)

    def dfs(start, u, nodes, keys, used):
        for e, v in adj[u]:
            if e.key in used:
                continue
            if v == start and len(keys) >= 1:
                consider(list(nodes), keys + [e.key])
                continue
            if v in nodes or rank[v] < rank[start]:
                continue
            nodes.append(v)
            used.add(e.key)
            dfs(start, v, nodes, keys + [e.key], used)
            used.discard(e.key)
            nodes.pop()

    for s in order:
        dfs(s, s, [s], [], set())
    if best is None:
        raise NoBalancedCycle(f"no balanced cycle with <= {kbar} face edges")
    vc = best[1]
    M = g.total_cost
    unit = M / kbar if kbar and M else Fraction(1)
    vc.c_sep = vc.ordinary_cost / unit if M else Fraction(0)
    return vc


def audit_graph(g: PlanarGraph, ts: TriangleSet) -> list:
    """Independent recomputation of costs, weights and embedding invariants."""
    bad = []
    if sum(g.face_weights, Fraction(0)) != ts.total_weight:
        bad.append("face weights do not sum to w(T)")
    for s, c in g.edges.items():
        brute = sum((t.weight for t in ts.triangles if segment_crosses_open_polygon(s, t.vertices)),
                    Fraction(0))
        if brute != c:
            bad.append(("cost", s))
    count: dict = {}
    for ring in g.walks:
        for a, b in zip(ring, ring[1:] + ring[:1]):
            k = seg_key((a, b))
            count[k] = count.get(k, 0) + 1
    N = max((p.x for p in g.vertices), default=0)
    for s in g.edges:
        on_boundary = (s[0].x == s[1].x and s[0].x in (0, N)) or (s[0].y == s[1].y and s[0].y in (0, N))
        want = 0 if s in g.dangling else 1 if on_boundary else 2
        if count.get(s, 0) != want:
            bad.append(("rotation", s, count.get(s, 0)))
    if g.euler() != 2:
        bad.append(("euler", g.euler()))
    return bad


def vcycle_to_dict(vc: VCycle) -> dict:
    from .instance import frac_str

    def P(p):
        return [frac_str(p.x), frac_str(p.y)]

    walk = []
    for n in vc.nodes:
        walk.append({"face": n[1]} if n[0] == "f" else {"point": P(n[1])})
    return {
        "walk": walk,
        "face_edge_count": vc.face_edge_count,
        "ordinary_cost": frac_str(vc.ordinary_cost),
        "interior_weight": frac_str(vc.interior_weight),
        "exterior_weight": frac_str(vc.exterior_weight),
        "crossed_weight": frac_str(vc.crossed_weight),
        "c_sep": frac_str(vc.c_sep),
    }
