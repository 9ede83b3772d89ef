"""Exact maximum weight independent set on the polygon intersection graph."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .geometry import polygons_touch
from .instance import Instance, Solution


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class IntersectionGraph:
    weights: dict  # id -> Fraction
    adjacency: dict  # id -> frozenset of ids

    @property
    def nodes(self) -> list:
        return sorted(self.weights)

    def edges(self) -> set:
        return {tuple(sorted((a, b))) for a, nb in self.adjacency.items() for b in nb}


def build_intersection_graph(inst: Instance) -> IntersectionGraph:
    adj = {p.id: set() for p in inst.polygons}
    polys = inst.polygons
    for a, b in combinations(polys, 2):
        if polygons_touch(a.vertices, b.vertices):
            adj[a.id].add(b.id)
            adj[b.id].add(a.id)
    return IntersectionGraph({p.id: p.weight for p in polys}, {k: frozenset(v) for k, v in adj.items()})


def _better(w, ids, best_w, best_ids) -> bool:
    return w > best_w or (w == best_w and ids < best_ids)


def exact_mwis(g: IntersectionGraph, cap: int = 24) -> Solution:
    """Branch and bound: heaviest nodes first, prune on remaining weight.

    Ties between optimal sets go to the lexicographically smallest sorted id
    tuple.
    """
    if len(g.weights) > cap:
        raise CapExceeded(f"{len(g.weights)} nodes > cap {cap}")
    order = sorted(g.weights, key=lambda i: (-g.weights[i], i))
    suffix = [Fraction(0)] * (len(order) + 1)
    for k in range(len(order) - 1, -1, -1):
        suffix[k] = suffix[k + 1] + g.weights[order[k]]
    best = [Fraction(-1), ()]

    def rec(k, chosen, blocked, w):
        if w + suffix[k] < best[0]:
            return
        if k == len(order):
            ids = tuple(sorted(chosen))
            if _better(w, ids, best[0], best[1]):
                best[0], best[1] = w, ids
            return
        v = order[k]
        if v not in blocked:
            chosen.append(v)
            rec(k + 1, chosen, blocked | g.adjacency[v], w + g.weights[v])
            chosen.pop()
        rec(k + 1, chosen, blocked, w)

    rec(0, [], frozenset(), Fraction(0))
    return Solution(frozenset(best[1]), best[0])


def brute_force_mwis(g: IntersectionGraph) -> Solution:
    """Enumerate all 2^n subsets (test oracle for the branch and bound)."""
    nodes = g.nodes
    best_w, best_ids = Fraction(-1), ()
    for mask in range(1 << len(nodes)):
        ids = tuple(nodes[i] for i in range(len(nodes)) if mask >> i & 1)
        ok = all(b not in g.adjacency[a] for a, b in combinations(ids, 2))
        if not ok:
            continue
        w = sum((g.weights[i] for i in ids), Fraction(0))
        if _better(w, ids, best_w, best_ids):
            best_w, best_ids = w, ids
    return Solution(frozenset(best_ids), best_w)


def oracle(inst: Instance, cap: int = 24) -> Solution:
    return exact_mwis(build_intersection_graph(inst), cap)


def mwis_of_subset(inst_weights: dict, adjacency: dict, ids) -> Fraction:
    """Optimum weight restricted to ``ids`` (used as an upper bound elsewhere)."""
    ids = list(ids)
    sub = IntersectionGraph({i: inst_weights[i] for i in ids},
                            {i: adjacency[i] & frozenset(ids) for i in ids})
    return exact_mwis(sub, cap=max(24, len(ids))).total_weight
