"""Problem instances: weighted polygons in the square [0, N]^2."""

from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .geometry import (
    GeometryError,
    Point,
    canonical_ring,
    clean_ring,
    polygon,
    polygons_touch,
    q,
)

log = logging.getLogger(__name__)


class InstanceError(ValueError):
    pass


class EmptyInstance(InstanceError):
    pass


class UnknownId(InstanceError):
    pass


class GenerationFailed(InstanceError):
    pass


@dataclass(frozen=True)
class WeightedPolygon:
    id: str
    vertices: tuple  # counter-clockwise ring of Points
    weight: Fraction

    @classmethod
    def make(cls, id, vertices, weight) -> "WeightedPolygon":
        w = Fraction(q(weight))
        if w <= 0:
            raise InstanceError(f"polygon {id}: weight must be positive")
        return cls(str(id), polygon(vertices), w)

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Instance:
    polygons: tuple
    N: int
    K: int
    epsilon: Fraction = Fraction(1, 4)

    def __post_init__(self):
        ids = [p.id for p in self.polygons]
        if len(set(ids)) != len(ids):
            raise InstanceError("duplicate polygon ids")
        for p in self.polygons:
            if not 3 <= len(p.vertices) <= self.K:
                raise InstanceError(f"polygon {p.id} has {len(p.vertices)} vertices, K={self.K}")
            for v in p.vertices:
                if not (0 <= v.x <= self.N and 0 <= v.y <= self.N):
                    raise InstanceError(f"polygon {p.id}: vertex {v} outside [0,{self.N}]^2")

    @property
    def n(self) -> int:
        return len(self.polygons)

    def by_id(self) -> dict:
        return {p.id: p for p in self.polygons}

    def vertices(self) -> list[Point]:
        return [v for p in self.polygons for v in p.vertices]

    def total_weight(self) -> Fraction:
        return sum((p.weight for p in self.polygons), Fraction(0))

    def with_polygons(self, polys: Iterable[WeightedPolygon]) -> "Instance":
        return replace(self, polygons=tuple(polys))


def make_instance(polys, N, K=None, epsilon=Fraction(1, 4)) -> Instance:
    """Convenience constructor from (id, vertices, weight) triples."""
    wp = tuple(p if isinstance(p, WeightedPolygon) else WeightedPolygon.make(*p) for p in polys)
    if K is None:
        K = max((len(p.vertices) for p in wp), default=3)
    return Instance(wp, int(N), int(K), Fraction(q(epsilon)))


@dataclass(frozen=True)
class Solution:
    chosen: frozenset
    total_weight: Fraction

    @classmethod
    def of(cls, inst: Instance, ids: Iterable[str]) -> "Solution":
        lookup = inst.by_id()
        ids = frozenset(ids)
        for i in ids:
            if i not in lookup:
                raise UnknownId(i)
        return cls(ids, sum((lookup[i].weight for i in ids), Fraction(0)))


@dataclass
class VerificationReport:
    feasible: bool
    weight: Fraction
    violations: list = field(default_factory=list)


def verify_solution(inst: Instance, sol) -> VerificationReport:
    lookup = inst.by_id()
    ids = sorted(sol.chosen if isinstance(sol, Solution) else sol)
    for i in ids:
        if i not in lookup:
            raise UnknownId(i)
    bad = [(a, b) for a, b in combinations(ids, 2) if polygons_touch(lookup[a].vertices, lookup[b].vertices)]
    weight = sum((lookup[i].weight for i in ids), Fraction(0))
    if isinstance(sol, Solution) and sol.total_weight != weight:
        bad.append(("weight", str(sol.total_weight)))
    return VerificationReport(not bad, weight, bad)


def normalize_weights(inst: Instance):
    """Scale so the heaviest polygon weighs n/eps, then drop weights below 1.

    Returns (normalized instance, scale, dropped ids).  Original weights are
    recovered by dividing by ``scale``.
    """
    if not inst.polygons:
        raise EmptyInstance("no polygons")
    target = Fraction(inst.n) / inst.epsilon
    scale = target / max(p.weight for p in inst.polygons)
    kept, dropped = [], set()
    for p in inst.polygons:
        w = p.weight * scale
        if w < 1:
            dropped.add(p.id)
        else:
            kept.append(replace(p, weight=w))
    if not kept:
        raise EmptyInstance("all polygons dropped")
    return inst.with_polygons(kept), scale, dropped


# ------------------------------------------------------------------ JSON I/O

def frac_str(v) -> str:
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, int) and not isinstance(s, bool):
        return Fraction(s)
    if isinstance(s, str) and "." not in s and "e" not in s.lower():
        return Fraction(s)
    raise InstanceError(f"expected an exact rational 'p/q', got {s!r}")


def _int_str(v) -> str:
    v = q(v)
    if not isinstance(v, int):
        raise InstanceError(f"coordinate {v} is not an integer")
    return str(v)


def instance_to_dict(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "K": inst.K,
        "N": inst.N,
        "epsilon": frac_str(inst.epsilon),
        "polygons": [
            {"id": p.id, "weight": frac_str(p.weight),
             "vertices": [[_int_str(v.x), _int_str(v.y)] for v in p.vertices]}
            for p in inst.polygons
        ],
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def serialize(inst: Instance) -> str:
    return dumps(instance_to_dict(inst))


def instance_from_dict(d: dict) -> Instance:
    polys = []
    for p in d["polygons"]:
        verts = [(int(x), int(y)) for x, y in p["vertices"]]
        polys.append(WeightedPolygon.make(p["id"], verts, parse_frac(p["weight"])))
    inst = Instance(tuple(polys), int(d["N"]), int(d["K"]), parse_frac(d.get("epsilon", "1/4")))
    if "n" in d and int(d["n"]) != inst.n:
        raise InstanceError(f"n={d['n']} but {inst.n} polygons listed")
    shapes = [canonical_ring(p.vertices) for p in inst.polygons]
    if len(set(shapes)) != len(shapes):
        log.warning("instance contains identical polygons")
    return inst


def parse(text: str) -> Instance:
    return instance_from_dict(json.loads(text))


def solution_to_dict(sol: Solution) -> dict:
    return {"chosen": sorted(sol.chosen), "weight": frac_str(sol.total_weight)}


def solution_from_dict(d: dict) -> Solution:
    return Solution(frozenset(d["chosen"]), parse_frac(d["weight"]))


# ---------------------------------------------------------------- generators

def _random_triangle(rng: random.Random, N: int):
    span = max(2, N // 3)
    x0 = rng.randint(0, N - span)
    y0 = rng.randint(0, N - span)
    return [(x0 + rng.randint(0, span), y0 + rng.randint(0, span)) for _ in range(3)]


def _random_kgon(rng: random.Random, N: int, K: int):
    m = rng.randint(3, K)
    r = rng.randint(max(2, N // 16), max(2, N // 4))
    cx = rng.randint(r, N - r)
    cy = rng.randint(r, N - r)
    angles = sorted(rng.random() for _ in range(m))
    pts = []
    for a in angles:
        rr = rng.uniform(r / 3, r)
        x = round(cx + rr * math.cos(2 * math.pi * a))
        y = round(cy + rr * math.sin(2 * math.pi * a))
        pts.append((min(N, max(0, x)), min(N, max(0, y))))
    return pts


def generate(kind: str, n: int, K: int, N: int, seed: int, epsilon=Fraction(1, 4),
             max_tries: int = 200) -> Instance:
    """Deterministic pseudo-random instance with integer coordinates."""
    if n < 1 or K < 3 or N < 4:
        raise InstanceError("need n >= 1, K >= 3, N >= 4")
    if kind not in ("triangles", "kgons"):
        raise InstanceError(f"unknown kind {kind!r}")
    rng = random.Random(seed)
    polys, seen = [], set()
    for i in range(n):
        for _ in range(max_tries):
            raw = _random_triangle(rng, N) if kind == "triangles" else _random_kgon(rng, N, K)
            try:
                ring = polygon(raw)
            except GeometryError:
                continue
            if len(clean_ring(ring)) != len(ring):
                continue
            key = canonical_ring(ring)
            if key in seen:
                continue
            seen.add(key)
            polys.append(WeightedPolygon(f"P{i}", ring, Fraction(rng.randint(1, 100))))
            break
        else:
            raise GenerationFailed(f"could not place polygon {i} after {max_tries} tries")
    return Instance(tuple(polys), N, 3 if kind == "triangles" else K, Fraction(epsilon))


def generate_disjoint_triangles(n: int, N: int, seed: int, max_tries: int = 500) -> Instance:
    """Pairwise non-touching triangles, for the cut machinery."""
    rng = random.Random(seed)
    polys = []
    for i in range(n):
        for _ in range(max_tries):
            span = max(2, N // 6)
            x0, y0 = rng.randint(0, N - span), rng.randint(0, N - span)
            raw = [(x0 + rng.randint(0, span), y0 + rng.randint(0, span)) for _ in range(3)]
            try:
                ring = polygon(raw)
            except GeometryError:
                continue
            if any(polygons_touch(ring, p.vertices) or set(ring) & set(p.vertices) for p in polys):
                continue
            polys.append(WeightedPolygon(f"T{i}", ring, Fraction(rng.randint(1, 100))))
            break
        else:
            raise GenerationFailed(f"could not place triangle {i}")
    return Instance(tuple(polys), N, 3)


def generate_disjoint_polygons(n: int, K: int, N: int, seed: int, max_tries: int = 500) -> Instance:
    """Pairwise non-touching star-shaped polygons with up to K vertices."""
    rng = random.Random(seed)
    polys = []
    for i in range(n):
        for _ in range(max_tries):
            raw = _random_kgon(rng, N, K)
            try:
                ring = polygon(raw)
            except GeometryError:
                continue
            if len(clean_ring(ring)) != len(ring) or max(abs(v.x - ring[0].x) for v in ring) > N // 4:
                continue
            if any(polygons_touch(ring, p.vertices) or set(ring) & set(p.vertices) for p in polys):
                continue
            polys.append(WeightedPolygon(f"Q{i}", ring, Fraction(rng.randint(1, 100))))
            break
        else:
            raise GenerationFailed(f"could not place polygon {i}")
    return Instance(tuple(polys), N, K)
