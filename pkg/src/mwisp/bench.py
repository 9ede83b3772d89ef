"""Experiment harness: seeded suites, solver comparison and structural statistics."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from .cheap_cut import CutError, build_cheap_cut_triangles
from .geo_dp import SolverConfig, solve as geo_solve
from .instance import (Instance, Solution, frac_str, generate, generate_disjoint_triangles,
                       parse_frac, verify_solution)
from .oracle import oracle
from .perturb import to_general_position
from .partition import PartitionError, TriangleSet, audit_subdivision, build_subdivision

log = logging.getLogger(__name__)

CSV_VERSION = 1
METHODS = ("oracle", "geo_dp", "greedy")
COLUMNS = ("version", "instance", "seed", "n", "K", "param", "method", "weight", "ratio",
           "feasible", "stripes", "n_L", "max_crossings", "alpha_observed", "error", "runtime")


@dataclass
class SuiteConfig:
    kind: str = "triangles"
    n: int = 6
    K: int = 3
    N: int = 32
    seeds: tuple = tuple(range(5))
    methods: tuple = METHODS
    k: int = 64
    ell: int = 6
    family: str = "exhaustive"
    epsilon: Fraction = Fraction(1, 4)
    delta: Optional[Fraction] = None
    general_position: bool = True
    timings: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteConfig":
        d = dict(d)
        if "seeds" in d:
            d["seeds"] = tuple(d["seeds"])
        if "methods" in d:
            d["methods"] = tuple(d["methods"])
        for key in ("epsilon", "delta"):
            if d.get(key) is not None:
                d[key] = parse_frac(d[key])
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown suite keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "SuiteConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class BenchRow:
    instance: str
    seed: int
    n: int
    K: int
    param: Fraction
    method: str
    weight: Optional[Fraction] = None
    ratio: Optional[Fraction] = None
    feasible: Optional[bool] = None
    stripes: Optional[int] = None
    n_L: Optional[int] = None
    max_crossings: Optional[int] = None
    alpha_observed: Optional[Fraction] = None
    error: str = ""
    runtime: float = 0.0


def greedy_baseline(inst: Instance) -> Solution:
    """Heaviest first, skipping anything that touches a chosen polygon."""
    from .geometry import polygons_touch

    order = sorted(inst.polygons, key=lambda p: (-p.weight, p.id))
    chosen = []
    for p in order:
        if all(not polygons_touch(p.vertices, c.vertices) for c in chosen):
            chosen.append(p)
    return Solution.of(inst, [p.id for p in chosen])


def _instance(cfg: SuiteConfig, seed: int) -> Instance:
    if cfg.kind == "disjoint_triangles":
        raw = generate_disjoint_triangles(cfg.n, cfg.N, seed)
    else:
        raw = generate(cfg.kind, cfg.n, cfg.K, cfg.N, seed, epsilon=cfg.epsilon)
    if cfg.general_position:
        return to_general_position(raw)[0]
    return raw


def _structure(inst: Instance, delta: Fraction) -> dict:
    ts = TriangleSet.from_instance(inst)
    sub = build_subdivision(ts, delta)
    rep = audit_subdivision(sub, ts, delta)
    out = {"stripes": rep.stripe_count, "n_L": rep.n_L, "max_crossings": rep.max_crossings}
    try:
        cut = build_cheap_cut_triangles(ts, delta)
        out["alpha_observed"] = cut.alpha_observed
    except CutError as exc:
        out["error"] = f"cut: {type(exc).__name__}"
    return out


def run_instance(cfg: SuiteConfig, seed: int) -> list:
    name = f"{cfg.kind}-n{cfg.n}-s{seed}"
    param = cfg.delta if cfg.delta is not None else cfg.epsilon
    try:
        inst = _instance(cfg, seed)
    except Exception as exc:  # generator failure is a row, not a crash
        return [BenchRow(name, seed, cfg.n, cfg.K, param, m, error=f"generate: {exc}") for m in cfg.methods]
    rows, best = [], None
    structure = {}
    if cfg.delta is not None:
        try:
            structure = _structure(inst, cfg.delta)
        except (PartitionError, CutError, ValueError) as exc:
            structure = {"error": f"structure: {type(exc).__name__}"}
    for method in cfg.methods:
        row = BenchRow(name, seed, inst.n, inst.K, param, method, **structure)
        t0 = time.perf_counter()
        try:
            if method == "oracle":
                sol = oracle(inst)
            elif method == "geo_dp":
                sol, _ = geo_solve(inst, SolverConfig(k=cfg.k, ell=cfg.ell, family=cfg.family,
                                                      epsilon=cfg.epsilon))
            elif method == "greedy":
                sol = greedy_baseline(inst)
            else:
                raise ValueError(f"unknown method {method!r}")
            row.weight = sol.total_weight
            row.feasible = verify_solution(inst, sol).feasible
        except Exception as exc:
            row.error = (row.error + "; " if row.error else "") + f"{method}: {type(exc).__name__}: {exc}"
        row.runtime = time.perf_counter() - t0
        if method == "oracle" and row.weight is not None:
            best = row.weight
        rows.append(row)
    if best is None and "oracle" not in cfg.methods:
        try:
            best = oracle(inst).total_weight
        except Exception as exc:
            log.warning("no oracle for %s: %s", name, exc)
    for row in rows:
        if best is not None and row.weight is not None:
            row.ratio = row.weight / best if best else Fraction(1)
    return rows


def run_suite(cfg: SuiteConfig) -> list:
    rows = []
    for seed in cfg.seeds:
        rows += run_instance(cfg, seed)
    return rows


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, Fraction):
        return frac_str(v)
    return str(v)


def rows_to_csv(rows, timings: bool = False) -> str:
    """Fixed-schema CSV; runtime is blank unless timings are asked for, so reruns match byte for byte."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        d = asdict(r)
        d["version"] = CSV_VERSION
        d["runtime"] = f"{r.runtime:.4f}" if timings else None
        w.writerow([_cell(d[c]) for c in COLUMNS])
    return buf.getvalue()


def summarize(rows) -> dict:
    """Mean and minimum ratio per method (floats, for display only)."""
    out = {}
    for m in sorted({r.method for r in rows}):
        ratios = [r.ratio for r in rows if r.method == m and r.ratio is not None]
        if ratios:
            out[m] = {"count": len(ratios), "mean": float(sum(ratios) / len(ratios)),
                      "min": float(min(ratios))}
    return out
