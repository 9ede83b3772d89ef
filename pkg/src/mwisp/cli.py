"""Command-line entry point.

Exit codes: 0 on success, 1 when the input or flags are invalid, 2 when an
internal invariant breaks (these indicate bugs, not bad input).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import bench, cheap_cut, dp_points, geo_dp, instance, oracle, partition, perturb, separator
from .render import atomic_write, render_svg

log = logging.getLogger("mwisp")

INTERNAL = (partition.WalkDiverged, perturb.TooManyCollisions, cheap_cut.BalanceUnrepairable,
            separator.NoBalancedCycle, AssertionError)


class UsageError(ValueError):
    pass


def rational(text: str) -> Fraction:
    """Parse 'p/q' or an integer; decimals are refused to avoid silent rounding."""
    try:
        return instance.parse_frac(text)
    except (instance.InstanceError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational 'p/q', got {text!r}") from exc


@dataclass
class CliConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    svg: Optional[str] = None
    k: int = 64
    ell: int = 6
    family: str = "exhaustive"
    delta: Optional[Fraction] = None
    kbar: Optional[int] = None
    epsilon: Optional[Fraction] = None
    seed: int = 0

    def validate(self) -> None:
        if self.delta is not None and not 0 < self.delta < Fraction(1, 3):
            raise UsageError("delta must lie in (0, 1/3)")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise UsageError("epsilon must lie in (0, 1)")
        if self.kbar is not None and self.kbar < 0:
            raise UsageError("kbar must be non-negative")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mwisp", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, help, io=True, svg=False):
        s = sub.add_parser(name, help=help)
        if io:
            s.add_argument("-i", "--input", required=True)
            s.add_argument("-o", "--output")
        if svg:
            s.add_argument("--svg", help="also write an SVG picture here")
        return s

    g = cmd("generate", "write a seeded random instance", io=False)
    g.add_argument("-o", "--output")
    g.add_argument("--kind", choices=("triangles", "kgons", "disjoint_triangles", "disjoint_polygons"),
                   default="triangles")
    g.add_argument("--n", type=int, default=6)
    g.add_argument("--K", type=int, default=3)
    g.add_argument("--N", type=int, default=32)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--epsilon", type=rational)

    cmd("perturb", "move an instance into general position")
    d = cmd("dp-points", "dump basic (and optionally additional) DP-points")
    d.add_argument("--additional", action="store_true")

    s = cmd("solve", "run the geometric DP", svg=True)
    s.add_argument("--k", type=int, default=64)
    s.add_argument("--ell", type=int, default=6)
    s.add_argument("--family", choices=geo_dp.FAMILIES, default="exhaustive")
    s.add_argument("--epsilon", type=rational)

    pa = cmd("partition", "build the stripe/cell subdivision of a triangle set", svg=True)
    pa.add_argument("--delta", type=rational, required=True)

    se = cmd("separator", "find a balanced V-cycle in the subdivision graph")
    se.add_argument("--delta", type=rational, required=True)
    se.add_argument("--kbar", type=int, required=True)

    cc = cmd("cheap-cut", "build and verify a cheap balanced cut", svg=True)
    cc.add_argument("--delta", type=rational, required=True)

    cmd("oracle", "exact maximum weight independent set")

    b = cmd("bench", "run a benchmark suite", io=False)
    b.add_argument("--suite", required=True)
    b.add_argument("--out")
    b.add_argument("--timings", action="store_true")

    r = cmd("render", "draw an instance (and optionally a solution)", io=False)
    r.add_argument("-i", "--input", required=True)
    r.add_argument("--solution")
    r.add_argument("--svg", required=True)
    r.add_argument("--places", type=int, default=3)
    return p


def _load(path) -> instance.Instance:
    with open(path) as fh:
        return instance.parse(fh.read())


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _point(p):
    return [instance.frac_str(p.x), instance.frac_str(p.y)]


def _run(args) -> None:
    c = args.command
    cfg = CliConfig(c, getattr(args, "input", None), getattr(args, "output", None),
                    getattr(args, "svg", None), getattr(args, "k", 64), getattr(args, "ell", 6),
                    getattr(args, "family", "exhaustive"), getattr(args, "delta", None),
                    getattr(args, "kbar", None), getattr(args, "epsilon", None), getattr(args, "seed", 0))
    cfg.validate()
    dumps = instance.dumps

    if c == "generate":
        eps = cfg.epsilon or Fraction(1, 4)
        if args.kind == "disjoint_triangles":
            inst = instance.generate_disjoint_triangles(args.n, args.N, args.seed)
        elif args.kind == "disjoint_polygons":
            inst = instance.generate_disjoint_polygons(args.n, args.K, args.N, args.seed)
        else:
            inst = instance.generate(args.kind, args.n, args.K, args.N, args.seed, epsilon=eps)
        _emit(instance.serialize(inst), cfg.output)
        return
    if c == "bench":
        suite = bench.SuiteConfig.load(args.suite)
        rows = bench.run_suite(suite)
        text = bench.rows_to_csv(rows, timings=args.timings or suite.timings)
        _emit(text, args.out)
        for m, s in bench.summarize(rows).items():
            log.info("%s: %d rows, mean ratio %.4f, min %.4f", m, s["count"], s["mean"], s["min"])
        return
    if c == "render":
        inst = _load(cfg.input)
        sol = None
        if args.solution:
            with open(args.solution) as fh:
                sol = instance.solution_from_dict(json.load(fh))
        render_svg(inst, cfg.svg, places=args.places, solution=sol)
        return

    inst = _load(cfg.input)
    if c == "perturb":
        gp, rep = perturb.to_general_position(inst)
        log.info("perturbed %d vertices, max displacement^2 %s", len(rep.old_new_bijection),
                 rep.max_displacement_sq)
        _emit(instance.serialize(gp), cfg.output)
    elif c == "dp-points":
        dp = dp_points.basic_dp_points(inst)
        out = {"basic": [_point(p) for p in sorted(dp.basic)]}
        if args.additional:
            out["additional"] = [_point(p) for p in sorted(dp.additional)]
        _emit(dumps(out), cfg.output)
    elif c == "solve":
        sc = geo_dp.SolverConfig(k=cfg.k, ell=cfg.ell, family=cfg.family,
                                 epsilon=cfg.epsilon or inst.epsilon)
        sol, stats = geo_dp.solve(inst, sc)
        out = instance.solution_to_dict(sol)
        stats_d = stats.as_dict()
        log.info("wall time %.3fs", stats_d.pop("wall_time"))
        out["stats"] = stats_d
        _emit(dumps(out), cfg.output)
        if cfg.svg:
            render_svg(inst, cfg.svg, solution=sol)
    elif c == "oracle":
        _emit(dumps(instance.solution_to_dict(oracle.oracle(inst))), cfg.output)
    elif c == "partition":
        ts = partition.TriangleSet.from_instance(inst)
        sub = partition.build_subdivision(ts, cfg.delta)
        _emit(dumps(partition.subdivision_to_dict(sub)), cfg.output)
        if cfg.svg:
            render_svg(sub, cfg.svg, triangles=ts)
    elif c == "separator":
        ts = partition.TriangleSet.from_instance(inst)
        sub = partition.build_subdivision(ts, cfg.delta)
        g = separator.build_graph(sub, ts)
        vc = separator.find_separator(g, cfg.kbar)
        _emit(dumps(separator.vcycle_to_dict(vc)), cfg.output)
    elif c == "cheap-cut":
        if all(len(p.vertices) == 3 for p in inst.polygons):
            ts = partition.TriangleSet.from_instance(inst)
            cut = cheap_cut.build_cheap_cut_triangles(ts, cfg.delta)
        else:
            cut = cheap_cut.build_cheap_cut_polygons(inst, cfg.delta)
        _emit(dumps(cheap_cut.cut_to_dict(cut)), cfg.output)
        if cfg.svg:
            render_svg(cut, cfg.svg, N=inst.N, polygons=[p.vertices for p in inst.polygons])
        if cut.report is not None and not cut.report.ok:
            raise UsageError(f"cut failed verification: {cut.report.checks}")


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        _run(args)
    except INTERNAL as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError, json.JSONDecodeError, RuntimeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
