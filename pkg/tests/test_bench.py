import csv
import io
import json
from fractions import Fraction

from mwisp.bench import COLUMNS, SuiteConfig, greedy_baseline, rows_to_csv, run_suite, summarize
from mwisp.instance import make_instance, verify_solution
from support import chain_instance


def test_greedy_on_overlapping_pair():
    inst = make_instance([("A", [(0, 0), (4, 0), (0, 4)], 5), ("B", [(1, 1), (5, 1), (1, 5)], 3)], 8)
    assert greedy_baseline(inst).chosen == {"A"}


def test_greedy_chain_is_recorded_not_optimal():
    sol = greedy_baseline(chain_instance())
    assert sol.chosen == {"B"} and sol.total_weight == 3
    assert verify_solution(chain_instance(), sol).feasible


def test_oracle_ratio_is_one():
    rows = run_suite(SuiteConfig(n=4, seeds=(0,), methods=("oracle",)))
    assert len(rows) == 1 and rows[0].ratio == 1


def test_suite_rows_and_bounds():
    rows = run_suite(SuiteConfig(n=5, seeds=(0, 1, 2)))
    assert [r.method for r in rows] == ["oracle", "geo_dp", "greedy"] * 3
    for r in rows:
        assert r.error == "" and r.feasible
        assert Fraction(3, 4) <= r.ratio <= 1


def test_structure_columns():
    rows = run_suite(SuiteConfig(kind="disjoint_triangles", n=8, N=64, seeds=(0,), delta=Fraction(1, 4),
                                 methods=("greedy",)))
    r = rows[0]
    assert r.stripes <= 16 and r.max_crossings <= 4 and r.alpha_observed == 0


def test_failure_is_a_row():
    rows = run_suite(SuiteConfig(n=3, seeds=(0,), methods=("oracle", "bogus")))
    assert "bogus" in rows[1].error and rows[0].error == ""


def test_csv_schema_and_determinism():
    cfg = SuiteConfig(n=4, seeds=(5, 6))
    a, b = rows_to_csv(run_suite(cfg)), rows_to_csv(run_suite(cfg))
    assert a == b
    table = list(csv.reader(io.StringIO(a)))
    assert tuple(table[0]) == COLUMNS and len(table) == 7
    assert all(row[-1] == "" for row in table[1:])


def test_suite_from_json(tmp_path):
    p = tmp_path / "suite.json"
    p.write_text(json.dumps({"n": 3, "seeds": [1], "epsilon": "1/5", "methods": ["greedy"]}))
    cfg = SuiteConfig.load(p)
    assert cfg.epsilon == Fraction(1, 5) and cfg.methods == ("greedy",)
    assert summarize(run_suite(cfg))["greedy"]["count"] == 1
