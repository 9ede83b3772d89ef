from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mwisp.geo_dp import (FAMILIES, SolverConfig, certify_trace, solve, solve_with_trace, suggested_k)
from mwisp.instance import generate, make_instance, verify_solution
from mwisp.oracle import oracle
from mwisp.perturb import to_general_position
from support import chain_instance


def _gp(inst):
    return to_general_position(inst)[0]


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(k=3)
    with pytest.raises(ValueError):
        SolverConfig(family="nope")


def test_suggested_k_grows_with_n():
    assert suggested_k(1, Fraction(1, 4), 4) == 64
    assert suggested_k(8, Fraction(1, 4), 4) > suggested_k(4, Fraction(1, 4), 4)


def test_single_polygon():
    inst = make_instance([("A", [(2, 2), (9, 3), (4, 7)], 5)], 16)
    sol, _ = solve(inst)
    assert sol.chosen == {"A"}


def test_empty_instance():
    sol, stats = solve(make_instance([], 8))
    assert sol.chosen == frozenset() and sol.total_weight == 0


def test_chain_matches_oracle():
    inst = _gp(chain_instance())
    sol, _ = solve(inst)
    assert sol.total_weight == 3 == oracle(inst).total_weight


def test_tiny_budget_still_feasible():
    inst = _gp(generate("triangles", 6, 3, 24, seed=4))
    sol, stats = solve(inst, SolverConfig(k=4, family="restricted", ell=2))
    assert verify_solution(inst, sol).feasible
    assert sol.total_weight >= max(p.weight for p in inst.polygons)


def test_trace_is_certified():
    inst = _gp(generate("triangles", 5, 3, 24, seed=2))
    sol, _, trace = solve_with_trace(inst)
    rep = certify_trace(inst, trace, oracle(inst).chosen)
    assert rep.certified
    assert rep.level_ratios[0] == 1


def test_deterministic():
    inst = _gp(generate("triangles", 6, 3, 24, seed=9))
    assert solve(inst)[0] == solve(inst)[0]


@pytest.mark.parametrize("family", FAMILIES)
def test_each_family_is_feasible(family):
    inst = _gp(generate("triangles", 5, 3, 24, seed=5))
    sol, _ = solve(inst, SolverConfig(family=family))
    assert verify_solution(inst, sol).feasible


@given(st.integers(0, 10_000), st.integers(1, 6))
@settings(max_examples=15, deadline=None)
def test_within_bounds_of_oracle(seed, n):
    inst = _gp(generate("triangles", n, 3, 24, seed))
    sol, _ = solve(inst)
    opt = oracle(inst).total_weight
    assert verify_solution(inst, sol).feasible
    assert Fraction(3, 4) * opt <= sol.total_weight <= opt
