from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mwisp.instance import (EmptyInstance, InstanceError, Solution, UnknownId, generate, instance_from_dict,
                            make_instance, normalize_weights, parse, parse_frac, serialize, solution_from_dict,
                            solution_to_dict, verify_solution)
from support import chain_instance


def test_json_round_trip_is_byte_stable():
    inst = generate("kgons", 5, 6, 40, seed=7)
    text = serialize(inst)
    assert serialize(parse(text)) == text


def test_weights_are_exact_strings():
    inst = make_instance([("A", [(0, 0), (4, 0), (0, 4)], Fraction(7, 3))], 8)
    assert '"weight": "7/3"' in serialize(inst)


def test_decimal_weights_rejected():
    with pytest.raises(InstanceError):
        parse_frac("0.5")


def test_declared_n_must_match():
    d = {"n": 2, "K": 3, "N": 8, "epsilon": "1/4",
         "polygons": [{"id": "A", "weight": "1/1", "vertices": [["0", "0"], ["4", "0"], ["0", "4"]]}]}
    with pytest.raises(InstanceError):
        instance_from_dict(d)


def test_verify_solution_flags_overlap():
    inst = chain_instance()
    assert verify_solution(inst, {"A", "C"}).feasible
    rep = verify_solution(inst, {"A", "B"})
    assert not rep.feasible and rep.violations == [("A", "B")]


def test_unknown_id():
    with pytest.raises(UnknownId):
        Solution.of(chain_instance(), ["Z"])


def test_solution_json():
    sol = Solution.of(chain_instance(), ["A", "C"])
    assert solution_to_dict(sol) == {"chosen": ["A", "C"], "weight": "2/1"}
    assert solution_from_dict(solution_to_dict(sol)) == sol


def test_normalize_weights_drops_light_polygons():
    inst = make_instance([("A", [(0, 0), (4, 0), (0, 4)], 1000),
                          ("B", [(5, 5), (9, 5), (5, 9)], 1)], 16, epsilon=Fraction(1, 4))
    norm, scale, dropped = normalize_weights(inst)
    assert scale == Fraction(8, 1000)
    assert dropped == {"B"}
    assert norm.by_id()["A"].weight == 8


def test_normalize_empty():
    with pytest.raises(EmptyInstance):
        normalize_weights(make_instance([], 8))


@given(st.integers(0, 5000), st.integers(1, 8), st.sampled_from(["triangles", "kgons"]))
@settings(max_examples=30, deadline=None)
def test_generator_is_deterministic(seed, n, kind):
    a = generate(kind, n, 6, 48, seed)
    b = generate(kind, n, 6, 48, seed)
    assert serialize(a) == serialize(b)
    assert a.n == n and all(3 <= len(p.vertices) <= a.K for p in a.polygons)
