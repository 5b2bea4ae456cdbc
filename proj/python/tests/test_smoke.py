from fractions import Fraction

import pytest

import ordmed


def test_ordered_matches_conic():
    w = [3, 2, Fraction(1, 2)]
    c = [Fraction(7, 3), 1, 5]
    assert ordmed.ordered_cost(w, c) == ordmed.conic_cost(w, c) == 3 * 5 + 2 * Fraction(7, 3) + Fraction(1, 2)


@pytest.mark.parametrize("variant", ["robust", "matroid", "knapsack"])
def test_pipeline_never_beats_the_optimum(variant):
    for inst in ordmed.generate(variant, count=2, seed=11):
        opt = ordmed.optimum(inst)["value"]
        res = ordmed.solve(inst)
        assert opt <= res["cost"]
        assert res["trace"]["checks"]


def test_fault_tolerant_is_seeded():
    inst = ordmed.generate("fault_tolerant", seed=4)[0]
    a = ordmed.solve(inst, samples=20, seed=3)
    b = ordmed.solve(inst, samples=20, seed=3)
    assert a == b
    assert a["cost"] >= ordmed.optimum(inst)["value"]


def test_bad_metric_is_rejected():
    inst = {
        "facilities": ["f0"],
        "clients": ["c0", "c1"],
        "dist": {"matrix": [[0, 1, 1], [1, 0, 5], [1, 5, 0]]},
        "weights": [1, 1],
        "variant": {"robust": {"k": 1, "m": 2}},
    }
    with pytest.raises(ValueError):
        ordmed.optimum(inst)
