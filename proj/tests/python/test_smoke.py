"""Smoke tests for the _qsp python module: one light touch per exposed area."""

import math

import pytest

import qsp


def test_basis_product_rule():
    e000 = qsp.basis(2, 0, 0, 0)
    e001 = qsp.basis(2, 0, 0, 1)
    prod = qsp.mul_maksimov0(e000, e001)
    assert prod.entries() == [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    assert qsp.mul_maksimov0(e001, e001).entries() == [0.0] * 8


def test_stochastic_predicates():
    uniform = qsp.CubicMatrix(2, [0.25] * 8)
    ok, dev, min_entry = qsp.is_stochastic(uniform, "(1,2)")
    assert ok and dev <= 1e-12 and min_entry >= 0.0
    ok3, _, _ = qsp.is_stochastic(uniform, "3")
    assert not ok3
    ok_twice, _, _ = qsp.is_stochastic(uniform, "twice")
    assert ok_twice

    contracted = qsp.contract_second(uniform)
    ok_left, _, _ = qsp.is_square_stochastic(contracted, "left")
    assert ok_left


def test_timefn_parse_and_eval():
    f = qsp.TimeFunction.parse("0.5*(1+exp(-t))")
    assert f(0.0) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        qsp.TimeFunction.parse("0.5*(")


def test_square_family_kce():
    fam = qsp.make_family({"family": "q2", "params": {"psi": "exp(-t)"}})
    report = qsp.kce_residual_square(fam, [0.0, 1.0, 2.0, 3.0, 4.0, 5.0])
    assert report["pass"]
    assert report["max_residual"] < 1e-12


def test_m1_trajectory_is_stable():
    fam = qsp.make_family(
        {"family": "m1", "params": {"g": "0.5", "u11": "0.25", "u21": "0.25"}}
    )
    rows = qsp.trajectory(fam, [0.9, 0.1], 0.0, [1.0, 2.0, 5.0])
    for _, state in rows:
        assert state == pytest.approx([0.5, 0.5], abs=1e-12)


def test_twin_extinction_and_report():
    twin = qsp.make_family({"family": "twin_a"})
    state = qsp.step_linear_12(twin(0.0, 1.0), [0.2, 0.5, 0.3])
    assert state == [1.0, 0.0, 0.0]

    survival = qsp.make_family(
        {
            "family": "twin_b",
            "params": {
                "phi": "1/(1+t)",
                "alpha": "(1+t)/3",
                "beta": "0.02*((1+t)/3)",
            },
        }
    )
    report = qsp.twin_report(survival, 0.0, 2.0)
    ratio = report["twin_ff"] / report["single_female"]
    assert ratio == pytest.approx(0.02, abs=1e-12)
    assert report["limits"] == "no limit declared"

    nine = qsp.verify_nine_equations(survival.family, [0.0, 1.0, 2.0, 3.0, 4.0, 5.0])
    assert nine["pass"]


def test_construction_errors_surface_as_value_errors():
    with pytest.raises(ValueError, match="u21"):
        qsp.make_family(
            {"family": "m1", "params": {"g": "1", "u11": "0.25", "u21": "0.2"}}
        )
    with pytest.raises(ValueError, match="family"):
        qsp.make_family({"family": "m9"})


def test_cubic_kce_for_flow_family():
    fam = qsp.make_family(
        {
            "family": "flow",
            "params": {"a": "0.6+0.3*(1-exp(-t))", "b": "0.6+0.3*(1-exp(-t))"},
        }
    )
    points = [0.5 * i for i in range(11)]
    report = qsp.kce_residual_cubic(fam, points)
    assert report["pass"]
    assert report["triples"] == math.comb(11, 3)
