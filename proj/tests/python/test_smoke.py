import math

import pytest

import solvq


def test_identity_pair_basics():
    pair = solvq.make_constant(1.0, 1.0)
    d, residual = solvq.d_of_x(pair, 3.0)
    assert abs(d - 1.0) <= 1e-9
    assert residual <= 1e-9
    assert abs(solvq.M_p_at(pair, 2.0, 0.0) - 0.5) <= 1e-6
    assert abs(solvq.M_1_at(pair, 0.0) - 1.0) <= 1e-6
    assert abs(solvq.A_at(pair, 0.0) - 1.0) <= 1e-7


def test_scan_and_divergence():
    pair = solvq.make_constant(1.0, 1.0)
    prof = solvq.scan_d(pair, [-2.0, -1.0, 0.0, 1.0, 2.0])
    assert prof["d0_estimate"] == pytest.approx(1.0, abs=1e-9)
    s = solvq.s1_s2_diverge(pair, 64.0)
    assert s["s1"] == "Diverging"
    assert s["s2_partial"] == pytest.approx(64.0, rel=1e-9)


def test_classify_identity():
    pair = solvq.make_constant(1.0, 1.0)
    assert solvq.classify(pair, "L2", x_max=64)["decision"] == "Solvable"
    assert solvq.classify(pair, "C", x_max=64)["decision"] == "NotSolvable"


def test_closed_form_family():
    v = solvq.classify_example8(0.0, 1.0, 2.0, "L2")
    assert v["decision"] == "Solvable"
    assert v["route"] == "Thm8.12/Eq8.25"
    v = solvq.classify_example8(-1.0, 0.0, 1.0, "L1")
    assert v["decision"] == "NotSolvable"


def test_solution_operator():
    pair = solvq.make_constant(1.0, 1.0)
    y, err = solvq.apply_G(pair, "exp(-x*x)", 0.0)
    # int_0^inf e^{-t} e^{-t^2} dt
    assert y == pytest.approx(0.5456413608, abs=1e-7)
    assert err >= 0
    curve = solvq.solve_on_grid(pair, lambda t: 1.0, [-1.0, 0.0, 1.0])
    assert curve["y"] == pytest.approx([1.0, 1.0, 1.0], abs=1e-7)


def test_oscillatory_family_d_decay():
    pair = solvq.make_exp_osc(0.0, 1.0, 2.0)
    d3, _ = solvq.d_of_x(pair, 3.0)
    d5, _ = solvq.d_of_x(pair, 5.0)
    assert d5 < d3
    assert 0.1 < d3 * math.exp(3.0) < 10.0


def test_norm_bracket():
    pair = solvq.make_constant(1.0, 1.0)
    nb = solvq.norm_bracket(pair, 2.0, n_samples=20, seed=7)
    assert nb["contained"]
    assert 0.4 <= nb["lower_empirical"] <= 1.0 + 1e-6
