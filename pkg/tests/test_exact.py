import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from oracles import z1_bisection, z1_two_phase
from stefan_sam.exact import (
    exact_front_speed,
    exact_shock_position,
    exact_value,
    front_residual,
    left_branch,
    right_branch,
    solve_front_constant,
    with_offset,
)
from stefan_sam.model import CoefficientModel

# frozen from tests/oracles.py::z1_bisection (40-digit bisection)
Z1_REF = 0.6200626333135955

SOL = solve_front_constant(CoefficientModel(1.0, 0.0, 0.5))


def test_z1_matches_frozen_oracle():
    assert abs(z1_bisection(0.5) - Z1_REF) < 1e-15
    assert abs(SOL.z1 - Z1_REF) < 1e-12
    assert SOL.z1 == pytest.approx(0.620, abs=5e-4)
    assert SOL.alpha == pytest.approx(1.240, abs=5e-4)


def test_alpha_definition_and_constants():
    assert SOL.alpha == 2.0 * math.sqrt(1.0) * SOL.z1
    assert SOL.c1 == pytest.approx(0.5 / math.erf(SOL.z1), rel=1e-15)
    assert abs(front_residual(SOL.z1, SOL.model)) < 1e-12


def test_k_max_scales_alpha_only():
    s4 = solve_front_constant(CoefficientModel(4.0, 0.0, 0.5))
    assert s4.z1 == pytest.approx(SOL.z1, rel=1e-13)
    assert s4.alpha == pytest.approx(2 * SOL.alpha, rel=1e-13)


def test_z1_vanishes_as_threshold_approaches_one():
    zs = [solve_front_constant(CoefficientModel(1.0, 0.0, ps)).z1 for ps in (0.9, 0.99, 0.999)]
    assert zs[0] > zs[1] > zs[2] > 0
    assert zs[2] < 0.05


@pytest.mark.parametrize("k_min", [0.01, 0.1, 0.5])
def test_two_phase_root_matches_mpmath(k_min):
    s = solve_front_constant(CoefficientModel(1.0, k_min, 0.5))
    assert s.z1 == pytest.approx(z1_two_phase(1.0, k_min, 0.5), abs=1e-11)


def test_tiny_k_min_does_not_overflow():
    s = solve_front_constant(CoefficientModel(1.0, 1e-8, 0.5))
    assert s.z1 == pytest.approx(SOL.z1, abs=1e-3)
    assert np.isfinite(exact_value(0.5, 0.05, s))


def test_invalid_threshold_rejected():
    with pytest.raises(ValueError):
        solve_front_constant(CoefficientModel(1.0, 0.0, 1.5))


def test_exact_value_examples():
    for t in (0.01, 0.05, 0.3):
        assert exact_value(0.0, t, SOL) == 1.0
        assert exact_value(exact_shock_position(t, SOL), t, SOL) == 0.5
        assert exact_value(exact_shock_position(t, SOL) + 0.3, t, SOL) == 0.0


def test_shock_position_examples():
    s = with_offset(SOL, 0.01)
    assert exact_shock_position(-0.01, s) == 0.0
    assert exact_shock_position(0.05, SOL) == pytest.approx(0.277, abs=5e-4)
    assert exact_shock_position(0.04, SOL) / exact_shock_position(0.01, SOL) == pytest.approx(2.0, rel=1e-15)


def test_front_speed_examples():
    assert exact_front_speed(0.04, SOL) == pytest.approx(3.10, abs=5e-3)
    assert exact_front_speed(0.16, SOL) == pytest.approx(0.5 * exact_front_speed(0.04, SOL), rel=1e-15)
    s = with_offset(SOL, 0.02)
    moved, _ = quad(lambda t: exact_front_speed(t, s), 0.0, 0.1)
    assert moved == pytest.approx(exact_shock_position(0.1, s) - exact_shock_position(0.0, s), rel=1e-10)


@pytest.mark.parametrize("k_min", [0.0, 0.05])
def test_continuity_at_front(k_min):
    s = solve_front_constant(CoefficientModel(1.0, k_min, 0.5))
    xs = exact_shock_position(0.05, s)
    for d in (1e-4, 1e-6, 1e-8):
        assert abs(exact_value(xs - d, 0.05, s) - 0.5) < 10 * d
        if k_min > 0:
            assert abs(exact_value(xs + d, 0.05, s) - 0.5) < 100 * d


def _flux_jump(s, t, h):
    xs = exact_shock_position(t, s)
    dl = (left_branch(xs + h, t, s) - left_branch(xs - h, t, s)) / (2 * h)
    dr = (right_branch(xs + h, t, s) - right_branch(xs - h, t, s)) / (2 * h)
    return abs(s.model.k_max * dl - s.model.k_min * dr)


@pytest.mark.parametrize("k_min", [0.01, 0.2])
def test_flux_continuity_converges(k_min):
    s = solve_front_constant(CoefficientModel(1.0, k_min, 0.5))
    hs = np.sqrt(k_min * 0.05) * np.array([0.2, 0.1, 0.05, 0.025])
    r = np.array([_flux_jump(s, 0.05, h) for h in hs])
    order = np.polyfit(np.log(hs), np.log(r), 1)[0]
    assert order >= 1.0
    assert r[-1] < r[0] / 50


@given(st.floats(0.01, 0.5), st.floats(0.01, 0.2), st.floats(1.5, 4.0))
def test_self_similarity(x, t, lam):
    a = exact_value(x, t, SOL)
    b = exact_value(x * math.sqrt(lam), t * lam, SOL)
    assert a == pytest.approx(b, abs=1e-13)


@given(st.floats(0.0, 1.0), st.floats(0.005, 0.3))
def test_values_bounded(x, t):
    v = exact_value(x, t, SOL)
    assert 0.0 <= v <= 1.0


def test_vectorised_time_matches_scalar_calls():
    s = with_offset(solve_front_constant(CoefficientModel(1.0, 0.05, 0.5)), 0.02)
    t = np.linspace(0.0, 0.05, 7)
    x = 0.25
    got = exact_value(x, t, s)
    np.testing.assert_array_equal(got, [exact_value(x, tt, s) for tt in t])
    np.testing.assert_array_equal(exact_shock_position(t, s), [exact_shock_position(tt, s) for tt in t])
