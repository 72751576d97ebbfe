import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from stefan_sam.grid import Grid, crossing_position
from stefan_sam.model import (
    CoefficientModel,
    Custom,
    ExactAtTime,
    PiecewiseLinear,
    ProblemSpec,
    build_initial_condition,
    coefficient,
    phi,
)

M = CoefficientModel(1.0, 0.0, 0.5)


@pytest.mark.parametrize("p, expected", [(0.7, 1.0), (0.5, 1.0), (0.3, 0.0)])
def test_coefficient_branches(p, expected):
    assert coefficient(p, M) == expected


def test_coefficient_vectorised():
    np.testing.assert_array_equal(coefficient(np.array([0.7, 0.5, 0.3]), M), [1.0, 1.0, 0.0])


@pytest.mark.parametrize("p, expected", [(0.5, 0.0), (1.0, 0.5), (0.2, 0.0)])
def test_phi_positive_part(p, expected):
    assert phi(p, M) == pytest.approx(expected, abs=1e-15)


def test_phi_two_phase_branches():
    m = CoefficientModel(2.0, 0.1, 0.5)
    assert phi(0.2, m) == pytest.approx(0.02)
    assert phi(0.9, m) == pytest.approx(0.1 * 0.5 + 2.0 * 0.4)


@pytest.mark.parametrize("kw", [dict(k_max=0.0), dict(k_min=-0.1), dict(k_min=2.0), dict(p_star=0.0)])
def test_model_rejects_bad_parameters(kw):
    with pytest.raises(ValueError):
        CoefficientModel(**kw)


def test_problem_requires_threshold_between_boundaries():
    with pytest.raises(ValueError):
        ProblemSpec(model=CoefficientModel(p_star=1.5))


def test_ic_variant_invariants():
    with pytest.raises(ValueError):
        ExactAtTime(t0=0.0)
    with pytest.raises(ValueError):
        ProblemSpec(initial_condition=PiecewiseLinear(1.2))


models = st.builds(
    CoefficientModel,
    k_max=st.floats(0.1, 10),
    k_min=st.floats(0, 0.09),
    p_star=st.floats(0.05, 0.95),
)


@given(models, st.floats(0, 1), st.floats(0, 1))
def test_coefficient_monotone_in_p(m, a, b):
    lo, hi = min(a, b), max(a, b)
    assert coefficient(hi, m) >= coefficient(lo, m)


@given(models, st.floats(0, 1), st.floats(0, 1))
def test_phi_non_decreasing_and_lipschitz(m, a, b):
    lo, hi = min(a, b), max(a, b)
    assert phi(hi, m) >= phi(lo, m) - 1e-15
    assert phi(hi, m) - phi(lo, m) <= m.k_max * (hi - lo) + 1e-12


@given(st.floats(0.05, 0.95), st.floats(0.1, 10))
def test_phi_vanishes_at_threshold_for_stefan_form(ps, kmax):
    assert phi(ps, CoefficientModel(kmax, 0.0, ps)) == 0.0


def test_exact_ic_front_at_requested_node():
    g = Grid(50)
    s = build_initial_condition(ProblemSpec(), g)
    assert s.xi == pytest.approx(0.2, abs=1e-15)
    assert s.p[0] == 1.0 and s.p[-1] == 0.0
    assert np.all(np.diff(s.p) <= 0)
    # crossing of the sampled profile, located independently by bisection on
    # the linear interpolant
    f = lambda x: np.interp(x, g.x, s.p) - 0.5  # noqa: E731
    a, b = 0.1, 0.3
    for _ in range(60):
        m = 0.5 * (a + b)
        a, b = (m, b) if f(m) >= 0 else (a, m)
    assert abs(a - 0.2) < g.dx


def test_exact_ic_with_explicit_t0():
    s = build_initial_condition(ProblemSpec(initial_condition=ExactAtTime(t0=0.01)), Grid(40))
    assert 0.1 < s.xi < 0.15


def test_piecewise_linear_ic():
    g = Grid(100)
    s = build_initial_condition(ProblemSpec(initial_condition=PiecewiseLinear(0.5)), g)
    np.testing.assert_allclose(s.p, np.clip(1 - 2 * g.x, 0, 1), atol=1e-15)
    assert s.xi == pytest.approx(0.25)


def test_custom_constant_rejected():
    ic = Custom(x=(0.0, 1.0), p=(1.0, 1.0))
    with pytest.raises(ValueError, match="crossing"):
        build_initial_condition(ProblemSpec(initial_condition=ic), Grid(20))


def test_custom_non_monotone_rejected():
    ic = Custom(x=(0.0, 0.3, 0.6, 1.0), p=(1.0, 0.2, 0.8, 0.0))
    with pytest.raises(ValueError, match="monotone"):
        build_initial_condition(ProblemSpec(initial_condition=ic), Grid(20))


def test_custom_table_interpolated():
    ic = Custom(x=(0.0, 0.4, 1.0), p=(1.0, 0.0, 0.0))
    s = build_initial_condition(ProblemSpec(initial_condition=ic), Grid(10))
    assert s.p[1] == pytest.approx(0.75)
    assert s.xi == pytest.approx(0.2)


@given(st.integers(8, 120), st.floats(0.1, 0.6))
def test_initial_condition_monotone_with_exact_boundaries(n, x_front):
    assume(x_front > 1.5 / n)
    spec = ProblemSpec(initial_condition=ExactAtTime(x_front=x_front))
    s = build_initial_condition(spec, Grid(n))
    assert s.p[0] == spec.bc_left and s.p[-1] == spec.bc_right
    assert np.all(np.diff(s.p) <= 1e-12)
    assert crossing_position(Grid(n).x, s.p, 0.5) == pytest.approx(x_front, abs=1.0 / n)
