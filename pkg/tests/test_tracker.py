import numpy as np
import pytest
from hypothesis import given, strategies as st

from stefan_sam.exact import exact_front_speed, exact_value, solve_front_constant, with_offset
from stefan_sam.grid import Grid
from stefan_sam.model import CoefficientModel
from stefan_sam.tracker import (
    advance_exact,
    advance_jump_ode,
    advance_level_set,
    jump_velocity,
    make_tracker,
    shock_geometry,
)

M = CoefficientModel(1.0, 0.0, 0.5)


def test_flat_left_profile_gives_zero_speed():
    p = np.array([1.0, 0.7, 0.7, 0.1, 0.0, 0.0])
    assert jump_velocity(p, 2, 0.04, M) == 0.0


def test_upwind_speed_example():
    p = np.array([1.0, 0.8, 0.6, 0.0, 0.0])
    assert jump_velocity(p, 2, 0.04, M) == pytest.approx(0.2 / (0.04 * 0.6), rel=1e-14)


def test_two_cell_stencil():
    m = CoefficientModel(1.0, 0.1, 0.5)
    p = np.array([1.0, 0.8, 0.6, 0.4, 0.3, 0.1, 0.0])
    fl = -(0.6 - 0.8) / 0.04
    fr = -0.1 * (0.1 - 0.3) / 0.04
    assert jump_velocity(p, 2, 0.04, m, "two_cells_right") == pytest.approx((fl - fr) / 0.3)


def test_two_cell_stencil_rejects_flat_jump():
    p = np.array([1.0, 0.8, 0.6, 0.55, 0.6, 0.1, 0.0])
    with pytest.raises(ValueError):
        jump_velocity(p, 2, 0.04, M, "two_cells_right")


def test_speed_from_exact_samples_converges():
    sol = with_offset(solve_front_constant(M), 0.03)
    t = 0.02
    xs = sol.alpha * np.sqrt(t + sol.t_offset)
    errs, dxs = [], []
    for n in (50, 100, 200, 400, 800):
        dx = 1.0 / n
        i = int(np.floor(xs / dx))
        x = np.arange(n + 1) * dx
        p = exact_value(x, t, sol)
        errs.append(abs(jump_velocity(p, i, dx, M) - exact_front_speed(t, sol)))
        dxs.append(dx)
    order = np.polyfit(np.log(dxs), np.log(errs), 1)[0]
    assert order >= 0.9


def test_jump_ode_examples():
    g = Grid(50)
    tr = make_tracker("jump", 0.2, g)
    assert advance_jump_ode(tr, 0.0, 1e-4).xi == 0.2
    for _ in range(7):
        tr = advance_jump_ode(tr, 2.5, 0.25)
    assert tr.xi == 0.2 + 7 * 0.25 * 2.5


def test_level_set_examples():
    g = Grid(50)
    tr = make_tracker("level_set", 0.2, g)
    same = advance_level_set(tr, 0.0, 1e-3, g.dx)
    np.testing.assert_array_equal(same.phi, tr.phi)
    for _ in range(40):
        tr = advance_level_set(tr, 3.0, 1e-4, g.dx)
    assert tr.xi == pytest.approx(0.2 + 40 * 3.0 * 1e-4, abs=1e-14)


def test_level_set_crossing_leaving_domain_fails():
    g = Grid(10)
    tr = make_tracker("level_set", 0.85, g)
    with pytest.raises(ValueError):
        advance_level_set(tr, 1.0, 0.2, g.dx)


@given(st.lists(st.floats(0.0, 5.0), min_size=1, max_size=60), st.floats(0.15, 0.3))
def test_level_set_equals_jump_ode_for_same_speeds(vs, xi0):
    g = Grid(100)
    dt = g.dx ** 2 / 32
    a = make_tracker("jump", xi0, g)
    b = make_tracker("level_set", xi0, g)
    for v in vs:
        a = advance_jump_ode(a, v, dt)
        b = advance_level_set(b, v, dt, g.dx)
        assert abs(a.xi - b.xi) <= 1e-12
        ia, da = shock_geometry(a)
        ib, db = shock_geometry(b)
        assert ia == ib and abs(da - db) <= 1e-12


def test_exact_tracker_follows_oracle():
    g = Grid(40)
    sol = with_offset(solve_front_constant(M), 0.026)
    tr = make_tracker("exact", 0.0, g, sol)
    for _ in range(100):
        tr = advance_exact(tr, 1e-4)
        i, dxs = shock_geometry(tr)
        assert 0.0 <= dxs < g.dx
        assert g.x[i] <= tr.xi < g.x[i + 1] + 1e-15
        assert tr.xi == pytest.approx(sol.alpha * np.sqrt(tr.t + 0.026), abs=1e-15)


@given(st.floats(0.0, 0.999))
def test_geometry_within_cell(s):
    g = Grid(25)
    tr = make_tracker("jump", s, g)
    i, dxs = shock_geometry(tr)
    assert 0.0 <= dxs < g.dx
    assert i * g.dx + dxs == pytest.approx(s, abs=1e-15)
