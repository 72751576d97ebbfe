"""Front trackers: closed-form, jump-condition ODE and 1-D level set."""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .exact import ExactSolution, exact_shock_position

EXACT = 0
JUMP = 1
LEVEL_SET = 2
TRACKER_KINDS = {"exact": EXACT, "jump": JUMP, "level_set": LEVEL_SET}

ZERO = 0
TWO_CELLS_RIGHT = 1
STENCILS = {"zero": ZERO, "two_cells_right": TWO_CELLS_RIGHT}

# below this right state the two-cell stencil is replaced by p_R = 0
STENCIL_SWITCH_TOL = 1e-10
_DEGENERATE_JUMP = 1e-14


@dataclass(frozen=True)
class ShockTracker:
    """Tracked front. phi is a nodal signed distance (negative on the left)."""

    kind: str
    xi: float
    t: float = 0.0
    phi: Optional[np.ndarray] = None
    solution: Optional[ExactSolution] = None
    x_lo: float = 0.0
    dx: float = 1.0
    stencil: str = "zero"


def make_tracker(kind, xi0, grid, solution=None, stencil="zero"):
    if kind not in TRACKER_KINDS:
        raise ValueError(f"unknown tracker kind {kind!r}")
    phi = None
    if kind == "exact":
        if solution is None:
            raise ValueError("exact tracker needs an ExactSolution")
        xi0 = grid.x_lo + exact_shock_position(0.0, solution)
    if kind == "level_set":
        phi = grid.x - xi0
    if stencil not in STENCILS:
        raise ValueError(f"unknown stencil {stencil!r}")
    return ShockTracker(kind, float(xi0), 0.0, phi, solution, grid.x_lo, grid.dx, stencil)


def jump_velocity(p, i, dx, model, stencil="zero"):
    """Front speed from the discrete jump condition at shock node i.

    The left flux is upwinded from nodes i-1, i. With stencil "zero" the
    right state is taken as 0; "two_cells_right" uses p[i+2] as the right
    state and the flux between nodes i+2 and i+3.
    """
    stencil = STENCILS.get(stencil, stencil)
    fl = -model.k_max * (p[i] - p[i - 1]) / dx
    if stencil == ZERO:
        if p[i] <= 0:
            raise ValueError("jump velocity needs p_i > 0")
        return fl / p[i]
    jump = p[i] - p[i + 2]
    if abs(jump) < _DEGENERATE_JUMP:
        raise ValueError("degenerate jump |p_i - p_{i+2}| < 1e-14")
    fr = -model.k_min * (p[i + 3] - p[i + 2]) / dx
    return (fl - fr) / jump


def advance_jump_ode(tracker, v, dt):
    if tracker.kind != "jump":
        raise ValueError("advance_jump_ode needs a jump tracker")
    return replace(tracker, xi=tracker.xi + dt * v, t=tracker.t + dt)


def level_set_crossing(phi):
    """Last node i with phi_i <= 0; raises if the zero level leaves the grid."""
    neg = np.flatnonzero(phi <= 0.0)
    if neg.size == 0 or neg[-1] >= phi.size - 1:
        raise ValueError("level-set zero crossing left the domain")
    return int(neg[-1])


def advance_level_set(tracker, v, dt, dx):
    """Upwind transport of phi with the constant speed v (v >= 0)."""
    if tracker.kind != "level_set":
        raise ValueError("advance_level_set needs a level-set tracker")
    phi = tracker.phi
    grad = np.empty_like(phi)
    grad[1:] = (phi[1:] - phi[:-1]) / dx
    grad[0] = (phi[1] - phi[0]) / dx
    new = phi - dt * v * grad
    i = level_set_crossing(new)
    xi = tracker.x_lo + i * dx - new[i] * dx / (new[i + 1] - new[i])
    return replace(tracker, phi=new, xi=float(xi), t=tracker.t + dt)


def advance_exact(tracker, dt):
    t = tracker.t + dt
    xi = tracker.x_lo + exact_shock_position(t, tracker.solution)
    return replace(tracker, xi=xi, t=t)


def shock_geometry(tracker):
    """Host node i and sub-cell distance dx_star = xi - x_i in [0, dx)."""
    dx = tracker.dx
    if tracker.kind == "level_set":
        i = level_set_crossing(tracker.phi)
        return i, float(-tracker.phi[i])
    s = (tracker.xi - tracker.x_lo) / dx
    i = int(np.floor(s))
    dxs = tracker.xi - (tracker.x_lo + i * dx)
    if dxs >= dx:
        i += 1
        dxs -= dx
    elif dxs < 0:
        i -= 1
        dxs += dx
    return i, float(dxs)
