"""Pure-Python time loops built on the numpy reference updates.

Same signatures and status codes as the compiled ``_ckernels`` module.
Arrays passed in are updated in place.
"""

import math

import numpy as np

from .model import CoefficientModel
from .stepping import ftcs_update, hold_front_node, sam_update
from .averaging import face_coefficients
from .tracker import (
    EXACT,
    LEVEL_SET,
    STENCIL_SWITCH_TOL,
    TWO_CELLS_RIGHT,
    ZERO,
    ShockTracker,
    advance_level_set,
    jump_velocity,
    level_set_crossing,
    shock_geometry,
)

OK = 0
NONFINITE = 1
RECEDED = 2
FRONT_EXIT = 3
WINDOW_EXIT = 4


def _front_index(p, p_star, j):
    n = p.shape[0]
    while j + 1 < n and p[j + 1] >= p_star:
        j += 1
    while j > 0 and p[j] < p_star:
        j -= 1
    return j


def _front_position(p, xc, p_star, j):
    n = p.shape[0]
    if j + 1 >= n:
        return xc[n - 1]
    a = p[j]
    b = p[j + 1]
    if a == b:
        return xc[j]
    return xc[j] + (a - p_star) / (a - b) * (xc[j + 1] - xc[j])


def _probe(p, idx, w, out):
    for k in range(idx.shape[0]):
        j = idx[k]
        out[k] = (1.0 - w[k]) * p[j] + w[k] * p[j + 1] if w[k] != 0.0 else p[j]


def ftcs_advance(p, vol, inv_dist, xc, kind, k_max, k_min, p_star, dt, nsteps,
                 probe_idx, probe_w, rec_p, rec_front, lo, hi):
    """Advance nsteps FTCS steps; stop early if the front leaves [lo, hi].

    Returns (steps_done, status).
    """
    model = CoefficientModel(k_max, k_min, p_star)
    j = _front_index(p, p_star, int(np.flatnonzero(p >= p_star)[-1]))
    for n in range(nsteps):
        kf = face_coefficients(p, kind, model)
        new, _ = ftcs_update(p, vol, inv_dist, kf, dt)
        if not np.all(np.isfinite(new)):
            return n, NONFINITE
        p[:] = new
        _probe(p, probe_idx, probe_w, rec_p[n])
        j = _front_index(p, p_star, j)
        rec_front[n] = _front_position(p, xc, p_star, j)
        if j < lo or j > hi:
            return n + 1, WINDOW_EXIT
    return nsteps, OK


def sam_advance(p, x_lo, dx, k_max, k_min, p_star, dt, t0, nsteps, tracker_kind,
                xi, phi, eps, alpha, t_offset, stencil, probe_idx, probe_w,
                rec_p, rec_xi, rec_dxs):
    """Advance nsteps SAM steps with the given tracker.

    Returns (steps_done, status, xi, stencil). phi is updated in place for
    the level-set tracker.
    """
    model = CoefficientModel(k_max, k_min, p_star)
    last = p.shape[0] - 1
    tr = ShockTracker(
        "level_set" if tracker_kind == LEVEL_SET else "jump",
        xi, phi=phi.copy() if tracker_kind == LEVEL_SET else None, x_lo=x_lo, dx=dx,
    )
    for n in range(nsteps):
        if tracker_kind == EXACT:
            tr = ShockTracker("jump", x_lo + alpha * math.sqrt(t0 + n * dt + t_offset),
                              x_lo=x_lo, dx=dx)
        try:
            i, dxs = shock_geometry(tr)
        except ValueError:
            return n, FRONT_EXIT, tr.xi, stencil
        if i < 1 or i + 1 > last - 1:
            return n, FRONT_EXIT, tr.xi, stencil
        q, new, _ = sam_update(p, i, dxs, dx, eps, model, dt)
        v = 0.0
        if tracker_kind != EXACT:
            if stencil == TWO_CELLS_RIGHT and (i + 3 > last or q[i + 2] < STENCIL_SWITCH_TOL):
                stencil = ZERO
            v = jump_velocity(q, i, dx, model, stencil)
            if dt * v < -eps:
                return n, RECEDED, tr.xi, stencil
        if not np.all(np.isfinite(new)):
            return n, NONFINITE, tr.xi, stencil
        p[:] = new
        if tracker_kind == LEVEL_SET:
            try:
                tr = advance_level_set(tr, v, dt, dx)
            except ValueError:
                return n, FRONT_EXIT, tr.xi, stencil
            phi[:] = tr.phi
        elif tracker_kind == EXACT:
            tr = ShockTracker("jump", x_lo + alpha * math.sqrt(t0 + (n + 1) * dt + t_offset),
                              x_lo=x_lo, dx=dx)
        else:
            tr = ShockTracker("jump", tr.xi + dt * v, x_lo=x_lo, dx=dx)
        try:
            hold_front_node(p, *shock_geometry(tr), dx, eps, p_star)
        except ValueError:  # no level-set crossing; reported next step
            pass
        _probe(p, probe_idx, probe_w, rec_p[n])
        rec_xi[n] = tr.xi
        rec_dxs[n] = dxs
    return nsteps, OK, tr.xi, stencil


__all__ = ["ftcs_advance", "sam_advance", "level_set_crossing"]
