"""Single forward-Euler updates written with numpy.

These are the reference updates. The looped kernels in ``_ckernels`` and
``_pykernels`` must reproduce them step for step.
"""

import numpy as np

from .averaging import face_coefficients, sam_fluxes


def ftcs_update(p, vol, inv_dist, kf, dt):
    """Two-point flux update of the interior nodes.

    F[f] is the flux through the face between nodes f and f+1. Returns the
    new nodal vector and the face fluxes.
    """
    F = -kf * (p[1:] - p[:-1]) * inv_dist
    new = p.copy()
    new[1:-1] = p[1:-1] + dt / vol[1:-1] * (F[:-1] - F[1:])
    return new, F


def uniform_ftcs_update(p, dx, kind, model, dt):
    n = p.size
    vol = np.full(n, dx)
    inv = np.full(n - 1, 1.0 / dx)
    return ftcs_update(p, vol, inv, face_coefficients(p, kind, model), dt)


def sam_mode(dx_star, dx, eps):
    """'L' (front on node i), 'R' (front next to node i+1) or 'S' (sub-cell)."""
    if dx_star <= eps:
        return "L"
    if dx - dx_star <= eps:
        return "R"
    return "S"


def sam_update(p, i, dx_star, dx, eps, model, dt):
    """One SAM step with the front between nodes i and i+1.

    Faces left of the front carry k_max, faces right of it k_min. Nodes i
    and i+1 use the shock fluxes on their reduced control volumes. Within
    eps of node i ('L') node i is held on the line from node i-1 to
    (xi, p_star) and sees ordinary fluxes.
    Within eps of node i+1 ('R') the right sub-cell distance in F_minus is
    floored at eps.

    Returns (pinned, new, info). ``pinned`` is p with the guard value
    imposed; the flux update starts from it. ``info`` carries the mode,
    face fluxes, control volumes and the flux absorbed by the front.
    """
    n = p.size
    mode = sam_mode(dx_star, dx, eps)
    q = p.copy()
    kf = np.where(np.arange(n - 1) < i, model.k_max, model.k_min)
    if mode == "L":
        q[i] = held_value(q[i - 1], dx_star, dx, model.p_star)
    F = -kf * (q[1:] - q[:-1]) / dx
    new = q.copy()
    new[1:-1] = q[1:-1] + dt / dx * (F[:-1] - F[1:])
    vol = np.full(n, dx)
    f_plus = f_minus = None
    if mode == "L":
        new[i] = held_value(new[i - 1], dx_star, dx, model.p_star)
        vol[i] = 0.0
        sink = F[i - 1] - F[i]
    else:
        f_plus, f_minus = sam_fluxes(q[i], q[i + 1], dx, dx_star, model, max(dx - dx_star, eps))
        vol[i] = 0.5 * (dx + dx_star)
        vol[i + 1] = dx - 0.5 * dx_star
        new[i] = q[i] + dt / vol[i] * (F[i - 1] - f_plus)
        new[i + 1] = q[i + 1] + dt / vol[i + 1] * (f_minus - F[i + 1])
        sink = f_plus - f_minus
    info = {
        "mode": mode,
        "F": F,
        "f_plus": f_plus,
        "f_minus": f_minus,
        "vol": vol,
        "front_sink": sink,
    }
    return q, new, info


def held_value(p_left, dx_star, dx, p_star):
    """Value of a held node: linear between node i-1 and (xi, p_star)."""
    return p_star + dx_star * (p_left - p_star) / (dx + dx_star)


def hold_front_node(p, i, dx_star, dx, eps, p_star):
    """Hold node i in place if the front sits within eps of it.

    Applied after the front moves, so a stored state already carries the
    value the next step would impose. Fronts outside the interior are left
    for the next step to report.
    """
    if 1 <= i <= p.size - 3 and dx_star <= eps:
        p[i] = held_value(p[i - 1], dx_star, dx, p_star)


def budget_residual(before, after, vol, boundary_in, boundary_out, front_sink, dt):
    """Relative mismatch of the discrete balance over one step.

    sum(vol * (after - before)) over interior nodes should equal
    dt * (boundary_in - boundary_out - front_sink).
    """
    lhs = float(np.sum(vol[1:-1] * (after[1:-1] - before[1:-1])))
    rhs = dt * (boundary_in - boundary_out - front_sink)
    scale = max(abs(lhs), abs(dt * boundary_in), abs(dt * boundary_out), abs(dt * front_sink))
    if scale == 0.0:
        return 0.0
    return abs(lhs - rhs) / scale
