"""Time stepping for the averaging schemes, SAM and the moving-window AMR run."""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .averaging import AVERAGE_KINDS, face_coefficients
from .exact import exact_shock_position, reference_solution
from .grid import State, crossing_position, locate_shock_cell
from .kernels import FRONT_EXIT, OK, STATUS_MESSAGES, WINDOW_EXIT, backend_name, get_backend
from .model import build_initial_condition, evaluate_initial_condition
from .stepping import budget_residual, ftcs_update, hold_front_node, sam_update
from .tracker import (
    STENCIL_SWITCH_TOL,
    STENCILS,
    TRACKER_KINDS,
    ShockTracker,
    advance_exact,
    advance_jump_ode,
    advance_level_set,
    jump_velocity,
    make_tracker,
    shock_geometry,
)

SCHEME_KINDS = ("arithmetic", "harmonic", "integral", "sam_exact", "sam_jump", "sam_levelset")
SAM_TRACKERS = {"sam_exact": "exact", "sam_jump": "jump", "sam_levelset": "level_set"}

DT_FACTOR = 1.0 / 32.0
# Smallest guard that keeps the explicit update on the reduced control
# volumes monotone: eps >= 2 k_max dt / dx.
EPS_FACTOR = 2.0 * DT_FACTOR
MONOTONE_TOL = 1e-12


class NumericalError(RuntimeError):
    """A step produced an invalid state; ``step`` is the failing step index."""

    def __init__(self, message, step=None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


@dataclass(frozen=True)
class SchemeSpec:
    kind: str = "sam_jump"
    eps_factor: float = EPS_FACTOR
    dt_factor: float = DT_FACTOR
    p_right_stencil: str = "zero"

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.p_right_stencil not in STENCILS:
            raise ValueError(f"unknown p_right_stencil {self.p_right_stencil!r}")
        if not self.dt_factor > 0:
            raise ValueError("dt_factor must be positive")
        if not 0 < self.eps_factor < 0.5:
            raise ValueError("eps_factor must lie in (0, 0.5)")

    @property
    def is_sam(self):
        return self.kind in SAM_TRACKERS

    def dt(self, dx):
        return self.dt_factor * dx * dx


@dataclass(frozen=True)
class AuxiliaryGeometry:
    """Control volumes around a front at xi = x_i + dx_star."""

    dx: float
    dx_star: float
    x_i: float

    @property
    def vol_i(self):
        return 0.5 * (self.dx + self.dx_star)

    @property
    def vol_ip1(self):
        return self.dx - 0.5 * self.dx_star

    @property
    def face_left(self):
        return self.x_i + 0.5 * self.dx_star

    @property
    def face_right(self):
        return self.x_i + self.dx_star + 0.5 * (self.dx - self.dx_star)


@dataclass(frozen=True)
class ProbeSpec:
    x: tuple = (0.32,)
    snapshot_times: tuple = ()


@dataclass
class RunRecord:
    """Series collected by a run; every series starts with the initial data."""

    t: np.ndarray
    probe_series: dict
    snapshots: dict
    xi_series: np.ndarray
    final_state: State
    metadata: dict = field(default_factory=dict)
    dx_star_series: Optional[np.ndarray] = None
    initial_state: Optional[State] = None
    x_initial: Optional[np.ndarray] = None
    x_final: Optional[np.ndarray] = None


# single steps -------------------------------------------------------------


def _averaging_state(p, t, x, p_star):
    above = np.flatnonzero(p >= p_star)
    i = int(above[-1]) if above.size else 0
    return State(p=p, t=t, xi=crossing_position(x, p, p_star), shock_index=i)


def ftcs_step(state, grid, scheme, model, return_info=False):
    """One forward-Euler step with an averaged face coefficient everywhere."""
    if scheme.kind not in AVERAGE_KINDS:
        raise ValueError("ftcs_step needs an averaging scheme")
    dx = grid.dx
    dt = scheme.dt(dx)
    n = state.p.size
    vol = np.full(n, dx)
    inv = np.full(n - 1, 1.0 / dx)
    kf = face_coefficients(state.p, scheme.kind, model)
    new, F = ftcs_update(state.p, vol, inv, kf, dt)
    if not np.all(np.isfinite(new)):
        raise NumericalError("non-finite value (explicit step unstable)")
    out = _averaging_state(new, state.t + dt, grid.x, model.p_star)
    if not return_info:
        return out
    info = {"F": F, "vol": vol, "front_sink": 0.0, "pinned": state.p}
    info["residual"] = budget_residual(state.p, new, vol, F[0], F[-1], 0.0, dt)
    return out, info


def sam_step(state, grid, scheme, model, tracker, return_info=False):
    """One SAM step; returns the new state and the advanced tracker.

    The conservation residual in ``info`` is taken before the node the
    front has reached is held.
    """
    if not scheme.is_sam:
        raise ValueError("sam_step needs a SAM scheme")
    dx = grid.dx
    dt = scheme.dt(dx)
    eps = scheme.eps_factor * dx
    i, dxs = shock_geometry(tracker)
    if i < 1 or i + 2 > grid.n_cells:
        raise NumericalError("front left the computational domain")
    q, new, info = sam_update(state.p, i, dxs, dx, eps, model, dt)
    if not np.all(np.isfinite(new)):
        raise NumericalError("non-finite value (explicit step unstable)")
    if tracker.kind == "exact":
        tracker = advance_exact(tracker, dt)
    else:
        stencil = tracker.stencil
        if stencil == "two_cells_right" and (i + 3 > grid.n_cells or q[i + 2] < STENCIL_SWITCH_TOL):
            stencil = "zero"
        v = jump_velocity(q, i, dx, model, stencil)
        if dt * v < -eps:
            raise NumericalError("tracked front moved left by more than the guard width")
        tracker = replace(tracker, stencil=stencil)
        if tracker.kind == "jump":
            tracker = advance_jump_ode(tracker, v, dt)
        else:
            tracker = advance_level_set(tracker, v, dt, dx)
    j, dxs_next = shock_geometry(tracker)
    stored = new.copy()
    hold_front_node(stored, j, dxs_next, dx, eps, model.p_star)
    out = State(p=stored, t=state.t + dt, xi=tracker.xi, shock_index=j)
    if not return_info:
        return out, tracker
    F = info["F"]
    info["pinned"] = q
    info["dx_star"] = dxs
    info["shock_index"] = i
    info["residual"] = budget_residual(q, new, info["vol"], F[0], F[-1], info["front_sink"], dt)
    return out, tracker, info


def initial_tracker(problem, grid, scheme, state=None):
    """Tracker for a SAM scheme, started at the initial front."""
    kind = SAM_TRACKERS[scheme.kind]
    sol = None
    if kind == "exact":
        sol = reference_solution(problem)
    xi0 = state.xi if state is not None else build_initial_condition(problem, grid).xi
    return make_tracker(kind, xi0, grid, sol, scheme.p_right_stencil)


# full runs -----------------------------------------------------------------


def _schedule(problem, dt, snapshot_times):
    nsteps = int(round(problem.t_end / dt))
    snaps = {}
    for ts in snapshot_times:
        if ts < 0 or ts > problem.t_end + 0.5 * dt:
            raise ValueError(f"snapshot time {ts} outside [0, t_end]")
        snaps[float(ts)] = int(round(ts / dt))
    stops = sorted(set(snaps.values()) | {nsteps})
    return nsteps, snaps, stops


def _probe_weights(grid, xs):
    idx = np.array([grid.nearest_node(x) for x in xs], dtype=np.int64)
    return idx, np.zeros(len(xs))


def _check_monotone(p, step):
    rise = np.diff(p)
    if rise.size and rise.max() > MONOTONE_TOL:
        j = int(np.argmax(rise))
        raise NumericalError(f"profile not monotone at node {j} (rise {rise.max():.3e})", step)


def run(problem, grid, scheme, probes=ProbeSpec(), backend=None, check_monotone=None):
    """Integrate to t_end, recording probes, snapshots and the front.

    Probes read the nearest grid node. For SAM the front series is the
    tracked xi; for the averaging schemes it is the interpolated p_star
    crossing. The monotone-profile check defaults to on for SAM.
    """
    kern = get_backend(backend)
    model = problem.model
    dx = grid.dx
    dt = scheme.dt(dx)
    nsteps, snaps, stops = _schedule(problem, dt, probes.snapshot_times)
    if check_monotone is None:
        check_monotone = scheme.is_sam
    state = build_initial_condition(problem, grid)
    p = state.p.copy()
    probe_idx, probe_w = _probe_weights(grid, probes.x)
    rec_p = np.empty((nsteps + 1, len(probes.x)))
    rec_xi = np.empty(nsteps + 1)
    rec_dxs = np.full(nsteps + 1, np.nan)
    rec_p[0] = p[probe_idx]
    snap_out = {}
    for ts, k in snaps.items():
        if k == 0:
            snap_out[ts] = (grid.x.copy(), p.copy())

    if scheme.is_sam:
        tr = initial_tracker(problem, grid, scheme, state)
        xi = tr.xi
        alpha = t_off = 0.0
        if tr.kind == "exact":
            alpha, t_off = tr.solution.alpha, tr.solution.t_offset
        phi = tr.phi.copy() if tr.phi is not None else np.zeros(0)
        stencil = STENCILS[scheme.p_right_stencil]
        tkind = TRACKER_KINDS[tr.kind]
        eps = scheme.eps_factor * dx
    else:
        xi = crossing_position(grid.x, p, model.p_star)
        vol = np.full(p.size, dx)
        inv = np.full(p.size - 1, 1.0 / dx)
        akind = AVERAGE_KINDS[scheme.kind]
    rec_xi[0] = xi

    done = 0
    for stop in stops:
        m = stop - done
        if m > 0:
            sl = slice(done + 1, stop + 1)
            if scheme.is_sam:
                k, status, xi, stencil = kern.sam_advance(
                    p, grid.x_lo, dx, model.k_max, model.k_min, model.p_star, dt, done * dt, m,
                    tkind, xi, phi, eps, alpha, t_off, stencil, probe_idx, probe_w,
                    rec_p[sl], rec_xi[sl], rec_dxs[sl],
                )
            else:
                k, status = kern.ftcs_advance(
                    p, vol, inv, grid.x, akind, model.k_max, model.k_min, model.p_star, dt, m,
                    probe_idx, probe_w, rec_p[sl], rec_xi[sl], 0, p.size,
                )
            if status != OK:
                raise NumericalError(STATUS_MESSAGES[status], done + k)
            done = stop
            if check_monotone:
                _check_monotone(p, done)
        for ts, ks in snaps.items():
            if ks == done and ks > 0:
                snap_out[ts] = (grid.x.copy(), p.copy())

    t = np.arange(nsteps + 1) * dt
    if scheme.is_sam:
        i_final = shock_geometry(ShockTracker("jump", float(xi), x_lo=grid.x_lo, dx=dx))[0]
    else:
        above = np.flatnonzero(p >= model.p_star)
        i_final = int(above[-1]) if above.size else 0
    final = State(p=p, t=nsteps * dt, xi=float(rec_xi[nsteps]), shock_index=i_final)
    meta = {
        "scheme": scheme.kind,
        "N": grid.n_cells,
        "dx": dx,
        "dt": dt,
        "nsteps": nsteps,
        "backend": backend_name(kern),
        "eps": scheme.eps_factor * dx if scheme.is_sam else None,
        "p_star": model.p_star,
    }
    series = {float(x): (t, rec_p[:, c].copy()) for c, x in enumerate(probes.x)}
    return RunRecord(t, series, snap_out, np.column_stack([t, rec_xi]), final, meta,
                     rec_dxs if scheme.is_sam else None, state, grid.x, grid.x)


# moving-window refinement ---------------------------------------------------


def composite_grid(coarse, c, n_inner):
    """Cell centres, widths and owning coarse node with nodes c, c+1 refined.

    Coarse node j owns the control volume [x_j - dx/2, x_j + dx/2]; a refined
    node is replaced by n_inner equal sub-volumes.
    """
    dx = coarse.dx
    h = dx / n_inner
    xc, w, owner = [], [], []
    for j, xj in enumerate(coarse.x):
        if n_inner > 1 and j in (c, c + 1):
            for m in range(n_inner):
                xc.append(xj - 0.5 * dx + (m + 0.5) * h)
                w.append(h)
                owner.append(j)
        else:
            xc.append(xj)
            w.append(dx)
            owner.append(j)
    return np.array(xc), np.array(w), np.array(owner, dtype=np.int64)


def _restrict(p, w, owner, n_coarse, dx):
    return np.bincount(owner, weights=p * w, minlength=n_coarse) / dx


def _regrid(p, w_old, owner, coarse, c_new, n_inner):
    """Move the refined window to coarse nodes c_new, c_new + 1.

    Cells refined before and after keep their fine values. Newly refined
    cells get a minmod-limited linear profile through the coarse means.
    """
    dx = coarse.dx
    pc = _restrict(p, w_old, owner, coarse.n_nodes, dx)
    xc, w, own = composite_grid(coarse, c_new, n_inner)
    new = np.empty(xc.size)
    for j in np.unique(own):
        dst = np.flatnonzero(own == j)
        src = np.flatnonzero(owner == j)
        if dst.size == src.size:
            new[dst] = p[src]
            continue
        if dst.size == 1:
            new[dst] = pc[j]
            continue
        slope = 0.0
        if 0 < j < coarse.n_cells:
            a = pc[j] - pc[j - 1]
            b = pc[j + 1] - pc[j]
            if a * b > 0:
                slope = np.sign(a) * min(abs(a), abs(b)) / dx
        new[dst] = pc[j] + slope * (xc[dst] - coarse.x[j])
    return new, xc, w, own


def run_with_amr(problem, coarse_grid, n_inner, scheme, probes=ProbeSpec(), backend=None):
    """Integral-average FTCS on a grid refined around the front.

    The two coarse control volumes holding the p_star crossing are split
    into n_inner sub-volumes each. Face fluxes use the distance between
    neighbouring centres, so coarse and fine sides share one flux. The
    window moves when the crossing leaves the first refined coarse node.
    Probes are linearly interpolated between cell centres.
    """
    if scheme.kind not in AVERAGE_KINDS:
        raise ValueError("run_with_amr needs an averaging scheme")
    if int(n_inner) != n_inner or n_inner < 1:
        raise ValueError("n_inner must be a positive integer")
    kern = get_backend(backend)
    model = problem.model
    dx = coarse_grid.dx
    h = dx / n_inner
    dt = scheme.dt_factor * h * h
    nsteps, snaps, stops = _schedule(problem, dt, probes.snapshot_times)
    akind = AVERAGE_KINDS[scheme.kind]

    pc = build_initial_condition(problem, coarse_grid).p
    c = locate_shock_cell(pc, model.p_star)
    xc, w, owner = composite_grid(coarse_grid, c, n_inner)
    p = evaluate_initial_condition(problem, xc)
    p[0], p[-1] = problem.bc_left, problem.bc_right
    if n_inner == 1:
        p = pc.copy()

    rec_p = np.empty((nsteps + 1, len(probes.x)))
    rec_front = np.empty(nsteps + 1)

    def probe_setup(xc):
        idx = np.clip(np.searchsorted(xc, probes.x, side="right") - 1, 0, xc.size - 2)
        wgt = (np.asarray(probes.x) - xc[idx]) / (xc[idx + 1] - xc[idx])
        return idx.astype(np.int64), wgt

    idx, wgt = probe_setup(xc)
    rec_p[0] = (1 - wgt) * p[idx] + wgt * p[idx + 1]
    rec_front[0] = crossing_position(xc, p, model.p_star)
    snap_out = {ts: (xc.copy(), p.copy()) for ts, k in snaps.items() if k == 0}
    initial = State(p=p.copy(), t=0.0, xi=float(rec_front[0]), shock_index=c)
    x_initial = xc.copy()
    n_regrid = 0
    done = 0
    for stop in stops:
        while done < stop:
            if n_inner == 1:
                lo, hi = 0, p.size
            else:
                cells = np.flatnonzero(owner == c)
                lo, hi = int(cells[0]), int(cells[-1])
            sl = slice(done + 1, stop + 1)
            k, status = kern.ftcs_advance(
                p, w, 1.0 / np.diff(xc), xc, akind, model.k_max, model.k_min, model.p_star,
                dt, stop - done, idx, wgt, rec_p[sl], rec_front[sl], lo, hi,
            )
            done += k
            if status == WINDOW_EXIT:
                above = np.flatnonzero(p >= model.p_star)
                c = int(owner[above[-1]])
                if c < 1 or c + 1 > coarse_grid.n_cells - 1:
                    raise NumericalError(STATUS_MESSAGES[FRONT_EXIT], done)
                p, xc, w, owner = _regrid(p, w, owner, coarse_grid, c, n_inner)
                idx, wgt = probe_setup(xc)
                n_regrid += 1
            elif status != OK:
                raise NumericalError(STATUS_MESSAGES[status], done)
        for ts, ks in snaps.items():
            if ks == done and ks > 0:
                snap_out[ts] = (xc.copy(), p.copy())

    t = np.arange(nsteps + 1) * dt
    above = np.flatnonzero(p >= model.p_star)
    final = State(p=p, t=nsteps * dt, xi=float(rec_front[-1]), shock_index=int(above[-1]))
    meta = {
        "scheme": scheme.kind,
        "N": coarse_grid.n_cells,
        "n_inner": n_inner,
        "dx": dx,
        "dt": dt,
        "nsteps": nsteps,
        "regrids": n_regrid,
        "backend": backend_name(kern),
        "p_star": model.p_star,
    }
    series = {float(x): (t, rec_p[:, c_].copy()) for c_, x in enumerate(probes.x)}
    return RunRecord(t, series, snap_out, np.column_stack([t, rec_front]), final, meta,
                     None, initial, x_initial, xc)


def exact_front_series(record, sol, x_lo=0.0):
    t = record.xi_series[:, 0]
    return x_lo + exact_shock_position(t, sol)
