"""Error norms, convergence fits and artifact metrics for run records."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exact import exact_shock_position
from .grid import crossing_position


@dataclass(frozen=True)
class ErrorReport:
    l2: float
    linf: float
    n_cells: int
    dx: float
    scheme: Optional[str] = None
    l2_unweighted: float = 0.0


def error_norms(numeric, exact, dx, n_cells=None, scheme=None, interior_only=True):
    """Grid-weighted l2 and max norm of numeric - exact.

    With interior_only the two Dirichlet end values are skipped.
    """
    numeric = np.asarray(numeric, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if numeric.shape != exact.shape:
        raise ValueError("numeric and exact vectors differ in length")
    e = numeric - exact
    if interior_only:
        e = e[1:-1]
    if n_cells is None:
        n_cells = numeric.size - 1
    if e.size == 0:
        return ErrorReport(0.0, 0.0, n_cells, dx, scheme, 0.0)
    sq = float(np.sum(e * e))
    return ErrorReport(
        l2=float(np.sqrt(sq * dx)),
        linf=float(np.max(np.abs(e))),
        n_cells=n_cells,
        dx=dx,
        scheme=scheme,
        l2_unweighted=float(np.sqrt(sq)),
    )


def convergence_order(reports, norm="l2"):
    """Least-squares slope of log(error) against log(dx)."""
    if len(reports) < 2:
        raise ValueError("need at least two error reports")
    dx = np.array([r.dx for r in reports])
    err = np.array([getattr(r, norm) for r in reports])
    if np.any(err <= 0):
        raise ValueError("errors must be positive to fit an order")
    slope, _ = np.polyfit(np.log(dx), np.log(err), 1)
    return float(slope)


def errors_decrease(reports, norm="l2"):
    """True if the error falls strictly with every refinement."""
    rs = sorted(reports, key=lambda r: -r.dx)
    err = [getattr(r, norm) for r in rs]
    return all(b < a for a, b in zip(err, err[1:]))


@dataclass(frozen=True)
class OscillationReport:
    n_drops: int
    max_drop: float
    n_threshold_crossings: int
    monotone: bool


def oscillation_metrics(series, tol=1e-12, p_star=None):
    """Count single-step decreases beyond tol and repeat crossings of p_star.

    A crossing is a change of the indicator series >= p_star; the first
    upward crossing is the front arriving and is not counted.
    """
    s = np.asarray(series, dtype=float)
    d = np.diff(s)
    drops = d < -tol
    n_drops = int(np.count_nonzero(drops))
    max_drop = float(-d[drops].min()) if n_drops else 0.0
    crossings = 0
    if p_star is not None and s.size > 1:
        above = s >= p_star
        crossings = max(int(np.count_nonzero(above[1:] != above[:-1])) - 1, 0)
    return OscillationReport(n_drops, max_drop, crossings, n_drops == 0)


def turning_points(values, tol):
    """Local maxima and minima whose swing exceeds tol (zigzag filter).

    Returns (maxima, minima) as index arrays.
    """
    v = np.asarray(values, dtype=float)
    maxima, minima = [], []
    if v.size == 0:
        return np.array(maxima, int), np.array(minima, int)
    hi = lo = 0
    trend = 0  # unknown until the first swing beyond tol
    for k in range(1, v.size):
        x = v[k]
        if trend == 0:
            if x > v[hi]:
                hi = k
            if x < v[lo]:
                lo = k
            if x - v[lo] > tol:
                trend, hi = 1, k
            elif v[hi] - x > tol:
                trend, lo = -1, k
        elif trend == 1:
            if x > v[hi]:
                hi = k
            elif v[hi] - x > tol:
                maxima.append(hi)
                trend, lo = -1, k
        else:
            if x < v[lo]:
                lo = k
            elif x - v[lo] > tol:
                minima.append(lo)
                trend, hi = 1, k
    return np.array(maxima, int), np.array(minima, int)


@dataclass(frozen=True)
class OscillationCount:
    cycles: int
    coarse_crossings: float
    per_crossing: float
    amplitude: float


def oscillations_per_crossing(t, series, reference, front, dx, t_start, t_stop=None, tol=1e-6):
    """Oscillation cycles of series - reference per cell crossed by the front.

    A cycle is one local maximum of the error with swing above tol. The
    amplitude is the largest drop from a maximum to the following minimum.
    ``front`` maps time to the front position used for the crossing count.
    """
    t = np.asarray(t, dtype=float)
    t_stop = t[-1] if t_stop is None else t_stop
    m = (t >= t_start) & (t <= t_stop)
    e = np.asarray(series, dtype=float)[m] - np.asarray(reference, dtype=float)[m]
    maxima, minima = turning_points(e, tol)
    amp = 0.0
    for k in maxima:
        later = minima[minima > k]
        if later.size:
            amp = max(amp, e[k] - e[later[0]])
    crossed = (front(t[m][-1]) - front(t[m][0])) / dx
    return OscillationCount(len(maxima), crossed, len(maxima) / crossed if crossed > 0 else 0.0, amp)


def front_position(x, p, p_star):
    """Interpolated p_star crossing of a spatial profile."""
    return crossing_position(x, p, p_star)


def support_front(x, p, tol=1e-8):
    """Right edge of the region where p exceeds tol (interpolated)."""
    return crossing_position(x, p, tol)


def locking_metric(run, dx=None):
    """Displacement of the interpolated p_star crossing over the run."""
    p_star = run.metadata["p_star"]
    x0 = front_position(run.x_initial, run.initial_state.p, p_star)
    x1 = front_position(run.x_final, run.final_state.p, p_star)
    return abs(x1 - x0)


def shock_position_error(run, oracle, dx, x_lo=0.0):
    """|xi(t) - x*(t)| / dx along the recorded front trajectory."""
    t = run.xi_series[:, 0]
    xs = x_lo + exact_shock_position(t, oracle)
    return np.abs(run.xi_series[:, 1] - xs) / dx
