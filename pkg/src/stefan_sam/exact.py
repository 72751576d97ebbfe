"""Similarity solution of the one-phase/two-phase Stefan test problem.

Boundary data are p(0) = 1 and p(inf) = 0. The front sits at
x*(t) = alpha * sqrt(t) with alpha = 2 sqrt(k_max) z1, where z1 solves the
flux balance at the front.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, erfc, erfcx

from .model import CoefficientModel, ExactAtTime, initial_front

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class ExactSolution:
    z1: float
    alpha: float
    c1: float
    c2: float
    model: CoefficientModel
    t_offset: float = 0.0


def front_residual(z, model):
    """Flux-balance residual whose root is z1 (increasing in z)."""
    ps = model.p_star
    lhs = ps * math.erf(z) * z * math.exp(z * z)
    if model.k_min == 0.0:
        return lhs - (1.0 - ps) / _SQRT_PI
    z2 = z * math.sqrt(model.k_max / model.k_min)
    # erfcx keeps (1 - erf(z2)) exp(z2^2) finite for small k_min
    return lhs - (1.0 - ps) * float(erfcx(z2)) * z2


def _bisect(f, lo, hi, tol=1e-12, max_iter=200):
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError("front constant is not bracketed; check p_star")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo <= 4 * np.finfo(float).eps * mid:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_front_constant(model, t_offset=0.0, bracket=(1e-6, 5.0), tol=1e-12):
    """Solve for z1 and build the closed-form solution."""
    if not 0 < model.p_star < 1:
        raise ValueError("p_star must lie in (0, 1) for the normalized problem")
    f = lambda z: front_residual(z, model)  # noqa: E731
    z1 = _bisect(f, *bracket)
    res = abs(f(z1))
    if res > tol:
        raise ValueError(f"front constant residual {res:.3e} exceeds {tol:.1e}")
    alpha = 2.0 * math.sqrt(model.k_max) * z1
    c1 = (1.0 - model.p_star) / math.erf(z1)
    c2 = 0.0
    if model.k_min > 0:
        tail = float(erfc(alpha / (2.0 * math.sqrt(model.k_min))))
        c2 = model.p_star / tail if tail > 0 else math.inf
    return ExactSolution(z1=z1, alpha=alpha, c1=c1, c2=c2, model=model, t_offset=t_offset)


def with_offset(sol, t_offset):
    """Same solution with the time origin shifted."""
    return ExactSolution(sol.z1, sol.alpha, sol.c1, sol.c2, sol.model, t_offset)


def left_branch(x, t, sol):
    """p1(x, t) = 1 - c1 erf(x / (2 sqrt(k_max tau))), tau = t + t_offset."""
    tau = t + sol.t_offset
    return 1.0 - sol.c1 * erf(np.asarray(x, dtype=float) / (2.0 * np.sqrt(sol.model.k_max * tau)))


def right_branch(x, t, sol):
    """Solution right of the front; zero for k_min = 0."""
    x = np.asarray(x, dtype=float)
    m = sol.model
    if m.k_min == 0.0:
        return np.zeros_like(x)
    tau = t + sol.t_offset
    u = x / (2.0 * np.sqrt(m.k_min * tau))
    z2 = sol.alpha / (2.0 * math.sqrt(m.k_min))
    # p* erfc(u)/erfc(z2) written with scaled functions; u >= z2 near the front
    return m.p_star * erfcx(u) / erfcx(z2) * np.exp(z2 * z2 - u * u)


def exact_value(x, t, sol):
    """p(x, t); exactly p_star on the front. x and t broadcast."""
    scalar = np.ndim(x) == 0 and np.ndim(t) == 0
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    x, t = np.atleast_1d(x).copy(), np.atleast_1d(t)
    xs = exact_shock_position(t, sol)
    out = np.where(x <= xs, left_branch(x, t, sol), 0.0)
    right = x > xs
    if sol.model.k_min > 0 and np.any(right):
        out[right] = right_branch(x[right], t[right], sol)
    out[x == xs] = sol.model.p_star
    return float(out[0]) if scalar else out


def exact_shock_position(t, sol):
    if np.ndim(t) == 0:
        return sol.alpha * math.sqrt(t + sol.t_offset)
    return sol.alpha * np.sqrt(np.asarray(t, dtype=float) + sol.t_offset)


def exact_front_speed(t, sol):
    return sol.alpha / (2.0 * math.sqrt(t + sol.t_offset))


def reference_solution(problem):
    """Oracle for a problem started from ExactAtTime data.

    The solution uses the simulation's own k_min, shifted in time so its
    front coincides with the initial front of the sampled data.
    """
    if not isinstance(problem.initial_condition, ExactAtTime):
        raise ValueError("no closed-form reference for this initial condition")
    sol = solve_front_constant(problem.model)
    x0 = initial_front(problem) - problem.x_lo
    return with_offset(sol, float((x0 / sol.alpha) ** 2))


def reference_profile(problem, x, t, sol=None):
    """Oracle values on absolute coordinates x at run time t."""
    sol = reference_solution(problem) if sol is None else sol
    return exact_value(np.asarray(x, dtype=float) - problem.x_lo, t, sol)
