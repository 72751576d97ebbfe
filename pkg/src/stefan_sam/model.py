"""Step-coefficient diffusion model, boundary data and initial conditions."""

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .grid import State, crossing_position, locate_shock_cell


@dataclass(frozen=True)
class CoefficientModel:
    """k(p) = k_max for p >= p_star and k_min below it."""

    k_max: float = 1.0
    k_min: float = 0.0
    p_star: float = 0.5

    def __post_init__(self):
        if not self.k_max > 0:
            raise ValueError("k_max must be positive")
        if not (0 <= self.k_min < self.k_max):
            raise ValueError("need k_max > k_min >= 0")
        if not self.p_star > 0:
            raise ValueError("p_star must be positive")


def coefficient(p, model):
    """Diffusivity at p; the tie p == p_star goes to k_max."""
    if np.ndim(p) == 0:
        return model.k_max if p >= model.p_star else model.k_min
    p = np.asarray(p, dtype=float)
    return np.where(p >= model.p_star, model.k_max, model.k_min)


def phi(p, model):
    """Kirchhoff potential Phi with Phi' = k.

    For k_min = 0 this is k_max * (p - p_star)_+. A nonzero k_min adds the
    linear branch k_min * p below p_star, shifted so Phi is continuous.
    """
    ps = model.p_star
    if np.ndim(p) == 0:
        return model.k_min * min(p, ps) + model.k_max * max(p - ps, 0.0)
    p = np.asarray(p, dtype=float)
    return model.k_min * np.minimum(p, ps) + model.k_max * np.maximum(p - ps, 0.0)


@dataclass(frozen=True)
class ExactAtTime:
    """Similarity profile with the front placed at x_front.

    The profile is generated with diffusivity k_min_gen on the right of the
    front (a little smoothness for the sampled data). When t0 is given it
    overrides x_front via x_front = alpha_gen * sqrt(t0).
    """

    x_front: float = 0.2
    k_min_gen: float = 0.01
    t0: Optional[float] = None

    def __post_init__(self):
        if self.t0 is not None and not self.t0 > 0:
            raise ValueError("ExactAtTime requires t0 > 0")
        if self.t0 is None and not self.x_front > 0:
            raise ValueError("ExactAtTime requires x_front > 0")
        if self.k_min_gen < 0:
            raise ValueError("k_min_gen must be >= 0")


@dataclass(frozen=True)
class PiecewiseLinear:
    """p0 = max(0, bc_left * (1 - (x - x_lo)/(x_knee - x_lo)))."""

    x_knee: float = 0.5


@dataclass(frozen=True)
class Custom:
    """Tabulated initial data, linearly interpolated onto the grid."""

    x: tuple = ()
    p: tuple = ()
    xi0: Optional[float] = None


InitialCondition = Union[ExactAtTime, PiecewiseLinear, Custom]


@dataclass(frozen=True)
class ProblemSpec:
    model: CoefficientModel = field(default_factory=CoefficientModel)
    x_lo: float = 0.0
    x_hi: float = 1.0
    bc_left: float = 1.0
    bc_right: float = 0.0
    initial_condition: InitialCondition = field(default_factory=ExactAtTime)
    t_end: float = 0.05

    def __post_init__(self):
        if not self.x_hi > self.x_lo:
            raise ValueError("domain must satisfy x_lo < x_hi")
        if not (self.bc_left > self.model.p_star > self.bc_right):
            raise ValueError("p_star must lie strictly between the boundary values")
        if self.t_end < 0:
            raise ValueError("t_end must be >= 0")
        ic = self.initial_condition
        if isinstance(ic, PiecewiseLinear) and not (self.x_lo < ic.x_knee < self.x_hi):
            raise ValueError("PiecewiseLinear requires x_lo < x_knee < x_hi")
        if isinstance(ic, ExactAtTime) and (self.bc_left != 1.0 or self.bc_right != 0.0):
            raise ValueError("ExactAtTime needs boundary values (1, 0)")

    @property
    def domain(self):
        return (self.x_lo, self.x_hi)


def _generating_solution(problem):
    from .exact import solve_front_constant

    ic = problem.initial_condition
    m = problem.model
    gen = solve_front_constant(CoefficientModel(m.k_max, ic.k_min_gen, m.p_star))
    if ic.t0 is not None:
        t0 = ic.t0
    else:
        t0 = ((ic.x_front - problem.x_lo) / gen.alpha) ** 2
    return gen, t0


def initial_front(problem):
    """Initial interface position xi0 for a problem."""
    ic = problem.initial_condition
    if isinstance(ic, ExactAtTime):
        gen, t0 = _generating_solution(problem)
        return float(problem.x_lo + gen.alpha * np.sqrt(t0))
    if isinstance(ic, PiecewiseLinear):
        frac = 1.0 - problem.model.p_star / problem.bc_left
        return float(problem.x_lo + (ic.x_knee - problem.x_lo) * frac)
    if ic.xi0 is not None:
        return float(ic.xi0)
    x = np.linspace(problem.x_lo, problem.x_hi, 4097)
    return crossing_position(x, evaluate_initial_condition(problem, x), problem.model.p_star)


def evaluate_initial_condition(problem, x):
    """Initial data at arbitrary points x (boundary values not imposed)."""
    x = np.asarray(x, dtype=float)
    ic = problem.initial_condition
    if isinstance(ic, ExactAtTime):
        from .exact import exact_value

        gen, t0 = _generating_solution(problem)
        return exact_value(x - problem.x_lo, t0, gen)
    if isinstance(ic, PiecewiseLinear):
        s = (x - problem.x_lo) / (ic.x_knee - problem.x_lo)
        return np.maximum(problem.bc_right, problem.bc_left * (1.0 - s))
    xs = np.asarray(ic.x, dtype=float)
    ps = np.asarray(ic.p, dtype=float)
    if xs.ndim != 1 or xs.size < 2 or xs.shape != ps.shape:
        raise ValueError("Custom initial condition needs matching 1-D x and p tables")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("Custom x table must be strictly increasing")
    return np.interp(x, xs, ps)


def build_initial_condition(spec, grid):
    """Sample the initial data on grid nodes and locate the initial front."""
    if not (np.isclose(grid.x_lo, spec.x_lo) and np.isclose(grid.x_hi, spec.x_hi)):
        raise ValueError("grid does not cover the problem domain")
    ps = spec.model.p_star
    p = evaluate_initial_condition(spec, grid.x)
    p[0] = spec.bc_left
    p[-1] = spec.bc_right
    if np.any(np.diff(p) > 1e-12):
        raise ValueError("initial condition must be monotone non-increasing")
    if np.all(p[1:-1] >= ps) or np.all(p[1:-1] < ps):
        raise ValueError("initial condition has no p_star crossing in the interior")
    xi = initial_front(spec)
    i = locate_shock_cell(p, ps)
    return State(p=p, t=0.0, xi=float(xi), shock_index=i)
