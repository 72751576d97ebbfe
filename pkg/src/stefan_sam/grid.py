"""Uniform node-centred grid with Dirichlet end nodes."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid:
    """N intervals on [x_lo, x_hi]; nodes x_0..x_N, unknowns x_1..x_{N-1}."""

    n_cells: int
    x_lo: float = 0.0
    x_hi: float = 1.0
    x: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise ValueError(f"n_cells must be an integer >= 2, got {self.n_cells}")
        if not self.x_hi > self.x_lo:
            raise ValueError("grid domain must satisfy x_lo < x_hi")
        x = np.linspace(self.x_lo, self.x_hi, int(self.n_cells) + 1)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    @property
    def dx(self):
        return (self.x_hi - self.x_lo) / self.n_cells

    @property
    def n_nodes(self):
        return self.n_cells + 1

    @property
    def domain(self):
        return (self.x_lo, self.x_hi)

    def nearest_node(self, x):
        j = int(round((x - self.x_lo) / self.dx))
        return min(max(j, 0), self.n_cells)


@dataclass(frozen=True)
class State:
    """Nodal solution at time t with tracked front position xi.

    shock_index is the node i with x_i <= xi < x_{i+1}; for the averaging
    schemes it is the last node with p >= p_star and xi is the
    interpolated p_star crossing.
    """

    p: np.ndarray
    t: float
    xi: float
    shock_index: int


def locate_shock_cell(p, p_star):
    """Largest index i with p[i] >= p_star, requiring a crossing after it.

    Indices are zero-based. Ties at p_star count as the left side.
    """
    p = np.asarray(p, dtype=float)
    above = np.flatnonzero(p >= p_star)
    if above.size == 0 or p[0] < p_star:
        raise ValueError("no p_star crossing: left value below threshold")
    i = int(above[-1])
    if i >= p.size - 1:
        raise ValueError("no p_star crossing: profile never drops below threshold")
    return i


def crossing_position(x, p, level):
    """Linear-interpolated position where p falls below level.

    Uses the last node with p >= level and its right neighbour. Returns
    x[-1] if the whole profile is at or above level and x[0] if none is.
    """
    p = np.asarray(p, dtype=float)
    above = np.flatnonzero(p >= level)
    if above.size == 0:
        return float(x[0])
    i = int(above[-1])
    if i >= p.size - 1:
        return float(x[-1])
    a, b = p[i], p[i + 1]
    if a == b:
        return float(x[i])
    return float(x[i] + (a - level) / (a - b) * (x[i + 1] - x[i]))
