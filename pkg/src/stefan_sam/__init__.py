"""Finite-volume schemes for the Stefan problem.

Averaged face coefficients (arithmetic, harmonic, integral), the
shock-based averaging method with three front trackers, a moving-window
refinement run, a closed-form reference solution and error diagnostics.
"""

from .averaging import arithmetic_average, harmonic_average, integral_average, sam_face_coefficients
from .diagnostics import (
    ErrorReport,
    OscillationReport,
    convergence_order,
    error_norms,
    locking_metric,
    oscillation_metrics,
    shock_position_error,
)
from .exact import (
    ExactSolution,
    exact_front_speed,
    exact_shock_position,
    exact_value,
    reference_solution,
    solve_front_constant,
)
from .grid import Grid, State, locate_shock_cell
from .kernels import BACKEND
from .model import (
    CoefficientModel,
    Custom,
    ExactAtTime,
    PiecewiseLinear,
    ProblemSpec,
    build_initial_condition,
    coefficient,
    phi,
)
from .solver import (
    AuxiliaryGeometry,
    NumericalError,
    ProbeSpec,
    RunRecord,
    SchemeSpec,
    ftcs_step,
    run,
    run_with_amr,
    sam_step,
)
from .tracker import (
    ShockTracker,
    advance_jump_ode,
    advance_level_set,
    jump_velocity,
    make_tracker,
)

__version__ = "0.1.0"
