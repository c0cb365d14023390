"""Cubic trigonometric B-spline collocation for the time-fractional Burgers equation."""

from .basis import SpatialGrid, StencilConstants, stencil_constants
from .caputo import L1Weights, alpha0, history_combination, l1_weights
from .engine import ProblemSpec, SolverError, SolverState, Trajectory, advance, init_state, solve
from .linalg import SingularPivotError, TridiagonalSystem, dense_solve, thomas_solve
from .norms import ErrorReport, convergence_study, error_norms
from .problems import (
    TravelingWaveParams,
    build_problem,
    example1_spec,
    example2_spec,
    mms_problem,
    traveling_wave_exact,
)

__version__ = "0.1.0"
