"""Time stepping for the time-fractional Burgers equation.

Each step solves one linear tridiagonal system for the spline coefficients
``c_{-1}..c_{M+1}`` of the new level.  The nonlinear term is linearised as::

    u u_x ~ (1/3) u^{n+1} (u_x)^n + (2/3) u^n (u_x)^{n+1}

and the Caputo derivative uses the L1 weights from :mod:`fracburgers.caputo`.
Collocating at every knot and eliminating the two ghost coefficients with the
Dirichlet data leaves an ``(M+1) x (M+1)`` tridiagonal system in ``c_0..c_M``.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .basis import SpatialGrid, StencilConstants, eval_tb4, stencil_constants
from .caputo import L1Weights, alpha0, check_gamma, history_combination, l1_weights
from .linalg import SingularPivotError, TridiagonalSystem, thomas_solve

__all__ = [
    "ProblemSpec",
    "SolverState",
    "SolverError",
    "Trajectory",
    "fit_initial_coefficients",
    "nodal_values",
    "nodal_d1",
    "nodal_d2",
    "evaluate_spline",
    "linearized_advection_row",
    "step_rows",
    "assemble_step",
    "is_diagonally_dominant",
    "init_state",
    "advance",
    "solve",
]


class SolverError(RuntimeError):
    """A time step failed; ``level`` is the level that could not be computed."""

    def __init__(self, msg: str, level: int):
        super().__init__(f"time level {level}: {msg}")
        self.level = level


@dataclass
class ProblemSpec:
    grid: SpatialGrid
    nu: float
    gamma: float
    T: float
    n_steps: int
    phi: Callable
    psi1: Callable
    psi2: Callable
    source: Optional[Callable] = None
    name: str = ""

    def __post_init__(self):
        self.gamma = check_gamma(self.gamma)
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 0:
            raise ValueError(f"n_steps must be a nonnegative integer, got {self.n_steps}")
        self.n_steps = int(self.n_steps)
        g = self.grid
        mismatch = max(abs(self.phi(g.a) - self.psi1(0.0)), abs(self.phi(g.b) - self.psi2(0.0)))
        if mismatch > 1e-8:
            warnings.warn(
                f"initial and boundary data disagree at the corners by {mismatch:.2e}",
                stacklevel=2,
            )

    @property
    def tau(self) -> float:
        # N_steps = 0 is allowed for a pure fit; tau is then T
        return self.T / max(self.n_steps, 1)

    def time(self, n: int) -> float:
        return n * self.tau


@dataclass
class SolverState:
    """Coefficients of the current level plus the nodal history of all levels.

    ``coeffs`` is indexed ``-1..M+1`` (so ``coeffs[j + 1]`` is ``c_j``).
    """

    level: int
    coeffs: np.ndarray
    stencil: StencilConstants
    weights: L1Weights
    alpha0: float
    _history: np.ndarray = field(repr=False)

    @property
    def nodal_history(self) -> np.ndarray:
        return self._history[: self.level + 1]

    @property
    def current(self) -> np.ndarray:
        return self._history[self.level]

    def _push(self, values: np.ndarray) -> None:
        if self.level + 1 >= self._history.shape[0]:
            grown = np.empty((2 * self._history.shape[0], self._history.shape[1]))
            grown[: self.level + 1] = self.nodal_history
            self._history = grown
        self._history[self.level + 1] = values
        self.level += 1


@dataclass
class Trajectory:
    x: np.ndarray
    t: np.ndarray
    u: np.ndarray
    coeffs: np.ndarray
    runtime: float

    @property
    def final(self) -> np.ndarray:
        return self.u[-1]


def _check_coeffs(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or len(c) < 3:
        raise ValueError(f"need at least 3 coefficients, got shape {c.shape}")
    return c


def nodal_values(coeffs, stencil: StencilConstants) -> np.ndarray:
    c = _check_coeffs(coeffs)
    return stencil.a1 * (c[:-2] + c[2:]) + stencil.a2 * c[1:-1]


def nodal_d1(coeffs, stencil: StencilConstants) -> np.ndarray:
    c = _check_coeffs(coeffs)
    return stencil.a3 * (c[2:] - c[:-2])


def nodal_d2(coeffs, stencil: StencilConstants) -> np.ndarray:
    c = _check_coeffs(coeffs)
    return stencil.a4 * (c[:-2] + c[2:]) + stencil.a5 * c[1:-1]


def evaluate_spline(coeffs, grid: SpatialGrid, x) -> np.ndarray:
    """Evaluate ``sum_j c_j TB4_{j-2}(x)`` at arbitrary points of ``[a, b]``."""
    c = _check_coeffs(coeffs)
    if len(c) != grid.M + 3:
        raise ValueError(f"expected {grid.M + 3} coefficients, got {len(c)}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    for j in range(-1, grid.M + 2):
        lo, hi = grid.knot(j - 2), grid.knot(j + 2)
        mask = (x >= lo) & (x <= hi)
        if mask.any():
            out[mask] += c[j + 1] * eval_tb4(j - 2, x[mask], grid)
    return out


def _one_sided_slopes(phi: Callable, grid: SpatialGrid) -> tuple[float, float]:
    a, b, h = grid.a, grid.b, grid.h
    left = (-3.0 * phi(a) + 4.0 * phi(a + h) - phi(a + 2 * h)) / (2 * h)
    right = (3.0 * phi(b) - 4.0 * phi(b - h) + phi(b - 2 * h)) / (2 * h)
    return float(left), float(right)


def fit_initial_coefficients(spec: ProblemSpec, stencil: StencilConstants) -> np.ndarray:
    """Interpolate the initial profile at every knot.

    The two extra conditions prescribe the end slopes, estimated by one-sided
    second-order differences of ``phi``.
    """
    grid = spec.grid
    a1, a2, a3 = stencil.a1, stencil.a2, stencil.a3
    M = grid.M
    f = np.asarray(spec.phi(grid.knots), dtype=float) * np.ones(M + 1)
    d0, dM = _one_sided_slopes(spec.phi, grid)

    # c_{-1} = c_1 - d0/a3 and c_{M+1} = c_{M-1} + dM/a3 folded into rows 0 and M
    lower = np.full(M, a1)
    upper = np.full(M, a1)
    diag = np.full(M + 1, a2)
    rhs = f.copy()
    upper[0] = 2 * a1
    lower[-1] = 2 * a1
    rhs[0] += a1 * d0 / a3
    rhs[-1] -= a1 * dM / a3
    try:
        inner = thomas_solve(TridiagonalSystem(lower, diag, upper, rhs))
    except SingularPivotError as exc:
        raise SolverError(f"initial fit is singular: {exc}", 0) from exc

    c = np.empty(M + 3)
    c[1:-1] = inner
    c[0] = inner[1] - d0 / a3
    c[-1] = inner[-2] + dM / a3
    return c


def linearized_advection_row(u_n, ux_n, stencil: StencilConstants):
    """Coefficients of ``c_{j-1}, c_j, c_{j+1}`` (new level) in the linearised ``u u_x``.

    ``(1/3)(u_x)^n`` multiplies the value stencil and ``(2/3) u^n`` the
    first-derivative stencil.  Works elementwise on arrays.
    """
    u_n = np.asarray(u_n, dtype=float)
    ux_n = np.asarray(ux_n, dtype=float)
    third = ux_n / 3.0
    two_thirds = 2.0 * u_n / 3.0
    left = third * stencil.a1 - two_thirds * stencil.a3
    mid = third * stencil.a2
    right = third * stencil.a1 + two_thirds * stencil.a3
    return left, mid, right


def step_rows(state: SolverState, spec: ProblemSpec):
    """Collocation rows ``(L, Mc, Nr, rhs)`` at knots ``0..M`` for level ``n+1``."""
    s = state.stencil
    a0 = state.alpha0
    u_n = state.current
    ux_n = nodal_d1(state.coeffs, s)
    adv_l, adv_m, adv_r = linearized_advection_row(u_n, ux_n, s)
    diff = spec.nu * a0

    L = s.a1 + a0 * adv_l - diff * s.a4
    Mc = s.a2 + a0 * adv_m - diff * s.a5
    Nr = s.a1 + a0 * adv_r - diff * s.a4

    rhs = history_combination(state.nodal_history, state.weights)
    if spec.source is not None:
        t_next = spec.time(state.level + 1)
        rhs = rhs + a0 * np.asarray(spec.source(spec.grid.knots, t_next), dtype=float)
    return L, Mc, Nr, rhs


def assemble_step(state: SolverState, spec: ProblemSpec) -> TridiagonalSystem:
    """Tridiagonal system in ``c_0..c_M`` for the next level."""
    L, Mc, Nr, rhs = step_rows(state, spec)
    s = state.stencil
    t_next = spec.time(state.level + 1)
    g_left = float(spec.psi1(t_next))
    g_right = float(spec.psi2(t_next))
    ratio = s.a2 / s.a1

    diag = Mc.copy()
    lower = L[1:].copy()
    upper = Nr[:-1].copy()
    rhs = rhs.copy()

    # c_{-1} = (psi1 - a2 c_0 - a1 c_1) / a1
    diag[0] -= L[0] * ratio
    upper[0] -= L[0]
    rhs[0] -= L[0] * g_left / s.a1
    # c_{M+1} = (psi2 - a1 c_{M-1} - a2 c_M) / a1
    diag[-1] -= Nr[-1] * ratio
    lower[-1] -= Nr[-1]
    rhs[-1] -= Nr[-1] * g_right / s.a1
    return TridiagonalSystem(lower, diag, upper, rhs)


def is_diagonally_dominant(system: TridiagonalSystem) -> bool:
    off = np.zeros(system.n)
    off[1:] += np.abs(system.lower)
    off[:-1] += np.abs(system.upper)
    return bool(np.all(np.abs(system.diag) > off))


def init_state(spec: ProblemSpec) -> SolverState:
    grid = spec.grid
    stencil = stencil_constants(grid.h)
    coeffs = fit_initial_coefficients(spec, stencil)
    history = np.empty((spec.n_steps + 1, grid.M + 1))
    history[0] = nodal_values(coeffs, stencil)
    return SolverState(
        level=0,
        coeffs=coeffs,
        stencil=stencil,
        weights=l1_weights(spec.gamma, spec.n_steps + 1),
        alpha0=alpha0(spec.tau, spec.gamma),
        _history=history,
    )


def advance(state: SolverState, spec: ProblemSpec) -> SolverState:
    """Advance ``state`` by one level in place and return it."""
    n = state.level
    if n >= spec.n_steps:
        raise ValueError(f"already at the final level {spec.n_steps}")
    s = state.stencil
    state.weights = state.weights.extended(n + 1)
    system = assemble_step(state, spec)
    try:
        inner = thomas_solve(system)
    except SingularPivotError as exc:
        raise SolverError(str(exc), n + 1) from exc

    t_next = spec.time(n + 1)
    c = np.empty(len(inner) + 2)
    c[1:-1] = inner
    c[0] = (float(spec.psi1(t_next)) - s.a2 * inner[0] - s.a1 * inner[1]) / s.a1
    c[-1] = (float(spec.psi2(t_next)) - s.a1 * inner[-2] - s.a2 * inner[-1]) / s.a1
    if not np.all(np.isfinite(c)):
        raise SolverError("non-finite spline coefficients", n + 1)

    state.coeffs = c
    state._push(nodal_values(c, s))
    return state


def solve(spec: ProblemSpec) -> Trajectory:
    """Run from the fitted initial level up to ``spec.n_steps``."""
    start = time.perf_counter()
    state = init_state(spec)
    while state.level < spec.n_steps:
        advance(state, spec)
    runtime = time.perf_counter() - start
    return Trajectory(
        x=spec.grid.knots.copy(),
        t=spec.tau * np.arange(spec.n_steps + 1),
        u=state.nodal_history.copy(),
        coeffs=state.coeffs.copy(),
        runtime=runtime,
    )
