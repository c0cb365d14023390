"""Cubic trigonometric B-spline basis on a uniform grid.

The basis function ``TB4_i`` is supported on ``[x_i, x_{i+4}]`` and peaks at
``x_{i+2}``.  Collocation only ever needs its value and first two derivatives
at the knots, which are collected in :class:`StencilConstants`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SpatialGrid",
    "StencilConstants",
    "stencil_constants",
    "eval_tb4",
    "eval_tb4_d1",
    "eval_tb4_d2",
    "piece_formulas",
]

MAX_SPACING = 2.0 * math.pi / 3.0


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform partition of ``[a, b]`` into ``M`` subintervals."""

    a: float
    b: float
    M: int
    h: float = field(init=False)
    knots: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M!r}")
        if not self.b > self.a:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")
        h = (self.b - self.a) / self.M
        if h >= MAX_SPACING:
            raise ValueError(f"spacing h={h} must be below 2*pi/3")
        knots = self.a + h * np.arange(self.M + 1)
        knots[-1] = self.b
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "knots", knots)

    @classmethod
    def from_spacing(cls, a: float, b: float, h: float) -> SpatialGrid:
        """Build a grid whose spacing is ``h``; ``(b - a)/h`` must be an integer."""
        m = round((b - a) / h)
        if m < 1 or abs(m * h - (b - a)) > 1e-9 * (b - a):
            raise ValueError(f"h={h} does not divide [{a}, {b}] evenly")
        return cls(a, b, m)

    def knot(self, j: int) -> float:
        """Knot ``x_j``, extended uniformly outside ``[a, b]``."""
        return self.a + j * self.h


@dataclass(frozen=True)
class StencilConstants:
    """Basis value and derivatives at the knots (see :func:`stencil_constants`)."""

    a1: float
    a2: float
    a3: float
    a4: float
    a5: float

    @property
    def value(self) -> tuple[float, float, float]:
        return (self.a1, self.a2, self.a1)

    @property
    def d1(self) -> tuple[float, float, float]:
        return (-self.a3, 0.0, self.a3)

    @property
    def d2(self) -> tuple[float, float, float]:
        return (self.a4, self.a5, self.a4)


def stencil_constants(h: float) -> StencilConstants:
    """Closed-form knot stencils for spacing ``h``.

    With coefficients ``c`` indexed so that ``c_j`` belongs to the basis
    centred at ``x_j``::

        u_j    = a1 c_{j-1} + a2 c_j + a1 c_{j+1}
        u'_j   = -a3 c_{j-1}        + a3 c_{j+1}
        u''_j  = a4 c_{j-1} + a5 c_j + a4 c_{j+1}
    """
    if not 0.0 < h < MAX_SPACING:
        raise ValueError(f"spacing h={h} must lie in (0, 2*pi/3)")
    a1 = math.sin(h / 2) ** 2 / (math.sin(h) * math.sin(1.5 * h))
    a2 = 2.0 / (1.0 + 2.0 * math.cos(h))
    a3 = 0.75 / math.sin(1.5 * h)
    # 4cos(h/2) - 4cos(5h/2) rewritten as a product; the difference cancels badly for small h
    a4 = (3.0 + 9.0 * math.cos(h)) / (8.0 * math.sin(1.5 * h) * math.sin(h))
    a5 = -3.0 / math.tan(h / 2) ** 2 / (2.0 + 4.0 * math.cos(h))
    return StencilConstants(a1, a2, a3, a4, a5)


# Each factor is returned as (value, first derivative, second derivative).
def _p(x, xk):
    s = 0.5 * (x - xk)
    return np.sin(s), 0.5 * np.cos(s), -0.25 * np.sin(s)


def _q(x, xk):
    s = 0.5 * (xk - x)
    return np.sin(s), -0.5 * np.cos(s), -0.25 * np.sin(s)


def _triple(f, g, k, order):
    if order == 0:
        return f[0] * g[0] * k[0]
    if order == 1:
        return f[1] * g[0] * k[0] + f[0] * g[1] * k[0] + f[0] * g[0] * k[1]
    return (
        f[2] * g[0] * k[0]
        + f[0] * g[2] * k[0]
        + f[0] * g[0] * k[2]
        + 2.0 * (f[1] * g[1] * k[0] + f[1] * g[0] * k[1] + f[0] * g[1] * k[1])
    )


def _knots_and_scale(i: int, grid: SpatialGrid):
    h = grid.h
    xi = [grid.knot(i + k) for k in range(5)]
    return xi, math.sin(h / 2) * math.sin(h) * math.sin(1.5 * h)


def piece_formulas(i: int, x, grid: SpatialGrid, order: int = 0) -> list:
    """All four trigonometric pieces of ``TB4_i`` (or a derivative) evaluated at ``x``.

    Unlike :func:`eval_tb4` no support test is applied, so adjacent pieces can
    be compared at a shared knot.
    """
    x = np.asarray(x, dtype=float)
    xi, w = _knots_and_scale(i, grid)
    p0, p1, p2 = _p(x, xi[0]), _p(x, xi[1]), _p(x, xi[2])
    q2, q3, q4 = _q(x, xi[2]), _q(x, xi[3]), _q(x, xi[4])
    pieces = [
        _triple(p0, p0, p0, order),
        _triple(p0, p0, q2, order) + _triple(p0, q3, p1, order) + _triple(q4, p1, p1, order),
        _triple(q4, p1, q3, order) + _triple(q4, q4, p2, order) + _triple(p0, q3, q3, order),
        _triple(q4, q4, q4, order),
    ]
    return [piece / w for piece in pieces]


def _eval(i: int, x, grid: SpatialGrid, order: int):
    x = np.asarray(x, dtype=float)
    xi, _ = _knots_and_scale(i, grid)
    conds = [
        (x >= xi[0]) & (x < xi[1]),
        (x >= xi[1]) & (x < xi[2]),
        (x >= xi[2]) & (x < xi[3]),
        (x >= xi[3]) & (x <= xi[4]),
    ]
    out = np.select(conds, piece_formulas(i, x, grid, order), default=0.0)
    return float(out) if out.ndim == 0 else out


def eval_tb4(i: int, x, grid: SpatialGrid):
    """Value of ``TB4_i`` at ``x`` (scalar or array); zero off ``[x_i, x_{i+4}]``."""
    return _eval(i, x, grid, 0)


def eval_tb4_d1(i: int, x, grid: SpatialGrid):
    """First derivative of ``TB4_i``."""
    return _eval(i, x, grid, 1)


def eval_tb4_d2(i: int, x, grid: SpatialGrid):
    """Second derivative of ``TB4_i``."""
    return _eval(i, x, grid, 2)
