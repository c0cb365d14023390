"""Discrete error norms and refinement studies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .engine import solve
from .problems import build_problem

__all__ = ["ErrorReport", "error_norms", "observed_orders", "ConvergenceRow", "convergence_study"]


@dataclass
class ErrorReport:
    l_inf: float
    l2: float
    M: int
    N: Optional[int] = None
    runtime: Optional[float] = None


def error_norms(numeric, exact, h: float) -> ErrorReport:
    """Max norm over all knots; L2 norm uses the interior sum ``h * sum_{j=1}^{M-1}``."""
    numeric = np.asarray(numeric, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if numeric.shape != exact.shape:
        raise ValueError(f"length mismatch: {numeric.shape} vs {exact.shape}")
    if numeric.ndim != 1 or len(numeric) < 3:
        raise ValueError("need 1-D sequences with at least 3 nodes")
    diff = numeric - exact
    l_inf = float(np.max(np.abs(diff)))
    l2 = math.sqrt(h * float(np.sum(diff[1:-1] ** 2)))
    return ErrorReport(l_inf=l_inf, l2=l2, M=len(diff) - 1)


def observed_orders(errors) -> list[Optional[float]]:
    """``log2(e_k / e_{k+1})`` for a halving sequence; ``None`` for the first level."""
    out: list[Optional[float]] = [None]
    for prev, cur in zip(errors[:-1], errors[1:]):
        out.append(math.log2(prev / cur) if prev > 0 and cur > 0 else float("nan"))
    return out


@dataclass
class ConvergenceRow:
    level: int
    h: float
    tau: float
    l_inf: float
    l2: float
    order_inf: Optional[float]
    order_l2: Optional[float]
    runtime: float


def convergence_study(problem: str, mode: str, gamma: float, h: float, tau: float, T: float,
                      levels: int = 5, nu: Optional[float] = None) -> list[ConvergenceRow]:
    """Halve ``h`` (mode ``"space"``) or ``tau`` (mode ``"time"``) and record errors at ``T``."""
    if mode not in ("space", "time"):
        raise ValueError(f"mode must be 'space' or 'time', got {mode!r}")
    if levels < 2:
        raise ValueError("need at least two levels to measure an order")

    reports = []
    for k in range(levels):
        hk = h / 2**k if mode == "space" else h
        tk = tau / 2**k if mode == "time" else tau
        spec, exact = build_problem(problem, gamma, hk, tk, T, nu)
        if exact is None:
            raise ValueError(f"problem {problem!r} at gamma={gamma} has no exact solution")
        traj = solve(spec)
        rep = error_norms(traj.final, exact(traj.x, T), spec.grid.h)
        rep.N, rep.runtime = spec.n_steps, traj.runtime
        reports.append((spec.grid.h, spec.tau, rep))

    o_inf = observed_orders([r.l_inf for _, _, r in reports])
    o_l2 = observed_orders([r.l2 for _, _, r in reports])
    return [
        ConvergenceRow(k, hk, tk, r.l_inf, r.l2, o_inf[k], o_l2[k], r.runtime)
        for k, (hk, tk, r) in enumerate(reports)
    ]
