"""Built-in test problems and exact/manufactured solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .basis import SpatialGrid
from .caputo import check_gamma
from .engine import ProblemSpec

__all__ = [
    "TravelingWaveParams",
    "ManufacturedSolution",
    "traveling_wave_exact",
    "example1_spec",
    "example2_spec",
    "caputo_of_monomial",
    "mms_problem",
    "mms_solution",
    "PROBLEMS",
    "build_problem",
]

ExactFn = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class TravelingWaveParams:
    mu: float = 0.3
    sigma: float = 0.4
    nu: float = 0.1
    lam: float = 0.8


def traveling_wave_exact(p: TravelingWaveParams, x, t):
    """Logistic front of speed ``sigma`` moving between ``sigma+mu`` and ``sigma-mu``."""
    z = (p.mu / p.nu) * (np.asarray(x, dtype=float) - p.sigma * t - p.lam)
    # exp(-|z|) never overflows; each branch is the same rational function
    e = np.exp(-np.abs(z))
    hi, lo = p.mu + p.sigma, p.sigma - p.mu
    out = np.where(z > 0, (hi * e + lo) / (1.0 + e), (hi + lo * e) / (1.0 + e))
    return float(out) if out.ndim == 0 else out


def _num_steps(T: float, tau: float) -> int:
    n = round(T / tau)
    if n < 0 or abs(n * tau - T) > 1e-9 * max(T, 1.0):
        raise ValueError(f"tau={tau} does not divide T={T} evenly")
    return n


def example1_spec(gamma: float = 1.0, h: float = 0.01, tau: float = 0.01, T: float = 1.0,
                  params: TravelingWaveParams = TravelingWaveParams()) -> ProblemSpec:
    """Traveling-wave benchmark on ``[-3, 3]`` with boundary data traced from the exact wave."""
    grid = SpatialGrid.from_spacing(-3.0, 3.0, h)
    return ProblemSpec(
        grid=grid,
        nu=params.nu,
        gamma=gamma,
        T=T,
        n_steps=_num_steps(T, tau),
        phi=lambda x: traveling_wave_exact(params, x, 0.0),
        psi1=lambda t: traveling_wave_exact(params, grid.a, t),
        psi2=lambda t: traveling_wave_exact(params, grid.b, t),
        name="example1",
    )


# constant term followed by the coefficients of t^(k gamma) / Gamma(1 + k gamma), k = 1..3
_EX2_LEFT = (0.699993, 1.07e-5, -9.67e-6, 1.16e-5)
_EX2_RIGHT = (0.100815, 1.3e-3, 1.17e-3, -5.72e-6)


def _series(coefs, gamma):
    def f(t):
        total = coefs[0]
        for k, ck in enumerate(coefs[1:], start=1):
            total += ck * t ** (k * gamma) / math.gamma(1 + k * gamma)
        return total

    return f


def example2_spec(gamma: float = 0.8, h: float = 0.01, tau: float = 0.01, T: float = 1.0,
                  params: TravelingWaveParams = TravelingWaveParams()) -> ProblemSpec:
    """Fractional case on ``[-3, 3]`` with truncated-series Dirichlet data."""
    gamma = check_gamma(gamma)
    if gamma >= 1.0:
        raise ValueError("example2 is defined for 0 < gamma < 1")
    grid = SpatialGrid.from_spacing(-3.0, 3.0, h)
    return ProblemSpec(
        grid=grid,
        nu=params.nu,
        gamma=gamma,
        T=T,
        n_steps=_num_steps(T, tau),
        phi=lambda x: traveling_wave_exact(params, x, 0.0),
        psi1=_series(_EX2_LEFT, gamma),
        psi2=_series(_EX2_RIGHT, gamma),
        name="example2",
    )


def caputo_of_monomial(p: float, gamma: float, t):
    """Caputo derivative of ``t**p``: ``Gamma(p+1)/Gamma(p+1-gamma) * t**(p-gamma)``."""
    gamma = check_gamma(gamma)
    if p < 0:
        raise ValueError(f"exponent must be nonnegative, got {p}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    if p == 0:
        out = np.zeros_like(t)
    else:
        arg = p + 1.0 - gamma
        if arg <= 0 and arg == math.floor(arg):
            raise ValueError(f"Gamma has a pole at {arg}")
        out = math.gamma(p + 1.0) / math.gamma(arg) * t ** (p - gamma)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ManufacturedSolution:
    """Separable ``u*(x, t) = g(t) s(x)`` with ``g(t) = sum_k coef_k t**p_k``.

    ``space`` returns ``(s, s', s'')`` at ``x``.
    """

    time_terms: tuple[tuple[float, float], ...]
    space: Callable
    nu: float
    gamma: float

    def g(self, t):
        return sum(ck * t**pk for ck, pk in self.time_terms)

    def caputo_g(self, t):
        return sum(ck * caputo_of_monomial(pk, self.gamma, t) for ck, pk in self.time_terms)

    def u(self, x, t):
        s, _, _ = self.space(np.asarray(x, dtype=float))
        return self.g(t) * s

    def source(self, x, t):
        s, sx, sxx = self.space(np.asarray(x, dtype=float))
        g = self.g(t)
        return self.caputo_g(t) * s + g * g * s * sx - self.nu * g * sxx


def _sin_pi(x):
    return np.sin(np.pi * x), np.pi * np.cos(np.pi * x), -np.pi**2 * np.sin(np.pi * x)


def mms_solution(gamma: float, nu: float = 0.1) -> ManufacturedSolution:
    """``u*(x, t) = (1 + t^2) sin(pi x)`` on ``[0, 1]``."""
    return ManufacturedSolution(((1.0, 0.0), (1.0, 2.0)), _sin_pi, nu, check_gamma(gamma))


def mms_problem(gamma: float, grid: SpatialGrid, tau: float, T: float,
                nu: float = 0.1) -> tuple[ProblemSpec, ExactFn]:
    ms = mms_solution(gamma, nu)
    spec = ProblemSpec(
        grid=grid,
        nu=nu,
        gamma=gamma,
        T=T,
        n_steps=_num_steps(T, tau),
        phi=lambda x: ms.u(x, 0.0),
        psi1=lambda t: float(ms.u(grid.a, t)),
        psi2=lambda t: float(ms.u(grid.b, t)),
        source=ms.source,
        name="mms",
    )
    return spec, ms.u


def _build_example1(gamma, h, tau, T, nu=None):
    params = TravelingWaveParams() if nu is None else replace(TravelingWaveParams(), nu=nu)
    spec = example1_spec(gamma, h, tau, T, params)
    # the traveling wave only solves the classical (gamma = 1) equation
    exact = (lambda x, t: traveling_wave_exact(params, x, t)) if spec.gamma == 1.0 else None
    return spec, exact


def _build_example2(gamma, h, tau, T, nu=None):
    params = TravelingWaveParams() if nu is None else replace(TravelingWaveParams(), nu=nu)
    return example2_spec(gamma, h, tau, T, params), None


def _build_mms(gamma, h, tau, T, nu=None):
    grid = SpatialGrid.from_spacing(0.0, 1.0, h)
    return mms_problem(gamma, grid, tau, T, 0.1 if nu is None else nu)


PROBLEMS: dict[str, Callable[..., tuple[ProblemSpec, Optional[ExactFn]]]] = {
    "example1": _build_example1,
    "example2": _build_example2,
    "mms": _build_mms,
}


def build_problem(name: str, gamma: float, h: float, tau: float, T: float,
                  nu: Optional[float] = None) -> tuple[ProblemSpec, Optional[ExactFn]]:
    """Look up a problem by name; returns the spec and the exact solution, if one is known."""
    try:
        builder = PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None
    return builder(gamma, h, tau, T, nu)
