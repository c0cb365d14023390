"""L1 approximation of the Caputo time derivative of order ``0 < gamma <= 1``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["L1Weights", "check_gamma", "l1_weights", "alpha0", "history_combination"]


def check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"fractional order must lie in (0, 1], got {gamma}")
    return gamma


def _weights(gamma: float, start: int, stop: int) -> np.ndarray:
    # w_l = (l+1)^(1-g) - l^(1-g), written as l^(1-g) * expm1((1-g) log1p(1/l))
    # to avoid cancellation for large l.
    ell = np.arange(start, stop, dtype=float)
    out = np.empty_like(ell)
    zero = ell == 0
    out[zero] = 1.0
    lz = ell[~zero]
    out[~zero] = lz ** (1.0 - gamma) * np.expm1((1.0 - gamma) * np.log1p(1.0 / lz))
    return out


@dataclass(frozen=True)
class L1Weights:
    """Weights ``w[0..n]`` of the L1 scheme for a fixed order ``gamma``."""

    gamma: float
    w: np.ndarray

    def __len__(self) -> int:
        return len(self.w)

    def __getitem__(self, idx):
        return self.w[idx]

    def extended(self, n: int) -> L1Weights:
        """Weights covering at least index ``n``; returns ``self`` if already long enough."""
        if n < len(self.w):
            return self
        size = max(n + 1, 2 * len(self.w))
        tail = _weights(self.gamma, len(self.w), size)
        return L1Weights(self.gamma, np.concatenate([self.w, tail]))


def l1_weights(gamma: float, n: int) -> L1Weights:
    """Return ``w[l] = (l+1)^(1-gamma) - l^(1-gamma)`` for ``l = 0..n``."""
    gamma = check_gamma(gamma)
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    return L1Weights(gamma, _weights(gamma, 0, n + 1))


def alpha0(tau: float, gamma: float) -> float:
    """Scale factor ``tau**gamma * Gamma(2 - gamma)``."""
    gamma = check_gamma(gamma)
    if not tau > 0:
        raise ValueError(f"time step must be positive, got {tau}")
    return tau**gamma * math.gamma(2.0 - gamma)


def combination_coefficients(n: int, weights: L1Weights) -> np.ndarray:
    """Coefficients multiplying ``u^0..u^n`` in :func:`history_combination`."""
    w = weights.extended(n + 1).w
    coef = np.empty(n + 1)
    coef[0] = w[n]
    # level l (1 <= l <= n) gets w[n-l] - w[n-l+1]
    coef[1:] = (w[:n] - w[1 : n + 1])[::-1]
    return coef


def history_combination(history, weights: L1Weights) -> np.ndarray:
    """Weighted sum of past levels entering the right-hand side of a step.

    ``history`` holds levels ``u^0..u^n`` (one row per level).  The result is
    ``sum_{l=1}^{n} (w[n-l] - w[n-l+1]) u^l + w[n] u^0``; the coefficients sum
    to one, so a constant history is returned unchanged.
    """
    if isinstance(history, np.ndarray):
        levels = history
    else:
        rows = [np.asarray(u, dtype=float) for u in history]
        if len({r.shape for r in rows}) > 1:
            raise ValueError("history levels have different lengths")
        levels = np.stack(rows)
    if levels.ndim != 2:
        raise ValueError("history must be a sequence of 1-D levels")
    n = levels.shape[0] - 1
    return combination_coefficients(n, weights) @ levels
