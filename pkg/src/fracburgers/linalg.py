"""Tridiagonal solver used in every time step, plus a dense reference solver."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SingularPivotError", "TridiagonalSystem", "thomas_solve", "dense_solve"]


class SingularPivotError(ArithmeticError):
    """Raised when elimination meets a (numerically) zero pivot."""

    def __init__(self, msg: str, row: int | None = None):
        super().__init__(msg)
        self.row = row


@dataclass
class TridiagonalSystem:
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.diag = np.asarray(self.diag, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        n = len(self.diag)
        if n == 0:
            raise ValueError("empty system")
        if len(self.lower) != n - 1 or len(self.upper) != n - 1 or len(self.rhs) != n:
            raise ValueError(
                f"inconsistent lengths: lower={len(self.lower)}, diag={n}, "
                f"upper={len(self.upper)}, rhs={len(self.rhs)}"
            )

    @property
    def n(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.lower, -1) + np.diag(self.upper, 1)

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[1:] += self.lower * x[:-1]
        y[:-1] += self.upper * x[1:]
        return y


def thomas_solve(system: TridiagonalSystem) -> np.ndarray:
    """Solve by forward elimination and back substitution, without pivoting."""
    n = system.n
    a = system.lower.tolist()
    b = system.diag.tolist()
    c = system.upper.tolist()
    d = system.rhs.tolist()
    tiny = 1e-14 * float(np.max(np.abs(system.diag)))

    cp = [0.0] * n
    dp = [0.0] * n
    piv = b[0]
    if abs(piv) <= tiny:
        raise SingularPivotError(f"zero pivot at row 0 ({piv:.3e})", 0)
    cp[0] = c[0] / piv if n > 1 else 0.0
    dp[0] = d[0] / piv
    for i in range(1, n):
        piv = b[i] - a[i - 1] * cp[i - 1]
        if abs(piv) <= tiny:
            raise SingularPivotError(f"zero pivot at row {i} ({piv:.3e})", i)
        if i < n - 1:
            cp[i] = c[i] / piv
        dp[i] = (d[i] - a[i - 1] * dp[i - 1]) / piv

    x = dp
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return np.array(x)


def dense_solve(matrix, rhs) -> np.ndarray:
    """Gaussian elimination with partial pivoting.  Reference solver for tests."""
    A = np.array(matrix, dtype=float)
    x = np.array(rhs, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    n = A.shape[0]
    if x.shape != (n,):
        raise ValueError(f"rhs has shape {x.shape}, expected ({n},)")
    tiny = np.finfo(float).eps * n * max(np.abs(A).max(), np.finfo(float).tiny)

    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) <= tiny:
            raise SingularPivotError(f"matrix is singular (column {k})", k)
        if p != k:
            A[[k, p]] = A[[p, k]]
            x[[k, p]] = x[[p, k]]
        f = A[k + 1 :, k] / A[k, k]
        A[k + 1 :, k:] -= np.outer(f, A[k, k:])
        x[k + 1 :] -= f * x[k]

    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - A[k, k + 1 :] @ x[k + 1 :]) / A[k, k]
    return x
