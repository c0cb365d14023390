"""Independent reference computations shared by the test modules."""

import math

import numpy as np
from scipy import integrate

from fracburgers.basis import stencil_constants


def quad_caputo(dg, gamma, t):
    """Caputo derivative from the integral definition; QUADPACK handles the kernel singularity."""
    if gamma == 1.0:
        return dg(t)
    val, _ = integrate.quad(dg, 0.0, t, weight="alg", wvar=(0.0, -gamma), epsabs=1e-14, epsrel=1e-13)
    return val / math.gamma(1.0 - gamma)


def stencil_matrix(M, left, mid, right):
    """(M+1) x (M+3) matrix applying a three-term stencil to c_{-1}..c_{M+1}."""
    A = np.zeros((M + 1, M + 3))
    for j in range(M + 1):
        A[j, j : j + 3] = (left, mid, right)
    return A


def backward_euler_full(spec, coeffs, u_prev, t_next):
    """Dense (M+3) system of the gamma = 1 scheme in operator form, boundary rows first/last."""
    s = stencil_constants(spec.grid.h)
    M, tau, nu = spec.grid.M, spec.tau, spec.nu
    V = stencil_matrix(M, s.a1, s.a2, s.a1)
    D1 = stencil_matrix(M, -s.a3, 0.0, s.a3)
    D2 = stencil_matrix(M, s.a4, s.a5, s.a4)
    ux_prev = D1 @ coeffs
    pde = V + tau / 3 * (ux_prev[:, None] * V) + 2 * tau / 3 * (u_prev[:, None] * D1) - nu * tau * D2
    A = np.vstack([V[:1], pde, V[-1:]])
    rhs = np.concatenate([[spec.psi1(t_next)], u_prev, [spec.psi2(t_next)]])
    return A, rhs, pde


def backward_euler_reduced(spec, coeffs, u_prev, t_next):
    """Same system with the ghost coefficients eliminated, as a dense (M+1) matrix."""
    s = stencil_constants(spec.grid.h)
    M = spec.grid.M
    _, _, pde = backward_euler_full(spec, coeffs, u_prev, t_next)
    # c_full = E c_inner + e0 using the two Dirichlet rows
    E = np.zeros((M + 3, M + 1))
    E[1:-1] = np.eye(M + 1)
    E[0, 0], E[0, 1] = -s.a2 / s.a1, -1.0
    E[-1, -1], E[-1, -2] = -s.a2 / s.a1, -1.0
    e0 = np.zeros(M + 3)
    e0[0] = spec.psi1(t_next) / s.a1
    e0[-1] = spec.psi2(t_next) / s.a1
    return pde @ E, u_prev - pde @ e0


def backward_euler_run(spec, steps):
    """Nodal levels 0..steps of the gamma = 1 scheme, solved with dense linear algebra."""
    from fracburgers.engine import fit_initial_coefficients, nodal_values

    s = stencil_constants(spec.grid.h)
    c = fit_initial_coefficients(spec, s)
    levels = [nodal_values(c, s)]
    for n in range(steps):
        A, rhs, _ = backward_euler_full(spec, c, levels[-1], spec.time(n + 1))
        c = np.linalg.solve(A, rhs)
        levels.append(nodal_values(c, s))
    return np.array(levels)
