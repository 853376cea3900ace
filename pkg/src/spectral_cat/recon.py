"""Minimum log-slope spectral reconstruction.

Given illuminant-referenced CMFs ``A`` (n x 3) and a target XYZ, find the
strictly positive spectrum ``rho = exp(z)`` minimizing ``1/2 z' C z``
subject to ``A' exp(z) = XYZ``. The Lagrange stationarity conditions

    F(z, lam) = [ C z + diag(exp(z)) A lam ]
                [ A' exp(z) - XYZ          ]

are solved by plain Newton steps from ``z = 0, lam = 0``. The symmetric
variant swaps the dual-referenced matrix into the gradient terms while the
constraint rows keep ``A``.
"""
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import InvalidSize, NoConvergence, SingularSystem
from .spectra import N_BANDS, builtin_cmf

# 20 steps is almost always plenty; extreme illuminant/color pairs can need
# one or two more quadratic steps, so allow headroom.
MAXIT = 50
FTOL = 1e-8


@dataclass(frozen=True)
class ReconResult:
    rho: np.ndarray
    iterations: int
    residual_norm: float


def build_diff_matrix(n=N_BANDS):
    """Tridiagonal finite-difference matrix with ``z' C z = 2 sum dz^2``."""
    if n < 2:
        raise InvalidSize(f"difference matrix needs n >= 2, got {n}")
    C = 4.0 * np.eye(n) - 2.0 * np.eye(n, k=1) - 2.0 * np.eye(n, k=-1)
    C[0, 0] = C[-1, -1] = 2.0
    return C


def build_dual_cmf(W_S, W_D, cmf=None):
    """CMFs referenced to both illuminants: row i scaled by ``W_S[i] W_D[i]``."""
    cmf = builtin_cmf() if cmf is None else np.asarray(cmf, dtype=float)
    ws = getattr(W_S, "values", W_S)
    wd = getattr(W_D, "values", W_D)
    return (np.asarray(ws) * np.asarray(wd))[:, None] * cmf


def residual(z, lam, grad_cmf, con_cmf, C, target):
    """Stationarity residual F at ``(z, lam)``."""
    r = np.exp(z)
    return np.concatenate([C @ z + r * (grad_cmf @ lam),
                           con_cmf.T @ r - target])


def jacobian(z, lam, grad_cmf, con_cmf, C):
    """Analytic Jacobian of :func:`residual` with respect to ``(z, lam)``."""
    n = len(z)
    r = np.exp(z)
    J = np.zeros((n + 3, n + 3))
    J[:n, :n] = C + np.diag(r * (grad_cmf @ lam))
    J[:n, n:] = r[:, None] * grad_cmf
    J[n:, :n] = (r[:, None] * con_cmf).T
    return J


def _check(status, iterations, resid):
    if status == _backend.SINGULAR:
        raise SingularSystem(
            f"Newton system singular at iteration {iterations}; "
            "target is likely unreachable")
    if status != _backend.OK:
        raise NoConvergence(resid, iterations)


def _solve(grad_cmf, con_cmf, C, target, maxit, ftol, lam0):
    if C is None:
        C = build_diff_matrix(np.shape(con_cmf)[0])
    rho, it, resid, status = _backend.newton_solve(
        grad_cmf, con_cmf, C, np.asarray(target, dtype=float),
        maxit, ftol, lam0)
    _check(status, it, resid)
    return ReconResult(np.asarray(rho), int(it), float(resid))


def reconstruct(A_ref, C, target, *, maxit=MAXIT, ftol=FTOL, lam0=None):
    """Reconstruct the minimum log-slope spectrum matching ``target``.

    Parameters
    ----------
    A_ref : (n, 3) array
        Illuminant-weighted CMFs, or the raw CMFs when reconstructing an
        illuminant from its white point.
    C : (n, n) array or None
        Difference matrix from :func:`build_diff_matrix`; built on demand
        when None.
    target : (3,) array
        Tristimulus values referenced to ``A_ref``.
    lam0 : (3,) array, optional
        Starting multipliers (default zeros).

    Raises
    ------
    NoConvergence
        ``max|F| >= ftol`` after ``maxit`` steps or the iterate overflowed.
    SingularSystem
        The Newton matrix could not be factored.
    """
    A_ref = np.asarray(A_ref, dtype=float)
    return _solve(A_ref, A_ref, C, target, maxit, ftol, lam0)


def reconstruct_symmetric(A_S, A_SD, C, target, *, maxit=MAXIT, ftol=FTOL,
                          lam0=None):
    """Symmetric variant: ``A_SD`` in the gradient terms, ``A_S`` in the
    constraint, so the result still has tristimulus ``target`` under A_S."""
    return _solve(np.asarray(A_SD, dtype=float), np.asarray(A_S, dtype=float),
                  C, target, maxit, ftol, lam0)


def reconstruct_many(A_con, C, targets, A_grad=None, *, maxit=MAXIT,
                     ftol=FTOL):
    """Batch reconstruction without raising.

    Returns ``(rho, iterations, residual, ok)`` arrays, one row per target;
    rows with ``ok == False`` failed to converge or hit a singular system.
    """
    A_con = np.asarray(A_con, dtype=float)
    A_grad = A_con if A_grad is None else np.asarray(A_grad, dtype=float)
    if C is None:
        C = build_diff_matrix(A_con.shape[0])
    rho, it, resid, status = _backend.newton_batch(
        A_grad, A_con, C, np.atleast_2d(np.asarray(targets, dtype=float)),
        maxit, ftol)
    return rho, it, resid, status == _backend.OK
