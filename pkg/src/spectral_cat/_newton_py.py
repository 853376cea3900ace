"""Numpy implementation of the Lagrange-Newton reconstruction loop.

Same call signatures and return conventions as the compiled ``_newton``
extension; used when that extension is unavailable or disabled.
"""
import numpy as np

OK = 0
NO_CONVERGENCE = 1
SINGULAR = 2


def newton_solve(grad_cmf, con_cmf, C, target, maxit=20, ftol=1e-8, lam0=None):
    """Solve the stationarity system for one target.

    ``grad_cmf`` enters the gradient and the upper-right Jacobian block,
    ``con_cmf`` the constraint rows; pass the same matrix twice for the
    plain variant.

    Returns ``(rho, iterations, residual, status)``. ``residual`` is max|F|
    at the last evaluated iterate. The step computed from a converged F is
    still applied before returning.
    """
    # divergence (overflow in exp) is reported through the status code
    with np.errstate(over="ignore", invalid="ignore"):
        return _solve(grad_cmf, con_cmf, C, target, maxit, ftol, lam0)


def _solve(grad_cmf, con_cmf, C, target, maxit, ftol, lam0):
    G = np.asarray(grad_cmf, dtype=float)
    A = np.asarray(con_cmf, dtype=float)
    C = np.asarray(C, dtype=float)
    target = np.asarray(target, dtype=float)
    n = A.shape[0]
    z = np.zeros(n)
    lam = np.zeros(3) if lam0 is None else np.array(lam0, dtype=float)
    J = np.zeros((n + 3, n + 3))
    F = np.empty(n + 3)
    diag = np.arange(n)
    resid = np.inf
    count = 0
    while count <= maxit:
        r = np.exp(z)
        v = r * (G @ lam)
        F[:n] = C @ z + v
        F[n:] = A.T @ r - target
        resid = float(np.max(np.abs(F)))
        if not np.isfinite(resid):
            return np.exp(z), count, resid, NO_CONVERGENCE
        J[:n, :n] = C
        J[diag, diag] += v
        J[:n, n:] = r[:, None] * G
        J[n:, :n] = (r[:, None] * A).T
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return np.exp(z), count, resid, SINGULAR
        z += delta[:n]
        lam += delta[n:]
        if resid < ftol:
            return np.exp(z), count, resid, OK
        count += 1
    return np.exp(z), count, resid, NO_CONVERGENCE


def newton_batch(grad_cmf, con_cmf, C, targets, maxit=20, ftol=1e-8):
    """Run ``newton_solve`` over the rows of ``targets`` (shape (m, 3))."""
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    m = targets.shape[0]
    n = np.asarray(con_cmf).shape[0]
    rho = np.empty((m, n))
    iters = np.empty(m, dtype=np.int64)
    resid = np.empty(m)
    status = np.empty(m, dtype=np.int64)
    for k in range(m):
        rho[k], iters[k], resid[k], status[k] = newton_solve(
            grad_cmf, con_cmf, C, targets[k], maxit, ftol)
    return rho, iters, resid, status
