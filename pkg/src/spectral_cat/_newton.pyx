# Compiled Lagrange-Newton loop. Mirrors _newton_py exactly; the linear
# solve is Gaussian elimination with partial pivoting on the (n+3) system.
from libc.math cimport INFINITY, exp, fabs, isfinite

import numpy as np

cdef enum:
    OK = 0
    NO_CONVERGENCE = 1
    SINGULAR = 2


cdef int _solve(double[:, ::1] a, double[::1] b, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t i, j, k, p
    cdef double amax, f, t
    for k in range(m):
        p = k
        amax = fabs(a[k, k])
        for i in range(k + 1, m):
            if fabs(a[i, k]) > amax:
                amax = fabs(a[i, k])
                p = i
        if amax == 0.0 or not isfinite(amax):
            return 1
        if p != k:
            for j in range(k, m):
                t = a[k, j]
                a[k, j] = a[p, j]
                a[p, j] = t
            t = b[k]
            b[k] = b[p]
            b[p] = t
        for i in range(k + 1, m):
            f = a[i, k] / a[k, k]
            if f != 0.0:
                for j in range(k + 1, m):
                    a[i, j] -= f * a[k, j]
                b[i] -= f * b[k]
    for k in range(m - 1, -1, -1):
        t = b[k]
        for j in range(k + 1, m):
            t -= a[k, j] * b[j]
        b[k] = t / a[k, k]
    return 0


cdef int _newton(const double[:, ::1] G, const double[:, ::1] A,
                 const double[:, ::1] C, const double[::1] target,
                 int maxit, double ftol,
                 double[::1] z, double[::1] lam,
                 double[:, ::1] J, double[::1] F, double[::1] r,
                 int* iters, double* resid) noexcept nogil:
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t m = n + 3
    cdef Py_ssize_t i, j, k
    cdef double g, v, s, fmax
    cdef int count = 0
    resid[0] = INFINITY
    while count <= maxit:
        for i in range(n):
            r[i] = exp(z[i])
        fmax = 0.0
        for i in range(n):
            g = G[i, 0] * lam[0] + G[i, 1] * lam[1] + G[i, 2] * lam[2]
            v = r[i] * g
            s = 0.0
            for j in range(n):
                s += C[i, j] * z[j]
                J[i, j] = C[i, j]
            J[i, i] += v
            F[i] = s + v
            for k in range(3):
                J[i, n + k] = r[i] * G[i, k]
                J[n + k, i] = r[i] * A[i, k]
        for k in range(3):
            s = 0.0
            for i in range(n):
                s += A[i, k] * r[i]
            F[n + k] = s - target[k]
            for j in range(3):
                J[n + k, n + j] = 0.0
        for i in range(m):
            if not fabs(F[i]) <= fmax:
                fmax = fabs(F[i])
            F[i] = -F[i]
        resid[0] = fmax
        iters[0] = count
        if not isfinite(fmax):
            return NO_CONVERGENCE
        if _solve(J, F, m):
            return SINGULAR
        for i in range(n):
            z[i] += F[i]
        for k in range(3):
            lam[k] += F[n + k]
        if fmax < ftol:
            for i in range(n):
                r[i] = exp(z[i])
            return OK
        count += 1
    iters[0] = count
    for i in range(n):
        r[i] = exp(z[i])
    return NO_CONVERGENCE


def _arrays(grad_cmf, con_cmf, C):
    G = np.ascontiguousarray(grad_cmf, dtype=np.float64)
    A = np.ascontiguousarray(con_cmf, dtype=np.float64)
    Cc = np.ascontiguousarray(C, dtype=np.float64)
    n = A.shape[0]
    if G.shape != (n, 3) or A.shape != (n, 3) or Cc.shape != (n, n):
        raise ValueError("shape mismatch between CMF and difference matrices")
    return G, A, Cc, n


def newton_solve(grad_cmf, con_cmf, C, target, int maxit=20,
                 double ftol=1e-8, lam0=None):
    G, A, Cc, n = _arrays(grad_cmf, con_cmf, C)
    t = np.ascontiguousarray(target, dtype=np.float64)
    z = np.zeros(n)
    lam = np.zeros(3) if lam0 is None else np.array(lam0, dtype=np.float64)
    J = np.empty((n + 3, n + 3))
    F = np.empty(n + 3)
    r = np.empty(n)
    cdef int iters = 0
    cdef double resid = 0.0
    cdef int status
    cdef const double[:, ::1] Gv = G, Av = A, Cv = Cc
    cdef const double[::1] tv = t
    cdef double[:, ::1] Jv = J
    cdef double[::1] zv = z, lv = lam, Fv = F, rv = r
    with nogil:
        status = _newton(Gv, Av, Cv, tv, maxit, ftol, zv, lv, Jv, Fv, rv,
                         &iters, &resid)
    return r, iters, resid, status


def newton_batch(grad_cmf, con_cmf, C, targets, int maxit=20,
                 double ftol=1e-8):
    G, A, Cc, nrows = _arrays(grad_cmf, con_cmf, C)
    cdef Py_ssize_t n = nrows
    T = np.ascontiguousarray(np.atleast_2d(targets), dtype=np.float64)
    cdef Py_ssize_t mrows = T.shape[0]
    rho = np.empty((mrows, n))
    iters = np.empty(mrows, dtype=np.int64)
    resid = np.empty(mrows)
    status = np.empty(mrows, dtype=np.int64)
    z = np.empty(n)
    lam = np.empty(3)
    J = np.empty((n + 3, n + 3))
    F = np.empty(n + 3)
    cdef const double[:, ::1] Gv = G, Av = A, Cv = Cc, Tv = T
    cdef double[:, ::1] Jv = J, Rv = rho
    cdef double[::1] zv = z, lv = lam, Fv = F, resv = resid
    cdef long long[::1] itv = iters, stv = status
    cdef Py_ssize_t row, i
    cdef int it = 0, st
    cdef double res = 0.0
    with nogil:
        for row in range(mrows):
            for i in range(n):
                zv[i] = 0.0
            lv[0] = 0.0
            lv[1] = 0.0
            lv[2] = 0.0
            st = _newton(Gv, Av, Cv, Tv[row], maxit, ftol, zv, lv, Jv, Fv,
                         Rv[row], &it, &res)
            itv[row] = it
            resv[row] = res
            stv[row] = st
    return rho, iters, resid, status
