# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 kernels for the planar cubic amplitude equations.

Same arithmetic, in the same order, as ``_kernels_py``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport isfinite

cnp.import_array()

DEF RUNNING = 0
DEF CONVERGED = 1
DEF ESCAPED = 2
DEF NONFINITE = 3


cdef inline void _field(const double* c, double u1, double u2, double* f1, double* f2) noexcept nogil:
    cdef double q1 = u1 * u1
    cdef double q2 = u2 * u2
    f1[0] = c[0] * u1 + c[1] * u1 * u2 + u1 * (c[2] * q1 + c[3] * q2)
    f2[0] = c[0] * u2 + c[4] * q1 + u2 * (c[5] * q1 + c[6] * q2)


cdef inline void _step(const double* c, double* u1, double* u2, double dt) noexcept nogil:
    cdef double h = 0.5 * dt
    cdef double k11, k12, k21, k22, k31, k32, k41, k42
    _field(c, u1[0], u2[0], &k11, &k12)
    _field(c, u1[0] + h * k11, u2[0] + h * k12, &k21, &k22)
    _field(c, u1[0] + h * k21, u2[0] + h * k22, &k31, &k32)
    _field(c, u1[0] + dt * k31, u2[0] + dt * k32, &k41, &k42)
    cdef double s = dt / 6.0
    u1[0] = u1[0] + s * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
    u2[0] = u2[0] + s * (k12 + 2.0 * k22 + 2.0 * k32 + k42)


cdef inline int _status(const double* c, double u1, double u2, double tol2, double escape_r2) noexcept nogil:
    cdef double f1, f2
    if not (isfinite(u1) and isfinite(u2)):
        return NONFINITE
    if u1 * u1 + u2 * u2 > escape_r2:
        return ESCAPED
    _field(c, u1, u2, &f1, &f2)
    if f1 * f1 + f2 * f2 < tol2:
        return CONVERGED
    return RUNNING


def rk4_trajectory(coef, double u1, double u2, double dt, long max_steps, double field_tol,
                   double escape_r, long record_every=1):
    cdef double[7] c
    cdef int i
    for i in range(7):
        c[i] = float(coef[i])
    cdef double tol2 = field_tol * field_tol
    cdef double esc2 = escape_r * escape_r
    cdef long cap = max_steps // record_every + 3
    out = np.empty((cap, 3), dtype=np.float64)
    cdef double[:, ::1] rows = out
    cdef long m = 0, n = 0
    rows[0, 0] = 0.0
    rows[0, 1] = u1
    rows[0, 2] = u2
    m = 1
    cdef int status = _status(c, u1, u2, tol2, esc2)
    with nogil:
        while status == RUNNING and n < max_steps:
            _step(c, &u1, &u2, dt)
            n += 1
            status = _status(c, u1, u2, tol2, esc2)
            if status != RUNNING or n % record_every == 0 or n == max_steps:
                rows[m, 0] = n * dt
                rows[m, 1] = u1
                rows[m, 2] = u2
                m += 1
    return out[:m].copy(), status, n


def rk4_batch(coef, u0, double dt, long max_steps, double field_tol, double escape_r):
    cdef double[7] c
    cdef int i
    for i in range(7):
        c[i] = float(coef[i])
    u_arr = np.array(u0, dtype=np.float64).reshape(-1, 2).copy()
    cdef double[:, ::1] u = u_arr
    cdef Py_ssize_t npts = u.shape[0]
    status_arr = np.zeros(npts, dtype=np.int64)
    steps_arr = np.zeros(npts, dtype=np.int64)
    cdef cnp.int64_t[::1] status = status_arr
    cdef cnp.int64_t[::1] steps = steps_arr
    cdef double tol2 = field_tol * field_tol
    cdef double esc2 = escape_r * escape_r
    cdef Py_ssize_t p
    cdef long n
    cdef int st
    cdef double x, y
    with nogil:
        for p in range(npts):
            x = u[p, 0]
            y = u[p, 1]
            n = 0
            st = _status(c, x, y, tol2, esc2)
            while st == RUNNING and n < max_steps:
                _step(c, &x, &y, dt)
                n += 1
                st = _status(c, x, y, tol2, esc2)
            u[p, 0] = x
            u[p, 1] = y
            status[p] = st
            steps[p] = n
    return u_arr, status_arr, steps_arr
