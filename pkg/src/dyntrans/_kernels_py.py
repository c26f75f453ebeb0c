"""Pure-Python/numpy implementation of the RK4 kernels.

Mirrors ``_kernels.pyx`` operation for operation so both backends produce
identical floating-point results.  ``coef`` is ``(beta, a1, a2, a3, b1, b2, b3)``.
"""

import math

import numpy as np

RUNNING = 0
CONVERGED = 1
ESCAPED = 2
NONFINITE = 3


def _field(c, u1, u2):
    beta, a1, a2, a3, b1, b2, b3 = c
    q1 = u1 * u1
    q2 = u2 * u2
    f1 = beta * u1 + a1 * u1 * u2 + u1 * (a2 * q1 + a3 * q2)
    f2 = beta * u2 + b1 * q1 + u2 * (b2 * q1 + b3 * q2)
    return f1, f2


def _step(c, u1, u2, dt):
    h = 0.5 * dt
    k11, k12 = _field(c, u1, u2)
    k21, k22 = _field(c, u1 + h * k11, u2 + h * k12)
    k31, k32 = _field(c, u1 + h * k21, u2 + h * k22)
    k41, k42 = _field(c, u1 + dt * k31, u2 + dt * k32)
    s = dt / 6.0
    return (u1 + s * (k11 + 2.0 * k21 + 2.0 * k31 + k41),
            u2 + s * (k12 + 2.0 * k22 + 2.0 * k32 + k42))


def _status(c, u1, u2, field_tol, escape_r2):
    if not (math.isfinite(u1) and math.isfinite(u2)):
        return NONFINITE
    if u1 * u1 + u2 * u2 > escape_r2:
        return ESCAPED
    f1, f2 = _field(c, u1, u2)
    if f1 * f1 + f2 * f2 < field_tol * field_tol:
        return CONVERGED
    return RUNNING


def rk4_trajectory(coef, u1, u2, dt, max_steps, field_tol, escape_r, record_every=1):
    """Integrate one trajectory; returns ``(samples[m, 3], status, steps)``."""
    c = tuple(float(v) for v in coef)
    u1 = float(u1)
    u2 = float(u2)
    escape_r2 = escape_r * escape_r
    rows = [(0.0, u1, u2)]
    status = _status(c, u1, u2, field_tol, escape_r2)
    n = 0
    while status == RUNNING and n < max_steps:
        u1, u2 = _step(c, u1, u2, dt)
        n += 1
        status = _status(c, u1, u2, field_tol, escape_r2)
        if status != RUNNING or n % record_every == 0 or n == max_steps:
            rows.append((n * dt, u1, u2))
    return np.array(rows, dtype=np.float64), status, n


def rk4_batch(coef, u0, dt, max_steps, field_tol, escape_r):
    """Integrate many trajectories; returns ``(u_final[n, 2], status[n], steps[n])``.

    Each trajectory freezes at the step where it terminates.
    """
    c = tuple(float(v) for v in coef)
    u = np.array(u0, dtype=np.float64).reshape(-1, 2).copy()
    npts = u.shape[0]
    status = np.zeros(npts, dtype=np.int64)
    steps = np.zeros(npts, dtype=np.int64)
    escape_r2 = escape_r * escape_r

    def check(idx):
        x, y = u[idx, 0], u[idx, 1]
        st = np.zeros(idx.size, dtype=np.int64)
        bad = ~(np.isfinite(x) & np.isfinite(y))
        esc = ~bad & (x * x + y * y > escape_r2)
        f1, f2 = _field(c, x, y)
        with np.errstate(invalid="ignore", over="ignore"):
            conv = ~bad & ~esc & (f1 * f1 + f2 * f2 < field_tol * field_tol)
        st[bad] = NONFINITE
        st[esc] = ESCAPED
        st[conv] = CONVERGED
        status[idx] = st

    active = np.arange(npts)
    check(active)
    active = active[status[active] == RUNNING]
    n = 0
    while active.size and n < max_steps:
        with np.errstate(invalid="ignore", over="ignore"):
            a, b = _step(c, u[active, 0], u[active, 1], dt)
        u[active, 0] = a
        u[active, 1] = b
        n += 1
        steps[active] = n
        check(active)
        active = active[status[active] == RUNNING]
    return u, status, steps
