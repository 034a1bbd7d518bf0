# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled explicit Heun integrator; same contract as ``_kernels_py.advance``."""

import numpy as np
from libc.math cimport exp, M_PI

cdef enum:
    STATUS_STEPS = 0
    STATUS_TIME = 1
    STATUS_AREA = 2
    STATUS_KCAP = 3
    STATUS_CONVEXITY = 4
    STATUS_UNDERFLOW = 5

cdef double MIN_DT = 1e-14


cdef double _radius(const double[::1] S, double[::1] q, Py_ssize_t n, double inv_h2) noexcept nogil:
    """Fill q with S'' + S and return its minimum."""
    cdef Py_ssize_t i
    cdef double qmin, v
    v = (S[1] - 2.0 * S[0] + S[n - 1]) * inv_h2 + S[0]
    q[0] = v
    qmin = v
    for i in range(1, n - 1):
        v = (S[i + 1] - 2.0 * S[i] + S[i - 1]) * inv_h2 + S[i]
        q[i] = v
        if v < qmin or v != v:
            qmin = v
    v = (S[0] - 2.0 * S[n - 1] + S[n - 2]) * inv_h2 + S[n - 1]
    q[n - 1] = v
    if v < qmin or v != v:
        qmin = v
    return qmin


def advance(double[::1] S, const double[::1] psi, const double[::1] cos_t, const double[::1] sin_t,
            double t, double t_end, double cfl, long max_steps,
            double area_stop, double k_cap, double psi_scale, bint normalized, bint recenter):
    cdef Py_ssize_t n = S.shape[0]
    cdef Py_ssize_t i
    cdef double h = 2.0 * M_PI / n
    cdef double inv_h2 = 1.0 / (h * h)
    cdef double growth = 1.0 if normalized else 0.0
    cdef double two_over_n = 2.0 / n
    cdef double[::1] q = np.empty(n)
    cdef double[::1] q1 = np.empty(n)
    cdef double[::1] r1 = np.empty(n)
    cdef double[::1] S1 = np.empty(n)
    cdef double qmin, q1min, dt, f1, f2, acc, cx, cy, half_dt
    cdef long steps = 0
    cdef bint last
    cdef int status = STATUS_STEPS

    with nogil:
        while True:
            qmin = _radius(S, q, n, inv_h2)
            if not qmin > 0.0:
                status = STATUS_CONVEXITY
                break
            if 1.0 / qmin >= k_cap:
                status = STATUS_KCAP
                break
            acc = 0.0
            for i in range(n):
                acc += S[i] * q[i]
            if 0.5 * h * acc <= area_stop:
                status = STATUS_AREA
                break
            if t >= t_end:
                status = STATUS_TIME
                break
            if steps >= max_steps:
                status = STATUS_STEPS
                break
            dt = cfl * h * h * qmin * qmin
            if dt < MIN_DT:
                status = STATUS_UNDERFLOW
                break
            last = t + dt >= t_end
            if last:
                dt = t_end - t

            f1 = psi_scale * exp(-t) if normalized else 1.0
            for i in range(n):
                r1[i] = -1.0 / q[i] - f1 * psi[i] + growth * S[i]
                S1[i] = S[i] + dt * r1[i]
            q1min = _radius(S1, q1, n, inv_h2)
            if not q1min > 0.0:
                status = STATUS_CONVEXITY
                break
            f2 = psi_scale * exp(-(t + dt)) if normalized else 1.0
            half_dt = 0.5 * dt
            for i in range(n):
                S[i] = S[i] + half_dt * (r1[i] + (-1.0 / q1[i] - f2 * psi[i] + growth * S1[i]))
            if recenter:
                cx = 0.0
                cy = 0.0
                for i in range(n):
                    cx += S[i] * cos_t[i]
                    cy += S[i] * sin_t[i]
                cx *= two_over_n
                cy *= two_over_n
                for i in range(n):
                    S[i] = S[i] - (cx * cos_t[i] + cy * sin_t[i])
            if last:
                t = t_end
            else:
                t = t + dt
            steps += 1

    return t, steps, status
