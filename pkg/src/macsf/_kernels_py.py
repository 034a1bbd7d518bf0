"""Pure numpy implementation of the explicit Heun integrator.

Mirror of ``_ckernels.pyx``; both expose ``advance`` with the same signature and
the same status codes.  ``advance`` mutates ``S`` in place.
"""

import math

import numpy as np

STATUS_STEPS = 0
STATUS_TIME = 1
STATUS_AREA = 2
STATUS_KCAP = 3
STATUS_CONVEXITY = 4
STATUS_UNDERFLOW = 5

MIN_DT = 1e-14


def _radius(S, inv_h2):
    return (np.roll(S, -1) - 2.0 * S + np.roll(S, 1)) * inv_h2 + S


def advance(S, psi, cos_t, sin_t, t, t_end, cfl, max_steps,
            area_stop, k_cap, psi_scale, normalized, recenter):
    """Take up to ``max_steps`` Heun steps of ``S_t = -1/(S''+S) - f psi + g S``.

    Unnormalized mode: ``f = 1``, ``g = 0``.  Normalized mode: ``t`` is the
    rescaled time, ``f = psi_scale * exp(-t)``, ``g = 1``.  The step is
    ``cfl * dtheta**2 / max(k)**2`` clipped so that ``t_end`` is hit exactly.

    Returns ``(t, steps_taken, status)``.
    """
    n = S.size
    h = 2.0 * math.pi / n
    inv_h2 = 1.0 / (h * h)
    growth = 1.0 if normalized else 0.0
    two_over_n = 2.0 / n
    steps = 0
    while True:
        q = _radius(S, inv_h2)
        qmin = q.min()
        if not qmin > 0.0:
            return t, steps, STATUS_CONVEXITY
        if 1.0 / qmin >= k_cap:
            return t, steps, STATUS_KCAP
        if 0.5 * h * np.dot(S, q) <= area_stop:
            return t, steps, STATUS_AREA
        if t >= t_end:
            return t, steps, STATUS_TIME
        if steps >= max_steps:
            return t, steps, STATUS_STEPS
        dt = cfl * h * h * qmin * qmin
        if dt < MIN_DT:
            return t, steps, STATUS_UNDERFLOW
        last = t + dt >= t_end
        if last:
            dt = t_end - t

        f1 = psi_scale * math.exp(-t) if normalized else 1.0
        r1 = -1.0 / q - f1 * psi + growth * S
        S1 = S + dt * r1
        q1 = _radius(S1, inv_h2)
        if not q1.min() > 0.0:
            return t, steps, STATUS_CONVEXITY
        f2 = psi_scale * math.exp(-(t + dt)) if normalized else 1.0
        r2 = -1.0 / q1 - f2 * psi + growth * S1
        S += (0.5 * dt) * (r1 + r2)
        if recenter:
            cx = two_over_n * np.dot(S, cos_t)
            cy = two_over_n * np.dot(S, sin_t)
            S -= cx * cos_t + cy * sin_t
        t = t_end if last else t + dt
        steps += 1
