"""Rescaled flow around the collapse: ``S~ = S / sqrt(2 (omega - t))``, ``tau = -log(1 - t/omega) / 2``.

In these variables the support function obeys

    S~_tau = -(k~ + sqrt(2 omega) e^{-tau} psi) + S~

whose only embedded stationary solution is the unit circle ``S~ = k~ = 1``.

Translations of the curve only add first harmonics to ``S``; they are neutral
for the shape but grow like ``e^tau`` in the rescaled frame.  Every rescaled
state is therefore taken about its Steiner point, which is the same as
following the collapse point.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import _backend
from .curve import (
    SupportGrid,
    deriv1,
    deriv2,
    radius_of_curvature,
    recenter,
    _raise_nonconvex,
    _vals,
)
from .errors import OmegaNotEstimated, NonConvex, StepUnderflow
from .flow import _psi_grid, _require_convex


@dataclass(frozen=True)
class NormalizedState:
    tau: float
    S_tilde: SupportGrid


@dataclass(frozen=True)
class NormalizedSummary:
    tau: float
    entropy: float
    circle_deviation: float
    stationarity_residual: float


def tau_of_t(t, omega):
    return -0.5 * math.log1p(-t / omega)


def t_of_tau(tau, omega):
    return omega * (-math.expm1(-2.0 * tau))


def normalize_trace(trace, center=True):
    """Rescale every recorded state of ``trace`` with its collapse-time estimate."""
    omega = trace.omega_hat
    if omega is None or not math.isfinite(omega):
        raise OmegaNotEstimated(f"trace stopped with {trace.stop_reason.value}; no omega estimate")
    if not omega > trace.states[-1].t:
        raise OmegaNotEstimated(f"omega_hat={omega} does not exceed the last record time")
    out = []
    for s in trace.states:
        S = recenter(s.S) if center else s.S
        scale = 1.0 / math.sqrt(2.0 * (omega - s.t))
        out.append(NormalizedState(tau_of_t(s.t, omega), SupportGrid(S.values * scale)))
    return out


def step_normalized(state, coeffs, omega, cfl=0.2, center=True, backend=None):
    """One Heun step in ``tau`` with ``dtau = cfl * dtheta**2 / max(k~)**2``."""
    S = np.array(_vals(state.S_tilde), dtype=np.float64)
    _require_convex(S)
    tau, steps, status = _backend.advance(
        S, _psi_grid(coeffs, S.size), state.tau, math.inf, cfl, 1,
        psi_scale=math.sqrt(2.0 * omega), normalized=True, recenter=center, backend=backend,
    )
    if steps == 0:
        if status == _backend.STATUS_UNDERFLOW:
            raise StepUnderflow(f"normalized step underflow at tau={state.tau:g}")
        raise NonConvex(float("nan"))
    return NormalizedState(tau, SupportGrid(S))


def run_normalized(S_tilde0, coeffs, omega, tau_max=5.0, cfl=0.2, record_every=50,
                   k_cap=1e4, center=True, backend=None):
    """Integrate the rescaled equation directly from ``S_tilde0`` up to ``tau_max``.

    Stops early if convexity is lost or ``k~`` reaches ``k_cap``.
    """
    S0 = S_tilde0 if isinstance(S_tilde0, SupportGrid) else SupportGrid(S_tilde0)
    if center:
        S0 = recenter(S0)
    _require_convex(S0)
    psi = _psi_grid(coeffs, S0.n)
    S = np.array(S0.values)
    tau = 0.0
    states = [NormalizedState(0.0, S0)]
    while True:
        tau, steps, status = _backend.advance(
            S, psi, tau, tau_max, cfl, record_every, 0.0, k_cap,
            psi_scale=math.sqrt(2.0 * omega), normalized=True, recenter=center, backend=backend,
        )
        if steps > 0 and np.all(np.isfinite(S)):
            states.append(NormalizedState(tau, SupportGrid(S)))
        if status == _backend.STATUS_UNDERFLOW:
            raise StepUnderflow(f"normalized step underflow at tau={tau:g}")
        if status != _backend.STATUS_STEPS:
            break
    return states


def entropy(S_tilde):
    """``(1/2pi) int log k~ dtheta`` by the rectangle rule."""
    q = radius_of_curvature(S_tilde)
    if not np.all(q > 0):
        _raise_nonconvex(q)
    return float(-np.log(q).sum() / q.size)


def stationarity_residual(S_tilde):
    """Sup-norm of ``S~ - k~``."""
    v = _vals(S_tilde)
    q = radius_of_curvature(v)
    if not np.all(q > 0):
        _raise_nonconvex(q)
    return float(np.max(np.abs(v - 1.0 / q)))


def circle_deviation(S_tilde):
    return float(np.max(np.abs(_vals(S_tilde) - 1.0)))


def derivative_deviation(S_tilde):
    """Sup-norm of the first and second grid derivatives (zero for the unit circle)."""
    return max(float(np.max(np.abs(deriv1(S_tilde).values))),
               float(np.max(np.abs(deriv2(S_tilde).values))))


def summarize(states):
    return [
        NormalizedSummary(
            tau=s.tau,
            entropy=entropy(s.S_tilde),
            circle_deviation=circle_deviation(s.S_tilde),
            stationarity_residual=stationarity_residual(s.S_tilde),
        )
        for s in states
    ]


def state_at(states, tau):
    """Recorded state whose ``tau`` is closest to the requested value."""
    return min(states, key=lambda s: abs(s.tau - tau))


def area_stop_for_tau(area0, tau_max, margin=1.0):
    """Area threshold that lets a collapsing run be rescaled past ``tau_max``.

    Near collapse ``A ~ 2 pi (omega - t)`` and ``omega - t = omega e^{-2 tau}``;
    with ``omega ~ A0 / (2 pi)`` this gives ``A ~ A0 e^{-2 tau}``.
    """
    return area0 * math.exp(-2.0 * (tau_max + margin))
