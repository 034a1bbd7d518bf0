"""Support-function flow ``S_t = -1/(S'' + S) - psi`` and its monitors."""

from dataclasses import dataclass, field
from enum import Enum
import math
import warnings

import numpy as np

from . import _backend
from .contorsion import PsiCoefficients, psi_eval
from .curve import (
    SupportGrid,
    TWO_PI,
    area,
    diagnostics,
    grid_angles,
    radius_of_curvature,
    recenter,
    _raise_nonconvex,
    _vals,
)
from .errors import (
    BeyondCollapse,
    HypothesisViolated,
    InsufficientTrace,
    NonConvex,
    StepUnderflow,
)


class HypothesisWarning(UserWarning):
    """Initial data violates k0 > 2c, where convexity preservation is guaranteed."""


class StopReason(str, Enum):
    AREA_REACHED = "AreaReached"
    CURVATURE_CAP = "CurvatureCap"
    TIME_LIMIT = "TimeLimit"
    LOST_CONVEXITY = "LostConvexity"


_STATUS_TO_REASON = {
    _backend.STATUS_AREA: StopReason.AREA_REACHED,
    _backend.STATUS_KCAP: StopReason.CURVATURE_CAP,
    _backend.STATUS_TIME: StopReason.TIME_LIMIT,
    _backend.STATUS_CONVEXITY: StopReason.LOST_CONVEXITY,
}

STABILITY_CFL = 0.5


@dataclass(frozen=True)
class FlowConfig:
    """Integration controls.

    ``area_stop=None`` means ``1e-3`` times the initial area.  ``record_times``
    forces records (and exact step landings) at the given times; when it is
    set ``record_every`` is ignored.
    """

    cfl: float = 0.2
    t_max: float = 10.0
    area_stop: float | None = None
    k_cap: float = 1e4
    record_every: int = 50
    record_times: tuple | None = None

    def __post_init__(self):
        if not self.cfl > 0:
            raise ValueError(f"cfl must be positive, got {self.cfl}")
        if self.cfl > STABILITY_CFL:
            warnings.warn(
                f"cfl={self.cfl} exceeds the explicit stability limit {STABILITY_CFL}",
                RuntimeWarning,
                stacklevel=3,
            )
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.area_stop is not None and not self.area_stop > 0:
            raise ValueError(f"area_stop must be positive, got {self.area_stop}")
        if not self.k_cap > 0:
            raise ValueError(f"k_cap must be positive, got {self.k_cap}")
        if int(self.record_every) < 1:
            raise ValueError("record_every must be >= 1")
        if self.record_times is not None:
            times = tuple(sorted(float(x) for x in self.record_times))
            if any(x <= 0 for x in times):
                raise ValueError("record_times must be positive")
            object.__setattr__(self, "record_times", times)


@dataclass(frozen=True)
class FlowState:
    t: float
    S: SupportGrid


@dataclass
class FlowTrace:
    states: list
    diags: list
    stop_reason: StopReason
    omega_hat: float | None
    coeffs: PsiCoefficients = field(default_factory=PsiCoefficients)
    steps: int = 0

    @property
    def times(self):
        return np.array([s.t for s in self.states])

    @property
    def areas(self):
        return np.array([d.area for d in self.diags])

    @property
    def final(self):
        return self.states[-1]


def _psi_grid(coeffs, n):
    return psi_eval(coeffs, grid_angles(n))


def _require_convex(S):
    q = radius_of_curvature(S)
    if not np.all(q > 0.0):
        _raise_nonconvex(q)
    return q


def rhs(S, coeffs):
    """Right-hand side ``-kbar = -1/(S''+S) - psi`` on the grid."""
    q = _require_convex(S)
    return SupportGrid(-1.0 / q - _psi_grid(coeffs, q.size))


def kbar_grid(S, coeffs):
    """Affine curvature ``k + psi``."""
    q = _require_convex(S)
    return SupportGrid(1.0 / q + _psi_grid(coeffs, q.size))


def stable_dt(S, cfl):
    """``cfl * dtheta**2 / max(k)**2``."""
    q = _require_convex(S)
    h = TWO_PI / q.size
    return cfl * h * h * float(q.min()) ** 2


def step(state, coeffs, cfl=0.2, backend=None):
    """One Heun step of size :func:`stable_dt`."""
    S = np.array(_vals(state.S), dtype=np.float64)
    _require_convex(S)
    t, steps, status = _backend.advance(
        S, _psi_grid(coeffs, S.size), state.t, math.inf, cfl, 1, backend=backend
    )
    if steps == 0:
        if status == _backend.STATUS_UNDERFLOW:
            raise StepUnderflow(f"time step below {_backend._kernels_py.MIN_DT:g} at t={state.t:g}")
        raise NonConvex(float("nan"))
    if not np.all(np.isfinite(S)):
        raise NonConvex(float("nan"))
    return FlowState(t, SupportGrid(S))


def _initial_c(coeffs, c):
    return coeffs.max_abs() if c is None else float(c)


def run(S0, coeffs, config=None, *, c=None, backend=None):
    """Integrate from ``S0`` until area, curvature, time or convexity stops the run.

    ``c`` is the tensor norm used for the hypothesis warning; it defaults to
    ``max |psi|``, which never exceeds the norm.
    """
    config = FlowConfig() if config is None else config
    S0 = S0 if isinstance(S0, SupportGrid) else SupportGrid(S0)
    q0 = _require_convex(S0)
    n = S0.n
    psi = _psi_grid(coeffs, n)
    c_val = _initial_c(coeffs, c)
    k0 = 1.0 / q0.max()
    if k0 <= 2.0 * c_val:
        warnings.warn(
            f"k0={k0:.6g} <= 2c={2 * c_val:.6g}: outside the convexity-preservation hypothesis",
            HypothesisWarning,
            stacklevel=2,
        )
    area_stop = config.area_stop if config.area_stop is not None else 1e-3 * area(S0)

    S = np.array(S0.values, dtype=np.float64)
    t = 0.0
    states = [FlowState(0.0, S0)]
    diags = [diagnostics(S0, psi)]
    total = 0

    def record():
        grid = SupportGrid(S) if np.all(np.isfinite(S)) else None
        if grid is None:
            return False
        states.append(FlowState(t, grid))
        diags.append(diagnostics(grid, psi))
        return True

    targets = list(config.record_times or ())
    targets = [x for x in targets if x < config.t_max] + [config.t_max]
    chunk = np.iinfo(np.int64).max if config.record_times else int(config.record_every)
    status = _backend.STATUS_STEPS
    while True:
        t_end = targets[0]
        t, steps, status = _backend.advance(
            S, psi, t, t_end, config.cfl, chunk, area_stop, config.k_cap, backend=backend
        )
        total += steps
        if steps > 0 and not record():
            status = _backend.STATUS_CONVEXITY
            break
        if status == _backend.STATUS_UNDERFLOW:
            raise StepUnderflow(f"time step below {_backend._kernels_py.MIN_DT:g} at t={t:g}")
        if status == _backend.STATUS_TIME and len(targets) > 1:
            targets.pop(0)
            continue
        if status != _backend.STATUS_STEPS:
            break

    reason = _STATUS_TO_REASON[status]
    omega_hat = None
    if reason is StopReason.AREA_REACHED:
        omega_hat = states[-1].t + diags[-1].area / TWO_PI
    return FlowTrace(states, diags, reason, omega_hat, coeffs=coeffs, steps=total)


def exact_circle(rho0, a12, a21, t, n=256):
    """Drifting shrinking circle ``rho(t) - a12 t sin - a21 t cos``, ``rho = sqrt(rho0^2 - 2t)``."""
    if t >= 0.5 * rho0 * rho0:
        raise BeyondCollapse(f"t={t} is not before the collapse time {0.5 * rho0 * rho0}")
    if t < 0:
        raise ValueError("t must be non-negative")
    th = grid_angles(n)
    rho = math.sqrt(rho0 * rho0 - 2.0 * t)
    return SupportGrid(rho - a12 * t * np.sin(th) - a21 * t * np.cos(th))


def containment_check(outer, inner, tol=0.0):
    """Support-function dominance ``inner <= outer`` (+ ``tol``) at every grid angle."""
    return bool(np.all(_vals(inner) <= _vals(outer) + tol))


def omega_bound(A0, k0, c):
    """Upper bound ``A0/(2 pi) * (k0 - 2c)/(k0 - 3c)`` on the collapse time, valid for ``k0 > 3c``."""
    if not k0 > 3.0 * c:
        raise HypothesisViolated(f"omega bound needs k0 > 3c, got k0={k0}, c={c}")
    if not A0 > 0:
        raise ValueError("A0 must be positive")
    return A0 / TWO_PI * (k0 - 2.0 * c) / (k0 - 3.0 * c)


def area_identity_residual(trace, coeffs=None):
    """Largest mismatch of ``dA/dt = -2 pi - int psi / k`` over interior records.

    ``dA/dt`` is the three-point derivative on the (non-uniform) record times.
    """
    coeffs = trace.coeffs if coeffs is None else coeffs
    pts = [(s, d) for s, d in zip(trace.states, trace.diags) if d.convexity_margin > 0]
    if len(pts) < 3:
        raise InsufficientTrace(f"need at least 3 convex records, got {len(pts)}")
    n = pts[0][0].S.n
    psi = _psi_grid(coeffs, n)
    h = TWO_PI / n
    t = np.array([s.t for s, _ in pts])
    A = np.array([d.area for _, d in pts])
    worst = 0.0
    for i in range(1, len(pts) - 1):
        h1 = t[i] - t[i - 1]
        h2 = t[i + 1] - t[i]
        dA = (-h2 / (h1 * (h1 + h2)) * A[i - 1]
              + (h2 - h1) / (h1 * h2) * A[i]
              + h1 / (h2 * (h1 + h2)) * A[i + 1])
        integral = float(np.dot(psi, radius_of_curvature(pts[i][0].S))) * h
        worst = max(worst, abs(dA + TWO_PI + integral))
    return worst


@dataclass(frozen=True)
class BoundsReport:
    k0: float
    kbar0: float
    c: float
    k_margin: float
    kbar_margin: float
    kbar_monotone_margin: float

    @property
    def hypothesis_2c(self):
        return self.k0 > 2.0 * self.c

    @property
    def hypothesis_3c(self):
        return self.k0 > 3.0 * self.c

    def ok(self, tol=1e-6):
        return self.k_margin >= -tol and self.kbar_margin >= -tol


def monitor_bounds(trace, coeffs=None, c=0.0):
    """Check the curvature lower bound ``k0 - 2c`` and the minimum principle for ``kbar``.

    ``k_margin`` is ``min_t k_min(t) - (k0 - 2c)``; ``kbar_margin`` is
    ``min_t kbar_min(t) - kbar_min(0)``; ``kbar_monotone_margin`` is the most
    negative change of ``kbar_min`` between consecutive records.
    """
    if coeffs is not None and coeffs != trace.coeffs:
        psi = _psi_grid(coeffs, trace.states[0].S.n)
        diags = [diagnostics(s.S, psi) for s in trace.states]
    else:
        diags = trace.diags
    k_min = np.array([d.k_min for d in diags])
    kbar_min = np.array([d.kbar_min for d in diags])
    k0, kbar0 = k_min[0], kbar_min[0]
    nan_to_bad = lambda a: np.where(np.isfinite(a), a, -np.inf)
    k_min, kbar_min = nan_to_bad(k_min), nan_to_bad(kbar_min)
    mono = float(np.min(np.diff(kbar_min))) if kbar_min.size > 1 else 0.0
    return BoundsReport(
        k0=float(k0),
        kbar0=float(kbar0),
        c=float(c),
        k_margin=float(k_min.min() - (k0 - 2.0 * c)),
        kbar_margin=float(kbar_min.min() - kbar0),
        kbar_monotone_margin=min(mono, 0.0),
    )


def curvature_bound_excess(trace, c):
    """Largest ``k_max - (1 + sqrt(1 + c rho)) / rho`` over the trace.

    ``2 rho`` is the inradius about the Steiner point; states where that
    point is not interior are skipped.  Non-positive means the bound holds.
    """
    worst = -math.inf
    for state, d in zip(trace.states, trace.diags):
        if not d.convexity_margin > 0:
            continue
        r_in = float(recenter(state.S).values.min())
        if r_in <= 0:
            continue
        rho = 0.5 * r_in
        worst = max(worst, d.k_max - (1.0 + math.sqrt(1.0 + c * rho)) / rho)
    return worst


def containment_along(outer_trace, inner_trace, tol=0.0):
    """Smallest ``min(outer - inner)`` over records present in both traces (matched by time)."""
    outer_by_t = {s.t: s.S for s in outer_trace.states}
    worst = math.inf
    matched = 0
    for s in inner_trace.states:
        if s.t in outer_by_t:
            matched += 1
            worst = min(worst, float(np.min(outer_by_t[s.t].values - s.S.values)))
    if matched == 0:
        raise InsufficientTrace("no common record times")
    return worst, matched


def max_oracle_error(trace, rho0, a12, a21, t_limit=None):
    """Sup-norm distance to :func:`exact_circle` over records with ``t <= t_limit``."""
    worst = 0.0
    for s in trace.states:
        if t_limit is not None and s.t > t_limit:
            continue
        if s.t >= 0.5 * rho0 * rho0:
            continue
        ref = exact_circle(rho0, a12, a21, s.t, n=s.S.n)
        worst = max(worst, float(np.max(np.abs(s.S.values - ref.values))))
    return worst

