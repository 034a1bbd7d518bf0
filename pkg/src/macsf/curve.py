"""Support-function representation of convex closed curves.

A convex curve is stored through its support function ``S(theta)`` sampled on
the uniform periodic grid ``theta_i = 2*pi*i/N``.  The inner unit normal at
normal angle ``theta`` is ``N = -(cos theta, sin theta)``, so ``S`` is the
distance from the origin to the tangent line with outward direction
``u = (cos theta, sin theta)``.

All derivatives are second-order centred finite differences.  The flow kernels
use exactly the same stencils, which keeps the discrete area balance exact.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonConvex, NonPositiveAxis

TWO_PI = 2.0 * np.pi


class SupportGrid:
    """Immutable samples of a support function on a uniform periodic grid."""

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
        n = arr.size
        if n < 16 or n % 2:
            raise ValueError(f"grid size must be even and >= 16, got {n}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("support values must be finite")
        arr.setflags(write=False)
        self._values = arr

    @classmethod
    def constant(cls, value, n=256):
        return cls(np.full(n, float(value)))

    @classmethod
    def from_function(cls, func, n=256):
        return cls(func(grid_angles(n)))

    @property
    def values(self):
        return self._values

    @property
    def n(self):
        return self._values.size

    @property
    def dtheta(self):
        return TWO_PI / self.n

    @property
    def theta(self):
        return grid_angles(self.n)

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._values
        return self._values.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, SupportGrid):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._values, other._values))

    def __hash__(self):
        return hash(self._values.tobytes())

    def __repr__(self):
        return f"SupportGrid(n={self.n}, min={self._values.min():.6g}, max={self._values.max():.6g})"


@dataclass(frozen=True)
class PlaneCurve:
    """Closed polygon; ``points[i]`` is the curve point with normal angle ``theta_i``."""

    points: np.ndarray

    @property
    def x(self):
        return self.points[:, 0]

    @property
    def y(self):
        return self.points[:, 1]


@dataclass(frozen=True)
class Diagnostics:
    k_min: float
    k_max: float
    kbar_min: float
    area: float
    length: float
    convexity_margin: float
    diameter: float


def grid_angles(n):
    return TWO_PI * np.arange(n) / n


def _vals(S):
    return S.values if isinstance(S, SupportGrid) else np.asarray(S, dtype=np.float64)


def deriv1(S):
    """Centred first difference ``(S[i+1] - S[i-1]) / (2 dtheta)``."""
    v = _vals(S)
    h = TWO_PI / v.size
    return SupportGrid((np.roll(v, -1) - np.roll(v, 1)) / (2.0 * h))


def deriv2(S):
    """Centred second difference ``(S[i+1] - 2 S[i] + S[i-1]) / dtheta**2``."""
    v = _vals(S)
    h = TWO_PI / v.size
    return SupportGrid((np.roll(v, -1) - 2.0 * v + np.roll(v, 1)) / (h * h))


def radius_of_curvature(S):
    """Pointwise ``S'' + S`` (the reciprocal curvature) as a plain array."""
    v = _vals(S)
    h = TWO_PI / v.size
    return (np.roll(v, -1) - 2.0 * v + np.roll(v, 1)) / (h * h) + v


def convexity_margin(S):
    return float(radius_of_curvature(S).min())


def _raise_nonconvex(q):
    i = int(np.argmin(q))
    raise NonConvex(q[i], theta=TWO_PI * i / q.size)


def curvature(S):
    """Curvature ``k = 1 / (S'' + S)``; raises :class:`NonConvex` if undefined."""
    q = radius_of_curvature(S)
    if not np.all(q > 0.0):
        _raise_nonconvex(q)
    return SupportGrid(1.0 / q)


def reconstruct(S):
    """Recover curve points from the support function.

    ``x = S cos - S' sin``, ``y = S sin + S' cos``.
    """
    v = _vals(S)
    th = grid_angles(v.size)
    ds = deriv1(v).values
    c, s = np.cos(th), np.sin(th)
    return PlaneCurve(np.column_stack((v * c - ds * s, v * s + ds * c)))


def support_of_points(curve, n=None):
    """Evaluate ``<gamma(theta_i), -N(theta_i)>`` for a curve sampled by normal angle."""
    pts = np.asarray(curve.points if isinstance(curve, PlaneCurve) else curve)
    th = grid_angles(pts.shape[0] if n is None else n)
    return SupportGrid(pts[:, 0] * np.cos(th) + pts[:, 1] * np.sin(th))


def area(S):
    """Enclosed area ``(1/2) sum S (S'' + S) dtheta``."""
    v = _vals(S)
    return float(0.5 * np.dot(v, radius_of_curvature(v)) * (TWO_PI / v.size))


def length(S):
    """Perimeter by Cauchy's formula, ``sum S dtheta``."""
    v = _vals(S)
    return float(v.sum() * (TWO_PI / v.size))


def diameter(S):
    """Largest width ``max_i S(theta_i) + S(theta_i + pi)``."""
    v = _vals(S)
    return float(np.max(v + np.roll(v, -v.size // 2)))


def ellipse_support(a, b, n=256):
    """Support function of the centred ellipse with semi-axes ``a`` (x) and ``b`` (y)."""
    if not (a > 0 and b > 0):
        raise NonPositiveAxis(f"semi-axes must be positive, got a={a}, b={b}")
    th = grid_angles(n)
    return SupportGrid(np.sqrt((a * np.cos(th)) ** 2 + (b * np.sin(th)) ** 2))


def steiner_point(S):
    """Steiner point ``(1/pi) int S(theta) (cos theta, sin theta) dtheta``."""
    v = _vals(S)
    th = grid_angles(v.size)
    return np.array([np.dot(v, np.cos(th)), np.dot(v, np.sin(th))]) * (2.0 / v.size)


def translate(S, vector):
    """Support function of the curve shifted by ``vector``."""
    v = _vals(S)
    th = grid_angles(v.size)
    return SupportGrid(v + vector[0] * np.cos(th) + vector[1] * np.sin(th))


def recenter(S):
    """Translate so that the Steiner point sits at the origin."""
    return translate(S, -steiner_point(S))


def rotate(S, angle):
    """Return the grid of ``theta -> S(theta - angle)`` (the curve rotated by ``angle``).

    Uses a Fourier phase shift, exact for band-limited data.  The Nyquist mode
    is kept real by treating it as ``cos(N theta / 2)``.
    """
    v = _vals(S)
    n = v.size
    orig = np.fft.rfft(v)
    coef = orig * np.exp(-1j * np.arange(orig.size) * angle)
    # Nyquist mode: cos(n/2 (theta - a)) sampled on the grid is cos(n/2 * a) * cos(n/2 theta).
    coef[-1] = orig[-1] * np.cos(0.5 * n * angle)
    return SupportGrid(np.fft.irfft(coef, n))


def diagnostics(S, psi=None):
    """Curvature extremes, geometric functionals and convexity margin of one state."""
    v = _vals(S)
    q = radius_of_curvature(v)
    margin = float(q.min())
    if margin > 0:
        k = 1.0 / q
        k_min, k_max = float(k.min()), float(k.max())
        kbar_min = float((k + (0.0 if psi is None else psi)).min())
    else:
        k_min = k_max = kbar_min = float("nan")
    return Diagnostics(
        k_min=k_min,
        k_max=k_max,
        kbar_min=kbar_min,
        area=float(0.5 * np.dot(v, q) * (TWO_PI / v.size)),
        length=length(v),
        convexity_margin=margin,
        diameter=diameter(v),
    )
