"""Constant contorsion tensors and the anisotropy function they induce.

For a contorsion tensor ``T`` with constant components ``T[k][i][j] = <T(e_i, e_j), e_k>``
the curvature offset along a curve is ``psi(theta) = <T(t, t), n>`` with
``n = -(cos, sin)`` and ``t = (-sin, cos)``.  Expanding the contraction gives the
cubic trigonometric polynomial

    psi = a30 sin^3 + a03 cos^3 + a12 sin + a21 cos

with

    a12 = T1_12 + T1_21 - T2_22          a30 = T2_22 - T2_11 - T1_12 - T1_21
    a21 = T2_12 + T2_21 - T1_11          a03 = T1_11 - T1_22 - T2_12 - T2_21

(``Tk_ij`` is the component with upper index ``k``).  These are obtained from
``-T2_11 s^3 + A s^2 c + B s c^2 - T1_22 c^3`` with ``s^2 c = c - c^3`` and
``s c^2 = s - s^3``; :func:`psi_direct` evaluates the contraction itself and is
used as the independent check.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import curve as _curve

# component order: (k, i, j) lexicographic, indices 1-based in the names
COMPONENT_KEYS = ("T111", "T112", "T121", "T122", "T211", "T212", "T221", "T222")


@dataclass(frozen=True)
class ContorsionTensor:
    """Eight constant components, stored in ``COMPONENT_KEYS`` order."""

    components: tuple = (0.0,) * 8

    def __post_init__(self):
        comps = tuple(float(x) for x in np.asarray(self.components, dtype=float).reshape(-1))
        if len(comps) != 8:
            raise ValueError(f"a planar contorsion tensor has 8 components, got {len(comps)}")
        if not all(math.isfinite(x) for x in comps):
            raise ValueError("contorsion components must be finite")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_array(cls, arr):
        """Build from an array indexed ``[k, i, j]`` (0-based)."""
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (2, 2, 2):
            raise ValueError(f"expected shape (2, 2, 2), got {arr.shape}")
        return cls(tuple(arr.reshape(-1)))

    @classmethod
    def from_mapping(cls, mapping):
        unknown = set(mapping) - set(COMPONENT_KEYS)
        if unknown:
            raise KeyError(f"unknown component keys: {sorted(unknown)}")
        return cls(tuple(float(mapping.get(key, 0.0)) for key in COMPONENT_KEYS))

    @property
    def array(self):
        arr = np.array(self.components).reshape(2, 2, 2)
        arr.setflags(write=False)
        return arr

    def component(self, k, i, j):
        """Component with 1-based indices, ``<T(e_i, e_j), e_k>``."""
        return self.components[4 * (k - 1) + 2 * (i - 1) + (j - 1)]

    def as_mapping(self):
        return dict(zip(COMPONENT_KEYS, self.components))


@dataclass(frozen=True)
class PsiCoefficients:
    a30: float = 0.0
    a03: float = 0.0
    a12: float = 0.0
    a21: float = 0.0

    def as_tuple(self):
        return (self.a30, self.a03, self.a12, self.a21)

    def grid(self, n):
        """Values of psi on the uniform ``n``-point grid."""
        return psi_eval(self, _curve.grid_angles(n))

    def max_abs(self, n=4096):
        return float(np.max(np.abs(self.grid(n))))


@dataclass(frozen=True)
class Reduction:
    """Rigid motion that turns a flow with the original psi into one with ``reduced``.

    If ``S`` solves the original flow then

        S_red(theta, t) = S(theta - rotation, t) + t * (drift[0] cos theta + drift[1] sin theta)

    solves the flow whose offset is ``reduced``: the curve is rotated by
    ``rotation`` and then translated with constant velocity ``drift``.
    """

    reduced: PsiCoefficients
    drift: tuple = (0.0, 0.0)
    rotation: float = 0.0

    def forward(self, S, t):
        """Map a state of the original flow at time ``t`` to the reduced flow."""
        rotated = _curve.rotate(S, self.rotation) if self.rotation else _as_grid(S)
        return _curve.translate(rotated, (t * self.drift[0], t * self.drift[1]))

    def inverse(self, S_red, t):
        """Map a state of the reduced flow at time ``t`` back to the original flow."""
        shifted = _curve.translate(S_red, (-t * self.drift[0], -t * self.drift[1]))
        return _curve.rotate(shifted, -self.rotation) if self.rotation else shifted


def _as_grid(S):
    return S if isinstance(S, _curve.SupportGrid) else _curve.SupportGrid(S)


def norm(tensor):
    """Frobenius norm of the eight components."""
    return math.sqrt(sum(x * x for x in tensor.components))


def psi_coefficients(tensor):
    t111, t112, t121, t122, t211, t212, t221, t222 = tensor.components
    a12 = t112 + t121 - t222
    a21 = t212 + t221 - t111
    return PsiCoefficients(
        a30=t222 - t211 - t112 - t121,
        a03=t111 - t122 - t212 - t221,
        a12=a12,
        a21=a21,
    )


def psi_eval(coeffs, theta):
    s = np.sin(theta)
    c = np.cos(theta)
    out = coeffs.a30 * s**3 + coeffs.a03 * c**3 + coeffs.a12 * s + coeffs.a21 * c
    return float(out) if np.ndim(out) == 0 else out


def psi_direct(tensor, theta):
    """Contract ``<T(t, t), n>`` with ``t = (-sin, cos)``, ``n = -(cos, sin)``."""
    theta = np.asarray(theta, dtype=float)
    s, c = np.sin(theta), np.cos(theta)
    tan = np.stack((-s, c))
    nor = np.stack((-c, -s))
    tt = np.einsum("kij,i...,j...->k...", tensor.array, tan, tan)
    out = np.einsum("k...,k...->...", tt, nor)
    return float(out) if out.ndim == 0 else out


def psi_second_deriv_plus_psi(coeffs, theta):
    """Closed form of ``psi'' + psi``.

    First harmonics are annihilated; ``(d^2 + 1) sin^3 = 2 sin 3theta`` and
    ``(d^2 + 1) cos^3 = -2 cos 3theta``.
    """
    out = 2.0 * coeffs.a30 * np.sin(3.0 * theta) - 2.0 * coeffs.a03 * np.cos(3.0 * theta)
    return float(out) if np.ndim(out) == 0 else out


def projective(U):
    """``T(X, Y) = <U, Y> X + <U, X> Y``; its psi vanishes identically."""
    u = np.asarray(U, dtype=float)
    eye = np.eye(2)
    # T[k, i, j] = U_j delta_ik + U_i delta_jk
    arr = np.einsum("j,ik->kij", u, eye) + np.einsum("i,jk->kij", u, eye)
    return ContorsionTensor.from_array(arr)


def semi_symmetric(U):
    """``T(X, Y) = <U, Y> X - <X, Y> U``."""
    u = np.asarray(U, dtype=float)
    eye = np.eye(2)
    # T[k, i, j] = U_j delta_ik - delta_ij U_k
    arr = np.einsum("j,ik->kij", u, eye) - np.einsum("ij,k->kij", eye, u)
    return ContorsionTensor.from_array(arr)


def canonical_tensor(a_tilde):
    """Tensor of norm ``|a_tilde|`` whose psi is exactly ``a_tilde sin^3``."""
    return ContorsionTensor((0.0, 0.0, 0.0, 0.0, -float(a_tilde), 0.0, 0.0, 0.0))


def reduce_by_translation(coeffs):
    return Reduction(
        reduced=PsiCoefficients(coeffs.a30, coeffs.a03, 0.0, 0.0),
        drift=(coeffs.a21, coeffs.a12),
        rotation=0.0,
    )


def reduce_to_canonical(coeffs):
    """Rotate and translate so that psi becomes ``a_tilde sin^3`` with ``a_tilde <= 0``.

    Works for arbitrary coefficients (the translation step is folded in).  With
    ``sin^3 = (3 sin - sin 3t)/4`` and ``cos^3 = (3 cos + cos 3t)/4`` the cubic
    part of psi carries the third harmonic ``(R/4) cos(3 theta + beta)``,
    ``R = hypot(a30, a03)``, ``beta = atan2(a30, a03)``.  Rotating by ``phi``
    with ``3 phi = beta + pi/2 (mod 2 pi)`` lines it up with ``-R sin^3``; the
    remaining first harmonic is absorbed into the drift.  Of the three
    admissible angles the one with the smallest drift is returned.
    """
    first_sin = coeffs.a12 + 0.75 * coeffs.a30
    first_cos = coeffs.a21 + 0.75 * coeffs.a03
    amp = math.hypot(coeffs.a30, coeffs.a03)
    if amp == 0.0:
        return Reduction(PsiCoefficients(), drift=(first_cos, first_sin), rotation=0.0)

    a_tilde = -amp
    base = (math.atan2(coeffs.a30, coeffs.a03) + 0.5 * math.pi) / 3.0
    best = None
    for j in range(3):
        phi = math.fmod(base + 2.0 * math.pi * j / 3.0, 2.0 * math.pi)
        if phi < 0.0:
            phi += 2.0 * math.pi
        if abs(phi - 2.0 * math.pi) < 1e-12 or abs(phi) < 1e-12:
            phi = 0.0
        cp, sp = math.cos(phi), math.sin(phi)
        drift_sin = first_sin * cp + first_cos * sp - 0.75 * a_tilde
        drift_cos = first_cos * cp - first_sin * sp
        key = (round(math.hypot(drift_cos, drift_sin), 12), phi)
        if best is None or key < best[0]:
            best = (key, phi, drift_cos, drift_sin)
    _, phi, drift_cos, drift_sin = best
    return Reduction(PsiCoefficients(a_tilde, 0.0, 0.0, 0.0), drift=(drift_cos, drift_sin), rotation=phi)
