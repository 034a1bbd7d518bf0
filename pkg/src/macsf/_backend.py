"""Select the integration kernel at import time.

The compiled ``_ckernels`` extension is preferred; the numpy implementation is
used when the extension is missing or when ``MACSF_PURE_PYTHON=1``.
"""

import os

import numpy as np

from . import _kernels_py

STATUS_STEPS = _kernels_py.STATUS_STEPS
STATUS_TIME = _kernels_py.STATUS_TIME
STATUS_AREA = _kernels_py.STATUS_AREA
STATUS_KCAP = _kernels_py.STATUS_KCAP
STATUS_CONVEXITY = _kernels_py.STATUS_CONVEXITY
STATUS_UNDERFLOW = _kernels_py.STATUS_UNDERFLOW


def _load_compiled():
    if os.environ.get("MACSF_PURE_PYTHON", "").strip() not in ("", "0"):
        return None
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()
BACKEND = "cython" if _compiled is not None else "python"


def get_advance(backend=None):
    """Return the ``advance`` function for ``backend`` ("cython", "python" or None for default)."""
    if backend is None:
        backend = BACKEND
    if backend == "python":
        return _kernels_py.advance
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        return _compiled.advance
    raise ValueError(f"unknown backend {backend!r}")


def compiled_available():
    return _compiled is not None


def advance(S, psi, t, t_end, cfl, max_steps, area_stop=0.0, k_cap=np.inf,
            psi_scale=1.0, normalized=False, recenter=False, backend=None):
    """Run the selected kernel on a writable float64 array ``S`` (modified in place)."""
    n = S.size
    th = 2.0 * np.pi * np.arange(n) / n
    fn = get_advance(backend)
    t, steps, status = fn(S, np.ascontiguousarray(psi, dtype=np.float64), np.cos(th), np.sin(th),
                          float(t), float(t_end), float(cfl), int(max_steps),
                          float(area_stop), float(k_cap), float(psi_scale), bool(normalized), bool(recenter))
    return float(t), int(steps), int(status)
