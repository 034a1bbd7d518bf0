import os
import subprocess
import sys

import numpy as np
import pytest

from macsf import _backend
from macsf.contorsion import PsiCoefficients
from macsf.curve import ellipse_support
from macsf.verify import nyquist_growth

needs_compiled = pytest.mark.skipif(not _backend.compiled_available(), reason="compiled kernel not built")


def _advance(backend, **kw):
    S = np.array(ellipse_support(1.0, 0.7, 128).values)
    psi = PsiCoefficients(-0.1, 0.05, 0.2, -0.1).grid(128)
    out = _backend.advance(S, psi, 0.0, kw.pop("t_end", 1.0), 0.2, kw.pop("max_steps", 500), backend=backend, **kw)
    return out, S


@needs_compiled
@pytest.mark.parametrize("kw", [
    {},
    {"t_end": 0.05},
    {"max_steps": 10**6, "area_stop": 0.1},
    {"max_steps": 10**6, "k_cap": 5.0},
    {"normalized": True, "psi_scale": 0.9, "recenter": True, "t_end": 0.5},
])
def test_backends_agree(kw):
    (res_c, S_c) = _advance("cython", **dict(kw))
    (res_p, S_p) = _advance("python", **dict(kw))
    assert res_c[1:] == res_p[1:]
    assert res_c[0] == pytest.approx(res_p[0], rel=1e-12)
    assert np.allclose(S_c, S_p, rtol=0, atol=1e-12)


def test_status_codes():
    (t, steps, status), _ = _advance(None, t_end=0.01)
    assert status == _backend.STATUS_TIME and t == 0.01
    (_, steps, status), _ = _advance(None, max_steps=3)
    assert status == _backend.STATUS_STEPS and steps == 3


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.get_advance("fortran")


def test_env_forces_python_backend():
    env = dict(os.environ, MACSF_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import macsf; print(macsf.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("backend", ["python", pytest.param("cython", marks=needs_compiled)])
def test_stability_check(backend):
    assert nyquist_growth(0.2, n=64, backend=backend) < 1.0
    assert nyquist_growth(0.45, n=64, backend=backend) < 1.0
    with np.errstate(all="ignore"):
        assert nyquist_growth(5.0, n=64, backend=backend) > 1.0
