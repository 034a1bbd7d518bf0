import math

import numpy as np
import pytest

from macsf.contorsion import PsiCoefficients, canonical_tensor, psi_coefficients
from macsf.curve import SupportGrid, area, ellipse_support, translate
from macsf.errors import OmegaNotEstimated
from macsf.flow import FlowConfig, run
from macsf.normalized import (
    NormalizedState,
    area_stop_for_tau,
    circle_deviation,
    derivative_deviation,
    entropy,
    normalize_trace,
    run_normalized,
    state_at,
    stationarity_residual,
    step_normalized,
    summarize,
    t_of_tau,
    tau_of_t,
)

ZERO = PsiCoefficients()


@pytest.mark.parametrize("t", [0.0, 0.1, 0.3, 0.49])
def test_time_maps_are_inverse(t):
    assert t_of_tau(tau_of_t(t, 0.5), 0.5) == pytest.approx(t, abs=1e-15)


def test_tau_diverges_at_collapse():
    assert tau_of_t(0.5 * (1 - math.exp(-10)), 0.5) == pytest.approx(5.0)


def test_unit_circle_is_fixed_point():
    S = SupportGrid.constant(1.0, 128)
    assert circle_deviation(S) == 0.0
    assert stationarity_residual(S) == pytest.approx(0.0, abs=1e-14)
    assert entropy(S) == pytest.approx(0.0, abs=1e-14)
    assert derivative_deviation(S) == 0.0
    nxt = step_normalized(NormalizedState(0.0, S), ZERO, omega=0.5)
    assert nxt.tau > 0
    assert np.max(np.abs(nxt.S_tilde.values - 1.0)) < 1e-14


def test_ellipse_entropy_closed_form():
    # (1/2pi) int log k for an ellipse equals 3 log((a+b)/2) - 2 log(ab)
    a, b = 1.0, 0.8
    expected = 3 * math.log((a + b) / 2) - 2 * math.log(a * b)
    assert entropy(ellipse_support(a, b, 1024)) == pytest.approx(expected, abs=1e-6)


def test_other_circles_are_not_stationary():
    S = SupportGrid.constant(2.0, 64)
    assert stationarity_residual(S) == pytest.approx(1.5)
    assert entropy(S) == pytest.approx(-math.log(2.0))


def test_shrinking_circle_normalizes_to_one():
    tr = run(SupportGrid.constant(1.0, 128), ZERO, FlowConfig(area_stop=area_stop_for_tau(math.pi, 3.0)))
    states = normalize_trace(tr)
    assert states[-1].tau > 3.0
    assert max(circle_deviation(s.S_tilde) for s in states) < 1e-8


def test_centering_removes_drift():
    co = PsiCoefficients(0.0, 0.0, 0.3, -0.2)
    tr = run(SupportGrid.constant(1.0, 128), co, FlowConfig(area_stop=area_stop_for_tau(math.pi, 3.0)))
    centred = normalize_trace(tr)
    raw = normalize_trace(tr, center=False)
    assert circle_deviation(centred[-1].S_tilde) < 1e-2
    assert circle_deviation(raw[-1].S_tilde) > 1.0


def test_normalize_requires_omega():
    tr = run(SupportGrid.constant(1.0, 32), ZERO, FlowConfig(t_max=0.1))
    with pytest.raises(OmegaNotEstimated):
        normalize_trace(tr)


def test_direct_and_posthoc_agree():
    ell = ellipse_support(1.0, 0.8, 128)
    co = psi_coefficients(canonical_tensor(-0.1))
    tr = run(ell, co, FlowConfig(area_stop=area_stop_for_tau(area(ell), 3.0)))
    post = normalize_trace(tr)
    direct = run_normalized(SupportGrid(ell.values / math.sqrt(2 * tr.omega_hat)), co, tr.omega_hat, tau_max=3.0)
    assert direct[-1].tau == pytest.approx(3.0)
    for tau in (1.0, 2.0, 3.0):
        a, b = state_at(post, tau), state_at(direct, tau)
        assert abs(a.tau - b.tau) < 0.02
        sa, sb = summarize([a, b])
        assert abs(sa.circle_deviation - sb.circle_deviation) < 5e-3
        assert abs(sa.entropy - sb.entropy) < 5e-3


def test_deviation_decreases_along_normalized_flow():
    ell = translate(ellipse_support(1.0, 0.7, 128), (0.2, 0.1))
    # the scale mode grows like e^{2 tau}, so omega must be the discrete collapse time
    omega = area(ell) / (2 * math.pi)
    states = run_normalized(SupportGrid(ell.values / math.sqrt(2 * omega)), ZERO, omega, tau_max=4.0)
    devs = [circle_deviation(s.S_tilde) for s in states if s.tau >= 1.0]
    assert devs[-1] < 0.05
    assert devs[-1] < devs[0]


def test_state_at_picks_closest():
    states = [NormalizedState(t, SupportGrid.constant(1.0, 16)) for t in (0.0, 1.0, 2.5)]
    assert state_at(states, 2.0).tau == 2.5
    assert state_at(states, 0.4).tau == 0.0


def test_area_stop_for_tau():
    assert area_stop_for_tau(1.0, 5.0) == pytest.approx(math.exp(-12))
    assert area_stop_for_tau(2.0, 1.0, margin=0.0) == pytest.approx(2 * math.exp(-2))
