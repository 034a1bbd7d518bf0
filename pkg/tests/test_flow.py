import math
import warnings

import numpy as np
import pytest

from macsf.contorsion import PsiCoefficients, canonical_tensor, norm, psi_coefficients
from macsf.curve import SupportGrid, area, ellipse_support, grid_angles, translate
from macsf.errors import BeyondCollapse, HypothesisViolated, InsufficientTrace, NonConvex
from macsf.flow import (
    FlowConfig,
    FlowState,
    HypothesisWarning,
    StopReason,
    area_identity_residual,
    containment_check,
    curvature_bound_excess,
    exact_circle,
    kbar_grid,
    max_oracle_error,
    monitor_bounds,
    omega_bound,
    rhs,
    run,
    stable_dt,
    step,
)

ZERO = PsiCoefficients()


class TestExactCircle:
    def test_radius_law(self):
        S = exact_circle(1.0, 0.0, 0.0, 0.32, n=32)
        assert np.allclose(S.values, 0.6)

    def test_drift_moves_center(self):
        t = 0.1
        S = exact_circle(1.0, 0.3, -0.2, t, n=64)
        rho = math.sqrt(0.8)
        # centre (-a21 t, -a12 t)
        expected = translate(SupportGrid.constant(rho, 64), (0.2 * t, -0.3 * t))
        assert np.allclose(S.values, expected.values)

    def test_beyond_collapse(self):
        with pytest.raises(BeyondCollapse):
            exact_circle(1.0, 0.0, 0.0, 0.5)

    def test_negative_time(self):
        with pytest.raises(ValueError):
            exact_circle(1.0, 0.0, 0.0, -0.1)

    def test_solves_pde(self):
        co = PsiCoefficients(0.0, 0.0, 0.3, -0.2)
        t, h = 0.2, 1e-6
        dS = (exact_circle(1.0, 0.3, -0.2, t + h).values - exact_circle(1.0, 0.3, -0.2, t - h).values) / (2 * h)
        assert np.allclose(dS, rhs(exact_circle(1.0, 0.3, -0.2, t), co).values, atol=1e-6)


class TestOmegaBound:
    def test_zero_tensor_circle_is_attained(self):
        assert omega_bound(math.pi, 1.0, 0.0) == pytest.approx(0.5)

    def test_increases_with_c(self):
        assert omega_bound(1.0, 1.0, 0.2) > omega_bound(1.0, 1.0, 0.1) > omega_bound(1.0, 1.0, 0.0)

    def test_hypothesis(self):
        with pytest.raises(HypothesisViolated):
            omega_bound(1.0, 0.9, 0.35)

    def test_area_positive(self):
        with pytest.raises(ValueError):
            omega_bound(0.0, 1.0, 0.1)


class TestFlowConfig:
    def test_defaults(self):
        cfg = FlowConfig()
        assert cfg.cfl == 0.2 and cfg.area_stop is None

    @pytest.mark.parametrize("kwargs", [
        {"cfl": 0.0}, {"t_max": -1.0}, {"area_stop": 0.0}, {"k_cap": -1.0},
        {"record_every": 0}, {"record_times": (0.1, -0.2)},
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            FlowConfig(**kwargs)

    def test_large_cfl_warns(self):
        with pytest.warns(RuntimeWarning, match="stability"):
            FlowConfig(cfl=0.8)

    def test_record_times_sorted(self):
        assert FlowConfig(record_times=[0.3, 0.1]).record_times == (0.1, 0.3)


def test_rhs_and_kbar():
    S = SupportGrid.constant(2.0, 32)
    co = PsiCoefficients(0.0, 0.0, 0.1, 0.0)
    th = grid_angles(32)
    assert np.allclose(rhs(S, co).values, -0.5 - 0.1 * np.sin(th))
    assert np.allclose(kbar_grid(S, co).values, 0.5 + 0.1 * np.sin(th))


def test_stable_dt():
    h = 2 * math.pi / 64
    assert stable_dt(SupportGrid.constant(2.0, 64), 0.25) == pytest.approx(0.25 * h * h * 4.0)


def test_step_matches_heun():
    S0 = ellipse_support(1.0, 0.8, 64)
    co = PsiCoefficients(0.05, -0.02, 0.1, 0.03)
    dt = stable_dt(S0, 0.2)
    k1 = rhs(S0, co).values
    S1 = SupportGrid(S0.values + dt * k1)
    expected = S0.values + 0.5 * dt * (k1 + rhs(S1, co).values)
    nxt = step(FlowState(0.0, S0), co, 0.2)
    assert nxt.t == pytest.approx(dt)
    assert np.allclose(nxt.S.values, expected, atol=1e-14)


def test_step_rejects_nonconvex():
    th = grid_angles(64)
    with pytest.raises(NonConvex):
        step(FlowState(0.0, SupportGrid(1.0 + 0.2 * np.cos(3 * th))), ZERO)


def test_run_rejects_nonconvex_initial():
    th = grid_angles(64)
    with pytest.raises(NonConvex) as info:
        run(SupportGrid(1.0 + 0.2 * np.cos(3 * th)), ZERO)
    assert info.value.theta is not None


def test_circle_run():
    tr = run(SupportGrid.constant(1.0, 128), ZERO)
    assert tr.stop_reason is StopReason.AREA_REACHED
    assert tr.omega_hat == pytest.approx(0.5, abs=1e-6)
    assert tr.areas[-1] <= 1e-3 * math.pi
    assert np.all(np.diff(tr.times) > 0)
    assert tr.steps > 0


def test_time_limit_and_record_times():
    cfg = FlowConfig(t_max=0.2, record_times=(0.05, 0.1))
    tr = run(SupportGrid.constant(1.0, 64), ZERO, cfg)
    assert tr.stop_reason is StopReason.TIME_LIMIT
    assert list(tr.times) == [0.0, 0.05, 0.1, 0.2]
    assert tr.omega_hat is None


def test_curvature_cap():
    tr = run(SupportGrid.constant(1.0, 64), ZERO, FlowConfig(k_cap=2.0, area_stop=1e-9))
    assert tr.stop_reason is StopReason.CURVATURE_CAP
    assert tr.diags[-1].k_max >= 2.0 > tr.diags[-2].k_max


def test_hypothesis_warning():
    T = canonical_tensor(-0.6)
    with pytest.warns(HypothesisWarning):
        run(SupportGrid.constant(1.0, 64), psi_coefficients(T), FlowConfig(t_max=0.01), c=norm(T))


def test_no_warning_inside_hypothesis():
    T = canonical_tensor(-0.15)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        run(ellipse_support(1.0, 0.8, 64), psi_coefficients(T), FlowConfig(t_max=0.01), c=norm(T))


def test_drifting_circle_against_oracle():
    co = PsiCoefficients(0.0, 0.0, 0.3, -0.2)
    tr = run(SupportGrid.constant(1.0, 128), co, FlowConfig(t_max=0.3))
    assert max_oracle_error(tr, 1.0, 0.3, -0.2) < 1e-4


def test_monitors_on_anisotropic_ellipse():
    T = canonical_tensor(-0.15)
    co, c = psi_coefficients(T), norm(T)
    tr = run(ellipse_support(1.0, 0.8, 128), co, FlowConfig(), c=c)
    rep = monitor_bounds(tr, co, c)
    assert rep.hypothesis_2c and rep.hypothesis_3c and rep.ok()
    assert rep.kbar_monotone_margin >= -1e-9
    assert curvature_bound_excess(tr, c) <= 0.0
    assert area_identity_residual(tr) < 1e-3
    assert tr.omega_hat <= omega_bound(area(tr.states[0].S), rep.k0, c)


def test_area_identity_needs_records():
    tr = run(SupportGrid.constant(1.0, 32), ZERO, FlowConfig(t_max=1e-3, record_every=10**6))
    with pytest.raises(InsufficientTrace):
        area_identity_residual(tr)


def test_containment_check():
    small = SupportGrid.constant(0.5, 32)
    big = SupportGrid.constant(1.0, 32)
    assert containment_check(big, small)
    assert not containment_check(small, big)
    assert containment_check(small, small)
