"""Barrier recipes, constraint checks and the anchor point."""

import math

import pytest

from kinbound.barriers.models import BarrierMode, BarrierParams
from kinbound.barriers.recipes import admissibility_window, anchor_point, check_constraints, select_params
from kinbound.errors import DomainError, WindowViolationError


class TestSelectParams:
    """Recipe formulas."""

    def test_select_params_when_incoming_then_recipe_values(self) -> None:
        p = select_params(BarrierMode.INCOMING_GRADIENT, 1e-6, -0.6, check_window=False)
        assert p.kappa == 1.0
        assert p.a == pytest.approx(1e4, rel=1e-12)
        assert p.b == pytest.approx(0.0625, rel=1e-12)
        assert p.c == pytest.approx(2.5e-5, rel=1e-12)
        assert p.h == pytest.approx(1.0 / 36.0, rel=1e-12)

    def test_select_params_when_exponential_then_recipe_values(self) -> None:
        p = select_params(BarrierMode.EXPONENTIAL, 1e-4, -0.5)
        assert p.kappa == pytest.approx(1.0 / 64.0)
        assert p.a == pytest.approx(2500.0, rel=1e-12)
        assert p.b == pytest.approx(0.5, rel=1e-12)
        assert p.c == pytest.approx(6.4e-3, rel=1e-12)

    def test_select_params_when_grazing_then_recipe_values(self) -> None:
        p = select_params("grazing", 1e-6, -0.5, theta0=1.0 / 32.0)
        assert p.b == pytest.approx(0.03125, rel=1e-12)
        assert p.c == pytest.approx(6.25e-6, rel=1e-12)
        assert p.kappa == pytest.approx(math.sqrt(1.0 / 32.0) / 256.0, rel=1e-12)
        assert p.h == pytest.approx(1.0 / 32.0)

    def test_select_params_when_theta_omitted_then_mode_default(self) -> None:
        assert select_params("grazing", 1e-6, -0.5).theta0 == 1.0 / 32.0
        assert select_params("exponential", 1e-6, -0.5).theta0 == 1.0 / 1024.0

    def test_select_params_when_window_fails_then_raises(self) -> None:
        with pytest.raises(WindowViolationError, match="window violated"):
            select_params(BarrierMode.INCOMING_GRADIENT, 1e-6, -0.6)

    @pytest.mark.parametrize(("r_tilde", "v_tilde_d"), [(0.0, -0.5), (1e-6, 0.0), (1e-6, 0.3)])
    def test_select_params_when_outside_domain_then_raises(self, r_tilde: float, v_tilde_d: float) -> None:
        with pytest.raises(DomainError):
            select_params(BarrierMode.EXPONENTIAL, r_tilde, v_tilde_d, check_window=False)

    def test_params_when_theta_too_large_then_raises(self) -> None:
        with pytest.raises(DomainError, match="theta0"):
            BarrierParams(BarrierMode.GRAZING, 1e-6, 1.0, 1.0, 0.0, 1.0, 0.0, -0.5, theta0=0.1)


class TestConstraints:
    """(abc), (vr) and (vrs)."""

    def test_check_constraints_when_grazing_at_threshold_then_vr_holds(self) -> None:
        r_tilde = 1e-6
        p = select_params(BarrierMode.GRAZING, r_tilde, -(r_tilde ** (1.0 / 3.0)), theta0=1.0 / 32.0)
        verdict = check_constraints(p)
        assert verdict.vr
        assert not verdict.requires_vrs

    def test_check_constraints_when_incoming_at_small_scale_then_ok(self) -> None:
        p = select_params(BarrierMode.INCOMING_GRADIENT, 1e-6, -0.6, check_window=False)
        verdict = check_constraints(p)
        assert verdict.ok
        assert verdict.failures() == []

    @pytest.mark.parametrize("v_tilde_d", [-0.3, -0.6])
    def test_check_constraints_when_incoming_too_coarse_then_vrs_fails(self, v_tilde_d: float) -> None:
        # 8·sqrt(a/c)·r̃ = 16·r̃^{1/3} ≈ 0.74 exceeds |ṽ_d| at r̃ = 1e-4
        p = select_params(BarrierMode.INCOMING_GRADIENT, 1e-4, v_tilde_d, check_window=False)
        verdict = check_constraints(p)
        assert not verdict.vrs
        assert not verdict.ok
        assert verdict.failures() == ["|v~_d| >= 8 sqrt(a/c) r~"]

    def test_admissibility_window_when_exponential_then_text(self) -> None:
        ok, text = admissibility_window(BarrierMode.EXPONENTIAL, 1e-4, -0.5, 1.0, 1.0 / 1024.0)
        assert ok
        assert "theta0" in text


class TestAnchor:
    """Anchor placement."""

    def test_anchor_point_when_unit_scale_then_closed_form(self) -> None:
        p = select_params(BarrierMode.INCOMING_GRADIENT, 1.0, -0.5, check_window=False)
        anchor = anchor_point(p)
        assert anchor.xi_d == pytest.approx(8.0 / math.sqrt(63.0), rel=1e-12)
        assert anchor.xi_d == pytest.approx(1.007905, abs=1e-6)

    @pytest.mark.parametrize("mode", list(BarrierMode))
    def test_anchor_point_when_any_recipe_then_balance_holds(self, mode: BarrierMode) -> None:
        p = select_params(mode, 1e-6, -0.6, check_window=False)
        anchor = anchor_point(p)
        assert p.b * anchor.xi_d == pytest.approx(p.c * (anchor.eta_d - p.v_tilde_d), rel=1e-12)
        assert anchor.rho0 == pytest.approx(math.sqrt(p.a) * p.r_tilde)
        assert anchor.xi_d > 0.0
