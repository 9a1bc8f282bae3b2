"""Barrier certificates, refusals and the cylinder inclusion check."""

import logging
import math

import pytest
from pytest_mock import MockerFixture

from kinbound.barriers.models import BarrierMode
from kinbound.barriers.recipes import anchor_point, select_params
from kinbound.certifier.lemmas import Lemma, certify_lemma, check_cylinder_inclusion
from kinbound.certifier.models import CertificateReport, CoefficientField, Verdict
from kinbound.certifier.operator import GrazingBarrier, QuadraticBarrier
from kinbound.geometry.models import FloatArray, PhaseSamples

R_TILDE = 1e-6
V_TILDE = -0.6


class TestLemma:
    """Lemma identifiers."""

    def test_lemma_when_mapped_then_recipe(self) -> None:
        assert Lemma.PHASE_PROP.mode is BarrierMode.INCOMING_GRADIENT
        assert Lemma.BARRIER_SS.mode is BarrierMode.EXPONENTIAL
        assert Lemma.BARRIER_G.mode is BarrierMode.GRAZING
        assert Lemma("hypodist") is Lemma.HYPODIST

    def test_lemma_when_unknown_then_raises(self) -> None:
        with pytest.raises(ValueError, match="lemma-x"):
            certify_lemma("lemma-x", R_TILDE, V_TILDE)


class TestCertifyLemma:
    """Certificates at the reference scale r̃ = 1e-6, ṽ_d = −0.6."""

    def test_phase_prop_when_reference_scale_then_passes(self) -> None:
        report = certify_lemma(Lemma.PHASE_PROP, R_TILDE, V_TILDE, n_samples=5000, seed=1)
        assert report.verdict is Verdict.PASS
        assert report.samples == 5000
        assert report.min_margin >= 0.0
        assert report.constants["feasible_rate"] >= 1.0 / 8.0
        assert report.constants["fd_max_relative_error"] <= 1e-4
        assert report.anchor["rho0"] == pytest.approx(R_TILDE ** (2.0 / 3.0))

    def test_barrier_ss_when_reference_scale_then_passes(self) -> None:
        report = certify_lemma(Lemma.BARRIER_SS, R_TILDE, V_TILDE, n_samples=5000, seed=2)
        assert report.verdict is Verdict.PASS
        assert report.params["mode"] == "exponential"
        assert report.constants["Phi_at_4tau0"] <= 1.0
        assert report.constants["fd_max_relative_error"] <= 1e-4

    def test_barrier_g_when_reference_scale_then_passes(self) -> None:
        report = certify_lemma(Lemma.BARRIER_G, R_TILDE, V_TILDE, n_samples=5000, seed=3)
        assert report.verdict is Verdict.PASS
        assert report.constants["m"] == pytest.approx(5.0 / report.theta0_used**2)
        assert report.constants["fd_max_relative_error"] <= 1e-4

    @pytest.mark.parametrize("mode", list(BarrierMode))
    def test_hypodist_when_reference_scale_then_passes(self, mode: BarrierMode) -> None:
        report = certify_lemma(Lemma.HYPODIST, R_TILDE, V_TILDE, n_samples=5000, seed=4, mode=mode)
        assert report.verdict is Verdict.PASS
        assert report.constants["range_violations"] == 0.0

    def test_certify_lemma_when_velocity_dependent_coefficients_then_passes(self) -> None:
        coeff = CoefficientField.velocity_affine(a0=1.0, a1=0.5)
        report = certify_lemma(Lemma.PHASE_PROP, R_TILDE, V_TILDE, coeff=coeff, n_samples=2000, seed=5)
        assert report.verdict is Verdict.PASS

    @pytest.mark.slow
    def test_phase_prop_when_full_sample_count_then_passes(self) -> None:
        report = certify_lemma(Lemma.PHASE_PROP, R_TILDE, V_TILDE)
        assert report.samples == 100_000
        assert report.verdict is Verdict.PASS

    @pytest.mark.parametrize("v_tilde_d", [-0.3, -0.6])
    def test_phase_prop_when_scale_too_coarse_then_refused(
        self,
        v_tilde_d: float,
        caplog: pytest.LogCaptureFixture,
    ) -> None:
        with caplog.at_level(logging.WARNING):
            report = certify_lemma(Lemma.PHASE_PROP, 1e-4, v_tilde_d, n_samples=1000, search=False)
        assert report.verdict is Verdict.ERROR
        assert report.samples == 0
        assert report.constraint_failures == ["|v~_d| >= 8 sqrt(a/c) r~"]
        assert "refused" in caplog.text

    def test_certify_lemma_when_rerun_then_fingerprint_ignores_wall_time(self) -> None:
        first = certify_lemma(Lemma.BARRIER_SS, R_TILDE, V_TILDE, n_samples=1000, seed=7)
        second = certify_lemma(Lemma.BARRIER_SS, R_TILDE, V_TILDE, n_samples=1000, seed=7)
        assert first.fingerprint == second.fingerprint
        assert first.to_dict()["verdict"] == "pass"


class TestStencilCrossCheck:
    """Closed-form operators that disagree with the stencil are rejected."""

    @pytest.mark.parametrize(
        ("lemma", "barrier_type"),
        [(Lemma.PHASE_PROP, QuadraticBarrier), (Lemma.BARRIER_SS, QuadraticBarrier), (Lemma.BARRIER_G, GrazingBarrier)],
    )
    def test_certify_lemma_when_closed_form_skewed_then_error(
        self,
        lemma: Lemma,
        barrier_type: type[QuadraticBarrier | GrazingBarrier],
        mocker: MockerFixture,
        caplog: pytest.LogCaptureFixture,
    ) -> None:
        original = barrier_type.apply_L

        def skewed(
            barrier: QuadraticBarrier | GrazingBarrier,
            coeff: CoefficientField,
            samples: PhaseSamples,
        ) -> FloatArray:
            return 1.01 * original(barrier, coeff, samples)

        mocker.patch.object(barrier_type, "apply_L", autospec=True, side_effect=skewed)
        with caplog.at_level(logging.WARNING):
            report = certify_lemma(lemma, R_TILDE, V_TILDE, n_samples=500, seed=8, search=False)
        assert report.verdict is Verdict.ERROR
        assert report.samples == 500
        assert report.constants["fd_max_relative_error"] == pytest.approx(0.01 / 1.01, rel=5e-2)
        assert report.constraint_failures[-1].startswith("finite-difference gap")
        assert "refused" in caplog.text


class TestCertificateReport:
    """Report verdicts and summaries."""

    def test_verdict_when_no_samples_then_error(self) -> None:
        assert CertificateReport(lemma="custom").verdict is Verdict.ERROR

    def test_verdict_when_violations_then_fail(self) -> None:
        report = CertificateReport(lemma="custom", samples=10, violations=1, min_margin=-0.5)
        assert report.verdict is Verdict.FAIL
        assert str(report).startswith("[custom] fail: 1/10 violations")

    def test_fingerprint_when_wall_time_differs_then_equal(self) -> None:
        first = CertificateReport(lemma="custom", samples=3, min_margin=0.1, wall_ms=1.0)
        second = CertificateReport(lemma="custom", samples=3, min_margin=0.1, wall_ms=250.0)
        assert first.fingerprint == second.fingerprint
        assert first.fingerprint != CertificateReport(lemma="custom", samples=4, min_margin=0.1).fingerprint


def test_check_cylinder_inclusion_when_reference_scale_then_reports_counts() -> None:
    p = select_params(BarrierMode.INCOMING_GRADIENT, R_TILDE, V_TILDE, check_window=False)
    report = check_cylinder_inclusion(p, anchor_point(p), n=2000, seed=6)
    assert report.inner_samples > 0
    assert report.outer_samples == 2000
    assert report.outer_violations <= report.outer_samples
    assert math.isfinite(report.c2_required)
    assert report.c2_required > 0.0
