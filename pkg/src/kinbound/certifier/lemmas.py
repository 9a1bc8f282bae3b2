"""Certificates for the barrier inequalities.

Each certificate picks a barrier recipe, builds the matching barrier and
samples its region:

* ``phase-prop``: linear Φ on ρ_t² with the incoming-gradient recipe,
  ℒ(Φ∘ρ_t²) ≥ |ṽ_d|/(8r̃) on 𝒫_T for t ∈ (−10r̃^{2/3}, 0];
* ``barrier-ss``: the exponentially flat Φ with the exponential recipe,
  ℒ(Φ∘ρ_t²)/(2Φ′) ≥ 0 on 𝒫_T for t ∈ (−10r̃/|ṽ_d|, 0];
* ``barrier-g``: φ(ρ − 𝐡t) with the grazing recipe, ℒφ/φ′ ≥ 1/48 on 𝒫 with
  ρ − 𝐡t ≤ 3ρ₀;
* ``hypodist``: the range and coercivity bounds on 𝒫.

When violations appear and the search is enabled, θ₀ is halved and the
certificate is rerun. A failed (abc)/(vr)/(vrs) check refuses the
certificate without sampling.
"""

import logging
import math
import time
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from kinbound.barriers.models import AnchorPoint, BarrierMode, BarrierParams
from kinbound.barriers.profiles import phi_ode_barrier
from kinbound.barriers.quasidist import (
    check_hypodist,
    region_P_membership,
    rho_t_jet,
    sample_region_P,
    sample_region_P_T,
)
from kinbound.barriers.recipes import admissibility_window, anchor_point, check_constraints, select_params
from kinbound.certifier.models import CertificateReport, CoefficientField, StencilConfig
from kinbound.certifier.operator import (
    AnalyticBarrier,
    GrazingBarrier,
    LinearProfile,
    QuadraticBarrier,
    apply_L_fd,
    certify_region,
)
from kinbound.errors import StencilDomainError
from kinbound.geometry.holder import sample_cylinder
from kinbound.geometry.models import FloatArray, KineticCylinder, PhasePoint, PhaseSamples
from kinbound.utils.rng import counter_generator

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 100_000
MAX_HALVINGS = 8
FD_CHECK_POINTS = 16
FD_TOLERANCE = 1e-4
FD_STENCIL_EPS = 1e-4
FD_GRAZING_EXPONENT = 3.0
HYPODIST_INFLATION = 2.0
GRAZING_RATE = 1.0 / 48.0
PHASE_RATE = 1.0 / 8.0


class Lemma(StrEnum):
    """Certifiable inequalities."""

    PHASE_PROP = "phase-prop"
    BARRIER_SS = "barrier-ss"
    BARRIER_G = "barrier-g"
    HYPODIST = "hypodist"

    @property
    def mode(self) -> BarrierMode:
        """Recipe used by the certificate."""
        match self:
            case Lemma.PHASE_PROP:
                return BarrierMode.INCOMING_GRADIENT
            case Lemma.BARRIER_G:
                return BarrierMode.GRAZING
            case _:
                return BarrierMode.EXPONENTIAL


@dataclass(frozen=True)
class _ConstantBound:
    value: float

    def __call__(self, samples: PhaseSamples) -> FloatArray:
        return np.full(len(samples), self.value)


def _fd_relative_error(
    coeff: CoefficientField,
    barrier: QuadraticBarrier | GrazingBarrier,
    samples: PhaseSamples,
    stencil: StencilConfig,
) -> float:
    """Largest relative gap between the stencil and closed-form ℒ on a few samples.

    Samples whose stencil leaves the barrier's domain are skipped; NaN when
    none remain.
    """
    count = min(FD_CHECK_POINTS, len(samples))
    subset = PhaseSamples(samples.t[:count], samples.x[:count], samples.v[:count])
    analytic = barrier.apply_L(coeff, subset)
    gaps: list[float] = []
    for i in range(count):
        try:
            numeric = apply_L_fd(coeff, barrier.value, subset.point(i), stencil)
        except StencilDomainError:
            continue
        scale = max(abs(float(analytic[i])), float(np.finfo(np.float64).tiny))
        gaps.append(abs(numeric - float(analytic[i])) / scale)
    return max(gaps) if gaps else math.nan


def _cross_check(
    report: CertificateReport,
    coeff: CoefficientField,
    barrier: QuadraticBarrier | GrazingBarrier,
    samples: PhaseSamples,
    stencil: StencilConfig,
) -> None:
    """Record the stencil gap and reject the certificate above FD_TOLERANCE."""
    gap = _fd_relative_error(coeff, barrier, samples, stencil)
    report.constants["fd_max_relative_error"] = gap
    if not gap <= FD_TOLERANCE:
        report.constraint_failures.append(f"finite-difference gap {gap:.3g} exceeds {FD_TOLERANCE:g}")


def _certify_phase_prop(
    coeff: CoefficientField,
    p: BarrierParams,
    anchor: AnchorPoint,
    n: int,
    seed: int,
    stream: int,
    d: int,
) -> CertificateReport:
    t_min = -10.0 * p.r_tilde ** (2.0 / 3.0)
    barrier = QuadraticBarrier(p, anchor, LinearProfile(anchor.rho0))
    rate = PHASE_RATE * abs(p.v_tilde_d) / p.r_tilde

    def sampler(count: int, rng: np.random.Generator) -> PhaseSamples:
        return sample_region_P_T(p, anchor, count, rng, t_min, d=d)

    report = certify_region(
        coeff, barrier, sampler, _ConstantBound(rate), n, seed, lemma=Lemma.PHASE_PROP.value, stream=stream
    )
    if report.samples:
        report.constants["feasible_rate"] = report.constants["min_operator_value"] * p.r_tilde / abs(p.v_tilde_d)
        check = sampler(FD_CHECK_POINTS, counter_generator(seed, stream))
        stencil = StencilConfig.for_radius(p.r_tilde ** (1.0 / 3.0), FD_STENCIL_EPS)
        _cross_check(report, coeff, barrier, check, stencil)
    return report


def _certify_barrier_ss(
    coeff: CoefficientField,
    p: BarrierParams,
    anchor: AnchorPoint,
    n: int,
    seed: int,
    stream: int,
    d: int,
) -> CertificateReport:
    t_min = -10.0 * p.r_tilde / abs(p.v_tilde_d)
    tau0 = anchor.rho0**2
    theta = p.theta0 * abs(p.v_tilde_d) ** 5
    state = phi_ode_barrier(theta, tau0)

    def curvature_ratio(q: FloatArray) -> FloatArray:
        return theta / q**2

    barrier = QuadraticBarrier(p, anchor, state, curvature_ratio=curvature_ratio)

    def sampler(count: int, rng: np.random.Generator) -> PhaseSamples:
        return sample_region_P_T(p, anchor, count, rng, t_min, d=d)

    report = certify_region(
        coeff, barrier, sampler, _ConstantBound(0.0), n, seed, lemma=Lemma.BARRIER_SS.value, stream=stream
    )
    report.constants.update(
        {"Theta": theta, "tau0": tau0, "Phi_at_4tau0": float(state.Phi(4.0 * tau0))}
    )
    if report.samples:
        # Φ varies on the scale τ²/Θ
        eps = FD_STENCIL_EPS / math.sqrt(1.0 + theta / tau0)
        stencil = StencilConfig.for_radius(p.r_tilde ** (1.0 / 3.0), eps)
        _cross_check(report, coeff, barrier, sampler(FD_CHECK_POINTS, counter_generator(seed, stream)), stencil)
    return report


def _certify_barrier_g(
    coeff: CoefficientField,
    p: BarrierParams,
    anchor: AnchorPoint,
    n: int,
    seed: int,
    stream: int,
    d: int,
) -> CertificateReport:
    m = 5.0 / (coeff.lam * p.theta0**2)
    barrier = GrazingBarrier(p, anchor, m)
    rho0 = anchor.rho0

    def sampler(count: int, rng: np.random.Generator) -> PhaseSamples:
        base = sample_region_P(p, anchor, count, rng, d=d)
        radius = np.sqrt(rho_t_jet(p, anchor, 0.0, base.x, base.v).q)
        t = -rng.uniform(0.0, 1.0, size=count) * (3.0 * rho0 - radius) / p.h
        return PhaseSamples(t, base.x, base.v)

    report = certify_region(
        coeff, barrier, sampler, _ConstantBound(GRAZING_RATE), n, seed, lemma=Lemma.BARRIER_G.value, stream=stream
    )
    report.constants["m"] = m
    if report.samples:
        # φ at the certified m rounds to 1 away from ρ₀; the formula is checked at a moderate exponent
        stencil = StencilConfig.for_radius(p.r_tilde ** (1.0 / 3.0), FD_STENCIL_EPS)
        check_barrier = GrazingBarrier(p, anchor, FD_GRAZING_EXPONENT)
        _cross_check(report, coeff, check_barrier, sampler(FD_CHECK_POINTS, counter_generator(seed, stream)), stencil)
    return report


def _certify_hypodist(
    p: BarrierParams,
    anchor: AnchorPoint,
    n: int,
    seed: int,
    stream: int,
    d: int,
) -> CertificateReport:
    started = time.perf_counter()
    verdict = check_constraints(p)
    samples = sample_region_P(p, anchor, n, counter_generator(seed, stream), d=d, inflation=HYPODIST_INFLATION)
    check = check_hypodist(p, anchor, samples, check_vr=verdict.vr, check_vrs=verdict.vrs)
    return CertificateReport(
        lemma=Lemma.HYPODIST.value,
        samples=check.samples,
        violations=check.violations,
        min_margin=check.min_margin,
        seed=seed,
        constants={
            "range_violations": float(check.range_violations),
            "coercivity_vr_violations": float(check.coercivity_vr_violations),
            "coercivity_vrs_violations": float(check.coercivity_vrs_violations),
        },
        wall_ms=(time.perf_counter() - started) * 1000.0,
    )


def certify_lemma(
    lemma: Lemma | str,
    r_tilde: float,
    v_tilde_d: float,
    *,
    coeff: CoefficientField | None = None,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    theta0: float | None = None,
    v0_weight: float = 1.0,
    mode: BarrierMode | str | None = None,
    search: bool = True,
    max_halvings: int = MAX_HALVINGS,
    d: int = 1,
) -> CertificateReport:
    """Certify one barrier inequality by sampling.

    Args:
        lemma: Which inequality to certify.
        r_tilde: Barrier scale r̃.
        v_tilde_d: Base normal velocity ṽ_d < 0.
        coeff: Coefficient field; constant A = I, B = 0 when omitted.
        n_samples: Number of region samples.
        seed: Sample stream seed.
        theta0: Starting θ₀; the recipe default when omitted.
        v0_weight: ⟨v₀⟩.
        mode: Recipe override (only meaningful for ``hypodist``).
        search: Halve θ₀ after violations or refused constraints.
        max_halvings: Bound on the number of halvings.
        d: Spatial dimension of the samples.

    Returns:
        The final report; ``theta0_used`` records the last θ₀ tried.

    """
    lemma = Lemma(lemma)
    coeff = coeff or CoefficientField.constant_field(d=d)
    recipe = BarrierMode(mode) if mode is not None else lemma.mode
    theta = theta0 if theta0 is not None else recipe.default_theta0
    started = time.perf_counter()

    report = CertificateReport(lemma=lemma.value, seed=seed)
    for attempt in range(max_halvings + 1):
        params = select_params(recipe, r_tilde, v_tilde_d, v0_weight, theta, check_window=False)
        window_ok, _ = admissibility_window(recipe, r_tilde, v_tilde_d, v0_weight, theta)
        verdict = check_constraints(params)
        if not verdict.ok:
            report = CertificateReport(
                lemma=lemma.value,
                params=params.as_dict(),
                theta0_used=theta,
                window_ok=window_ok,
                constraint_failures=verdict.failures(),
                seed=seed,
            )
            logger.debug("%s refused at theta0=%g: %s", lemma.value, theta, verdict.failures())
        else:
            anchor = anchor_point(params)
            match lemma:
                case Lemma.PHASE_PROP:
                    report = _certify_phase_prop(coeff, params, anchor, n_samples, seed, attempt, d)
                case Lemma.BARRIER_SS:
                    report = _certify_barrier_ss(coeff, params, anchor, n_samples, seed, attempt, d)
                case Lemma.BARRIER_G:
                    report = _certify_barrier_g(coeff, params, anchor, n_samples, seed, attempt, d)
                case Lemma.HYPODIST:
                    report = _certify_hypodist(params, anchor, n_samples, seed, attempt, d)
            report.params = params.as_dict()
            report.anchor = anchor.as_dict()
            report.theta0_used = theta
            report.window_ok = window_ok
            if report.violations == 0:
                break
        if not search:
            break
        theta /= 2.0

    report.wall_ms = (time.perf_counter() - started) * 1000.0
    if report.constraint_failures:
        logger.warning("✗ %s refused: %s", lemma.value, "; ".join(report.constraint_failures))
    elif report.violations:
        logger.info("✗ %s", report)
    else:
        logger.info("✓ %s", report)
    return report


@dataclass(frozen=True)
class InclusionReport:
    """Sampled check of G_r ⊂ 𝒬 ⊂ G_R.

    Attributes:
        inner_samples: G_r samples drawn (after the half-space cut).
        inner_violations: G_r samples outside 𝒬.
        outer_samples: 𝒬 samples drawn.
        outer_violations: 𝒬 samples outside G_R.
        c2_required: Smallest c₂ for which every 𝒬 sample lies in G_R.

    """

    inner_samples: int
    inner_violations: int
    outer_samples: int
    outer_violations: int
    c2_required: float

    @property
    def ok(self) -> bool:
        """Both inclusions hold on the samples."""
        return self.inner_violations == 0 and self.outer_violations == 0


def check_cylinder_inclusion(
    p: BarrierParams,
    anchor: AnchorPoint,
    *,
    c1: float = 1.0 / 8.0,
    c2: float = 8.0,
    n: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> InclusionReport:
    """Check G_r(z̃) ⊂ 𝒬 ⊂ G_R(z̃) with r = c₁r̃^{1/3} and R = c₂r̃^{1/3}.

    𝒬 = {−10r̃^{2/3} < t ≤ 0, ρ₀ ≤ ρ_t ≤ 3ρ₀, x_d ≤ 0} and z̃ = (0, 0, (0′, ṽ_d)).
    """
    scale = p.r_tilde ** (1.0 / 3.0)
    t_min = -10.0 * p.r_tilde ** (2.0 / 3.0)
    d = 1
    base_velocity = np.zeros(d)
    base_velocity[-1] = p.v_tilde_d
    base = PhasePoint.of(0.0, np.zeros(d), base_velocity)

    inner = sample_cylinder(KineticCylinder(base, c1 * scale), n, counter_generator(seed, 0), half_space=True)
    inside_q = (inner.t > t_min) & np.asarray(region_P_membership(p, anchor, inner.t, inner.x, inner.v))

    outer = sample_region_P_T(p, anchor, n, counter_generator(seed, 1), t_min, d=d)
    drift = outer.x - outer.t[:, None] * base_velocity
    distance = np.maximum.reduce([
        np.sqrt(np.abs(outer.t)),
        np.cbrt(np.linalg.norm(drift, axis=1)),
        np.linalg.norm(outer.v - base_velocity, axis=1),
    ])
    R = c2 * scale
    inside_R = (
        (outer.t > -(R**2))
        & (np.linalg.norm(drift, axis=1) < R**3)
        & (np.linalg.norm(outer.v - base_velocity, axis=1) < R)
    )
    report = InclusionReport(
        inner_samples=len(inner),
        inner_violations=int(np.count_nonzero(~inside_q)),
        outer_samples=len(outer),
        outer_violations=int(np.count_nonzero(~inside_R)),
        c2_required=float(distance.max() / scale) if len(outer) else math.nan,
    )
    logger.info(
        "%s cylinder inclusion: %d/%d inner and %d/%d outer violations (c2 needed %.3g)",
        "✓" if report.ok else "✗",
        report.inner_violations,
        report.inner_samples,
        report.outer_violations,
        report.outer_samples,
        report.c2_required,
    )
    return report


def build_barrier(p: BarrierParams, anchor: AnchorPoint, *, lam: float = 1.0) -> AnalyticBarrier:
    """The barrier function of a recipe, for point evaluation."""
    match p.mode:
        case BarrierMode.INCOMING_GRADIENT:
            return QuadraticBarrier(p, anchor, LinearProfile(anchor.rho0))
        case BarrierMode.EXPONENTIAL:
            state = phi_ode_barrier(p.theta0 * abs(p.v_tilde_d) ** 5, anchor.rho0**2)
            return QuadraticBarrier(p, anchor, state)
        case _:
            return GrazingBarrier(p, anchor, 5.0 / (lam * p.theta0**2))
