"""The kinetic operator ℒ = ∂_t + v·∇_x − A:D_v² − B·∇_v.

Two evaluation paths are provided. :func:`apply_L_fd` differentiates any
callable on a finite-difference stencil. The barrier classes below apply ℒ
in closed form through the chain rule on ρ_t², which is what the certifier
samples; the stencil path cross-checks it.
"""

import logging
import time
from collections.abc import Callable
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np
from numpy.typing import ArrayLike

from kinbound.barriers.models import AnchorPoint, BarrierParams
from kinbound.barriers.profiles import varphi_power
from kinbound.barriers.quasidist import rho_t_jet
from kinbound.certifier.models import CertificateReport, CoefficientField, StencilConfig
from kinbound.errors import DomainError, StencilDomainError
from kinbound.geometry.models import BatchField, FloatArray, PhasePoint, PhaseSamples
from kinbound.utils.rng import counter_generator

logger = logging.getLogger(__name__)

type PointFunction = Callable[[PhasePoint], float]
type RegionSampler = Callable[[int, np.random.Generator], PhaseSamples]


def _evaluate(f: PointFunction, z: PhasePoint) -> float:
    try:
        return float(f(z))
    except DomainError as e:
        msg = f"Stencil point {z} leaves the function's domain: {e}"
        raise StencilDomainError(msg) from e


def apply_L_fd(
    coeff: CoefficientField,
    f: PointFunction,
    z: PhasePoint,
    st: StencilConfig,
) -> float:
    """Apply ℒ to f at z by finite differences.

    ∂_t uses a backward difference, so only t − dt is visited; x and v
    derivatives are central, mixed velocity derivatives use the four-point
    cross stencil.

    Raises:
        StencilDomainError: If a stencil point lies outside f's domain.

    """
    d = z.d
    center = _evaluate(f, z)
    result = (center - _evaluate(f, PhasePoint.of(z.t - st.dt, z.x, z.v))) / st.dt

    eye = np.eye(d)
    for i in range(d):
        forward = _evaluate(f, PhasePoint.of(z.t, z.x + st.dx * eye[i], z.v))
        backward = _evaluate(f, PhasePoint.of(z.t, z.x - st.dx * eye[i], z.v))
        result += z.v[i] * (forward - backward) / (2.0 * st.dx)

    A = coeff.A(z)
    B = coeff.B(z)
    h = st.dv
    for i in range(d):
        plus = _evaluate(f, PhasePoint.of(z.t, z.x, z.v + h * eye[i]))
        minus = _evaluate(f, PhasePoint.of(z.t, z.x, z.v - h * eye[i]))
        result -= A[i, i] * (plus - 2.0 * center + minus) / (h * h)
        result -= B[i] * (plus - minus) / (2.0 * h)
        for j in range(i + 1, d):
            if A[i, j] == 0.0 and A[j, i] == 0.0:
                continue
            corners = [
                _evaluate(f, PhasePoint.of(z.t, z.x, z.v + h * (si * eye[i] + sj * eye[j])))
                for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1))
            ]
            mixed = (corners[0] - corners[1] - corners[2] + corners[3]) / (4.0 * h * h)
            result -= (A[i, j] + A[j, i]) * mixed
    return result


@runtime_checkable
class AnalyticBarrier(Protocol):
    """A barrier whose image under ℒ is known in closed form.

    ``operator_values`` returns the certified quantity, which is ℒ(barrier)
    divided by ``weight_label`` (a positive profile slope, or 1).
    """

    weight_label: str

    def value(self, z: PhasePoint) -> float:
        """Barrier value at one point."""
        ...

    def operator_values(self, coeff: CoefficientField, samples: PhaseSamples) -> FloatArray:
        """Certified quantity ℒ(barrier)/weight at each sample."""
        ...

    def apply_L(self, coeff: CoefficientField, samples: PhaseSamples) -> FloatArray:
        """ℒ(barrier) at each sample."""
        ...


class RadialProfile(Protocol):
    """Profile Φ of ρ_t² with derivatives."""

    def Phi(self, tau: ArrayLike) -> FloatArray:
        """Φ(τ)."""
        ...

    def dPhi(self, tau: ArrayLike) -> FloatArray:
        """Φ′(τ)."""
        ...

    def d2Phi(self, tau: ArrayLike) -> FloatArray:
        """Φ″(τ)."""
        ...


@dataclass(frozen=True)
class LinearProfile:
    """Φ(τ) = τ/ρ₀² − 1."""

    rho0: float

    def Phi(self, tau: ArrayLike) -> FloatArray:
        """Φ(τ)."""
        return np.asarray(tau, dtype=np.float64) / self.rho0**2 - 1.0

    def dPhi(self, tau: ArrayLike) -> FloatArray:
        """Φ′ = 1/ρ₀²."""
        return np.full_like(np.asarray(tau, dtype=np.float64), 1.0 / self.rho0**2)

    def d2Phi(self, tau: ArrayLike) -> FloatArray:
        """Φ″ = 0."""
        return np.zeros_like(np.asarray(tau, dtype=np.float64))


def _quadratic_parts(
    coeff: CoefficientField,
    p: BarrierParams,
    anchor: AnchorPoint,
    samples: PhaseSamples,
    t: ArrayLike,
    *,
    moving: bool = True,
) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Return (ρ_t², ℒ(ρ_t²)/2, wᵀAw).

    ℒ(ρ_t²)/2 = (∂_t + v·∇_x)(ρ_t²)/2 − 𝐜 tr A − B·w. With ``moving=False``
    the quadratic form is frozen at t and carries no time derivative.
    """
    jet = rho_t_jet(p, anchor, t, samples.x, samples.v)
    A = np.asarray(coeff.diffusion(samples), dtype=np.float64)
    B = np.asarray(coeff.drift(samples), dtype=np.float64)
    trace = np.trace(A, axis1=1, axis2=2)
    quadratic = np.einsum("ni,nij,nj->n", jet.w, A, jet.w)
    rate = jet.dq_dt if moving else 0.0
    half_Lq = 0.5 * (rate + jet.transport) - jet.c * trace - np.sum(B * jet.w, axis=1)
    return jet.q, half_Lq, quadratic


@dataclass(frozen=True, eq=False)
class QuadraticBarrier:
    """Φ∘ρ_t² for a radial profile Φ.

    ℒ(Φ∘ρ_t²) = Φ′·ℒ(ρ_t²) − 4Φ″·wᵀAw with ∇_v(ρ_t²) = 2w. When
    ``curvature_ratio`` is given (Φ″/Φ′ as a function of τ) the certified
    quantity is ℒ(Φ∘ρ_t²)/(2Φ′), which stays finite where Φ′ underflows.
    """

    params: BarrierParams
    anchor: AnchorPoint
    profile: RadialProfile
    curvature_ratio: Callable[[FloatArray], FloatArray] | None = None

    @property
    def weight_label(self) -> str:
        """Normalization of :meth:`operator_values`."""
        return "1" if self.curvature_ratio is None else "2*dPhi"

    def value(self, z: PhasePoint) -> float:
        """Φ(ρ_t²(x, v)) at one point."""
        jet = rho_t_jet(self.params, self.anchor, z.t, z.x, z.v)
        return float(self.profile.Phi(jet.q))

    def apply_L(self, coeff: CoefficientField, samples: PhaseSamples) -> FloatArray:
        """ℒ(Φ∘ρ_t²) at each sample."""
        q, half_Lq, quadratic = _quadratic_parts(coeff, self.params, self.anchor, samples, samples.t)
        return 2.0 * self.profile.dPhi(q) * half_Lq - 4.0 * self.profile.d2Phi(q) * quadratic

    def operator_values(self, coeff: CoefficientField, samples: PhaseSamples) -> FloatArray:
        """ℒ(Φ∘ρ_t²), or ℒ(Φ∘ρ_t²)/(2Φ′) when a curvature ratio is set."""
        if self.curvature_ratio is None:
            return self.apply_L(coeff, samples)
        q, half_Lq, quadratic = _quadratic_parts(coeff, self.params, self.anchor, samples, samples.t)
        return half_Lq - 2.0 * self.curvature_ratio(q) * quadratic


@dataclass(frozen=True, eq=False)
class GrazingBarrier:
    """φ(ρ − 𝐡t) with the power profile φ of exponent m.

    With s = ρ − 𝐡t, ℒ(φ(s))/φ′(s) equals

        −𝐡 + [v_d(aX_d − bV_d) + aκ²v′·x′ − 𝐜 tr A − B·w]/ρ
           + wᵀAw·((m + 1)/(sρ²) + 1/ρ³).
    """

    params: BarrierParams
    anchor: AnchorPoint
    m: float

    weight_label: str = "dvarphi"

    def shifted_radius(self, samples: PhaseSamples) -> tuple[FloatArray, FloatArray]:
        """Return (ρ, s = ρ − 𝐡t) at the samples."""
        jet = rho_t_jet(self.params, self.anchor, 0.0, samples.x, samples.v)
        radius = np.sqrt(jet.q)
        return radius, radius - self.params.h * samples.t

    def value(self, z: PhasePoint) -> float:
        """φ(ρ(x, v) − 𝐡t) at one point."""
        jet = rho_t_jet(self.params, self.anchor, 0.0, z.x, z.v)
        return varphi_power(self.anchor.rho0, self.m, float(np.sqrt(jet.q)) - self.params.h * z.t)

    def operator_values(self, coeff: CoefficientField, samples: PhaseSamples) -> FloatArray:
        """ℒ(φ(ρ − 𝐡t))/φ′ at each sample."""
        _, half_Lq, quadratic = _quadratic_parts(coeff, self.params, self.anchor, samples, 0.0, moving=False)
        radius, s = self.shifted_radius(samples)
        return (
            -self.params.h
            + half_Lq / radius
            + quadratic * ((self.m + 1.0) / (s * radius**2) + 1.0 / radius**3)
        )

    def apply_L(self, coeff: CoefficientField, samples: PhaseSamples) -> FloatArray:
        """ℒ(φ(ρ − 𝐡t)) at each sample."""
        _, s = self.shifted_radius(samples)
        rho0 = self.anchor.rho0
        slope = self.m * np.power(s / rho0, -self.m - 1.0) / (rho0 * (1.0 - 3.0**-self.m))
        return slope * self.operator_values(coeff, samples)


def certify_region(
    coeff: CoefficientField,
    barrier: AnalyticBarrier | PointFunction,
    sampler: RegionSampler,
    bound: BatchField,
    n_samples: int,
    seed: int,
    *,
    lemma: str = "custom",
    stencil: StencilConfig | None = None,
    stream: int = 0,
) -> CertificateReport:
    """Sample a region and count violations of ℒ(barrier) ≥ bound.

    Analytic barriers are evaluated in closed form and compared against the
    bound expressed in the barrier's normalization; plain callables go
    through :func:`apply_L_fd` point by point and need a stencil.

    Args:
        coeff: Coefficient field.
        barrier: Analytic barrier or point function.
        sampler: Draws n region samples from a generator.
        bound: Lower bound per sample.
        n_samples: Number of samples.
        seed: Seed of the counter-based sample stream.
        lemma: Identifier recorded in the report.
        stencil: Finite-difference steps for point functions.
        stream: Stream number within the seed.

    Returns:
        The certificate report (parameters are filled in by the caller).

    Raises:
        DomainError: If a point function is given without a stencil.
        SamplerStarvationError: Propagated from the sampler.

    """
    started = time.perf_counter()
    rng = counter_generator(seed, stream)
    samples = sampler(n_samples, rng)

    if isinstance(barrier, AnalyticBarrier):
        values = barrier.operator_values(coeff, samples)
    else:
        if stencil is None:
            msg = "A stencil is required to certify a point function"
            raise DomainError(msg)
        values = np.array([apply_L_fd(coeff, barrier, samples.point(i), stencil) for i in range(len(samples))])

    margins = values - np.asarray(bound(samples), dtype=np.float64)
    violations = int(np.count_nonzero(margins < 0))
    report = CertificateReport(
        lemma=lemma,
        samples=len(samples),
        violations=violations,
        min_margin=float(margins.min()) if len(samples) else float("inf"),
        seed=seed,
        wall_ms=(time.perf_counter() - started) * 1000.0,
    )
    if len(samples):
        report.constants["min_operator_value"] = float(values.min())
    logger.debug("%s: %d samples, %d violations", lemma, report.samples, violations)
    return report
