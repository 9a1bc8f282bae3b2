"""Coefficient fields, stencil settings and certificate reports."""

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike

from kinbound.errors import DomainError
from kinbound.geometry.models import FloatArray, PhasePoint, PhaseSamples
from kinbound.utils.persistence import fingerprint

type MatrixField = Callable[[PhaseSamples], FloatArray]
type VectorField = Callable[[PhaseSamples], FloatArray]
type ScalarField = Callable[[PhaseSamples], FloatArray]


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """Coefficients (A, B, S) of ℒf = ∂_t f + v·∇_x f − A:D_v²f − B·∇_v f = S.

    The fields are batch callables: given n samples in dimension d they return
    arrays of shape (n, d, d), (n, d) and (n,).

    Attributes:
        diffusion: A(z), symmetric with λI ≤ A ≤ ΛI.
        drift: B(z).
        source: S(z).
        lam: Ellipticity lower bound λ.
        Lam: Ellipticity upper bound Λ ≥ λ.
        name: Label used in reports.
        constant: Whether A, B and S are constant.

    """

    diffusion: MatrixField
    drift: VectorField
    source: ScalarField
    lam: float
    Lam: float
    name: str = "custom"
    constant: bool = False

    def __post_init__(self) -> None:
        """Check 0 < λ ≤ Λ."""
        if not 0 < self.lam <= self.Lam:
            msg = f"Need 0 < lambda <= Lambda, got lambda={self.lam}, Lambda={self.Lam}"
            raise DomainError(msg)

    @classmethod
    def constant_field(
        cls,
        A: ArrayLike = 1.0,
        B: ArrayLike = 0.0,
        S: float = 0.0,
        d: int = 1,
    ) -> "CoefficientField":
        """Constant coefficients; scalars A and B mean A·I and B·1."""
        A_mat = np.asarray(A, dtype=np.float64)
        A_mat = A_mat * np.eye(d) if A_mat.ndim == 0 else A_mat.reshape(d, d)
        B_vec = np.broadcast_to(np.asarray(B, dtype=np.float64), (d,)).copy()
        eigenvalues = np.linalg.eigvalsh(0.5 * (A_mat + A_mat.T))

        def diffusion(samples: PhaseSamples) -> FloatArray:
            return np.broadcast_to(A_mat, (len(samples), d, d))

        def drift(samples: PhaseSamples) -> FloatArray:
            return np.broadcast_to(B_vec, (len(samples), d))

        def source(samples: PhaseSamples) -> FloatArray:
            return np.full(len(samples), float(S))

        return cls(
            diffusion=diffusion,
            drift=drift,
            source=source,
            lam=float(eigenvalues[0]),
            Lam=float(max(eigenvalues[-1], np.linalg.norm(B_vec))),
            name="constant",
            constant=True,
        )

    @classmethod
    def velocity_affine(
        cls,
        a0: float = 1.0,
        a1: float = 0.0,
        b0: float = 0.0,
        b1: float = 0.0,
        s0: float = 0.0,
        d: int = 1,
    ) -> "CoefficientField":
        """A = (a₀ + a₁ tanh²|v|)·I, B = b₀ + b₁v, S = s₀.

        Raises:
            DomainError: If A fails to be uniformly positive.

        """
        if a0 <= 0 or a0 + a1 <= 0:
            msg = f"velocity-affine diffusion must stay positive, got a0={a0}, a1={a1}"
            raise DomainError(msg)

        def diffusion(samples: PhaseSamples) -> FloatArray:
            speed = np.linalg.norm(samples.v, axis=1)
            scale = a0 + a1 * np.tanh(speed) ** 2
            return scale[:, None, None] * np.eye(d)[None, :, :]

        def drift(samples: PhaseSamples) -> FloatArray:
            return b0 + b1 * samples.v

        def source(samples: PhaseSamples) -> FloatArray:
            return np.full(len(samples), float(s0))

        return cls(
            diffusion=diffusion,
            drift=drift,
            source=source,
            lam=min(a0, a0 + a1),
            Lam=max(a0, a0 + a1, abs(b0) + abs(b1)),
            name="velocity-affine",
            constant=a1 == 0 and b1 == 0,
        )

    def A(self, z: PhasePoint) -> FloatArray:
        """Diffusion matrix at one point."""
        return np.asarray(self.diffusion(_single(z))[0], dtype=np.float64)

    def B(self, z: PhasePoint) -> FloatArray:
        """Drift vector at one point."""
        return np.asarray(self.drift(_single(z))[0], dtype=np.float64)

    def S(self, z: PhasePoint) -> float:
        """Source value at one point."""
        return float(self.source(_single(z))[0])

    def check_ellipticity(self, samples: PhaseSamples) -> int:
        """Count samples violating λI ≤ A ≤ ΛI or |B| ≤ Λ(1 + |v|²)."""
        A = np.asarray(self.diffusion(samples), dtype=np.float64)
        eigenvalues = np.linalg.eigvalsh(0.5 * (A + np.swapaxes(A, 1, 2)))
        slack = 1e-12 * self.Lam
        bad = (eigenvalues[:, 0] < self.lam - slack) | (eigenvalues[:, -1] > self.Lam + slack)
        drift_norm = np.linalg.norm(np.asarray(self.drift(samples)), axis=1)
        bad |= drift_norm > self.Lam * (1.0 + np.sum(samples.v**2, axis=1)) + slack
        return int(bad.sum())


def _single(z: PhasePoint) -> PhaseSamples:
    return PhaseSamples(np.array([z.t]), z.x[None, :], z.v[None, :])


@dataclass(frozen=True)
class StencilConfig:
    """Finite-difference steps for :func:`kinbound.certifier.operator.apply_L_fd`.

    Only the ``central_2nd`` scheme exists: central second-order differences
    in x and v with a first-order backward difference in t.
    """

    SCHEMES: ClassVar[tuple[str, ...]] = ("central_2nd",)

    dt: float
    dx: float
    dv: float
    scheme: str = "central_2nd"

    def __post_init__(self) -> None:
        """Reject non-positive steps and unknown schemes."""
        if min(self.dt, self.dx, self.dv) <= 0:
            msg = f"Stencil steps must be positive, got dt={self.dt}, dx={self.dx}, dv={self.dv}"
            raise DomainError(msg)
        if self.scheme not in self.SCHEMES:
            msg = f"Unknown stencil scheme {self.scheme!r}; expected one of {self.SCHEMES}"
            raise DomainError(msg)

    @classmethod
    def for_radius(cls, radius: float, eps: float = 1e-4) -> "StencilConfig":
        """Steps εR², εR³ and εR for a region of kinetic size R."""
        if radius <= 0 or eps <= 0:
            msg = f"Radius and eps must be positive, got radius={radius}, eps={eps}"
            raise DomainError(msg)
        return cls(dt=eps * radius**2, dx=eps * radius**3, dv=eps * radius)


class Verdict(StrEnum):
    """Outcome of a certificate or an experiment."""

    PASS = "pass"  # noqa: S105
    FAIL = "fail"
    ERROR = "error"
    DEGENERATE = "degenerate"


@dataclass
class CertificateReport:
    """Result of sampling one differential inequality.

    Attributes:
        lemma: Inequality identifier.
        params: Barrier parameters used (final θ₀).
        anchor: Anchor point of the quasi-distance.
        samples: Number of evaluated samples.
        violations: Samples with negative margin.
        min_margin: Smallest lhs − rhs over the samples.
        theta0_used: θ₀ after the halving search.
        constants: Empirically feasible constants found on the samples.
        window_ok: Whether r̃ lies in the recipe's admissibility window.
        constraint_failures: Failed (abc)/(vr)/(vrs) conditions; non-empty
            means the certificate was refused.
        seed: Seed of the sample stream.
        wall_ms: Wall time; excluded from the fingerprint.

    """

    lemma: str
    params: dict[str, Any] = field(default_factory=dict)
    anchor: dict[str, float] = field(default_factory=dict)
    samples: int = 0
    violations: int = 0
    min_margin: float = math.inf
    theta0_used: float = 0.0
    constants: dict[str, float] = field(default_factory=dict)
    window_ok: bool = True
    constraint_failures: list[str] = field(default_factory=list)
    seed: int = 0
    wall_ms: float = 0.0

    @property
    def verdict(self) -> Verdict:
        """PASS when sampled without violations, ERROR when refused."""
        if self.constraint_failures or self.samples == 0:
            return Verdict.ERROR
        return Verdict.PASS if self.violations == 0 else Verdict.FAIL

    def to_dict(self) -> dict[str, Any]:
        """Return the JSON report body."""
        return {
            "lemma": self.lemma,
            "params": dict(self.params),
            "anchor": dict(self.anchor),
            "samples": self.samples,
            "violations": self.violations,
            "min_margin": self.min_margin,
            "theta0_used": self.theta0_used,
            "constants": dict(self.constants),
            "window_ok": self.window_ok,
            "constraint_failures": list(self.constraint_failures),
            "seed": self.seed,
            "verdict": self.verdict.value,
            "wall_ms": self.wall_ms,
        }

    @property
    def fingerprint(self) -> str:
        """SHA-256 of the report without its wall time."""
        return fingerprint(self.to_dict())

    def __str__(self) -> str:
        """Return a one-line summary."""
        return (
            f"[{self.lemma}] {self.verdict.value}: {self.violations}/{self.samples} violations, "
            f"min margin {self.min_margin:.6g}, theta0 {self.theta0_used:g}"
        )
