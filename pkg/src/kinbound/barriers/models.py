"""Barrier parameter records.

A barrier is built around a point (x̃, ṽ) with x̃_d = 0 and ṽ_d < 0 on the
incoming part of the boundary. Its shape is fixed by the tuple
(κ, 𝐚, 𝐛, 𝐜, 𝐡) chosen from r̃ and ṽ_d by one of three recipes, and its
quasi-distance ρ is centered at the anchor (ξ, η) returned by
:func:`kinbound.barriers.recipes.anchor_point`.
"""

from dataclasses import dataclass, field
from enum import StrEnum
from typing import ClassVar

from kinbound.errors import DomainError


class BarrierMode(StrEnum):
    """Parameter recipe family."""

    INCOMING_GRADIENT = "incoming_gradient"
    EXPONENTIAL = "exponential"
    GRAZING = "grazing"

    @property
    def default_theta0(self) -> float:
        """Default smallness constant θ₀ for this recipe."""
        return 1.0 / 32.0 if self is BarrierMode.GRAZING else 1.0 / 1024.0


@dataclass(frozen=True)
class BarrierParams:
    """Parameters of one barrier.

    Attributes:
        mode: Recipe the parameters came from.
        r_tilde: Scale r̃ > 0.
        kappa: Tangential weight κ.
        a: Position weight 𝐚.
        b: Cross weight 𝐛.
        c: Velocity weight 𝐜.
        h: Time drift rate 𝐡 ≥ 0 of the moving center.
        v_tilde_d: Normal velocity ṽ_d < 0 of the base point.
        v0_weight: ⟨v₀⟩ = √(1 + |v₀|²) ≥ 1.
        theta0: Smallness constant θ₀ ∈ (0, 1/16].

    """

    MAX_THETA0: ClassVar[float] = 1.0 / 16.0

    mode: BarrierMode
    r_tilde: float
    kappa: float
    a: float
    b: float
    c: float
    h: float
    v_tilde_d: float
    v0_weight: float = 1.0
    theta0: float = field(default=1.0 / 1024.0)

    def __post_init__(self) -> None:
        """Reject parameters outside their sign conventions."""
        for name in ("r_tilde", "kappa", "a", "c"):
            if not getattr(self, name) > 0:
                msg = f"Barrier parameter {name} must be positive, got {getattr(self, name)}"
                raise DomainError(msg)
        for name in ("b", "h"):
            if getattr(self, name) < 0:
                msg = f"Barrier parameter {name} must be non-negative, got {getattr(self, name)}"
                raise DomainError(msg)
        if self.v0_weight < 1:
            msg = f"<v0> must be at least 1, got {self.v0_weight}"
            raise DomainError(msg)
        if not 0 < self.theta0 <= self.MAX_THETA0:
            msg = f"theta0 must lie in (0, 1/16], got {self.theta0}"
            raise DomainError(msg)

    def as_dict(self) -> dict[str, float | str]:
        """Return the parameters as a JSON-ready mapping."""
        return {
            "mode": self.mode.value,
            "r_tilde": self.r_tilde,
            "kappa": self.kappa,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "h": self.h,
            "v_tilde_d": self.v_tilde_d,
            "v0_weight": self.v0_weight,
            "theta0": self.theta0,
        }


@dataclass(frozen=True)
class AnchorPoint:
    """Center (ξ, η) of the quasi-distance, with ξ′ = η′ = 0."""

    xi_d: float
    eta_d: float
    rho0: float

    def as_dict(self) -> dict[str, float]:
        """Return the anchor as a JSON-ready mapping."""
        return {"xi_d": self.xi_d, "eta_d": self.eta_d, "rho0": self.rho0}


@dataclass(frozen=True)
class ConstraintVerdict:
    """Outcome of :func:`kinbound.barriers.recipes.check_constraints`.

    Attributes:
        sqrt_ac: √(ac) ≥ 8b.
        a_ge_4c: a ≥ 4c.
        scale: √(a/c)·r̃ ≤ ⟨v₀⟩.
        vr: |ṽ_d| ≥ 2br̃/c.
        vrs: |ṽ_d| ≥ 8√(a/c)·r̃.
        requires_vrs: Whether the mode needs the stronger (vrs) condition.

    """

    sqrt_ac: bool
    a_ge_4c: bool
    scale: bool
    vr: bool
    vrs: bool
    requires_vrs: bool

    @property
    def abc(self) -> bool:
        """All three parts of the (abc) constraint set."""
        return self.sqrt_ac and self.a_ge_4c and self.scale

    @property
    def ok(self) -> bool:
        """Whether every condition the mode requires holds."""
        velocity = self.vrs if self.requires_vrs else self.vr
        return self.abc and velocity

    def failures(self) -> list[str]:
        """Name the required conditions that fail."""
        checks = {
            "sqrt(ac) >= 8b": self.sqrt_ac,
            "a >= 4c": self.a_ge_4c,
            "sqrt(a/c) r~ <= <v0>": self.scale,
        }
        if self.requires_vrs:
            checks["|v~_d| >= 8 sqrt(a/c) r~"] = self.vrs
        else:
            checks["|v~_d| >= 2b r~/c"] = self.vr
        return [name for name, passed in checks.items() if not passed]
