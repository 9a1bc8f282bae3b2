"""Data models for kinetic phase space.

This module defines the value types shared by every other part of the lab:
phase points z = (t, x, v) carrying the Galilean group structure, kinetic
cylinders, multi-indices with their kinetic degree, and graph domains whose
boundary can be flattened.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

from kinbound.errors import DomainError

type FloatArray = NDArray[np.float64]
type ProfileFn = Callable[[FloatArray], float]
type ProfileGradientFn = Callable[[FloatArray], FloatArray]


def _as_vector(value: ArrayLike, name: str) -> FloatArray:
    array = np.atleast_1d(np.asarray(value, dtype=np.float64))
    if array.ndim != 1:
        msg = f"{name} must be a vector, got shape {array.shape}"
        raise DomainError(msg)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """A point z = (t, x, v) of ℝ × ℝ^d × ℝ^d.

    Instances are immutable; the position and velocity arrays are stored
    read-only. Use :meth:`of` to build a point from scalars or sequences.
    """

    t: float
    x: FloatArray
    v: FloatArray

    def __post_init__(self) -> None:
        """Validate dimensions and freeze the component arrays."""
        x = _as_vector(self.x, "x")
        v = _as_vector(self.v, "v")
        if x.shape != v.shape:
            msg = f"Position has dimension {x.size} but velocity has dimension {v.size}"
            raise DomainError(msg)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)

    @classmethod
    def of(cls, t: float, x: ArrayLike, v: ArrayLike) -> "PhasePoint":
        """Build a phase point from a time and position/velocity scalars or sequences."""
        return cls(t, _as_vector(x, "x"), _as_vector(v, "v"))

    @classmethod
    def origin(cls, d: int = 1) -> "PhasePoint":
        """Return the group identity (0, 0⃗, 0⃗) in dimension d."""
        if d < 1:
            msg = f"Dimension must be positive, got {d}"
            raise DomainError(msg)
        return cls.of(0.0, np.zeros(d), np.zeros(d))

    @property
    def d(self) -> int:
        """Spatial dimension."""
        return int(self.x.size)

    def allclose(self, other: "PhasePoint", atol: float = 1e-12) -> bool:
        """Compare componentwise within an absolute tolerance."""
        return (
            self.d == other.d
            and abs(self.t - other.t) <= atol
            and bool(np.all(np.abs(self.x - other.x) <= atol))
            and bool(np.all(np.abs(self.v - other.v) <= atol))
        )

    def __str__(self) -> str:
        """Return a compact representation."""
        return f"(t={self.t:g}, x={self.x.tolist()}, v={self.v.tolist()})"


@dataclass(frozen=True, eq=False)
class PhaseSamples:
    """A batch of n phase points stored column-wise.

    ``t`` has shape (n,), ``x`` and ``v`` have shape (n, d).
    """

    t: FloatArray
    x: FloatArray
    v: FloatArray

    def __post_init__(self) -> None:
        """Normalize shapes so that one-dimensional inputs become (n, 1)."""
        t = np.asarray(self.t, dtype=np.float64).reshape(-1)
        x = np.asarray(self.x, dtype=np.float64)
        v = np.asarray(self.v, dtype=np.float64)
        x = x.reshape(t.size, -1)
        v = v.reshape(t.size, -1)
        if x.shape != v.shape:
            msg = f"Sample position shape {x.shape} differs from velocity shape {v.shape}"
            raise DomainError(msg)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)

    def __len__(self) -> int:
        """Return the number of samples."""
        return int(self.t.size)

    @property
    def d(self) -> int:
        """Spatial dimension."""
        return int(self.x.shape[1])

    @property
    def x_d(self) -> FloatArray:
        """Normal position component (last coordinate)."""
        return self.x[:, -1]

    @property
    def v_d(self) -> FloatArray:
        """Normal velocity component (last coordinate)."""
        return self.v[:, -1]

    def point(self, i: int) -> PhasePoint:
        """Return sample ``i`` as a :class:`PhasePoint`."""
        return PhasePoint.of(float(self.t[i]), self.x[i], self.v[i])

    def subset(self, mask: NDArray[np.bool_]) -> "PhaseSamples":
        """Return the samples selected by a boolean mask."""
        return PhaseSamples(self.t[mask], self.x[mask], self.v[mask])


type BatchField = Callable[[PhaseSamples], FloatArray]


@dataclass(frozen=True)
class KineticCylinder:
    """Kinetic cylinder Q_r(z₀), closed at its top time and open elsewhere."""

    center: PhasePoint
    radius: float

    def __post_init__(self) -> None:
        """Reject non-positive radii."""
        if not self.radius > 0:
            msg = f"Cylinder radius must be positive, got {self.radius}"
            raise DomainError(msg)


@dataclass(frozen=True)
class MultiIndex:
    """Multi-index (l_t, l_x, l_v) for kinetic polynomials."""

    l_t: int = 0
    l_x: tuple[int, ...] = (0,)
    l_v: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        """Check the entries are natural numbers of a common dimension."""
        entries = (self.l_t, *self.l_x, *self.l_v)
        if any(value < 0 for value in entries):
            msg = f"Multi-index entries must be non-negative, got {entries}"
            raise DomainError(msg)
        if len(self.l_x) != len(self.l_v):
            msg = "Position and velocity parts of a multi-index must share a dimension"
            raise DomainError(msg)


@dataclass(frozen=True)
class GraphDomain:
    """Domain Ω = {x_d < 𝒫(x′)} near a boundary chart.

    The profile maps ℝ^{d-1} to ℝ. Its gradient and Hessian may be given
    analytically; when they are missing and ``numeric_derivatives`` is set they
    are taken by central differences with step :attr:`FD_STEP`.

    Attributes:
        profile: Boundary profile 𝒫(x′).
        validity_radius: Radius around ``center`` within which the chart is valid.
        gradient: Optional analytic ∇𝒫.
        hessian: Optional analytic D²𝒫.
        center: Chart center x₀′ (defaults to the origin of ℝ^{d-1}).
        numeric_derivatives: Allow finite-difference derivatives when the
            analytic ones are missing.

    """

    FD_STEP: ClassVar[float] = 1e-5

    profile: ProfileFn
    validity_radius: float
    gradient: ProfileGradientFn | None = None
    hessian: ProfileGradientFn | None = None
    center: Sequence[float] = field(default_factory=tuple)
    numeric_derivatives: bool = True

    def __post_init__(self) -> None:
        """Reject non-positive validity radii."""
        if not self.validity_radius > 0:
            msg = f"Validity radius must be positive, got {self.validity_radius}"
            raise DomainError(msg)

    @classmethod
    def flat(cls, validity_radius: float = 1.0) -> "GraphDomain":
        """Return the half-space {x_d < 0}."""
        return cls(
            profile=lambda _xp: 0.0,
            validity_radius=validity_radius,
            gradient=lambda xp: np.zeros_like(xp),
            hessian=lambda xp: np.zeros((xp.size, xp.size)),
        )
