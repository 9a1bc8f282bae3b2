"""Grid, boundary data and solution containers for the half-space solver.

The solver works on {x ≤ 0} in one space dimension. Nodes sit at
x_i = −X + iΔx (i = 0..n_x) and v_j = −V + jΔv (j = 0..n_v) with n_v even, so
that x = 0 and v = 0 are grid nodes and the incoming set {x = 0, v < 0}
splits exactly from the outgoing one.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike
from scipy import interpolate

from kinbound.errors import DegenerateInputError, DomainError
from kinbound.geometry.models import FloatArray

logger = logging.getLogger(__name__)

type InflowFn = Callable[[float, FloatArray], FloatArray]
type InitialFn = Callable[[FloatArray, FloatArray], FloatArray]
type EdgeFn = Callable[[float, FloatArray, FloatArray], FloatArray]
type SpaceTimeFn = Callable[[ArrayLike, ArrayLike, ArrayLike], ArrayLike]


@dataclass(frozen=True)
class HalfSpaceGrid:
    """Uniform node grid on [T₀, 0] × [−X, 0] × [−V, V].

    Attributes:
        x_extent: X > 0.
        n_x: Number of x cells.
        v_extent: V > 0.
        n_v: Number of v cells, even.
        t0: Initial time T₀ < 0.
        n_t: Number of time steps.

    """

    DEFAULT_CFL: ClassVar[float] = 0.9

    x_extent: float
    n_x: int
    v_extent: float
    n_v: int
    t0: float
    n_t: int

    def __post_init__(self) -> None:
        """Validate extents and counts."""
        if self.x_extent <= 0 or self.v_extent <= 0:
            msg = f"Grid extents must be positive, got X={self.x_extent}, V={self.v_extent}"
            raise DomainError(msg)
        if self.n_x < 1 or self.n_t < 1 or self.n_v < 2:
            msg = f"Grid needs n_x >= 1, n_v >= 2, n_t >= 1, got {self.n_x}, {self.n_v}, {self.n_t}"
            raise DomainError(msg)
        if self.n_v % 2:
            msg = f"n_v must be even so that v = 0 is a node, got {self.n_v}"
            raise DomainError(msg)
        if self.t0 >= 0:
            msg = f"Initial time must be negative, got {self.t0}"
            raise DomainError(msg)

    @classmethod
    def from_cfl(
        cls,
        x_extent: float,
        n_x: int,
        v_extent: float,
        n_v: int,
        t0: float,
        cfl: float = DEFAULT_CFL,
    ) -> "HalfSpaceGrid":
        """Choose the smallest n_t with Δt·V/Δx ≤ cfl."""
        steps = math.ceil(abs(t0) * v_extent * n_x / (x_extent * cfl))
        return cls(x_extent, n_x, v_extent, n_v, t0, max(steps, 1))

    def refined(self, factor: int = 2) -> "HalfSpaceGrid":
        """Return the grid with every spacing divided by ``factor``."""
        return HalfSpaceGrid(
            self.x_extent,
            self.n_x * factor,
            self.v_extent,
            self.n_v * factor,
            self.t0,
            self.n_t * factor,
        )

    @property
    def dx(self) -> float:
        """Δx."""
        return self.x_extent / self.n_x

    @property
    def dv(self) -> float:
        """Δv."""
        return 2.0 * self.v_extent / self.n_v

    @property
    def dt(self) -> float:
        """Δt."""
        return abs(self.t0) / self.n_t

    @property
    def cfl(self) -> float:
        """Transport Courant number Δt·V/Δx."""
        return self.dt * self.v_extent / self.dx

    @property
    def x(self) -> FloatArray:
        """x nodes, ending at 0."""
        return np.linspace(-self.x_extent, 0.0, self.n_x + 1)

    @property
    def v(self) -> FloatArray:
        """v nodes, with v = 0 at index n_v/2."""
        return np.linspace(-self.v_extent, self.v_extent, self.n_v + 1)

    @property
    def times(self) -> FloatArray:
        """Time levels T₀ = t_0 < … < t_{n_t} = 0."""
        return np.linspace(self.t0, 0.0, self.n_t + 1)

    @property
    def zero_velocity_index(self) -> int:
        """Index of v = 0."""
        return self.n_v // 2

    def as_dict(self) -> dict[str, float | int]:
        """Return the grid as a JSON-ready mapping."""
        return {
            "x_extent": self.x_extent,
            "n_x": self.n_x,
            "v_extent": self.v_extent,
            "n_v": self.n_v,
            "t0": self.t0,
            "n_t": self.n_t,
        }


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """Data on the kinetic boundary of the computational box.

    All callables are vectorized and broadcast their array arguments.

    Attributes:
        inflow: f_b(t, v) on {x = 0, v < 0}.
        initial: f(T₀, x, v).
        truncation: f(t, x, ±V) on the artificial velocity boundary.
        far_field: f(t, −X, v) for v > 0 entering through x = −X; when
            missing the initial data at x = −X is used.
        name: Label used in metadata.

    """

    inflow: InflowFn
    initial: InitialFn
    truncation: EdgeFn
    far_field: EdgeFn | None = None
    name: str = "custom"

    @classmethod
    def constant(cls, value: float) -> "BoundaryData":
        """All data equal to one constant."""

        def inflow(_t: float, v: FloatArray) -> FloatArray:
            return np.full_like(np.asarray(v, dtype=np.float64), value)

        def initial(x: FloatArray, v: FloatArray) -> FloatArray:
            return np.full(np.broadcast_shapes(np.shape(x), np.shape(v)), float(value))

        def edge(_t: float, x: FloatArray, v: FloatArray) -> FloatArray:
            return np.full(np.broadcast_shapes(np.shape(x), np.shape(v)), float(value))

        return cls(inflow=inflow, initial=initial, truncation=edge, far_field=edge, name=f"constant({value:g})")

    @classmethod
    def from_function(cls, g: SpaceTimeFn, t0: float, name: str = "function") -> "BoundaryData":
        """Take every boundary value from one function g(t, x, v) on the half-space."""

        def inflow(t: float, v: FloatArray) -> FloatArray:
            return np.asarray(g(t, np.zeros_like(v), v), dtype=np.float64)

        def initial(x: FloatArray, v: FloatArray) -> FloatArray:
            x_b, v_b = np.broadcast_arrays(x, v)
            return np.asarray(g(np.full(x_b.shape, t0), x_b, v_b), dtype=np.float64)

        def edge(t: float, x: FloatArray, v: FloatArray) -> FloatArray:
            x_b, v_b = np.broadcast_arrays(x, v)
            return np.asarray(g(np.full(x_b.shape, t), x_b, v_b), dtype=np.float64)

        return cls(inflow=inflow, initial=initial, truncation=edge, far_field=edge, name=name)

    def outer(self, t: float, x: float, v: FloatArray) -> FloatArray:
        """Value entering through x = −X."""
        if self.far_field is not None:
            return np.asarray(self.far_field(t, np.full_like(v, x), v), dtype=np.float64)
        return np.asarray(self.initial(np.full_like(v, x), v), dtype=np.float64)


@dataclass(eq=False)
class SolutionField:
    """Stored time slices of a solver run.

    Attributes:
        times: Stored time levels, shape (n_s,).
        x: x nodes, shape (n_x + 1,).
        v: v nodes, shape (n_v + 1,).
        values: f at the stored levels, shape (n_s, n_x + 1, n_v + 1).
        metadata: Scheme, steps, coefficient and data labels, data range.

    """

    times: FloatArray
    x: FloatArray
    v: FloatArray
    values: FloatArray
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Check the array shapes agree."""
        expected = (self.times.size, self.x.size, self.v.size)
        if self.values.shape != expected:
            msg = f"Field values have shape {self.values.shape}, expected {expected}"
            raise DomainError(msg)

    @property
    def final(self) -> FloatArray:
        """The slice at the last stored time."""
        return self.values[-1]

    def velocity_index(self, v_query: float) -> int:
        """Nearest v node, warning when the query is not on the grid."""
        if self.v.size == 0:
            msg = "Solution field has an empty velocity grid"
            raise DegenerateInputError(msg)
        index = int(np.argmin(np.abs(self.v - v_query)))
        spacing = float(self.v[1] - self.v[0]) if self.v.size > 1 else 1.0
        if abs(self.v[index] - v_query) > 1e-9 * spacing:
            logger.warning("Snapped v=%g to nearest grid velocity %g", v_query, self.v[index])
        return index

    def interpolator(self) -> interpolate.RegularGridInterpolator:
        """Linear interpolator over (x, v) at the final time, or (t, x, v) when several slices exist."""
        if self.times.size == 1:
            return interpolate.RegularGridInterpolator((self.x, self.v), self.final)
        return interpolate.RegularGridInterpolator((self.times, self.x, self.v), self.values)

    def at(self, t: ArrayLike, x: ArrayLike, v: ArrayLike) -> FloatArray:
        """Interpolate the field; t is ignored when only the final slice is stored."""
        x_b, v_b = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(v, dtype=np.float64))
        if self.times.size == 1:
            points = np.stack([x_b.ravel(), v_b.ravel()], axis=-1)
        else:
            t_b = np.broadcast_to(np.asarray(t, dtype=np.float64), x_b.shape)
            points = np.stack([t_b.ravel(), x_b.ravel(), v_b.ravel()], axis=-1)
        return self.interpolator()(points).reshape(x_b.shape)


@dataclass(eq=False)
class ParticleEnsemble:
    """State of n backward particles for one query point.

    Attributes:
        tau: Elapsed backward time per particle.
        X: Positions.
        V: Velocities.
        integral: Accumulated ∫S along each path.
        value: Collected boundary value (valid once exited).
        exited: Whether a particle has stopped.
        seed: Base seed; particle k reads stream words indexed by (step, k).

    """

    tau: FloatArray
    X: FloatArray
    V: FloatArray
    integral: FloatArray
    value: FloatArray
    exited: np.ndarray
    seed: int

    @classmethod
    def launch(cls, x: float, v: float, n: int, seed: int) -> "ParticleEnsemble":
        """Start n particles at (x, v)."""
        if n <= 0:
            msg = f"Particle count must be positive, got {n}"
            raise DomainError(msg)
        return cls(
            tau=np.zeros(n),
            X=np.full(n, float(x)),
            V=np.full(n, float(v)),
            integral=np.zeros(n),
            value=np.zeros(n),
            exited=np.zeros(n, dtype=bool),
            seed=seed,
        )

    def __len__(self) -> int:
        """Return the number of particles."""
        return int(self.X.size)

    @property
    def estimates(self) -> FloatArray:
        """Per-particle estimate: collected value plus source integral."""
        return self.value + self.integral


@dataclass(frozen=True)
class BoundaryTrace:
    """Final-time values along x at one fixed incoming velocity."""

    v: float
    x: FloatArray
    f: FloatArray

    def pairs(self) -> list[tuple[float, float]]:
        """Return the trace as (x, f) pairs."""
        return [(float(a), float(b)) for a, b in zip(self.x, self.f, strict=True)]


@dataclass(frozen=True)
class MaxPrincipleReport:
    """Comparison of a solution with its data bounds.

    The admissible band is [data_min − allowance, data_max + allowance] with
    allowance = |T₀|·sup|S| + tolerance.
    """

    field_min: float
    field_max: float
    data_min: float
    data_max: float
    allowance: float

    @property
    def overshoot(self) -> float:
        """Largest excursion beyond the admissible band (0 when inside)."""
        above = self.field_max - (self.data_max + self.allowance)
        below = (self.data_min - self.allowance) - self.field_min
        return max(above, below, 0.0)

    @property
    def ok(self) -> bool:
        """Whether the field stays inside the band."""
        return self.overshoot == 0.0
