"""Galilean group operations, kinetic scaling and the kinetic gauge."""

import math

import numpy as np

from kinbound.errors import DomainError
from kinbound.geometry.models import KineticCylinder, MultiIndex, PhasePoint


def _check_dimensions(z0: PhasePoint, z: PhasePoint) -> None:
    if z0.d != z.d:
        msg = f"Dimension mismatch: {z0.d} != {z.d}"
        raise DomainError(msg)


def compose(z0: PhasePoint, z: PhasePoint) -> PhasePoint:
    """Return z₀∘z = (t + t₀, x + x₀ + t·v₀, v + v₀).

    Raises:
        DomainError: If the points live in different dimensions.

    """
    _check_dimensions(z0, z)
    return PhasePoint.of(z.t + z0.t, z.x + z0.x + z.t * z0.v, z.v + z0.v)


def inverse(z: PhasePoint) -> PhasePoint:
    """Return z⁻¹ = (−t, −x + t·v, −v)."""
    return PhasePoint.of(-z.t, -z.x + z.t * z.v, -z.v)


def kinetic_scale(z: PhasePoint, r: float) -> PhasePoint:
    """Return S_r(z) = (r²t, r³x, rv).

    Raises:
        DomainError: If r is not positive.

    """
    if not r > 0:
        msg = f"Scaling factor must be positive, got {r}"
        raise DomainError(msg)
    return PhasePoint.of(r * r * z.t, r**3 * z.x, r * z.v)


def gauge(z: PhasePoint) -> float:
    """Return the kinetic gauge max{|t|^{1/2}, |x|^{1/3}, |v|}."""
    return max(
        math.sqrt(abs(z.t)),
        float(np.cbrt(np.linalg.norm(z.x))),
        float(np.linalg.norm(z.v)),
    )


def cylinder_contains(c: KineticCylinder, z: PhasePoint) -> bool:
    """Test membership in Q_r(z₀) through the explicit inequalities.

    The cylinder is t₀ − r² < t ≤ t₀, |x − x₀ − (t − t₀)v₀| < r³, |v − v₀| < r.
    """
    z0, r = c.center, c.radius
    _check_dimensions(z0, z)
    dt = z.t - z0.t
    if not -r * r < dt <= 0.0:
        return False
    if np.linalg.norm(z.x - z0.x - dt * z0.v) >= r**3:
        return False
    return bool(np.linalg.norm(z.v - z0.v) < r)


def cylinder_contains_group_form(c: KineticCylinder, z: PhasePoint) -> bool:
    """Test membership in Q_r(z₀) as {z₀∘S_r(w) : w ∈ (−1, 0] × B₁ × B₁}.

    The preimage w = S_{1/r}(z₀⁻¹∘z) is computed and tested against the unit
    cylinder. Agrees with :func:`cylinder_contains` away from round-off on the
    boundary.
    """
    w = kinetic_scale(compose(inverse(c.center), z), 1.0 / c.radius)
    return (
        -1.0 < w.t <= 0.0
        and bool(np.linalg.norm(w.x) < 1.0)
        and bool(np.linalg.norm(w.v) < 1.0)
    )


def kinetic_degree(m: MultiIndex) -> int:
    """Return 2·l_t + 3·|l_x| + |l_v|."""
    return 2 * m.l_t + 3 * sum(m.l_x) + sum(m.l_v)
