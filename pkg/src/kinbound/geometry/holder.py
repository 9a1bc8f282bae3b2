"""Kinetic Hölder exponent estimation.

Oscillations are estimated by dense uniform sampling of kinetic cylinders and
exponents by ordinary least squares in log-log coordinates, radii entering as
given.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import stats

from kinbound.errors import DomainError
from kinbound.geometry.models import BatchField, FloatArray, KineticCylinder, PhaseSamples

logger = logging.getLogger(__name__)

DEFAULT_CYLINDER_SAMPLES = 100_000
MIN_FIT_SAMPLES = 3


@dataclass(frozen=True)
class HolderFit:
    """Result of a log-log exponent fit.

    Attributes:
        exponent: Least-squares slope of log ω against log r.
        r_squared: Coefficient of determination of the fit.
        intercept: Fitted log ω at r = 1.
        used: Number of samples that entered the fit.
        dropped: Number of samples discarded for non-positive oscillation.

    """

    exponent: float
    r_squared: float
    intercept: float
    used: int
    dropped: int


def fit_holder_exponent(samples: Sequence[tuple[float, float]]) -> HolderFit:
    """Fit ω(r) ≈ C·r^β through (radius, oscillation) pairs.

    Pairs with a non-positive oscillation are dropped and counted. Radii must be
    positive and distinct.

    Args:
        samples: Sequence of (r, ω(r)) pairs.

    Returns:
        The fitted exponent β and fit quality.

    Raises:
        DomainError: If a radius is non-positive, radii repeat, or fewer than
            three usable pairs remain.

    """
    radii = np.array([r for r, _ in samples], dtype=np.float64)
    oscillations = np.array([w for _, w in samples], dtype=np.float64)
    if np.any(radii <= 0):
        msg = "Radii must be positive"
        raise DomainError(msg)

    keep = oscillations > 0
    dropped = int(np.count_nonzero(~keep))
    if dropped:
        logger.warning("Dropped %d non-positive oscillation(s) from exponent fit", dropped)

    radii, oscillations = radii[keep], oscillations[keep]
    if radii.size < MIN_FIT_SAMPLES:
        msg = f"Need at least {MIN_FIT_SAMPLES} usable samples, got {radii.size}"
        raise DomainError(msg)
    if np.unique(radii).size != radii.size:
        msg = "Radii must be distinct"
        raise DomainError(msg)

    result = stats.linregress(np.log(radii), np.log(oscillations))
    return HolderFit(
        exponent=float(result.slope),
        r_squared=float(result.rvalue**2),
        intercept=float(result.intercept),
        used=int(radii.size),
        dropped=dropped,
    )


def _unit_ball(rng: np.random.Generator, n: int, d: int) -> FloatArray:
    """Draw n points uniformly from the open unit ball of ℝ^d."""
    if d == 1:
        return rng.uniform(-1.0, 1.0, size=(n, 1))
    directions = rng.standard_normal((n, d))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / d)
    return directions * radii


def sample_cylinder(
    cylinder: KineticCylinder,
    n: int,
    rng: np.random.Generator,
    *,
    half_space: bool = False,
) -> PhaseSamples:
    """Sample Q_r(z₀) uniformly through its group form z₀∘S_r(w).

    With ``half_space`` set only points with x_d ≤ 0 are kept, so the batch may
    hold fewer than n points; the unit-cylinder draw is mirrored in x_d when
    the center sits on the boundary with zero velocity, which keeps the full
    count for cylinders G_r centred on the grazing set.
    """
    z0, r = cylinder.center, cylinder.radius
    d = z0.d
    w_t = -rng.uniform(0.0, 1.0, size=n)
    w_x = _unit_ball(rng, n, d)
    w_v = _unit_ball(rng, n, d)
    if half_space and z0.x[-1] == 0.0 and z0.v[-1] == 0.0:
        w_x[:, -1] = -np.abs(w_x[:, -1])

    t = z0.t + r * r * w_t
    x = z0.x + r**3 * w_x + (r * r * w_t)[:, None] * z0.v
    v = z0.v + r * w_v
    samples = PhaseSamples(t, x, v)
    if half_space:
        samples = samples.subset(samples.x_d <= 0.0)
    return samples


def oscillation(
    field: BatchField,
    cylinder: KineticCylinder,
    rng: np.random.Generator,
    n: int = DEFAULT_CYLINDER_SAMPLES,
    *,
    half_space: bool = True,
    batch_size: int = 20_000,
) -> float:
    """Estimate sup − inf of a field over a (half-space) kinetic cylinder.

    Sampling proceeds in batches; the min/max reduction is order independent.
    """
    low, high = np.inf, -np.inf
    remaining = n
    while remaining > 0:
        size = min(batch_size, remaining)
        batch = sample_cylinder(cylinder, size, rng, half_space=half_space)
        remaining -= size
        if len(batch) == 0:
            continue
        values = field(batch)
        low = min(low, float(np.min(values)))
        high = max(high, float(np.max(values)))
    if not np.isfinite(high - low):
        msg = "No cylinder samples fell in the half-space"
        raise DomainError(msg)
    return high - low
