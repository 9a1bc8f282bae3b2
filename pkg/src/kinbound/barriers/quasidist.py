"""The anisotropic quasi-distance ρ, its time-shifted form ρ_t and the region 𝒫.

With X = x − (0′, ξ_d) and V = v − (0′, η_d),

    ρ(x, v)² = 𝐚|κx′|² + 𝐜|v′|² + 𝐚X_d² − 2𝐛X_dV_d + 𝐜V_d²,

and ρ_t(x, v) = ρ(xᵗ, v) with xᵗ_d = x_d − 𝐡ṽ_d t. The region 𝒫 is
{ρ₀ ≤ ρ ≤ 3ρ₀, x_d ≤ 0} and 𝒫_T adds t ≤ 0 with ρ replaced by ρ_t.

Positions and velocities are arrays whose last axis is the spatial dimension;
a scalar is read as a point in dimension one.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from kinbound.barriers.models import AnchorPoint, BarrierParams
from kinbound.errors import ConstraintViolationError, DomainError, SamplerStarvationError
from kinbound.geometry.models import FloatArray, PhaseSamples

logger = logging.getLogger(__name__)

MEMBERSHIP_TOLERANCE = 1e-12
RANGE_TOLERANCE = 1e-9
MAX_PROPOSALS = 10_000_000
PROPOSAL_BATCH = 200_000
DEFAULT_INFLATION = 1.1


def _phase_arrays(x: ArrayLike, v: ArrayLike) -> tuple[FloatArray, FloatArray]:
    x_arr = np.asarray(x, dtype=np.float64)
    v_arr = np.asarray(v, dtype=np.float64)
    if x_arr.ndim == 0:
        x_arr = x_arr[None]
    if v_arr.ndim == 0:
        v_arr = v_arr[None]
    if x_arr.shape[-1] != v_arr.shape[-1]:
        msg = f"Position dimension {x_arr.shape[-1]} differs from velocity dimension {v_arr.shape[-1]}"
        raise DomainError(msg)
    return x_arr, v_arr


@dataclass(frozen=True, eq=False)
class QuasiDistanceJet:
    """ρ_t² and the derivatives the kinetic operator needs, per sample.

    Attributes:
        q: ρ_t².
        dq_dt: ∂_t(ρ_t²) = −2𝐡ṽ_d(𝐚Xᵗ_d − 𝐛V_d).
        transport: v·∇_x(ρ_t²).
        w: Half the velocity gradient, (𝐜v′, 𝐜V_d − 𝐛Xᵗ_d), shape (..., d).
        c: D_v²(ρ_t²) = 2𝐜·I.
        X_d: Shifted normal offset Xᵗ_d.
        V_d: Normal velocity offset V_d.

    """

    q: FloatArray
    dq_dt: FloatArray
    transport: FloatArray
    w: FloatArray
    c: float
    X_d: FloatArray
    V_d: FloatArray


def rho_t_jet(
    p: BarrierParams,
    anchor: AnchorPoint,
    t: ArrayLike,
    x: ArrayLike,
    v: ArrayLike,
) -> QuasiDistanceJet:
    """Evaluate ρ_t² with its analytic first and second derivatives.

    Raises:
        ConstraintViolationError: If the quadratic form is negative somewhere.

    """
    x_arr, v_arr = _phase_arrays(x, v)
    t_arr = np.asarray(t, dtype=np.float64)
    X_d = x_arr[..., -1] - p.h * p.v_tilde_d * t_arr - anchor.xi_d
    V_d = v_arr[..., -1] - anchor.eta_d
    x_tan, v_tan = x_arr[..., :-1], v_arr[..., :-1]

    tangential = p.a * p.kappa**2 * np.sum(x_tan**2, axis=-1) + p.c * np.sum(v_tan**2, axis=-1)
    normal = p.a * X_d**2 - 2.0 * p.b * X_d * V_d + p.c * V_d**2
    q = tangential + normal
    scale = tangential + p.a * X_d**2 + p.c * V_d**2
    if np.any(q < -MEMBERSHIP_TOLERANCE * scale):
        msg = "Quasi-distance radicand is negative; check the (abc) constraints"
        raise ConstraintViolationError(msg)
    q = np.maximum(q, 0.0)

    slope = p.a * X_d - p.b * V_d
    w = np.concatenate([p.c * v_tan, (p.c * V_d - p.b * X_d)[..., None]], axis=-1)
    transport = 2.0 * p.a * p.kappa**2 * np.sum(v_tan * x_tan, axis=-1) + 2.0 * v_arr[..., -1] * slope
    return QuasiDistanceJet(
        q=q,
        dq_dt=-2.0 * p.h * p.v_tilde_d * slope,
        transport=transport,
        w=w,
        c=p.c,
        X_d=X_d,
        V_d=V_d,
    )


def rho(p: BarrierParams, anchor: AnchorPoint, x: ArrayLike, v: ArrayLike) -> float | FloatArray:
    """Evaluate ρ(x, v).

    Raises:
        ConstraintViolationError: If the radicand is negative.

    """
    return rho_t(p, anchor, 0.0, x, v)


def rho_t(
    p: BarrierParams,
    anchor: AnchorPoint,
    t: ArrayLike,
    x: ArrayLike,
    v: ArrayLike,
) -> float | FloatArray:
    """Evaluate ρ_t(x, v) = ρ(xᵗ, v)."""
    value = np.sqrt(rho_t_jet(p, anchor, t, x, v).q)
    return float(value) if value.ndim == 0 else value


def region_P_membership(
    p: BarrierParams,
    anchor: AnchorPoint,
    t: ArrayLike,
    x: ArrayLike,
    v: ArrayLike,
) -> bool | NDArray[np.bool_]:
    """Test ρ₀ ≤ ρ_t ≤ 3ρ₀, x_d ≤ 0 and t ≤ 0."""
    x_arr, v_arr = _phase_arrays(x, v)
    t_arr = np.asarray(t, dtype=np.float64)
    value = np.sqrt(rho_t_jet(p, anchor, t_arr, x_arr, v_arr).q)
    inside = (
        (value >= anchor.rho0 * (1.0 - MEMBERSHIP_TOLERANCE))
        & (value <= 3.0 * anchor.rho0 * (1.0 + MEMBERSHIP_TOLERANCE))
        & (x_arr[..., -1] <= 0.0)
        & (t_arr <= 0.0)
    )
    return bool(inside) if inside.ndim == 0 else inside


def range_box(
    p: BarrierParams,
    anchor: AnchorPoint,
    inflation: float = DEFAULT_INFLATION,
) -> dict[str, tuple[float, float]]:
    """Bounding box of 𝒫 from its range bounds, inflated by a factor.

    Keys ``x_tan``, ``x_d``, ``v_tan`` and ``v_d`` map to (low, high).
    """
    position = 4.0 * p.r_tilde * inflation
    velocity = math.sqrt(12.0 * p.a / p.c) * p.r_tilde * inflation
    return {
        "x_tan": (-position / p.kappa, position / p.kappa),
        "x_d": (anchor.xi_d - position, 0.0),
        "v_tan": (-velocity, velocity),
        "v_d": (anchor.eta_d - velocity, anchor.eta_d + velocity),
    }


def sample_region_P(
    p: BarrierParams,
    anchor: AnchorPoint,
    n: int,
    rng: np.random.Generator,
    *,
    d: int = 1,
    inflation: float = DEFAULT_INFLATION,
    max_proposals: int = MAX_PROPOSALS,
) -> PhaseSamples:
    """Draw n points of 𝒫 uniformly by rejection from its range box.

    Returned samples carry t = 0.

    Raises:
        SamplerStarvationError: If ``max_proposals`` proposals yield fewer than n hits.

    """
    box = range_box(p, anchor, inflation)
    accepted_x: list[FloatArray] = []
    accepted_v: list[FloatArray] = []
    count = 0
    proposals = 0
    while count < n:
        if proposals >= max_proposals:
            msg = f"Sampler for region P starved: {count}/{n} hits after {proposals} proposals"
            raise SamplerStarvationError(msg)
        batch = min(PROPOSAL_BATCH, max_proposals - proposals)
        proposals += batch
        x = np.empty((batch, d))
        v = np.empty((batch, d))
        x[:, :-1] = rng.uniform(*box["x_tan"], size=(batch, d - 1))
        x[:, -1] = rng.uniform(*box["x_d"], size=batch)
        v[:, :-1] = rng.uniform(*box["v_tan"], size=(batch, d - 1))
        v[:, -1] = rng.uniform(*box["v_d"], size=batch)
        hit = np.asarray(region_P_membership(p, anchor, 0.0, x, v))
        accepted_x.append(x[hit])
        accepted_v.append(v[hit])
        count += int(hit.sum())

    logger.debug("Region P sampler: %d hits from %d proposals", count, proposals)
    x_all = np.concatenate(accepted_x)[:n]
    v_all = np.concatenate(accepted_v)[:n]
    return PhaseSamples(np.zeros(n), x_all, v_all)


def sample_region_P_T(
    p: BarrierParams,
    anchor: AnchorPoint,
    n: int,
    rng: np.random.Generator,
    t_min: float,
    *,
    d: int = 1,
    max_proposals: int = MAX_PROPOSALS,
) -> PhaseSamples:
    """Draw n points of 𝒫_T with t uniform in (t_min, 0].

    The shifted point (xᵗ, v) is drawn from 𝒫 and moved back by 𝐡ṽ_d t;
    draws that leave {x_d ≤ 0} are rejected.

    Raises:
        SamplerStarvationError: If too few draws survive.

    """
    ts: list[FloatArray] = []
    xs: list[FloatArray] = []
    vs: list[FloatArray] = []
    count = 0
    proposals = 0
    while count < n:
        if proposals >= max_proposals:
            msg = f"Sampler for region P_T starved: {count}/{n} hits after {proposals} proposals"
            raise SamplerStarvationError(msg)
        batch = max(n - count, 1024)
        proposals += batch
        base = sample_region_P(p, anchor, batch, rng, d=d, max_proposals=max_proposals)
        t = t_min * rng.uniform(0.0, 1.0, size=batch)
        x = base.x.copy()
        x[:, -1] += p.h * p.v_tilde_d * t
        keep = x[:, -1] <= 0.0
        ts.append(t[keep])
        xs.append(x[keep])
        vs.append(base.v[keep])
        count += int(keep.sum())
    return PhaseSamples(np.concatenate(ts)[:n], np.concatenate(xs)[:n], np.concatenate(vs)[:n])


@dataclass(frozen=True)
class HypodistCheck:
    """Violation counts of the range and coercivity bounds over 𝒫 samples."""

    samples: int
    range_violations: int
    coercivity_vr_violations: int
    coercivity_vrs_violations: int
    min_margin: float

    @property
    def violations(self) -> int:
        """Total violations of the checks that apply."""
        return self.range_violations + self.coercivity_vr_violations + self.coercivity_vrs_violations


def check_hypodist(
    p: BarrierParams,
    anchor: AnchorPoint,
    samples: PhaseSamples,
    *,
    check_vr: bool = True,
    check_vrs: bool = True,
) -> HypodistCheck:
    """Count violations of the 𝒫 range bounds and the coercivity bounds.

    Range: |X_d| ≥ r̃, max(κ|x′|, |X_d|) ≤ 4r̃, max(|v′|, |V_d|) ≤ √(12a/c)·r̃.
    Under (vr): η_d(aX_d − bV_d) ≥ a·r̃·|ṽ_d|/4. Under (vrs) additionally
    |v_d| ≥ |ṽ_d|/2 and v_d(aX_d − bV_d) ≥ a·r̃·|ṽ_d|/4.

    The minimum margin is the smallest normalized slack over all checks run.
    """
    X_d = samples.x_d - anchor.xi_d
    V_d = samples.v_d - anchor.eta_d
    x_tan = np.linalg.norm(samples.x[:, :-1], axis=1)
    v_tan = np.linalg.norm(samples.v[:, :-1], axis=1)
    r = p.r_tilde
    velocity_bound = math.sqrt(12.0 * p.a / p.c) * r

    slack = [
        np.abs(X_d) / r - (1.0 - RANGE_TOLERANCE),
        1.0 - np.maximum(p.kappa * x_tan, np.abs(X_d)) / (4.0 * r),
        1.0 - np.maximum(v_tan, np.abs(V_d)) / velocity_bound,
    ]
    range_bad = np.zeros(len(samples), dtype=bool)
    for entry in slack:
        range_bad |= entry < 0

    floor = p.a * r * abs(p.v_tilde_d) / 4.0
    slope = p.a * X_d - p.b * V_d
    vr_bad = np.zeros(len(samples), dtype=bool)
    vrs_bad = np.zeros(len(samples), dtype=bool)
    if check_vr:
        vr_slack = anchor.eta_d * slope / floor - 1.0
        vr_bad = vr_slack < 0
        slack.append(vr_slack)
    if check_vrs:
        speed_slack = np.abs(samples.v_d) / (abs(p.v_tilde_d) / 2.0) - 1.0
        coercive_slack = samples.v_d * slope / floor - 1.0
        vrs_bad = (speed_slack < 0) | (coercive_slack < 0)
        slack.extend([speed_slack, coercive_slack])

    margin = float(min(np.min(entry) for entry in slack)) if len(samples) else math.inf
    return HypodistCheck(
        samples=len(samples),
        range_violations=int(range_bad.sum()),
        coercivity_vr_violations=int(vr_bad.sum()),
        coercivity_vrs_violations=int(vrs_bad.sum()),
        min_margin=margin,
    )
