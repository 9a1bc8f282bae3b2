"""The explicit stationary solution ψ near the grazing set.

With τ = −v_d³/(9x_d), the function ψ(x, v) = (−x_d)^{1/6}·Υ(τ) solves
v·∂_xψ = ∂_v²ψ in {x_d < 0}, vanishes on the incoming boundary and grows like
√v_d on the outgoing one. The profile Υ solves Kummer's equation

    τΥ″ + (2/3 − τ)Υ′ + Υ/6 = 0

and is taken as U(−1/6, 2/3, τ) for τ ≥ 0 and (e^τ/6)·U(5/6, 2/3, −τ) for
τ < 0. Both branches agree at 0 with Υ(0) = Γ(1/3)/Γ(1/6). Υ is smooth in the
signed cube root s = τ^{1/3} (proportional to v_d), not in τ: dΥ/ds at 0 equals
Γ(−1/3)/Γ(−1/6) from either side while dΥ/dτ is unbounded there.

Asymptotically Υ(τ) ~ τ^{1/6} as τ → +∞ and Υ(τ) ~ (e^τ/6)|τ|^{−5/6} as
τ → −∞, so ψ behaves like (−x_d)^{1/6} in 𝓡₀, like 9^{−1/6}√v_d in 𝓡₊ and like
√|v_d|·e^{τ}/(1 + |τ|) in 𝓡₋, up to bounded factors.
"""

import math
from dataclasses import dataclass
from enum import StrEnum
from typing import overload

import numpy as np
from numpy.typing import ArrayLike

from kinbound.errors import DomainError
from kinbound.geometry.models import FloatArray
from kinbound.special.gamma import gamma_fn
from kinbound.special.tricomi import tricomi_u

A_GROWING = -1.0 / 6.0
A_DECAYING = 5.0 / 6.0
B_PROFILE = 2.0 / 3.0
BOUNDARY_FACTOR = 9.0 ** (-1.0 / 6.0)
COMPARABILITY_LIMIT = 10.0


def _upsilon_array(tau: FloatArray) -> FloatArray:
    result = np.empty_like(tau)
    positive = tau >= 0.0
    result[positive] = tricomi_u(A_GROWING, B_PROFILE, tau[positive])
    negative = ~positive
    if np.any(negative):
        t = tau[negative]
        result[negative] = np.exp(t) / 6.0 * tricomi_u(A_DECAYING, B_PROFILE, -t)
    return result


def _log_upsilon_array(tau: FloatArray) -> FloatArray:
    result = np.empty_like(tau)
    positive = tau >= 0.0
    result[positive] = np.log(tricomi_u(A_GROWING, B_PROFILE, tau[positive]))
    negative = ~positive
    if np.any(negative):
        t = tau[negative]
        result[negative] = t - math.log(6.0) + np.log(tricomi_u(A_DECAYING, B_PROFILE, -t))
    return result


@overload
def upsilon(tau: float) -> float: ...
@overload
def upsilon(tau: FloatArray) -> FloatArray: ...
def upsilon(tau: ArrayLike) -> float | FloatArray:
    """Evaluate the profile Υ(τ) for real τ.

    Raises:
        UnsupportedParameterError: Propagated from :func:`tricomi_u`.

    """
    values = np.asarray(tau, dtype=np.float64)
    result = _upsilon_array(np.atleast_1d(values).ravel())
    return float(result[0]) if values.ndim == 0 else result.reshape(values.shape)


@overload
def log_upsilon(tau: float) -> float: ...
@overload
def log_upsilon(tau: FloatArray) -> FloatArray: ...
def log_upsilon(tau: ArrayLike) -> float | FloatArray:
    """Evaluate log Υ(τ) without underflow for very negative τ."""
    values = np.asarray(tau, dtype=np.float64)
    result = _log_upsilon_array(np.atleast_1d(values).ravel())
    return float(result[0]) if values.ndim == 0 else result.reshape(values.shape)


def upsilon_at_zero() -> float:
    """Return Υ(0) = Γ(1/3)/Γ(1/6)."""
    return gamma_fn(1.0 / 3.0) / gamma_fn(1.0 / 6.0)


def upsilon_derivative_s0() -> float:
    """Return dΥ/ds at s = τ^{1/3} = 0, namely Γ(−1/3)/Γ(−1/6).

    Uses Γ(1/3) = (−2/3)·Γ(−2/3) for the sign bookkeeping.
    """
    return gamma_fn(-1.0 / 3.0) / gamma_fn(-1.0 / 6.0)


def _tau(x_d: FloatArray, v_d: FloatArray) -> FloatArray:
    with np.errstate(over="ignore"):
        return -(v_d**3) / (9.0 * x_d)


def _check_half_space(x_d: FloatArray) -> None:
    if np.any(x_d > 0) or np.any(np.isnan(x_d)):
        msg = "psi is defined on x_d <= 0 only"
        raise DomainError(msg)


@overload
def psi_exact(x_d: float, v_d: float) -> float: ...
@overload
def psi_exact(x_d: ArrayLike, v_d: ArrayLike) -> FloatArray: ...
def psi_exact(x_d: ArrayLike, v_d: ArrayLike) -> float | FloatArray:
    """Evaluate ψ(x_d, v_d) = (−x_d)^{1/6}·Υ(−v_d³/(9x_d)) on {x_d ≤ 0}.

    On x_d = 0 the continuous extension is used: 0 for v_d ≤ 0 and
    9^{−1/6}·√v_d for v_d > 0.

    Args:
        x_d: Normal position(s), non-positive.
        v_d: Normal velocity(ies); broadcast against ``x_d``.

    Returns:
        ψ with the broadcast shape of the inputs.

    Raises:
        DomainError: If any x_d is positive.

    """
    x_arr, v_arr = np.broadcast_arrays(
        np.asarray(x_d, dtype=np.float64), np.asarray(v_d, dtype=np.float64)
    )
    _check_half_space(x_arr)
    x_flat, v_flat = np.atleast_1d(x_arr).ravel(), np.atleast_1d(v_arr).ravel()

    result = np.zeros_like(x_flat)
    interior = x_flat < 0.0
    if np.any(interior):
        x_in, v_in = x_flat[interior], v_flat[interior]
        result[interior] = np.power(-x_in, 1.0 / 6.0) * _upsilon_array(_tau(x_in, v_in))
    outgoing = (~interior) & (v_flat > 0.0)
    result[outgoing] = BOUNDARY_FACTOR * np.sqrt(v_flat[outgoing])

    if x_arr.ndim == 0:
        return float(result[0])
    return result.reshape(x_arr.shape)


def log_psi(x_d: ArrayLike, v_d: ArrayLike) -> FloatArray:
    """Evaluate log ψ, returning −inf where ψ vanishes on the incoming boundary."""
    x_arr, v_arr = np.broadcast_arrays(
        np.asarray(x_d, dtype=np.float64), np.asarray(v_d, dtype=np.float64)
    )
    _check_half_space(x_arr)
    x_flat, v_flat = np.atleast_1d(x_arr).ravel(), np.atleast_1d(v_arr).ravel()

    result = np.full_like(x_flat, -np.inf)
    interior = x_flat < 0.0
    if np.any(interior):
        x_in, v_in = x_flat[interior], v_flat[interior]
        result[interior] = np.log(-x_in) / 6.0 + _log_upsilon_array(_tau(x_in, v_in))
    outgoing = (~interior) & (v_flat > 0.0)
    result[outgoing] = math.log(BOUNDARY_FACTOR) + 0.5 * np.log(v_flat[outgoing])
    return result.reshape(x_arr.shape)


class RegionTag(StrEnum):
    """Regions of the unit box where ψ has a single-term profile."""

    R0 = "R0"
    RPLUS = "Rplus"
    RMINUS = "Rminus"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class PsiRegion:
    """Region tag together with the c* it was computed for."""

    tag: RegionTag
    c_star: float


def classify_region(x_d: float, v_d: float, c_star: float) -> PsiRegion:
    """Classify a point of the unit box {|x_d| ≤ 1, |v_d| ≤ 1, x_d ≤ 0}.

    𝓡₀ = {0 ≤ (c*v_d)³ ≤ −x_d}, 𝓡₊ = {0 ≤ −x_d ≤ (c*v_d)³} and
    𝓡₋ = {0 < −x_d ≤ −(c*v_d)³}; shared boundaries resolve in the order
    𝓡₀, 𝓡₊, 𝓡₋. Points outside the box, with x_d > 0, or with v_d < 0 and
    −x_d > (c*|v_d|)³ are tagged ``outside``.

    Raises:
        DomainError: If c_star is not in (0, 1).

    """
    if not 0.0 < c_star < 1.0:
        msg = f"c_star must lie in (0, 1), got {c_star}"
        raise DomainError(msg)
    if abs(x_d) > 1.0 or abs(v_d) > 1.0 or x_d > 0.0:
        return PsiRegion(RegionTag.OUTSIDE, c_star)

    depth = -x_d
    cube = (c_star * v_d) ** 3
    if 0.0 <= cube <= depth:
        tag = RegionTag.R0
    elif 0.0 <= depth <= cube:
        tag = RegionTag.RPLUS
    elif 0.0 < depth <= -cube:
        tag = RegionTag.RMINUS
    else:
        tag = RegionTag.OUTSIDE
    return PsiRegion(tag, c_star)


@dataclass(frozen=True)
class RegionComparability:
    """Observed bounds c ≤ ψ/profile ≤ C on one region.

    Attributes:
        tag: Region.
        lower: Smallest observed ratio c.
        upper: Largest observed ratio C.
        samples: Number of sampled points.

    """

    tag: RegionTag
    lower: float
    upper: float
    samples: int

    @property
    def spread(self) -> float:
        """Return C/c."""
        return self.upper / self.lower if self.lower > 0 else math.inf


def sample_region(
    tag: RegionTag,
    c_star: float,
    n: int,
    rng: np.random.Generator,
) -> tuple[FloatArray, FloatArray]:
    """Draw n points (x_d, v_d) of a region by its parametric description."""
    w = 1.0 - rng.uniform(0.0, 1.0, size=n)  # (0, 1]
    match tag:
        case RegionTag.R0:
            v = rng.uniform(0.0, 1.0, size=n)
            floor = (c_star * v) ** 3
            x = -(floor + (1.0 - floor) * w)
        case RegionTag.RPLUS:
            v = 1.0 - rng.uniform(0.0, 1.0, size=n)
            x = -((c_star * v) ** 3) * (1.0 - w)
        case RegionTag.RMINUS:
            v = -(1.0 - rng.uniform(0.0, 1.0, size=n))
            x = -((c_star * np.abs(v)) ** 3) * w
        case RegionTag.OUTSIDE:
            msg = "Cannot sample the outside region"
            raise DomainError(msg)
    return x, v


def _log_profile(tag: RegionTag, x: FloatArray, v: FloatArray) -> FloatArray:
    match tag:
        case RegionTag.R0:
            return np.log(-x) / 6.0
        case RegionTag.RPLUS:
            return 0.5 * np.log(v)
        case _:
            tau = _tau(x, v)
            return 0.5 * np.log(np.abs(v)) + tau - np.log1p(np.abs(tau))


def psi_comparability(
    c_star: float,
    n: int = 10_000,
    seed: int = 0,
) -> dict[RegionTag, RegionComparability]:
    """Measure ψ against its single-term profile on each region.

    Ratios are formed in log space so that the exponentially small values of
    𝓡₋ do not underflow.
    """
    rng = np.random.default_rng(seed)
    report: dict[RegionTag, RegionComparability] = {}
    for tag in (RegionTag.R0, RegionTag.RPLUS, RegionTag.RMINUS):
        x, v = sample_region(tag, c_star, n, rng)
        ratio = np.exp(log_psi(x, v) - _log_profile(tag, x, v))
        report[tag] = RegionComparability(tag, float(ratio.min()), float(ratio.max()), n)
    return report


def calibrate_c_star(
    n: int = 10_000,
    seed: int = 0,
    limit: float = COMPARABILITY_LIMIT,
    max_halvings: int = 12,
) -> tuple[float, dict[RegionTag, RegionComparability]]:
    """Return the largest c* = 2^{−k}, k ≥ 1, with C/c ≤ ``limit`` on every region.

    Raises:
        DomainError: If no c* down to 2^{−max_halvings} qualifies.

    """
    for k in range(1, max_halvings + 1):
        c_star = 2.0**-k
        report = psi_comparability(c_star, n, seed)
        if all(entry.spread <= limit for entry in report.values()):
            return c_star, report
    msg = f"No c* >= 2^-{max_halvings} gives comparability spread <= {limit}"
    raise DomainError(msg)
