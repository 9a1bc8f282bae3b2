"""Parameter recipes, constraint checks and the anchor point."""

import logging
import math

from kinbound.barriers.models import AnchorPoint, BarrierMode, BarrierParams, ConstraintVerdict
from kinbound.errors import ConstraintViolationError, DomainError, WindowViolationError

logger = logging.getLogger(__name__)

RELATIVE_TOLERANCE = 1e-12


def _holds(lhs: float, rhs: float) -> bool:
    """lhs ≥ rhs up to a relative tolerance, so recipe equalities pass."""
    return lhs >= rhs - RELATIVE_TOLERANCE * max(abs(lhs), abs(rhs))


def admissibility_window(
    mode: BarrierMode,
    r_tilde: float,
    v_tilde_d: float,
    v0_weight: float,
    theta0: float,
) -> tuple[bool, str]:
    """Check r̃ against the recipe's admissibility window.

    Returns:
        Whether the window holds, and the inequality as text.

    """
    speed = abs(v_tilde_d)
    match mode:
        case BarrierMode.INCOMING_GRADIENT:
            bound = theta0 * min(speed, v0_weight**-2)
            return _holds(bound, r_tilde ** (1.0 / 3.0)), (
                f"r~^(1/3) = {r_tilde ** (1.0 / 3.0):.6g} <= "
                f"theta0*min(|v~_d|, <v0>^-2) = {bound:.6g}"
            )
        case BarrierMode.EXPONENTIAL:
            bound = theta0 * min(speed**3, v0_weight**-6)
            return _holds(bound, r_tilde), (
                f"r~ = {r_tilde:.6g} <= theta0*min(|v~_d|^3, <v0>^-6) = {bound:.6g}"
            )
        case BarrierMode.GRAZING:
            bound = min(speed**3, v0_weight**-6)
            return _holds(bound, r_tilde), (
                f"r~ = {r_tilde:.6g} <= min(|v~_d|^3, <v0>^-6) = {bound:.6g}"
            )


def select_params(
    mode: BarrierMode | str,
    r_tilde: float,
    v_tilde_d: float,
    v0_weight: float = 1.0,
    theta0: float | None = None,
    *,
    check_window: bool = True,
) -> BarrierParams:
    """Build (κ, 𝐚, 𝐛, 𝐜, 𝐡) from a recipe.

    Args:
        mode: Recipe family.
        r_tilde: Scale r̃ > 0.
        v_tilde_d: Base normal velocity ṽ_d < 0.
        v0_weight: ⟨v₀⟩ ≥ 1.
        theta0: Smallness constant; the mode's default when omitted.
        check_window: Raise when r̃ leaves the admissibility window. The
            certifier turns this off and reports the window instead.

    Returns:
        The barrier parameters.

    Raises:
        DomainError: If r̃ ≤ 0 or ṽ_d ≥ 0.
        WindowViolationError: If ``check_window`` and the window fails.

    """
    mode = BarrierMode(mode)
    if theta0 is None:
        theta0 = mode.default_theta0
    if r_tilde <= 0:
        msg = f"r_tilde must be positive, got {r_tilde}"
        raise DomainError(msg)
    if v_tilde_d >= 0:
        msg = f"v_tilde_d must be negative (incoming boundary), got {v_tilde_d}"
        raise DomainError(msg)

    window_ok, inequality = admissibility_window(mode, r_tilde, v_tilde_d, v0_weight, theta0)
    if not window_ok:
        if check_window:
            msg = f"{mode.value} recipe window violated: {inequality}"
            raise WindowViolationError(msg)
        logger.warning("Admissibility window fails for %s: %s", mode.value, inequality)

    speed = abs(v_tilde_d)
    r23 = r_tilde ** (2.0 / 3.0)
    match mode:
        case BarrierMode.INCOMING_GRADIENT:
            kappa, a, b, c, h = 1.0, 1.0 / r23, 1.0 / 16.0, r23 / 4.0, 1.0 / 36.0
        case BarrierMode.EXPONENTIAL:
            kappa, a, b, c, h = 1.0 / 64.0, speed**2 / r_tilde, speed, 64.0 * r_tilde, 1.0 / 36.0
        case BarrierMode.GRAZING:
            kappa, a, b, c, h = math.sqrt(theta0) / 256.0, 1.0 / r23, theta0, 2.0 * theta0 * r23, theta0

    return BarrierParams(
        mode=mode,
        r_tilde=r_tilde,
        kappa=kappa,
        a=a,
        b=b,
        c=c,
        h=h,
        v_tilde_d=v_tilde_d,
        v0_weight=v0_weight,
        theta0=theta0,
    )


def check_constraints(p: BarrierParams) -> ConstraintVerdict:
    """Evaluate the (abc), (vr) and (vrs) inequalities for a parameter set.

    Grazing barriers need (vr); the other recipes need (vrs).
    """
    speed = abs(p.v_tilde_d)
    ratio = math.sqrt(p.a / p.c)
    return ConstraintVerdict(
        sqrt_ac=_holds(math.sqrt(p.a * p.c), 8.0 * p.b),
        a_ge_4c=_holds(p.a, 4.0 * p.c),
        scale=_holds(p.v0_weight, ratio * p.r_tilde),
        vr=_holds(speed, 2.0 * p.b * p.r_tilde / p.c),
        vrs=_holds(speed, 8.0 * ratio * p.r_tilde),
        requires_vrs=p.mode is not BarrierMode.GRAZING,
    )


def anchor_point(p: BarrierParams) -> AnchorPoint:
    """Place the quasi-distance center.

    ξ_d = √(ac)·r̃/√(ac − b²), η_d = ṽ_d + (b/c)·ξ_d and ρ₀ = √a·r̃, so that
    ρ equals ρ₀ at the base point and the anchor lies outside the domain.

    Raises:
        ConstraintViolationError: If ac ≤ b².

    """
    ac = p.a * p.c
    gap = ac - p.b**2
    if gap <= 0:
        msg = f"Anchor undefined: ac = {ac:.6g} <= b^2 = {p.b**2:.6g}"
        raise ConstraintViolationError(msg)
    xi_d = math.sqrt(ac) * p.r_tilde / math.sqrt(gap)
    eta_d = p.v_tilde_d + (p.b / p.c) * xi_d
    return AnchorPoint(xi_d=xi_d, eta_d=eta_d, rho0=math.sqrt(p.a) * p.r_tilde)
