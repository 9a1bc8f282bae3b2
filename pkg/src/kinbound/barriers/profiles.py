"""Radial profiles composed with the quasi-distance.

* :class:`ExpBarrierState`: the exponentially flat profile Φ with
  τ²Φ″ = ΘΦ′, normalized by Φ(τ₀) = 0 and Φ(9τ₀) = 1;
* :func:`varphi_power`: the power profile φ used around grazing points;
* :func:`grazing_Psi`: the time-shifted stationary barrier ψ − 2v_d − v_d² − t.
"""

import logging
import math
from dataclasses import dataclass
from typing import ClassVar, overload

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate

from kinbound.errors import DomainError
from kinbound.geometry.models import FloatArray
from kinbound.special.psi import psi_exact

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ExpBarrierState:
    """Φ(τ) = ∫_{τ₀}^τ e^{−Θ/s} ds / ∫_{τ₀}^{9τ₀} e^{−Θ/s} ds for τ ≥ 0.

    The integral is accumulated over a node grid with τ₀ and 9τ₀ as exact
    nodes. Φ(τ) adds one quadrature from the node nearest τ on the side of
    τ₀, so values keep their relative accuracy where Φ is exponentially
    small. Derivatives are analytic, Φ′ = g/N and Φ″ = (Θ/τ²)Φ′.

    Attributes:
        Theta: Flatness Θ > 0.
        tau0: Inner radius τ₀ > 0.
        norm: N, the scaled integral over [τ₀, 9τ₀].
        nodes: Node abscissae.
        values: Φ at the nodes.

    """

    NODES_PER_TAU0: ClassVar[int] = 32
    QUAD_EPSREL: ClassVar[float] = 1e-12

    Theta: float
    tau0: float
    norm: float
    nodes: FloatArray
    values: FloatArray

    def _point(self, tau: float) -> float:
        k = int(np.searchsorted(self.nodes, tau, side="right")) - 1
        if self.nodes[k] == tau:
            return float(self.values[k])
        if k < self.NODES_PER_TAU0:
            k += 1
        return float(self.values[k]) + _segment(self.nodes[k], tau, self.Theta, self.tau0) / self.norm

    def Phi(self, tau: ArrayLike) -> FloatArray:
        """Φ(τ); negative τ is clipped to 0."""
        clipped = np.maximum(np.asarray(tau, dtype=np.float64), 0.0)
        flat = [self._point(float(value)) for value in np.atleast_1d(clipped).ravel()]
        return np.asarray(flat, dtype=np.float64).reshape(clipped.shape)

    def Phi_exact(self, tau: float) -> float:
        """Φ(τ) by one quadrature over [τ₀, τ]."""
        return _segment(self.tau0, tau, self.Theta, self.tau0) / self.norm

    def dPhi(self, tau: ArrayLike) -> FloatArray:
        """Φ′(τ) = e^{Θ/(9τ₀) − Θ/τ}/N, zero at τ ≤ 0."""
        values = np.asarray(tau, dtype=np.float64)
        safe = np.where(values > 0, values, 1.0)
        scaled = np.exp(self.Theta / (9.0 * self.tau0) - self.Theta / safe)
        return np.where(values > 0, scaled / self.norm, 0.0)

    def d2Phi(self, tau: ArrayLike) -> FloatArray:
        """Φ″(τ) = (Θ/τ²)Φ′(τ)."""
        values = np.asarray(tau, dtype=np.float64)
        safe = np.where(values > 0, values, 1.0)
        return np.where(values > 0, self.Theta / safe**2 * self.dPhi(values), 0.0)


def _segment(a: float, b: float, theta: float, tau0: float) -> float:
    """∫_a^b e^{Θ/(9τ₀) − Θ/s} ds with the factor at the upper end taken out."""
    if b < a:
        return -_segment(b, a, theta, tau0)
    if b <= 0.0 or b == a:
        return 0.0
    a = max(a, 0.0)

    def shifted(s: float) -> float:
        return math.exp(theta / b - theta / s) if s > 0.0 else 0.0

    value, _ = integrate.quad(
        shifted,
        a,
        b,
        epsabs=1e-15 * (b - a),
        epsrel=ExpBarrierState.QUAD_EPSREL,
    )
    return math.exp(theta / (9.0 * tau0) - theta / b) * value


def phi_ode_barrier(Theta: float, tau0: float) -> ExpBarrierState:
    """Build the exponentially flat barrier profile for (Θ, τ₀).

    Args:
        Theta: Flatness Θ > 0.
        tau0: Inner radius τ₀ > 0.

    Returns:
        The profile with its node sums and analytic derivatives.

    Raises:
        DomainError: If Θ or τ₀ is not positive.

    """
    if not (Theta > 0 and tau0 > 0):
        msg = f"Theta and tau0 must be positive, got Theta={Theta}, tau0={tau0}"
        raise DomainError(msg)

    count = 9 * ExpBarrierState.NODES_PER_TAU0
    inner = ExpBarrierState.NODES_PER_TAU0
    nodes = np.linspace(0.0, 9.0 * tau0, count + 1)
    nodes[inner] = tau0
    nodes[-1] = 9.0 * tau0
    increments = np.array([_segment(nodes[i], nodes[i + 1], Theta, tau0) for i in range(count)])

    # partial sums run away from τ₀ so no sum mixes signs
    offsets = np.zeros(count + 1)
    offsets[inner + 1 :] = np.cumsum(increments[inner:])
    offsets[:inner] = -np.cumsum(increments[:inner][::-1])[::-1]
    norm = float(offsets[-1])
    values = offsets / norm
    values[-1] = 1.0

    logger.debug("Exponential profile Theta=%g tau0=%g: N=%.6g", Theta, tau0, norm)
    return ExpBarrierState(Theta=Theta, tau0=tau0, norm=norm, nodes=nodes, values=values)


def _check_power(rho0: float, m: float) -> None:
    if not rho0 > 0:
        msg = f"rho0 must be positive, got {rho0}"
        raise DomainError(msg)
    if m < 1:
        msg = f"Exponent m must be at least 1, got {m}"
        raise DomainError(msg)


@overload
def varphi_power(rho0: float, m: float, rho_val: float) -> float: ...
@overload
def varphi_power(rho0: float, m: float, rho_val: FloatArray) -> FloatArray: ...
def varphi_power(rho0: float, m: float, rho_val: ArrayLike) -> float | FloatArray:
    """φ(ρ) = (ρ^{−m} − ρ₀^{−m}) / ((3ρ₀)^{−m} − ρ₀^{−m}).

    Written as (1 − u^{−m})/(1 − 3^{−m}) with u = ρ/ρ₀ so large m stays finite.

    Raises:
        DomainError: If ρ < ρ₀, ρ₀ ≤ 0 or m < 1.

    """
    _check_power(rho0, m)
    values = np.asarray(rho_val, dtype=np.float64)
    if np.any(values < rho0):
        msg = f"varphi_power needs rho >= rho0 = {rho0}"
        raise DomainError(msg)
    result = (1.0 - np.power(values / rho0, -m)) / (1.0 - 3.0**-m)
    return float(result) if values.ndim == 0 else result


def varphi_power_log_slope(rho0: float, m: float, rho_val: ArrayLike) -> FloatArray:
    """Return (φ′, φ″/φ′) at ρ, with φ″/φ′ = −(m + 1)/ρ."""
    _check_power(rho0, m)
    values = np.asarray(rho_val, dtype=np.float64)
    u = values / rho0
    first = m * np.power(u, -m - 1.0) / (rho0 * (1.0 - 3.0**-m))
    return np.stack([first, -(m + 1.0) / values])


@overload
def grazing_Psi(t: float, x_d: float, v_d: float) -> float: ...
@overload
def grazing_Psi(t: ArrayLike, x_d: ArrayLike, v_d: ArrayLike) -> FloatArray: ...
def grazing_Psi(t: ArrayLike, x_d: ArrayLike, v_d: ArrayLike) -> float | FloatArray:
    """Ψ(t, x, v) = ψ(x_d, v_d) − 2v_d − v_d² − t, with ℒ₀Ψ = 1 in {x_d ≤ 0}.

    Raises:
        DomainError: If x_d > 0.

    """
    t_arr = np.asarray(t, dtype=np.float64)
    v_arr = np.asarray(v_d, dtype=np.float64)
    result = psi_exact(x_d, v_arr) - 2.0 * v_arr - v_arr**2 - t_arr
    result = np.asarray(result, dtype=np.float64)
    return float(result) if result.ndim == 0 else result
