"""Boundary flattening for graph domains.

For Ω = {x_d < 𝒫(x′)} the map P(x) = (x′, x_d − 𝒫(x′)) sends ∂Ω to {y_d = 0}.
Under the change of variables ẑ = (t, P(x), P′(x)v) the kinetic equation keeps
its form with

    Â = P′ A P′ᵀ,    B̂ = P′ B − v⊗v : D²P.

Only the last component of P is curved, so D²P reduces to −D²𝒫 in the
(x′, x′) block of the last component.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from kinbound.errors import DomainError
from kinbound.geometry.models import FloatArray, GraphDomain, PhasePoint


@dataclass(frozen=True, eq=False)
class FlattenedCoefficients:
    """Coefficients and point after flattening.

    Attributes:
        A_hat: Transformed diffusion matrix P′AP′ᵀ.
        B_hat: Transformed drift P′B − v⊗v : D²P.
        z_hat: Transformed point (t, P(x), P′v).
        jacobian: The chart Jacobian P′ at x.
        chart_constant: C_Ω = max(σ_max(P′)², σ_min(P′)⁻²); the eigenvalues of
            Â lie in [λ/C_Ω, C_Ω·Λ].

    """

    A_hat: FloatArray
    B_hat: FloatArray
    z_hat: PhasePoint
    jacobian: FloatArray
    chart_constant: float


def _tangential(dom: GraphDomain, x: FloatArray) -> FloatArray:
    x_tan = x[:-1]
    center = np.asarray(dom.center, dtype=np.float64) if len(dom.center) else np.zeros_like(x_tan)
    if center.shape != x_tan.shape:
        msg = f"Chart center has dimension {center.size}, expected {x_tan.size}"
        raise DomainError(msg)
    if x_tan.size and np.linalg.norm(x_tan - center) > dom.validity_radius:
        msg = (
            f"Point x′={x_tan.tolist()} lies outside the chart "
            f"(radius {dom.validity_radius} around {center.tolist()})"
        )
        raise DomainError(msg)
    return x_tan


def _profile_gradient(dom: GraphDomain, x_tan: FloatArray) -> FloatArray:
    if dom.gradient is not None:
        return np.asarray(dom.gradient(x_tan), dtype=np.float64).reshape(x_tan.shape)
    if not dom.numeric_derivatives:
        msg = "Profile gradient is missing and numeric derivatives are disabled"
        raise DomainError(msg)
    h = dom.FD_STEP
    grad = np.empty_like(x_tan)
    for i in range(x_tan.size):
        e = np.zeros_like(x_tan)
        e[i] = h
        grad[i] = (dom.profile(x_tan + e) - dom.profile(x_tan - e)) / (2 * h)
    return grad


def _profile_hessian(dom: GraphDomain, x_tan: FloatArray) -> FloatArray:
    n = x_tan.size
    if dom.hessian is not None:
        return np.asarray(dom.hessian(x_tan), dtype=np.float64).reshape(n, n)
    if not dom.numeric_derivatives:
        msg = "Profile lacks second derivatives and numeric derivatives are disabled"
        raise DomainError(msg)
    h = dom.FD_STEP
    hess = np.empty((n, n))
    basis = np.eye(n) * h
    for i in range(n):
        for j in range(n):
            hess[i, j] = (
                dom.profile(x_tan + basis[i] + basis[j])
                - dom.profile(x_tan + basis[i] - basis[j])
                - dom.profile(x_tan - basis[i] + basis[j])
                + dom.profile(x_tan - basis[i] - basis[j])
            ) / (4 * h * h)
    return 0.5 * (hess + hess.T)


def flatten_coefficients(
    dom: GraphDomain,
    A: ArrayLike,
    B: ArrayLike,
    z: PhasePoint,
) -> FlattenedCoefficients:
    """Transform (A, B, z) into the flattened chart of a graph domain.

    Args:
        dom: The graph domain.
        A: Symmetric d×d diffusion matrix at z.
        B: Drift vector at z.
        z: Phase point with x inside the chart.

    Returns:
        The flattened coefficients, point and chart constant.

    Raises:
        DomainError: If x′ lies outside the chart, shapes mismatch, or a
            required derivative is unavailable.

    """
    d = z.d
    A_mat = np.asarray(A, dtype=np.float64).reshape(d, d)
    B_vec = np.asarray(B, dtype=np.float64).reshape(d)

    x_tan = _tangential(dom, z.x)
    grad = _profile_gradient(dom, x_tan)
    hess = _profile_hessian(dom, x_tan)
    profile_value = float(dom.profile(x_tan))

    jacobian = np.eye(d)
    jacobian[-1, :-1] = -grad

    y = z.x.copy()
    y[-1] = z.x[-1] - profile_value
    w = jacobian @ z.v

    A_hat = jacobian @ A_mat @ jacobian.T
    A_hat = 0.5 * (A_hat + A_hat.T)

    # (v⊗v : D²P)_d = −v′ᵀ D²𝒫 v′, other components vanish
    curvature = np.zeros(d)
    curvature[-1] = -float(z.v[:-1] @ hess @ z.v[:-1]) if d > 1 else 0.0
    B_hat = jacobian @ B_vec - curvature

    singular = np.linalg.svd(jacobian, compute_uv=False)
    chart_constant = float(max(singular[0] ** 2, singular[-1] ** -2))

    return FlattenedCoefficients(
        A_hat=A_hat,
        B_hat=B_hat,
        z_hat=PhasePoint.of(z.t, y, w),
        jacobian=jacobian,
        chart_constant=chart_constant,
    )
