"""Boundary flattening for graph domains."""

import numpy as np
import pytest

from kinbound.errors import DomainError
from kinbound.geometry.flatten import flatten_coefficients
from kinbound.geometry.models import GraphDomain, PhasePoint


def paraboloid(curvature: float) -> GraphDomain:
    return GraphDomain(
        profile=lambda xp: 0.5 * curvature * float(xp @ xp),
        validity_radius=1.0,
        gradient=lambda xp: curvature * xp,
        hessian=lambda xp: curvature * np.eye(xp.size),
    )


def test_flatten_when_half_space_then_identity() -> None:
    z = PhasePoint.of(-0.1, [0.2, -0.3], [0.5, -0.4])
    A = np.array([[2.0, 0.3], [0.3, 1.0]])
    result = flatten_coefficients(GraphDomain.flat(), A, [0.1, 0.2], z)
    assert np.allclose(result.A_hat, A)
    assert np.allclose(result.B_hat, [0.1, 0.2])
    assert result.z_hat.allclose(z)
    assert result.chart_constant == pytest.approx(1.0)


def test_flatten_when_curved_then_symmetric_with_unit_jacobian(rng: np.random.Generator) -> None:
    domain = paraboloid(0.8)
    for _ in range(200):
        m = rng.uniform(-1.0, 1.0, size=(3, 3))
        A = m @ m.T + np.eye(3)
        z = PhasePoint.of(0.0, rng.uniform(-0.5, 0.5, size=3), rng.uniform(-1.0, 1.0, size=3))
        result = flatten_coefficients(domain, A, np.zeros(3), z)
        assert np.allclose(result.A_hat, result.A_hat.T, atol=0.0)
        assert abs(np.linalg.det(result.jacobian)) == pytest.approx(1.0, abs=1e-12)
        eigenvalues = np.linalg.eigvalsh(result.A_hat)
        bounds = np.linalg.eigvalsh(A)
        assert eigenvalues[0] >= bounds[0] / result.chart_constant - 1e-12
        assert eigenvalues[-1] <= bounds[-1] * result.chart_constant + 1e-12


def test_flatten_when_curved_then_curvature_drift() -> None:
    domain = paraboloid(2.0)
    z = PhasePoint.of(0.0, [0.0, -0.1], [0.5, 0.0])
    result = flatten_coefficients(domain, np.eye(2), np.zeros(2), z)
    # (v⊗v : D²P)_d = −v′ᵀD²𝒫v′ = −0.5, so B̂_d = +0.5
    assert result.B_hat[-1] == pytest.approx(0.5)
    assert result.B_hat[0] == pytest.approx(0.0)


def test_flatten_when_numeric_derivatives_then_match_analytic() -> None:
    analytic = paraboloid(1.5)
    numeric = GraphDomain(profile=analytic.profile, validity_radius=1.0)
    z = PhasePoint.of(0.0, [0.3, -0.2], [0.7, 0.1])
    expected = flatten_coefficients(analytic, np.eye(2), np.zeros(2), z)
    result = flatten_coefficients(numeric, np.eye(2), np.zeros(2), z)
    assert np.allclose(result.A_hat, expected.A_hat, atol=1e-8)
    assert np.allclose(result.B_hat, expected.B_hat, atol=1e-4)


def test_flatten_when_outside_chart_then_raises() -> None:
    z = PhasePoint.of(0.0, [2.0, -0.1], [0.0, 0.0])
    with pytest.raises(DomainError, match="outside the chart"):
        flatten_coefficients(paraboloid(1.0), np.eye(2), np.zeros(2), z)


def test_flatten_when_derivatives_disabled_then_raises() -> None:
    domain = GraphDomain(profile=lambda xp: float(xp @ xp), validity_radius=1.0, numeric_derivatives=False)
    z = PhasePoint.of(0.0, [0.1, -0.1], [0.0, 0.0])
    with pytest.raises(DomainError, match="numeric derivatives are disabled"):
        flatten_coefficients(domain, np.eye(2), np.zeros(2), z)
