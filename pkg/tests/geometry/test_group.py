"""Group laws, kinetic scaling, gauge and cylinder membership."""

import numpy as np
import pytest

from kinbound.errors import DomainError
from kinbound.geometry.group import (
    compose,
    cylinder_contains,
    cylinder_contains_group_form,
    gauge,
    inverse,
    kinetic_degree,
    kinetic_scale,
)
from kinbound.geometry.models import KineticCylinder, MultiIndex, PhasePoint


def random_point(rng: np.random.Generator, d: int = 1, scale: float = 1.0) -> PhasePoint:
    return PhasePoint.of(
        scale * rng.uniform(-1.0, 1.0),
        scale * rng.uniform(-1.0, 1.0, size=d),
        scale * rng.uniform(-1.0, 1.0, size=d),
    )


class TestGroupLaws:
    """Composition, inverse and identity."""

    def test_compose_when_point_and_inverse_then_origin(self, rng: np.random.Generator) -> None:
        for _ in range(1000):
            z = random_point(rng, d=2)
            assert compose(z, inverse(z)).allclose(PhasePoint.origin(2), atol=1e-12)
            assert compose(inverse(z), z).allclose(PhasePoint.origin(2), atol=1e-12)

    def test_compose_when_identity_then_unchanged(self, rng: np.random.Generator) -> None:
        z = random_point(rng)
        origin = PhasePoint.origin()
        assert compose(origin, z).allclose(z, atol=0.0)
        assert compose(z, origin).allclose(z, atol=0.0)

    def test_compose_when_random_triples_then_associative(self, rng: np.random.Generator) -> None:
        for _ in range(10_000):
            a, b, c = (random_point(rng, scale=3.0) for _ in range(3))
            assert compose(compose(a, b), c).allclose(compose(a, compose(b, c)), atol=1e-10)

    def test_compose_matches_formula(self) -> None:
        z0 = PhasePoint.of(1.0, [2.0], [3.0])
        z = PhasePoint.of(-0.5, [1.0], [-1.0])
        result = compose(z0, z)
        assert result.t == pytest.approx(0.5)
        assert result.x[0] == pytest.approx(1.0 + 2.0 - 0.5 * 3.0)
        assert result.v[0] == pytest.approx(2.0)

    def test_compose_when_dimensions_differ_then_raises(self) -> None:
        with pytest.raises(DomainError, match="Dimension mismatch"):
            compose(PhasePoint.origin(1), PhasePoint.origin(2))


class TestScalingAndGauge:
    """Kinetic dilation and the homogeneous gauge."""

    def test_kinetic_scale_when_example_then_expected(self) -> None:
        scaled = kinetic_scale(PhasePoint.of(-1.0, [1.0], [1.0]), 0.5)
        assert scaled.allclose(PhasePoint.of(-0.25, [0.125], [0.5]), atol=1e-15)

    @pytest.mark.parametrize("r", [0.0, -1.0])
    def test_kinetic_scale_when_non_positive_then_raises(self, r: float) -> None:
        with pytest.raises(DomainError):
            kinetic_scale(PhasePoint.origin(), r)

    def test_gauge_when_scaled_then_homogeneous(self, rng: np.random.Generator) -> None:
        for _ in range(10_000):
            z = random_point(rng)
            r = float(rng.uniform(0.01, 10.0))
            assert gauge(kinetic_scale(z, r)) == pytest.approx(r * gauge(z), rel=1e-10)

    def test_gauge_when_inverted_then_comparable(self, rng: np.random.Generator) -> None:
        # ‖z⁻¹‖ ≤ 2‖z‖ since |−x + tv|^{1/3} ≤ (|x| + |t||v|)^{1/3}
        for _ in range(10_000):
            z = random_point(rng)
            assert gauge(inverse(z)) <= 2.0 * gauge(z) + 1e-12

    def test_gauge_when_composed_then_quasi_triangle(self, rng: np.random.Generator) -> None:
        for _ in range(10_000):
            a, b = random_point(rng), random_point(rng)
            assert gauge(compose(a, b)) <= 2.0 * (gauge(a) + gauge(b)) + 1e-12

    def test_gauge_examples(self) -> None:
        assert gauge(PhasePoint.of(-4.0, [1.0], [0.5])) == pytest.approx(2.0)
        assert gauge(PhasePoint.of(0.0, [-8.0], [0.0])) == pytest.approx(2.0)


class TestCylinders:
    """Explicit and group-form membership tests."""

    def test_cylinder_contains_when_forms_compared_then_agree(self, rng: np.random.Generator) -> None:
        for _ in range(10_000):
            center = random_point(rng)
            cylinder = KineticCylinder(center, float(rng.uniform(0.2, 1.5)))
            z = random_point(rng, scale=2.0)
            assert cylinder_contains(cylinder, z) == cylinder_contains_group_form(cylinder, z)

    def test_cylinder_contains_when_top_time_then_closed(self) -> None:
        cylinder = KineticCylinder(PhasePoint.origin(), 1.0)
        assert cylinder_contains(cylinder, PhasePoint.origin())
        assert not cylinder_contains(cylinder, PhasePoint.of(1e-9, [0.0], [0.0]))
        assert not cylinder_contains(cylinder, PhasePoint.of(-1.0, [0.0], [0.0]))

    def test_cylinder_contains_follows_center_velocity(self) -> None:
        center = PhasePoint.of(0.0, [0.0], [1.0])
        cylinder = KineticCylinder(center, 1.0)
        # at t = −0.5 the sheared center sits at x = −0.5
        assert cylinder_contains(cylinder, PhasePoint.of(-0.5, [-0.5], [1.0]))
        assert not cylinder_contains(cylinder, PhasePoint.of(-0.5, [0.5], [1.0]))

    def test_cylinder_when_radius_not_positive_then_raises(self) -> None:
        with pytest.raises(DomainError):
            KineticCylinder(PhasePoint.origin(), 0.0)


def test_kinetic_degree_weights() -> None:
    assert kinetic_degree(MultiIndex(1, (1,), (2,))) == 2 + 3 + 2
    assert kinetic_degree(MultiIndex()) == 0


def test_multi_index_when_negative_then_raises() -> None:
    with pytest.raises(DomainError):
        MultiIndex(-1)
