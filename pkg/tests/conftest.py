"""Global fixtures for kinetic boundary lab tests."""

from pathlib import Path

import numpy as np
import pytest

from kinbound.certifier.models import CoefficientField
from kinbound.config import SolverConfig
from kinbound.solver.models import HalfSpaceGrid
from kinbound.utils.rng import counter_generator


@pytest.fixture
def rng() -> np.random.Generator:
    """Fixture for a reproducible counter-based generator."""
    return counter_generator(1234, 0)


@pytest.fixture
def unit_coefficients() -> CoefficientField:
    """Fixture for the model coefficients A = 1, B = 0, S = 0 in one dimension."""
    return CoefficientField.constant_field()


@pytest.fixture
def small_grid() -> HalfSpaceGrid:
    """Fixture for a coarse grid on (−1, 0] × (−2, 2) over (−0.5, 0]."""
    return HalfSpaceGrid.from_cfl(1.0, 16, 2.0, 16, -0.5, HalfSpaceGrid.DEFAULT_CFL)


@pytest.fixture
def fast_config() -> SolverConfig:
    """Fixture for a configuration with cheap certificates and small grids."""
    return SolverConfig(
        n_x=32,
        n_v=32,
        certificate_samples=2000,
        oscillation_samples=4000,
        mc_particles=400,
        seed=3,
    )


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    """Fixture for an output directory."""
    path = tmp_path / "out"
    path.mkdir()
    return path
