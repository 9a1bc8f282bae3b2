"""Named coefficients and boundary data."""

from pathlib import Path

import numpy as np
import pytest

from kinbound.errors import ConfigError
from kinbound.geometry.models import PhaseSamples
from kinbound.solver.models import HalfSpaceGrid
from kinbound.solver.registry import (
    BOUNDARY_DATA,
    COEFFICIENTS,
    bump_profile,
    make_boundary_data,
    make_coefficients,
)


class TestCoefficients:
    """Coefficient registry."""

    def test_make_coefficients_when_constant_then_parameters_used(self) -> None:
        coeff = make_coefficients("constant", a0=2.0, b0=0.5, s0=1.0)
        samples = PhaseSamples(np.zeros(3), np.zeros(3), np.zeros(3))
        assert np.allclose(coeff.diffusion(samples), 2.0)
        assert np.allclose(coeff.drift(samples), 0.5)
        assert np.allclose(coeff.source(samples), 1.0)

    def test_make_coefficients_when_unknown_then_lists_registered(self) -> None:
        with pytest.raises(ConfigError, match="constant, table, velocity-affine"):
            make_coefficients("quartic")

    def test_make_coefficients_when_invalid_parameters_then_config_error(self) -> None:
        with pytest.raises(ConfigError, match="velocity-affine"):
            make_coefficients("velocity-affine", a0=-1.0)

    def test_make_coefficients_when_table_then_interpolates(self, tmp_path: Path) -> None:
        table = tmp_path / "coefficients.csv"
        table.write_text("v,A,B,S\n1.0,3.0,0.0,1.0\n-1.0,1.0,0.5,0.0\n", encoding="utf-8")
        coeff = make_coefficients("table", coefficient_table=str(table))
        samples = PhaseSamples(np.zeros(3), np.zeros(3), np.array([-2.0, 0.0, 1.0]))
        assert np.allclose(coeff.diffusion(samples)[:, 0, 0], [1.0, 2.0, 3.0])
        assert np.allclose(coeff.source(samples), [0.0, 0.5, 1.0])
        assert coeff.lam == 1.0
        assert coeff.name == "table(coefficients.csv)"

    def test_make_coefficients_when_table_column_missing_then_raises(self, tmp_path: Path) -> None:
        table = tmp_path / "coefficients.csv"
        table.write_text("v,A,B\n0.0,1.0,0.0\n1.0,1.0,0.0\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="lacks columns"):
            make_coefficients("table", coefficient_table=str(table))

    def test_make_coefficients_when_table_path_missing_then_raises(self) -> None:
        with pytest.raises(ConfigError, match="coefficient_table"):
            make_coefficients("table")


class TestBoundaryData:
    """Boundary data registry."""

    def test_registry_when_listed_then_standard_names(self) -> None:
        assert {"zero", "one", "psi", "psi-barrier", "bump", "table"} <= set(BOUNDARY_DATA)
        assert {"constant", "velocity-affine", "table"} <= set(COEFFICIENTS)

    def test_make_boundary_data_when_unknown_then_raises(self, small_grid: HalfSpaceGrid) -> None:
        with pytest.raises(ConfigError, match="Unknown boundary data"):
            make_boundary_data("wavy", small_grid)

    def test_make_boundary_data_when_psi_then_zero_inflow(self, small_grid: HalfSpaceGrid) -> None:
        bdata = make_boundary_data("psi", small_grid)
        assert np.all(bdata.inflow(0.0, np.array([-1.0, -0.5, -0.1])) == 0.0)
        assert bdata.name == "psi"

    def test_make_boundary_data_when_table_then_inflow_interpolated(
        self,
        small_grid: HalfSpaceGrid,
        tmp_path: Path,
    ) -> None:
        table = tmp_path / "inflow.csv"
        table.write_text("v,f\n-2.0,1.0\n0.0,0.0\n", encoding="utf-8")
        bdata = make_boundary_data("table", small_grid, boundary_table=str(table))
        assert np.allclose(bdata.inflow(0.0, np.array([-1.0])), 0.5)
        assert np.all(bdata.initial(np.zeros(2), np.zeros(2)) == 0.0)

    def test_bump_profile_when_evaluated_then_supported_away_from_wall(self) -> None:
        x = np.linspace(-1.0, 0.0, 81)
        bump = bump_profile(x, 1.0)
        assert np.all((bump >= 0.0) & (bump <= 1.0))
        assert np.all(bump[x > -0.25] == 0.0)
        assert bump_profile(np.array([-0.625]), 1.0)[0] == pytest.approx(1.0)
