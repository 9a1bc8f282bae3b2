"""Vanishing exponents at an incoming boundary point."""

import numpy as np
import pytest

from kinbound.certifier.models import Verdict
from kinbound.config import SolverConfig
from kinbound.experiments.gradient import gradient_grid, probe_offsets, run_gradient_experiment
from kinbound.solver.models import HalfSpaceGrid, SolutionField


@pytest.fixture
def linear_field(fast_config: SolverConfig) -> tuple[SolutionField, HalfSpaceGrid]:
    """Fixture for f = −x + v/2 stored at two times on the gradient grid."""
    grid = gradient_grid(fast_config)
    x_nodes, v_nodes = np.meshgrid(grid.x, grid.v, indexing="ij")
    slice_ = -x_nodes + 0.5 * v_nodes
    sol = SolutionField(np.array([grid.t0, 0.0]), grid.x, grid.v, np.stack([slice_, slice_]))
    return sol, grid


def test_gradient_grid_when_coarse_velocity_then_refined(fast_config: SolverConfig) -> None:
    grid = gradient_grid(fast_config)
    assert grid.n_v == 128
    assert grid.x_extent == pytest.approx(0.125)
    assert grid.v_extent == pytest.approx(2.0)


class TestProbeOffsets:
    """Dyadic offsets in the three kinetic directions."""

    def test_probe_offsets_when_linear_field_then_linear_differences(
        self,
        linear_field: tuple[SolutionField, HalfSpaceGrid],
    ) -> None:
        sol, grid = linear_field
        probes = probe_offsets(sol, grid, -0.5, 8)
        x_offsets, x_diff = probes["x"]
        assert np.allclose(x_diff, x_offsets)
        v_offsets, v_diff = probes["v"]
        assert v_offsets.size >= 3
        assert np.allclose(v_diff, 0.5 * v_offsets)
        t_offsets, t_diff = probes["t"]
        assert np.allclose(t_diff, 0.5 * t_offsets)

    def test_probe_offsets_when_fitted_then_unit_slope(
        self,
        linear_field: tuple[SolutionField, HalfSpaceGrid],
    ) -> None:
        sol, grid = linear_field
        offsets, differences = probe_offsets(sol, grid, -0.5, 8)["x"]
        slope, _ = np.polyfit(np.log(offsets), np.log(differences), 1)
        assert slope == pytest.approx(1.0, abs=1e-9)

    def test_probe_offsets_when_dyadic_then_capped_by_grid(
        self,
        linear_field: tuple[SolutionField, HalfSpaceGrid],
    ) -> None:
        sol, grid = linear_field
        offsets, _ = probe_offsets(sol, grid, -0.5, 16)["x"]
        assert offsets.max() <= grid.x_extent / 8 + 1e-15


def test_run_gradient_experiment_when_zero_data_then_degenerate(fast_config: SolverConfig) -> None:
    report = run_gradient_experiment(fast_config.replace(boundary="zero"))
    assert report.verdict is Verdict.DEGENERATE
    assert report.exit_code == 4
    assert "vanishes identically" in report.reasons[0]
    assert report.certificate["lemma"] == "phase-prop"

