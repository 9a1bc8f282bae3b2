"""Backward-characteristic Monte Carlo estimates."""

import numpy as np
import pytest

from kinbound.certifier.models import CoefficientField
from kinbound.errors import DomainError
from kinbound.geometry.models import PhasePoint
from kinbound.solver.grid import solve_grid
from kinbound.solver.models import BoundaryData, HalfSpaceGrid, ParticleEnsemble
from kinbound.solver.montecarlo import solve_mc
from kinbound.solver.registry import make_boundary_data
from kinbound.utils.rng import counter_generator

FAST_STEP = 5e-3


def _interior_points(count: int, seed: int) -> list[PhasePoint]:
    rng = counter_generator(seed, 0)
    return [
        PhasePoint.of(0.0, [float(rng.uniform(-0.8, -0.3))], [float(rng.uniform(-1.0, 1.0))]) for _ in range(count)
    ]


def test_solve_mc_when_constant_data_then_exact_with_zero_stderr(small_grid: HalfSpaceGrid) -> None:
    points = _interior_points(3, seed=0)
    coeff = CoefficientField.constant_field()
    results = solve_mc(points, coeff, BoundaryData.constant(1.0), 50, seed=1, dt_mc=FAST_STEP, grid=small_grid)
    assert len(results) == 3
    for mean, stderr in results:
        assert mean == pytest.approx(1.0, abs=1e-15)
        assert stderr == 0.0


def test_solve_mc_when_single_particle_then_stderr_zero(small_grid: HalfSpaceGrid) -> None:
    [(mean, stderr)] = solve_mc(
        [PhasePoint.of(0.0, [-0.5], [0.2])],
        CoefficientField.constant_field(),
        make_boundary_data("bump", small_grid),
        1,
        seed=2,
        dt_mc=FAST_STEP,
        grid=small_grid,
    )
    assert np.isfinite(mean)
    assert stderr == 0.0


def test_solve_mc_when_source_only_then_elapsed_time(small_grid: HalfSpaceGrid) -> None:
    # zero data and S = 1: every path carries its own exit time
    coeff = CoefficientField.constant_field(S=1.0)
    [(mean, _)] = solve_mc(
        [PhasePoint.of(0.0, [-0.5], [0.0])], coeff, BoundaryData.constant(0.0), 200, 3, FAST_STEP, grid=small_grid
    )
    assert 0.0 < mean <= abs(small_grid.t0) + 1e-12


def test_solve_mc_when_same_seed_then_reproducible(small_grid: HalfSpaceGrid) -> None:
    points = _interior_points(2, seed=5)
    bdata = make_boundary_data("psi", small_grid)
    coeff = CoefficientField.constant_field()
    first = solve_mc(points, coeff, bdata, 100, seed=9, dt_mc=FAST_STEP, grid=small_grid)
    second = solve_mc(points, coeff, bdata, 100, seed=9, dt_mc=FAST_STEP, grid=small_grid)
    assert first == second


@pytest.mark.parametrize(("n_particles", "dt_mc"), [(0, None), (-5, None), (10, 0.0), (10, -1e-3)])
def test_solve_mc_when_invalid_arguments_then_raises(
    n_particles: int,
    dt_mc: float | None,
    small_grid: HalfSpaceGrid,
) -> None:
    with pytest.raises(DomainError, match="must be positive"):
        solve_mc(
            [PhasePoint.of(0.0, [-0.5], [0.0])],
            CoefficientField.constant_field(),
            BoundaryData.constant(0.0),
            n_particles,
            0,
            dt_mc,
            grid=small_grid,
        )


def test_solve_mc_when_point_outside_box_then_raises(small_grid: HalfSpaceGrid) -> None:
    with pytest.raises(DomainError, match="outside the computational box"):
        solve_mc(
            [PhasePoint.of(0.0, [0.5], [0.0])],
            CoefficientField.constant_field(),
            BoundaryData.constant(0.0),
            10,
            0,
            FAST_STEP,
            grid=small_grid,
        )


def test_particle_ensemble_when_launched_then_at_start() -> None:
    ensemble = ParticleEnsemble.launch(-0.5, 0.3, 4, seed=0)
    assert len(ensemble) == 4
    assert np.all(ensemble.X == -0.5)
    assert not ensemble.exited.any()
    assert np.all(ensemble.estimates == 0.0)


@pytest.mark.slow
@pytest.mark.parametrize("data", ["one", "psi-barrier", "bump"])
def test_solve_mc_when_compared_with_grid_then_agree(data: str) -> None:
    grid = HalfSpaceGrid.from_cfl(1.0, 64, 2.0, 64, -0.5)
    coeff = CoefficientField.constant_field(S=1.0 if data == "psi-barrier" else 0.0)
    bdata = make_boundary_data(data, grid)
    sol = solve_grid(grid, coeff, bdata)
    points = _interior_points(20, seed=11)
    results = solve_mc(points, coeff, bdata, 2000, seed=4, grid=grid)
    truncation_allowance = 0.05
    for z, (mean, stderr) in zip(points, results, strict=True):
        reference = float(sol.at(0.0, z.x[0], z.v[0]))
        assert abs(mean - reference) <= 3.0 * stderr + truncation_allowance
