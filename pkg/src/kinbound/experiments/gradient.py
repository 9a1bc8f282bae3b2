"""Linear vanishing near an incoming boundary point.

At z₀ = (0, 0, ṽ) with ṽ < 0 and zero inflow nearby, |f(z) − f(z₀)| is
measured along dyadic offsets in each kinetic direction:

- x: z = (0, −δ, ṽ);
- v: z = (0, x₁, ṽ ± δ) at a fixed interior x₁, as a centred difference;
- t: z = (−δ, ṽδ, ṽ), on the characteristic through z₀.

The log-log slopes are the vanishing exponents; x and v must be close to 1.
"""

import logging

import numpy as np
from scipy import stats

from kinbound.config import SolverConfig
from kinbound.errors import DegenerateInputError
from kinbound.geometry.models import FloatArray
from kinbound.solver.grid import solve_grid
from kinbound.solver.models import HalfSpaceGrid, SolutionField

from .gate import gated_run
from .models import ExperimentKind, ExperimentReport, FitPoint

logger = logging.getLogger(__name__)

EXPONENT_BAND = (0.8, 1.2)
MIN_OFFSETS = 3
MIN_VELOCITY_CELLS = 128
MAX_X_FRACTION = 8
MAX_V_FRACTION = 4
PROBE_DEPTH_CELLS = 2
SIGNAL_FLOOR = 1e-300


def gradient_grid(config: SolverConfig) -> HalfSpaceGrid:
    """Grid in units of the probed speed, with at least 128 velocity cells."""
    speed = abs(config.gradient_velocity)
    return HalfSpaceGrid.from_cfl(
        config.x_scale * speed**3,
        config.n_x,
        max(config.v_scale, 4.0) * speed,
        max(config.n_v, MIN_VELOCITY_CELLS),
        -config.t_scale * speed**2,
        config.cfl,
    )


def _dyadic(count: int, limit: int) -> list[int]:
    return [2**m for m in range(count) if 2**m <= limit]


def _fit_direction(
    report: ExperimentReport,
    direction: str,
    offsets: FloatArray,
    differences: FloatArray,
) -> float | None:
    magnitude = np.abs(differences)
    keep = magnitude > SIGNAL_FLOOR
    if np.count_nonzero(keep) < MIN_OFFSETS:
        logger.warning("Only %d non-zero %s-offsets; exponent not fitted", np.count_nonzero(keep), direction)
        return None
    result = stats.linregress(np.log(offsets[keep]), np.log(magnitude[keep]))
    fitted = result.intercept + result.slope * np.log(offsets[keep])
    report.points.extend(
        FitPoint(direction, float(a), float(b), float(c))
        for a, b, c in zip(np.log(offsets[keep]), np.log(magnitude[keep]), fitted, strict=True)
    )
    report.fitted[f"exponent_{direction}"] = float(result.slope)
    report.fit_quality[f"r_squared_{direction}"] = float(result.rvalue**2)
    return float(result.slope)


def probe_offsets(
    sol: SolutionField,
    grid: HalfSpaceGrid,
    v_probe: float,
    count: int,
) -> dict[str, tuple[FloatArray, FloatArray]]:
    """Return (offset, f − f(z₀)) arrays for the x, v and t directions."""
    j0 = sol.velocity_index(v_probe)
    v0 = float(sol.v[j0])
    final = sol.final
    boundary_value = final[-1, j0]

    x_cells = np.array(_dyadic(count, grid.n_x // MAX_X_FRACTION))
    x_offsets = x_cells * grid.dx
    x_diff = final[grid.n_x - x_cells, j0] - boundary_value

    depth = grid.n_x - PROBE_DEPTH_CELLS
    v_cells = np.array(_dyadic(count, int(abs(v0) / (MAX_V_FRACTION * grid.dv))))
    if v_cells.size:
        v_offsets = v_cells * grid.dv
        v_diff = 0.5 * (final[depth, j0 + v_cells] - final[depth, j0 - v_cells])
    else:
        v_offsets = v_diff = np.array([])

    t_offsets = x_offsets / abs(v0)
    t_diff = sol.at(-t_offsets, v0 * t_offsets, np.full_like(t_offsets, v0)) - boundary_value
    return {"x": (x_offsets, x_diff), "v": (v_offsets, v_diff), "t": (t_offsets, t_diff)}


def _body(config: SolverConfig, report: ExperimentReport) -> None:
    grid = gradient_grid(config)
    sol = solve_grid(grid, config.coefficient_field(), config.boundary_data(grid), store_every=1)
    if float(np.max(np.abs(sol.final))) <= SIGNAL_FLOOR:
        msg = "Solution vanishes identically; nothing to fit"
        raise DegenerateInputError(msg)

    probes = probe_offsets(sol, grid, config.gradient_velocity, config.gradient_offsets)
    report.diagnostics["grid"] = grid.as_dict()
    for direction, (offsets, differences) in probes.items():
        exponent = _fit_direction(report, direction, offsets, differences)
        if direction == "t":
            continue
        if exponent is None:
            msg = f"No usable {direction}-offsets near the boundary point"
            raise DegenerateInputError(msg)
        report.check_band(f"exponent_{direction}", exponent, *EXPONENT_BAND)


def run_gradient_experiment(config: SolverConfig) -> ExperimentReport:
    """Fit vanishing exponents along the kinetic directions at an incoming point."""
    return gated_run(ExperimentKind.GRADIENT, config, _body)
