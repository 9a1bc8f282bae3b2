"""Oscillation decay and Hölder regularity at the grazing point (0, 0, 0).

The oscillation of f over the half cylinders G_r = Q_r(0) ∩ {x ≤ 0} is
sampled at radii R, cR, c²R, …; consecutive ratios must stay below 0.95 and
the log-log slope gives the Hölder exponent. The stationary solution ψ is
homogeneous of degree 1/2 under kinetic scaling, so its exponent is exactly
1/2. Every level reuses the same random stream, so sampled points of
different levels are kinetic dilations of each other.
"""

import logging
import math

import numpy as np

from kinbound.config import SolverConfig
from kinbound.errors import DegenerateInputError, DomainError
from kinbound.geometry.holder import fit_holder_exponent, oscillation, sample_cylinder
from kinbound.geometry.models import BatchField, FloatArray, KineticCylinder, PhasePoint, PhaseSamples
from kinbound.solver.grid import solve_grid
from kinbound.solver.models import SolutionField
from kinbound.special.psi import psi_exact
from kinbound.utils.rng import counter_generator

from .gate import gated_run
from .models import ExperimentKind, ExperimentReport, FitPoint

logger = logging.getLogger(__name__)

DECAY_LIMIT = 0.95
SHARP_EXPONENT = 0.5
EXPONENT_TOLERANCE = 0.05
RESOLUTION_FLOOR = 1e-12
SMOOTHNESS_BANDS = 6


def gauge_batch(samples: PhaseSamples) -> FloatArray:
    """Kinetic gauge max{|t|^{1/2}, |x|^{1/3}, |v|} of each sample."""
    return np.maximum.reduce(
        [
            np.sqrt(np.abs(samples.t)),
            np.cbrt(np.linalg.norm(samples.x, axis=1)),
            np.linalg.norm(samples.v, axis=1),
        ]
    )


def psi_field(samples: PhaseSamples) -> FloatArray:
    """The stationary solution ψ evaluated on samples."""
    return np.asarray(psi_exact(samples.x_d, samples.v_d), dtype=np.float64)


def solution_field(sol: SolutionField) -> BatchField:
    """Wrap a stored solution as a batch field (linear interpolation)."""
    interpolator = sol.interpolator()

    def evaluate(samples: PhaseSamples) -> FloatArray:
        if sol.times.size == 1:
            points = np.column_stack([samples.x_d, samples.v_d])
        else:
            points = np.column_stack([samples.t, samples.x_d, samples.v_d])
        return interpolator(points)

    return evaluate


def _check_box(config: SolverConfig) -> None:
    radius = config.oscillation_radius
    if radius**3 > config.x_extent or radius > config.v_extent or radius**2 > abs(config.t0):
        msg = (
            f"Cylinder G_{radius:g} does not fit in the grid box "
            f"(X={config.x_extent:g}, V={config.v_extent:g}, T0={config.t0:g})"
        )
        raise DomainError(msg)


def oscillation_levels(
    field: BatchField,
    config: SolverConfig,
) -> list[tuple[float, float]]:
    """Sample (r, osc over G_r) at r = R·c^k for k = 0..levels."""
    origin = PhasePoint.origin()
    levels = []
    for k in range(config.oscillation_levels + 1):
        radius = config.oscillation_radius * config.oscillation_ratio**k
        rng = counter_generator(config.seed, 0)
        value = oscillation(field, KineticCylinder(origin, radius), rng, config.oscillation_samples)
        logger.debug("osc over G_%.4g = %.6g", radius, value)
        levels.append((radius, value))
    return levels


def holder_half_bound(field: BatchField, config: SolverConfig) -> float:
    """sup |f(z) − f(0)| / gauge(z)^{1/2} over samples of G_R."""
    rng = counter_generator(config.seed, 1)
    cylinder = KineticCylinder(PhasePoint.origin(), config.oscillation_radius)
    samples = sample_cylinder(cylinder, config.oscillation_samples, rng, half_space=True)
    distance = gauge_batch(samples)
    samples = samples.subset(distance > 0)
    center = float(field(PhaseSamples(np.zeros(1), np.zeros(1), np.zeros(1)))[0])
    quotient = np.abs(field(samples) - center) / np.sqrt(distance[distance > 0])
    return float(quotient.max(initial=0.0))


def _record_levels(report: ExperimentReport, levels: list[tuple[float, float]]) -> None:
    top = levels[0][1]
    if top <= RESOLUTION_FLOOR * max(1.0, abs(top)):
        msg = f"Oscillation over the largest cylinder is {top:.3g}; the field is constant"
        raise DegenerateInputError(msg)
    floor = [r for r, w in levels if w <= RESOLUTION_FLOOR]
    if floor:
        logger.warning("Oscillation below resolution floor at %d level(s)", len(floor))
        report.diagnostics["below_resolution"] = floor

    ratios = [levels[k + 1][1] / levels[k][1] for k in range(len(levels) - 1) if levels[k][1] > 0]
    decay = max(ratios)
    fit = fit_holder_exponent(levels)
    report.fitted["max_ratio"] = decay
    report.fitted["exponent"] = fit.exponent
    report.fit_quality["r_squared"] = fit.r_squared
    report.diagnostics["ratios"] = ratios
    report.points.extend(
        FitPoint("oscillation", math.log(r), math.log(w), fit.intercept + fit.exponent * math.log(r))
        for r, w in levels
        if w > 0
    )
    report.check_band("max_ratio", decay, 0.0, DECAY_LIMIT)


def _field(config: SolverConfig, report: ExperimentReport) -> BatchField:
    if config.exact_psi:
        return psi_field
    _check_box(config)
    grid = config.grid()
    sol = solve_grid(grid, config.coefficient_field(), config.boundary_data(grid), store_every=1)
    under = [
        config.oscillation_radius * config.oscillation_ratio**k
        for k in range(config.oscillation_levels + 1)
        if config.oscillation_radius * config.oscillation_ratio**k < 2.0 * grid.dv
    ]
    if under:
        logger.warning("%d cylinder level(s) are narrower than two velocity cells", len(under))
        report.diagnostics["under_resolved_radii"] = under
    return solution_field(sol)


def _oscillation_body(config: SolverConfig, report: ExperimentReport) -> None:
    field = _field(config, report)
    _record_levels(report, oscillation_levels(field, config))
    report.fitted["holder_half_bound"] = holder_half_bound(field, config)
    if config.exact_psi:
        report.check_band(
            "exponent",
            report.fitted["exponent"],
            SHARP_EXPONENT - EXPONENT_TOLERANCE,
            SHARP_EXPONENT + EXPONENT_TOLERANCE,
        )


def smoothness_bands(sol: SolutionField, bands: int = SMOOTHNESS_BANDS) -> dict[str, list[float]]:
    """Largest difference quotients of the final slice per kinetic distance band.

    Band k holds the nodes with 2^{−k−1} ≤ max(|x|^{1/3}, |v|) < 2^{−k}.
    """
    final = sol.final
    dx = float(sol.x[1] - sol.x[0])
    dv = float(sol.v[1] - sol.v[0])
    d_x, d_v = np.gradient(final, dx, dv)
    x_nodes, v_nodes = np.meshgrid(sol.x, sol.v, indexing="ij")
    distance = np.maximum(np.cbrt(np.abs(x_nodes)), np.abs(v_nodes))
    out: dict[str, list[float]] = {"lower": [], "upper": [], "max_dx": [], "max_dv": []}
    for k in range(bands):
        upper, lower = 2.0**-k, 2.0 ** -(k + 1)
        mask = (distance >= lower) & (distance < upper)
        if not mask.any():
            continue
        out["lower"].append(lower)
        out["upper"].append(upper)
        out["max_dx"].append(float(np.abs(d_x[mask]).max()))
        out["max_dv"].append(float(np.abs(d_v[mask]).max()))
    return out


def _holder_body(config: SolverConfig, report: ExperimentReport) -> None:
    _record_levels(report, oscillation_levels(psi_field, config))
    report.check_band(
        "exponent",
        report.fitted["exponent"],
        SHARP_EXPONENT - EXPONENT_TOLERANCE,
        SHARP_EXPONENT + EXPONENT_TOLERANCE,
    )
    if config.exact_psi:
        return

    grid = config.grid()
    sol = solve_grid(grid, config.coefficient_field(), config.boundary_data(grid))
    bands = smoothness_bands(sol)
    report.diagnostics["smoothness"] = bands
    finite = all(math.isfinite(value) for key in ("max_dx", "max_dv") for value in bands[key])
    report.fitted["smoothness_finite"] = float(finite)
    report.check_band("smoothness_finite", float(finite), 1.0, 1.0)


def run_oscillation_decay(config: SolverConfig) -> ExperimentReport:
    """Measure oscillation decay over shrinking grazing cylinders."""
    return gated_run(ExperimentKind.OSCILLATION, config, _oscillation_body)


def run_holder_experiment(config: SolverConfig) -> ExperimentReport:
    """Hölder exponent of ψ at grazing plus a solver smoothness sanity run."""
    return gated_run(ExperimentKind.HOLDER, config, _holder_body)
