"""Vanishing rate of solutions at incoming boundary points.

With zero inflow the trace x ↦ f(0, x, ṽ) decays like exp(−β/|x|) as x → 0⁻.
Each trace is fitted with log|f| = α − β/|x| + γ log|x| over a window of
|ṽ|³/|x|, and the rates β are then fitted against |ṽ| in log-log form. The
closed-form ψ has β = |ṽ|³/9 exactly.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from kinbound.config import SolverConfig
from kinbound.errors import DegenerateInputError
from kinbound.geometry.models import FloatArray
from kinbound.solver.grid import boundary_profile, solve_grid
from kinbound.solver.models import BoundaryTrace, HalfSpaceGrid
from kinbound.solver.registry import make_boundary_data
from kinbound.special.psi import log_psi

from .gate import gated_run
from .models import ExperimentKind, ExperimentReport, FitPoint
from .sweep import sweep

logger = logging.getLogger(__name__)

TRACE_FLOOR = 1e-300
MIN_FIT_POINTS = 4
EXACT_TRACE_POINTS = 64
EXACT_RATE_TOLERANCE = 0.02
POWER_BAND = (2.5, 3.5)
TRUNCATION_TOLERANCE = 0.05
MIN_SPEED_RATIO = 4.0


@dataclass(frozen=True)
class RateFit:
    """Fit of log|f| = α − β/|x| + γ log|x| to one boundary trace."""

    v: float
    beta: float
    alpha: float
    gamma: float
    r_squared: float
    used: int
    below_floor: int
    points: list[FitPoint] = field(default_factory=list)


def fit_vanishing_rate(
    x: FloatArray,
    log_f: FloatArray,
    v: float,
    *,
    below_floor: int = 0,
    series: str = "",
) -> RateFit:
    """Least-squares fit of the vanishing model to (x, log|f|) with x < 0.

    Raises:
        DegenerateInputError: If fewer than four finite points remain.

    """
    x = np.asarray(x, dtype=np.float64)
    log_f = np.asarray(log_f, dtype=np.float64)
    keep = np.isfinite(log_f) & (x < 0)
    x, log_f = x[keep], log_f[keep]
    if x.size < MIN_FIT_POINTS:
        msg = f"Only {x.size} usable trace points at v={v:g}; need {MIN_FIT_POINTS}"
        raise DegenerateInputError(msg)

    distance = np.abs(x)
    design = np.column_stack([np.ones_like(distance), -1.0 / distance, np.log(distance)])
    coef, *_ = np.linalg.lstsq(design, log_f, rcond=None)
    fitted = design @ coef
    ss_res = float(np.sum((log_f - fitted) ** 2))
    ss_tot = float(np.sum((log_f - log_f.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else float(ss_res == 0.0)
    points = [
        FitPoint(series or f"v={v:g}", float(a), float(b), float(c))
        for a, b, c in zip(x, log_f, fitted, strict=True)
    ]
    return RateFit(
        v=v,
        alpha=float(coef[0]),
        beta=float(coef[1]),
        gamma=float(coef[2]),
        r_squared=r_squared,
        used=int(x.size),
        below_floor=below_floor,
        points=points,
    )


def fit_trace(trace: BoundaryTrace, window: tuple[float, ...], series: str = "") -> RateFit:
    """Fit a solver trace on the nodes with |v|³/|x| inside ``window``."""
    speed3 = abs(trace.v) ** 3
    interior = trace.x < 0
    ratio = np.full_like(trace.x, np.inf)
    ratio[interior] = speed3 / np.abs(trace.x[interior])
    in_window = interior & (ratio >= window[0]) & (ratio <= window[1])
    magnitude = np.abs(trace.f[in_window])
    floor = magnitude < TRACE_FLOOR
    below = int(np.count_nonzero(floor))
    if below:
        logger.warning("Excluded %d trace values below %g at v=%g", below, TRACE_FLOOR, trace.v)
    if not np.any(~floor):
        msg = f"Boundary trace at v={trace.v:g} vanishes on the whole fit window"
        raise DegenerateInputError(msg)
    x = trace.x[in_window][~floor]
    return fit_vanishing_rate(x, np.log(magnitude[~floor]), trace.v, below_floor=below, series=series)


def vanishing_grid(config: SolverConfig, v_probe: float, v_factor: int = 1) -> HalfSpaceGrid:
    """Grid in units of the probed speed: X ∝ |ṽ|³, V ∝ |ṽ|, T₀ ∝ ṽ²."""
    speed = abs(v_probe)
    return HalfSpaceGrid.from_cfl(
        config.x_scale * speed**3,
        config.n_x,
        max(config.v_scale, MIN_SPEED_RATIO) * speed * v_factor,
        config.n_v * v_factor,
        -config.t_scale * speed**2,
        config.cfl,
    )


def solve_trace(config: SolverConfig, v_probe: float, v_factor: int = 1) -> BoundaryTrace:
    """Solve with zero inflow and bump initial data, returning the trace at ṽ."""
    grid = vanishing_grid(config, v_probe, v_factor)
    solution = solve_grid(grid, config.coefficient_field(), make_boundary_data("bump", grid))
    return boundary_profile(solution, v_probe)


def _power_fit(fits: list[RateFit]) -> tuple[float, float]:
    speeds = np.array([abs(f.v) for f in fits])
    betas = np.array([f.beta for f in fits])
    result = stats.linregress(np.log(speeds), np.log(betas))
    return float(result.slope), float(result.rvalue**2)


def _exact_body(config: SolverConfig, report: ExperimentReport) -> None:
    low, high = config.exact_fit_window
    fits = []
    for v_probe in config.probe_velocities:
        speed3 = abs(v_probe) ** 3
        x = -np.geomspace(speed3 / high, speed3 / low, EXACT_TRACE_POINTS)
        fit = fit_vanishing_rate(x, log_psi(x, v_probe), v_probe)
        normalized = fit.beta * 9.0 / speed3
        report.fitted[f"normalized_rate[v={v_probe:g}]"] = normalized
        report.check_band(
            f"normalized_rate[v={v_probe:g}]",
            normalized,
            1.0 - EXACT_RATE_TOLERANCE,
            1.0 + EXACT_RATE_TOLERANCE,
        )
        fits.append(fit)
    _record_fits(config, report, fits)


def _solver_body(config: SolverConfig, report: ExperimentReport) -> None:
    probes = list(config.probe_velocities)
    tasks = [lambda v=v, k=k: solve_trace(config, v, k) for k in (1, 2) for v in probes]
    traces = sweep(tasks, concurrent=config.concurrent)
    base, wide = traces[: len(probes)], traces[len(probes) :]

    fits = [fit_trace(trace, config.fit_window) for trace in base]
    wide_fits = [fit_trace(trace, config.fit_window, series=f"v={trace.v:g},2V") for trace in wide]
    _record_fits(config, report, fits)

    for fit, wide_fit in zip(fits, wide_fits, strict=True):
        change = abs(wide_fit.beta - fit.beta) / abs(fit.beta) if fit.beta else math.inf
        report.fitted[f"truncation_change[v={fit.v:g}]"] = change
        report.check_band(f"truncation_change[v={fit.v:g}]", change, 0.0, TRUNCATION_TOLERANCE)


def _record_fits(config: SolverConfig, report: ExperimentReport, fits: list[RateFit]) -> None:
    for fit in fits:
        key = f"v={fit.v:g}"
        report.fitted[f"rate[{key}]"] = fit.beta
        report.fitted[f"gamma[{key}]"] = fit.gamma
        report.fit_quality[f"r_squared[{key}]"] = fit.r_squared
        report.diagnostics[f"below_floor[{key}]"] = fit.below_floor
        report.check_band(f"r_squared[{key}]", fit.r_squared, config.min_r_squared, 1.0)
        report.points.extend(fit.points)

    if any(fit.beta <= 0 for fit in fits):
        report.check_band("power", math.nan, *POWER_BAND)
        return
    if len(fits) < 2:  # noqa: PLR2004
        return
    power, r_squared = _power_fit(fits)
    report.fitted["power"] = power
    report.fit_quality["power_r_squared"] = r_squared
    report.check_band("power", power, *POWER_BAND)


def run_vanishing_experiment(config: SolverConfig) -> ExperimentReport:
    """Fit boundary vanishing rates at the configured incoming velocities.

    In exact-ψ mode the closed form replaces the solver and every normalized
    rate β·9/|ṽ|³ must lie in 1 ± 0.02. In solver mode the fitted power p of
    β ∝ |ṽ|^p must lie in 3 ± 0.5 and each rate must move by at most 5% when
    the velocity truncation doubles. Every accepted fit needs r² ≥ 0.95.
    """
    body = _exact_body if config.exact_psi else _solver_body
    return gated_run(ExperimentKind.VANISHING, config, body)
