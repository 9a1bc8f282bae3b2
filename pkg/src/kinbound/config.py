"""Plain-text key-value configuration for solver runs and experiments.

A configuration file holds one ``key = value`` per line. ``#`` starts a
comment and blank lines are ignored. Values are typed by the matching
:class:`SolverConfig` field; tuples are comma-separated floats::

    # vanishing experiment, coarse
    n_x = 160
    n_v = 64
    probe_velocities = -0.4, -0.6, -0.8
    boundary = bump
"""

import dataclasses
import logging
import types
from dataclasses import dataclass
from pathlib import Path
from typing import Any, get_type_hints

from kinbound.certifier.models import CoefficientField
from kinbound.errors import ConfigError
from kinbound.solver.models import BoundaryData, HalfSpaceGrid
from kinbound.solver.registry import make_boundary_data, make_coefficients

logger = logging.getLogger(__name__)

_TRUE = frozenset({"1", "true", "yes", "on"})
_FALSE = frozenset({"0", "false", "no", "off"})


@dataclass
class SolverConfig:
    """Settings for the grid and Monte Carlo solvers and the experiments.

    Grid sizes and extents describe the run of :func:`solve` directly. The
    vanishing experiment rescales X, V and T₀ per probed velocity and keeps
    only the node counts.
    """

    x_extent: float = 1.0
    """Spatial extent X; the grid covers [−X, 0]."""
    n_x: int = 64
    """Number of x cells."""
    v_extent: float = 2.0
    """Velocity truncation V; the grid covers [−V, V]."""
    n_v: int = 64
    """Number of v cells (even)."""
    t0: float = -0.5
    """Initial time T₀ < 0; the solution is reported at t = 0."""
    n_t: int = 0
    """Number of time steps; 0 picks the smallest count satisfying ``cfl``."""
    cfl: float = 0.9
    """Target transport Courant number when ``n_t`` is 0."""
    store_every: int = 0
    """Keep a time slice every this many steps; 0 keeps the initial and final slices."""

    coefficients: str = "constant"
    """Coefficient registry name: constant, velocity-affine or table."""
    a0: float = 1.0
    """Diffusion constant term."""
    a1: float = 0.0
    """Diffusion tanh² amplitude (velocity-affine)."""
    b0: float = 0.0
    """Drift constant term."""
    b1: float = 0.0
    """Drift slope in v (velocity-affine)."""
    s0: float = 0.0
    """Constant source."""
    coefficient_table: str = ""
    """CSV with columns v, A, B, S for the table coefficients."""

    boundary: str = "one"
    """Boundary data registry name: zero, one, psi, psi-barrier, bump or table."""
    boundary_table: str = ""
    """CSV with columns v, f for tabulated inflow data."""

    mc_particles: int = 2000
    """Monte Carlo paths per query point."""
    mc_dt: float = 0.0
    """Monte Carlo backward step; 0 uses 1e-4 of the horizon."""
    mc_points: int = 20
    """Number of interior query points for grid/Monte Carlo comparison."""

    probe_velocities: tuple[float, ...] = (-0.4, -0.6, -0.8)
    """Incoming velocities probed by the vanishing experiment."""
    x_scale: float = 1.0
    """X = x_scale·|ṽ|³ in the vanishing experiment."""
    v_scale: float = 4.0
    """V = max(v_scale, 4)·|ṽ| in the vanishing experiment."""
    t_scale: float = 2.0
    """T₀ = −t_scale·ṽ² in the vanishing experiment."""
    fit_window: tuple[float, ...] = (5.0, 50.0)
    """Range of |ṽ|³/|x| used for the vanishing-rate fits."""
    exact_fit_window: tuple[float, ...] = (50.0, 500.0)
    """Range of |ṽ|³/|x| for the fits of the closed-form ψ, deep in its asymptotic regime."""
    min_r_squared: float = 0.95
    """Fit-quality gate."""
    exact_psi: bool = False
    """Evaluate the closed-form ψ instead of running the solver."""

    gradient_velocity: float = -0.5
    """Incoming velocity of the boundary point probed by the gradient experiment."""
    gradient_offsets: int = 8
    """Number of dyadic offsets per kinetic direction."""

    oscillation_radius: float = 0.5
    """Largest cylinder radius of the oscillation experiment."""
    oscillation_levels: int = 4
    """Number of dyadic levels."""
    oscillation_ratio: float = 0.5
    """Cylinder shrink factor c between levels."""
    oscillation_samples: int = 20_000
    """Samples per cylinder."""

    certificate_r_tilde: float = 1e-6
    """Barrier scale r̃ of the certificate an experiment relies on."""
    certificate_velocity: float = -0.6
    """Base velocity ṽ_d of that certificate."""
    certificate_samples: int = 100_000
    """Samples for that certificate."""

    seed: int = 0
    """Seed for every random stream of the run."""
    concurrent: bool = False
    """Run independent per-velocity solver instances concurrently."""

    def grid(self) -> HalfSpaceGrid:
        """Build the grid described by the extents and counts."""
        if self.n_t > 0:
            return HalfSpaceGrid(self.x_extent, self.n_x, self.v_extent, self.n_v, self.t0, self.n_t)
        return HalfSpaceGrid.from_cfl(self.x_extent, self.n_x, self.v_extent, self.n_v, self.t0, self.cfl)

    def coefficient_field(self) -> CoefficientField:
        """Build the configured coefficient field."""
        return make_coefficients(
            self.coefficients,
            a0=self.a0,
            a1=self.a1,
            b0=self.b0,
            b1=self.b1,
            s0=self.s0,
            coefficient_table=self.coefficient_table,
        )

    def boundary_data(self, grid: HalfSpaceGrid | None = None) -> BoundaryData:
        """Build the configured boundary data for ``grid`` (default: :meth:`grid`)."""
        return make_boundary_data(self.boundary, grid or self.grid(), boundary_table=self.boundary_table)

    def as_dict(self) -> dict[str, Any]:
        """Return the settings as a JSON-ready mapping."""
        return dataclasses.asdict(self)

    def replace(self, **changes: Any) -> "SolverConfig":  # noqa: ANN401
        """Return a copy with some fields changed."""
        return dataclasses.replace(self, **changes)


def _field_types() -> dict[str, Any]:
    hints = get_type_hints(SolverConfig)
    return {f.name: hints[f.name] for f in dataclasses.fields(SolverConfig)}


def _convert(key: str, raw: str, kind: Any, line_no: int) -> Any:  # noqa: ANN401
    try:
        if kind is bool:
            lowered = raw.lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            msg = f"expected a boolean, got {raw!r}"
            raise ValueError(msg)
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is str:
            return raw
        if isinstance(kind, types.GenericAlias) and kind.__origin__ is tuple:
            return tuple(float(part) for part in raw.split(",") if part.strip())
    except ValueError as e:
        msg = f"line {line_no}: invalid value for {key}: {e}"
        raise ConfigError(msg) from e
    msg = f"line {line_no}: unsupported field type for {key}"
    raise ConfigError(msg)


def parse_config(text: str) -> SolverConfig:
    """Parse configuration text into a :class:`SolverConfig`.

    Raises:
        ConfigError: On malformed lines, unknown or duplicate keys, invalid
            values or a failed consistency check, naming the line.

    """
    kinds = _field_types()
    values: dict[str, Any] = {}
    lines: dict[str, int] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        key, sep, raw = content.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or not key:
            msg = f"line {line_no}: expected 'key = value', got {line.strip()!r}"
            raise ConfigError(msg)
        if key not in kinds:
            msg = f"line {line_no}: unknown key {key!r}"
            raise ConfigError(msg)
        if key in values:
            msg = f"line {line_no}: duplicate key {key!r} (first set on line {lines[key]})"
            raise ConfigError(msg)
        values[key] = _convert(key, raw, kinds[key], line_no)
        lines[key] = line_no

    config = SolverConfig(**values)
    _validate(config, lines)
    logger.debug("Parsed configuration with %d keys", len(values))
    return config


def _validate(config: SolverConfig, lines: dict[str, int]) -> None:
    def fail(key: str, problem: str) -> None:
        where = f"line {lines[key]}: " if key in lines else ""
        msg = f"{where}{key} {problem}"
        raise ConfigError(msg)

    for key in ("n_x", "n_v", "mc_particles", "mc_points", "oscillation_levels", "oscillation_samples"):
        if getattr(config, key) < 1:
            fail(key, "must be positive")
    if config.n_v % 2:
        fail("n_v", "must be even")
    for key in ("n_t", "store_every", "gradient_offsets", "seed"):
        if getattr(config, key) < 0:
            fail(key, "must be non-negative")
    for key in ("x_extent", "v_extent", "cfl", "x_scale", "v_scale", "t_scale", "certificate_r_tilde"):
        if getattr(config, key) <= 0:
            fail(key, "must be positive")
    if config.t0 >= 0:
        fail("t0", "must be negative")
    if config.mc_dt < 0:
        fail("mc_dt", "must be non-negative")
    if not config.probe_velocities or any(v >= 0 for v in config.probe_velocities):
        fail("probe_velocities", "must list negative velocities")
    for key in ("fit_window", "exact_fit_window"):
        window = getattr(config, key)
        if len(window) != 2 or not 0 < window[0] < window[1]:  # noqa: PLR2004
            fail(key, "must be two increasing positive numbers")
    if not 0 < config.oscillation_ratio < 1:
        fail("oscillation_ratio", "must lie in (0, 1)")
    if config.gradient_velocity >= 0 or config.certificate_velocity >= 0:
        fail("gradient_velocity" if config.gradient_velocity >= 0 else "certificate_velocity", "must be negative")


def load_config(path: str | Path) -> SolverConfig:
    """Read and parse a configuration file.

    Raises:
        ConfigError: If the file cannot be read or does not parse.

    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"Cannot read configuration {path}: {e}"
        raise ConfigError(msg) from e
    config = parse_config(text)
    logger.info("✓ Loaded configuration from %s", path)
    return config
