"""Named coefficient fields and boundary data selectable from configuration."""

import logging
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np

from kinbound.barriers.profiles import grazing_Psi
from kinbound.certifier.models import CoefficientField
from kinbound.errors import ConfigError
from kinbound.geometry.models import FloatArray, PhaseSamples
from kinbound.special.psi import psi_exact

from .models import BoundaryData, HalfSpaceGrid

logger = logging.getLogger(__name__)

type CoefficientFactory = Callable[..., CoefficientField]
type BoundaryFactory = Callable[..., BoundaryData]


def _read_table(path: str | Path, columns: tuple[str, ...]) -> dict[str, FloatArray]:
    """Read a CSV with a header row, sorted by its first column."""
    try:
        table = np.genfromtxt(path, delimiter=",", names=True, dtype=np.float64)
    except OSError as e:
        msg = f"Cannot read table {path}: {e}"
        raise ConfigError(msg) from e
    names = table.dtype.names or ()
    missing = [c for c in columns if c not in names]
    if missing:
        msg = f"Table {path} lacks columns {missing}; found {list(names)}"
        raise ConfigError(msg)
    table = np.atleast_1d(table)
    if table.size < 2:
        msg = f"Table {path} needs at least two rows"
        raise ConfigError(msg)
    order = np.argsort(table[columns[0]])
    data = {c: np.asarray(table[c], dtype=np.float64)[order] for c in columns}
    if not all(np.all(np.isfinite(col)) for col in data.values()):
        msg = f"Table {path} contains non-finite entries"
        raise ConfigError(msg)
    return data


def _constant(a0: float = 1.0, b0: float = 0.0, s0: float = 0.0, **_: Any) -> CoefficientField:
    return CoefficientField.constant_field(A=a0, B=b0, S=s0)


def _velocity_affine(
    a0: float = 1.0,
    a1: float = 0.0,
    b0: float = 0.0,
    b1: float = 0.0,
    s0: float = 0.0,
    **_: Any,
) -> CoefficientField:
    return CoefficientField.velocity_affine(a0=a0, a1=a1, b0=b0, b1=b1, s0=s0)


def _table_coefficients(coefficient_table: str = "", **_: Any) -> CoefficientField:
    """A, B and S tabulated against v, linearly interpolated, constant beyond the ends."""
    if not coefficient_table:
        msg = "The 'table' coefficients need coefficient_table = <csv path>"
        raise ConfigError(msg)
    data = _read_table(coefficient_table, ("v", "A", "B", "S"))
    if np.any(data["A"] <= 0):
        msg = f"Tabulated diffusion in {coefficient_table} must be positive"
        raise ConfigError(msg)

    def column(name: str) -> Callable[[PhaseSamples], FloatArray]:
        def evaluate(samples: PhaseSamples) -> FloatArray:
            return np.interp(samples.v_d, data["v"], data[name])

        return evaluate

    a_column = column("A")
    b_column = column("B")

    def diffusion(samples: PhaseSamples) -> FloatArray:
        return a_column(samples)[:, None, None]

    def drift(samples: PhaseSamples) -> FloatArray:
        return b_column(samples)[:, None]

    return CoefficientField(
        diffusion=diffusion,
        drift=drift,
        source=column("S"),
        lam=float(data["A"].min()),
        Lam=float(max(data["A"].max(), np.abs(data["B"]).max())),
        name=f"table({Path(coefficient_table).name})",
    )


COEFFICIENTS: dict[str, CoefficientFactory] = {
    "constant": _constant,
    "velocity-affine": _velocity_affine,
    "table": _table_coefficients,
}


def _zero(grid: HalfSpaceGrid, **_: Any) -> BoundaryData:
    return BoundaryData.constant(0.0)


def _one(grid: HalfSpaceGrid, **_: Any) -> BoundaryData:
    return BoundaryData.constant(1.0)


def _psi(grid: HalfSpaceGrid, **_: Any) -> BoundaryData:
    """Data from the stationary solution ψ(x, v)."""

    def g(_t: Any, x: Any, v: Any) -> FloatArray:  # noqa: ANN401
        return np.asarray(psi_exact(x, v), dtype=np.float64)

    return BoundaryData.from_function(g, grid.t0, name="psi")


def _psi_barrier(grid: HalfSpaceGrid, **_: Any) -> BoundaryData:
    """Data from Ψ = ψ − 2v − v² − t, the exact solution for A = 1, B = 0, S = 1."""
    return BoundaryData.from_function(grazing_Psi, grid.t0, name="psi-barrier")


def bump_profile(x: FloatArray, x_extent: float) -> FloatArray:
    """Smooth 1 − cos bump in [0, 1] supported in [−X, −X/4]."""
    x = np.asarray(x, dtype=np.float64)
    s = (x + x_extent) / (0.75 * x_extent)
    inside = (s >= 0.0) & (s <= 1.0)
    return np.where(inside, 0.5 * (1.0 - np.cos(2.0 * np.pi * np.clip(s, 0.0, 1.0))), 0.0)


def _bump(grid: HalfSpaceGrid, **_: Any) -> BoundaryData:
    """Zero inflow, zero truncation and the bump as initial data."""
    x_extent = grid.x_extent

    def inflow(_t: Any, v: FloatArray) -> FloatArray:  # noqa: ANN401
        return np.zeros_like(np.asarray(v, dtype=np.float64))

    def initial(x: FloatArray, v: FloatArray) -> FloatArray:
        x_b, _ = np.broadcast_arrays(x, v)
        return bump_profile(x_b, x_extent)

    def edge(_t: Any, x: FloatArray, v: FloatArray) -> FloatArray:  # noqa: ANN401
        return np.zeros(np.broadcast_shapes(np.shape(x), np.shape(v)))

    return BoundaryData(inflow=inflow, initial=initial, truncation=edge, far_field=edge, name="bump")


def _table_boundary(grid: HalfSpaceGrid, boundary_table: str = "", **_: Any) -> BoundaryData:
    """Inflow tabulated against v; zero initial, truncation and far-field data."""
    if not boundary_table:
        msg = "The 'table' boundary data need boundary_table = <csv path>"
        raise ConfigError(msg)
    data = _read_table(boundary_table, ("v", "f"))

    def inflow(_t: Any, v: FloatArray) -> FloatArray:  # noqa: ANN401
        return np.interp(np.asarray(v, dtype=np.float64), data["v"], data["f"])

    def initial(x: FloatArray, v: FloatArray) -> FloatArray:
        return np.zeros(np.broadcast_shapes(np.shape(x), np.shape(v)))

    def edge(_t: Any, x: FloatArray, v: FloatArray) -> FloatArray:  # noqa: ANN401
        return np.zeros(np.broadcast_shapes(np.shape(x), np.shape(v)))

    return BoundaryData(
        inflow=inflow,
        initial=initial,
        truncation=edge,
        far_field=edge,
        name=f"table({Path(boundary_table).name})",
    )


BOUNDARY_DATA: dict[str, BoundaryFactory] = {
    "zero": _zero,
    "one": _one,
    "psi": _psi,
    "psi-barrier": _psi_barrier,
    "bump": _bump,
    "table": _table_boundary,
}


def make_coefficients(name: str, **params: Any) -> CoefficientField:  # noqa: ANN401
    """Build a registered coefficient field.

    Raises:
        ConfigError: If the name is not registered or its parameters are invalid.

    """
    try:
        factory = COEFFICIENTS[name]
    except KeyError as e:
        msg = f"Unknown coefficients {name!r}; registered: {', '.join(sorted(COEFFICIENTS))}"
        raise ConfigError(msg) from e
    logger.debug("Building coefficients %s with %s", name, params)
    try:
        return factory(**params)
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        msg = f"Invalid parameters for coefficients {name!r}: {e}"
        raise ConfigError(msg) from e


def make_boundary_data(name: str, grid: HalfSpaceGrid, **params: Any) -> BoundaryData:  # noqa: ANN401
    """Build registered boundary data for a grid.

    Raises:
        ConfigError: If the name is not registered.

    """
    try:
        factory = BOUNDARY_DATA[name]
    except KeyError as e:
        msg = f"Unknown boundary data {name!r}; registered: {', '.join(sorted(BOUNDARY_DATA))}"
        raise ConfigError(msg) from e
    logger.debug("Building boundary data %s", name)
    return factory(grid, **params)
