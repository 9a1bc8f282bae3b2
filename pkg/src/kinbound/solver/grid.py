"""IMEX finite-difference solver for ∂_t f + v∂_x f = A∂_v²f + B∂_v f + S on {x ≤ 0}.

Each step first moves f along the characteristics with an explicit upwind
difference in x, then solves the velocity diffusion implicitly:

    (I − Δt(A D_vv + B D_v)) f^{n+1} = f* + Δt S

with centered D_vv and upwinded D_v. Rows at Dirichlet nodes (|v| = V, the
incoming set {x = 0, v < 0} and the entry set {x = −X, v > 0}) are identity
rows, so the velocity columns never couple and the flattened system stays
tridiagonal. The matrix is an M-matrix and the scheme obeys a discrete
maximum principle.
"""

import hashlib
import logging
import time

import numpy as np
from scipy import linalg

from kinbound.certifier.models import CoefficientField
from kinbound.errors import DegenerateInputError, DomainError, StabilityError
from kinbound.geometry.models import FloatArray, PhaseSamples

from .models import BoundaryData, BoundaryTrace, HalfSpaceGrid, MaxPrincipleReport, SolutionField

logger = logging.getLogger(__name__)

CFL_LIMIT = 1.0
MAX_PRINCIPLE_TOLERANCE = 1e-12
SCHEME = "imex-upwind"


class _Coefficients:
    """Coefficient values on every node at one time level."""

    def __init__(self, coeff: CoefficientField, grid: HalfSpaceGrid) -> None:
        self.coeff = coeff
        x_nodes, v_nodes = np.meshgrid(grid.x, grid.v, indexing="ij")
        self._x = x_nodes.ravel()
        self._v = v_nodes.ravel()
        self._cached: tuple[FloatArray, FloatArray, FloatArray] | None = None

    def at(self, t: float) -> tuple[FloatArray, FloatArray, FloatArray]:
        """Return (A, B, S) flattened in node order, raising on bad values."""
        if self.coeff.constant and self._cached is not None:
            return self._cached
        samples = PhaseSamples(np.full(self._x.size, t), self._x, self._v)
        A = np.asarray(self.coeff.diffusion(samples), dtype=np.float64).reshape(-1, 1, 1)[:, 0, 0]
        B = np.asarray(self.coeff.drift(samples), dtype=np.float64).reshape(-1, 1)[:, 0]
        S = np.asarray(self.coeff.source(samples), dtype=np.float64).reshape(-1)
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B)) and np.all(np.isfinite(S))):
            msg = f"Coefficient field {self.coeff.name!r} is not finite at t={t:g}"
            raise StabilityError(msg)
        if np.any(A <= 0):
            msg = f"Coefficient field {self.coeff.name!r} has non-positive diffusion at t={t:g}"
            raise StabilityError(msg)
        self._cached = (A, B, S)
        return self._cached


def _coefficient_hash(coeff: CoefficientField, values: tuple[FloatArray, FloatArray, FloatArray]) -> str:
    digest = hashlib.sha256(coeff.name.encode())
    for array in values:
        digest.update(np.ascontiguousarray(array).tobytes())
    return digest.hexdigest()


def _transport(f: FloatArray, v: FloatArray, ratio: float) -> FloatArray:
    """One explicit upwind step of ∂_t f + v∂_x f = 0; ratio = Δt/Δx."""
    out = f.copy()
    positive = v > 0
    negative = v < 0
    out[1:, positive] -= ratio * v[positive] * (f[1:, positive] - f[:-1, positive])
    out[:-1, negative] -= ratio * v[negative] * (f[1:, negative] - f[:-1, negative])
    return out


def _dirichlet_mask(grid: HalfSpaceGrid) -> np.ndarray:
    mask = np.zeros((grid.n_x + 1, grid.n_v + 1), dtype=bool)
    v = grid.v
    mask[:, 0] = True
    mask[:, -1] = True
    mask[-1, v < 0] = True
    mask[0, v > 0] = True
    return mask


def _dirichlet_values(bdata: BoundaryData, grid: HalfSpaceGrid, t: float) -> FloatArray:
    """Boundary values at time t on a full-size array; only Dirichlet nodes are meaningful."""
    x, v = grid.x, grid.v
    values = np.zeros((grid.n_x + 1, grid.n_v + 1))
    incoming = v < 0
    values[-1, incoming] = bdata.inflow(t, v[incoming])
    entering = v > 0
    values[0, entering] = bdata.outer(t, float(x[0]), v[entering])
    values[:, 0] = bdata.truncation(t, x, np.full_like(x, v[0]))
    values[:, -1] = bdata.truncation(t, x, np.full_like(x, v[-1]))
    if not np.all(np.isfinite(values)):
        msg = f"Boundary data {bdata.name!r} is not finite at t={t:g}"
        raise StabilityError(msg)
    return values


def _banded_matrix(
    A: FloatArray,
    B: FloatArray,
    grid: HalfSpaceGrid,
    dirichlet: np.ndarray,
) -> FloatArray:
    """Band storage of the implicit velocity operator for solve_banded((1, 1), ...)."""
    dt, dv = grid.dt, grid.dv
    diffusion = A / dv**2
    lower = -dt * (diffusion + np.maximum(-B, 0.0) / dv)
    upper = -dt * (diffusion + np.maximum(B, 0.0) / dv)
    diag = 1.0 + dt * (2.0 * diffusion + np.abs(B) / dv)
    fixed = dirichlet.ravel()
    lower[fixed] = 0.0
    upper[fixed] = 0.0
    diag[fixed] = 1.0
    ab = np.zeros((3, diag.size))
    ab[0, 1:] = upper[:-1]
    ab[1] = diag
    ab[2, :-1] = lower[1:]
    return ab


def solve_grid(
    grid: HalfSpaceGrid,
    coeff: CoefficientField,
    bdata: BoundaryData,
    *,
    store_every: int | None = None,
) -> SolutionField:
    """March the kinetic Fokker-Planck equation from T₀ to 0 on the grid.

    Args:
        grid: Node grid; must satisfy Δt·V/Δx ≤ 1.
        coeff: Coefficients; only d = 1 fields are meaningful here.
        bdata: Inflow, initial, truncation and far-field data.
        store_every: Keep a slice every this many steps; by default only the
            initial and final slices are stored.

    Returns:
        The stored slices with run metadata.

    Raises:
        StabilityError: On a CFL violation or non-finite coefficients or data.

    """
    if grid.cfl > CFL_LIMIT * (1.0 + 1e-12):
        msg = f"CFL violated: dt*V/dx = {grid.cfl:.6g} > {CFL_LIMIT}"
        raise StabilityError(msg)
    if store_every is not None and store_every < 1:
        msg = f"store_every must be positive, got {store_every}"
        raise DomainError(msg)

    started = time.perf_counter()
    x, v = grid.x, grid.v
    times = grid.times
    ratio = grid.dt / grid.dx
    dirichlet = _dirichlet_mask(grid)
    fixed = dirichlet.ravel()
    coefficients = _Coefficients(coeff, grid)

    x_nodes, v_nodes = np.meshgrid(x, v, indexing="ij")
    f = np.asarray(bdata.initial(x_nodes, v_nodes), dtype=np.float64).reshape(x_nodes.shape).copy()
    if not np.all(np.isfinite(f)):
        msg = f"Initial data {bdata.name!r} is not finite"
        raise StabilityError(msg)
    data_min = float(f.min())
    data_max = float(f.max())
    source_sup = 0.0

    stored_times = [float(times[0])]
    stored = [f.copy()]
    ab: FloatArray | None = None
    coefficient_hash = _coefficient_hash(coeff, coefficients.at(float(times[1])))

    for step in range(1, grid.n_t + 1):
        t = float(times[step])
        A, B, S = coefficients.at(t)
        if ab is None or not coeff.constant:
            ab = _banded_matrix(A, B, grid, dirichlet)

        boundary = _dirichlet_values(bdata, grid, t)
        data_min = min(data_min, float(boundary[dirichlet].min()))
        data_max = max(data_max, float(boundary[dirichlet].max()))

        rhs = (_transport(f, v, ratio) + grid.dt * S.reshape(f.shape)).ravel()
        rhs[fixed] = boundary.ravel()[fixed]
        source_sup = max(source_sup, float(np.abs(S[~fixed]).max(initial=0.0)))

        f = linalg.solve_banded((1, 1), ab, rhs, check_finite=False).reshape(f.shape)
        logger.debug("Step %d/%d at t=%.6g: range [%.6g, %.6g]", step, grid.n_t, t, f.min(), f.max())

        if step == grid.n_t or (store_every is not None and step % store_every == 0):
            stored_times.append(t)
            stored.append(f.copy())

    if not np.all(np.isfinite(f)):
        msg = "Solver produced non-finite values"
        raise StabilityError(msg)

    wall_ms = 1000.0 * (time.perf_counter() - started)
    metadata = {
        "scheme": SCHEME,
        "steps": grid.n_t,
        "grid": grid.as_dict(),
        "cfl": grid.cfl,
        "coefficients": coeff.name,
        "coefficient_hash": coefficient_hash,
        "boundary_data": bdata.name,
        "data_min": data_min,
        "data_max": data_max,
        "source_sup": source_sup,
        "t0": grid.t0,
        "wall_ms": wall_ms,
    }
    logger.info(
        "✓ Solved %dx%dx%d grid (%s, %s) in %.0f ms",
        grid.n_x,
        grid.n_v,
        grid.n_t,
        coeff.name,
        bdata.name,
        wall_ms,
    )
    return SolutionField(
        times=np.asarray(stored_times),
        x=x,
        v=v,
        values=np.stack(stored),
        metadata=metadata,
    )


def boundary_profile(sol: SolutionField, v_query: float) -> BoundaryTrace:
    """Final-time trace x ↦ f(0, x, v_query) at a fixed incoming velocity.

    Raises:
        DomainError: If v_query is not incoming (v ≥ 0).
        DegenerateInputError: If the field has no x nodes.

    """
    if v_query >= 0:
        msg = f"Boundary profiles are taken at incoming velocities v < 0, got {v_query}"
        raise DomainError(msg)
    if sol.x.size == 0:
        msg = "Solution field has an empty spatial grid"
        raise DegenerateInputError(msg)
    j = sol.velocity_index(v_query)
    return BoundaryTrace(v=float(sol.v[j]), x=sol.x.copy(), f=sol.final[:, j].copy())


def verify_maximum_principle(
    sol: SolutionField,
    tolerance: float = MAX_PRINCIPLE_TOLERANCE,
) -> MaxPrincipleReport:
    """Check min data − |T₀|·sup|S| ≤ f ≤ max data + |T₀|·sup|S| on every stored slice."""
    meta = sol.metadata
    try:
        data_min = float(meta["data_min"])
        data_max = float(meta["data_max"])
        allowance = abs(float(meta["t0"])) * float(meta["source_sup"]) + tolerance
    except KeyError as e:
        msg = f"Solution metadata lacks {e.args[0]!r}; was it produced by solve_grid?"
        raise DomainError(msg) from e
    report = MaxPrincipleReport(
        field_min=float(sol.values.min()),
        field_max=float(sol.values.max()),
        data_min=data_min,
        data_max=data_max,
        allowance=allowance,
    )
    if report.ok:
        logger.info("✓ Maximum principle holds: field in [%.6g, %.6g]", report.field_min, report.field_max)
    else:
        logger.info("✗ Maximum principle overshoot %.3g", report.overshoot)
    return report
