"""Monte Carlo solver from the backward characteristics of the equation.

For a query point z = (t, x, v) particles run the reversed clock τ ∈ [0, t − T₀]:

    dX = −V dτ,   dV = B dτ + √(2A) dW,

while accumulating ∫S dτ. A path stops on the first of

- X crossing 0 with V < 0: it collects the inflow value at the crossing;
- X leaving through −X: it collects the far-field value;
- |V| reaching the truncation speed: it collects the truncation value;
- τ reaching t − T₀: it collects the initial value.

Crossings are located by linear interpolation inside the step. Increments are
read from a counter-based stream keyed by (seed, query index), word
step·n + k for particle k, so results do not depend on batching.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from kinbound.certifier.models import CoefficientField
from kinbound.errors import DomainError
from kinbound.geometry.models import FloatArray, PhasePoint, PhaseSamples
from kinbound.utils.rng import CounterStream

from .models import BoundaryData, HalfSpaceGrid, ParticleEnsemble

logger = logging.getLogger(__name__)

DEFAULT_STEP_FRACTION = 1e-4

type McEstimate = tuple[float, float]


def _coefficients(
    coeff: CoefficientField,
    s: FloatArray,
    X: FloatArray,
    V: FloatArray,
) -> tuple[FloatArray, FloatArray, FloatArray]:
    samples = PhaseSamples(s, X, V)
    A = np.asarray(coeff.diffusion(samples), dtype=np.float64).reshape(-1)
    B = np.asarray(coeff.drift(samples), dtype=np.float64).reshape(-1)
    S = np.asarray(coeff.source(samples), dtype=np.float64).reshape(-1)
    return A, B, S


def _check_query(z: PhasePoint, grid: HalfSpaceGrid) -> None:
    if z.d != 1:
        msg = f"Monte Carlo solver is one-dimensional, got a point of dimension {z.d}"
        raise DomainError(msg)
    x, v = float(z.x[0]), float(z.v[0])
    if not (grid.t0 < z.t <= 0.0 and -grid.x_extent < x <= 0.0 and abs(v) < grid.v_extent):
        msg = f"Query point (t={z.t:g}, x={x:g}, v={v:g}) lies outside the computational box"
        raise DomainError(msg)


def _first_crossing(
    start: FloatArray,
    end: FloatArray,
    level: float | FloatArray,
    crossed: np.ndarray,
) -> FloatArray:
    """Fraction θ ∈ [0, 1] of the step where a linear path meets ``level``; 1 if it does not."""
    theta = np.ones_like(start)
    delta = end - start
    fraction = np.where(crossed & (delta != 0), (level - start) / np.where(delta == 0, 1.0, delta), 0.0)
    theta[crossed] = np.clip(fraction[crossed], 0.0, 1.0)
    return theta


def _run_ensemble(
    z: PhasePoint,
    ensemble: ParticleEnsemble,
    stream: CounterStream,
    coeff: CoefficientField,
    bdata: BoundaryData,
    grid: HalfSpaceGrid,
    dt_mc: float,
) -> None:
    n = len(ensemble)
    horizon = z.t - grid.t0
    n_steps = math.ceil(horizon / dt_mc)
    v_limit = grid.v_extent
    x_far = -grid.x_extent

    for step in range(n_steps):
        alive = ~ensemble.exited
        if not alive.any():
            break
        idx = np.flatnonzero(alive)
        tau = ensemble.tau[idx]
        X = ensemble.X[idx]
        V = ensemble.V[idx]
        dtau = np.minimum(dt_mc, horizon - tau)

        A, B, S = _coefficients(coeff, z.t - tau, X, V)
        xi = stream.step_normals(step, 0, n, n)[idx]
        X_new = X - V * dtau
        V_new = V + B * dtau + np.sqrt(2.0 * A * dtau) * xi

        inflow = X_new >= 0.0
        far = X_new < x_far
        truncated = np.abs(V_new) >= v_limit
        theta_inflow = _first_crossing(X, X_new, 0.0, inflow)
        theta_far = _first_crossing(X, X_new, x_far, far)
        theta_trunc = _first_crossing(V, V_new, np.sign(V_new) * v_limit, truncated)
        theta = np.minimum(np.minimum(theta_inflow, theta_far), theta_trunc)

        tau_hit = tau + theta * dtau
        X_hit = X + theta * (X_new - X)
        V_hit = V + theta * (V_new - V)
        ensemble.integral[idx] += S * theta * dtau

        hit_inflow = inflow & (theta == theta_inflow)
        hit_far = far & ~hit_inflow & (theta == theta_far)
        hit_trunc = truncated & ~hit_inflow & ~hit_far & (theta == theta_trunc)
        stopped = hit_inflow | hit_far | hit_trunc
        values = np.zeros(idx.size)
        if hit_inflow.any():
            values[hit_inflow] = bdata.inflow(z.t - tau_hit[hit_inflow], np.minimum(V_hit[hit_inflow], 0.0))
        if hit_far.any():
            values[hit_far] = bdata.outer(z.t - float(tau_hit[hit_far].mean()), x_far, V_hit[hit_far])
        if hit_trunc.any():
            edge_v = np.sign(V_hit[hit_trunc]) * v_limit
            values[hit_trunc] = bdata.truncation(z.t - tau_hit[hit_trunc], X_hit[hit_trunc], edge_v)

        tau_next = np.where(stopped, tau_hit, tau + dtau)
        expired = ~stopped & (tau_next >= horizon * (1.0 - 1e-14))
        if expired.any():
            values[expired] = bdata.initial(X_new[expired], V_new[expired])
            stopped |= expired

        ensemble.tau[idx] = tau_next
        ensemble.X[idx] = np.where(stopped, X_hit, X_new)
        ensemble.V[idx] = np.where(stopped, V_hit, V_new)
        ensemble.value[idx] = np.where(stopped, values, ensemble.value[idx])
        ensemble.exited[idx] = stopped

    # Rounding can leave a step short of the horizon; collect initial data there.
    left = ~ensemble.exited
    if left.any():
        ensemble.value[left] = bdata.initial(ensemble.X[left], ensemble.V[left])
        ensemble.exited[left] = True


def solve_mc(
    points: Sequence[PhasePoint],
    coeff: CoefficientField,
    bdata: BoundaryData,
    n_particles: int,
    seed: int,
    dt_mc: float | None = None,
    *,
    grid: HalfSpaceGrid,
) -> list[McEstimate]:
    """Estimate f at each query point with n_particles backward paths.

    Args:
        points: Query points strictly inside the computational box of ``grid``.
        coeff: One-dimensional coefficient field.
        bdata: The same boundary data the grid solver uses.
        n_particles: Paths per query point.
        seed: Base seed; query k uses stream k.
        dt_mc: Backward time step; defaults to 1e-4 of each point's horizon.
        grid: Supplies X, V and T₀ of the box.

    Returns:
        One (mean, standard error) pair per query point.

    Raises:
        DomainError: For n_particles ≤ 0, dt_mc ≤ 0 or a point outside the box.

    """
    if n_particles <= 0:
        msg = f"n_particles must be positive, got {n_particles}"
        raise DomainError(msg)
    if dt_mc is not None and dt_mc <= 0:
        msg = f"dt_mc must be positive, got {dt_mc}"
        raise DomainError(msg)

    results: list[McEstimate] = []
    for k, z in enumerate(points):
        _check_query(z, grid)
        step = dt_mc if dt_mc is not None else DEFAULT_STEP_FRACTION * (z.t - grid.t0)
        ensemble = ParticleEnsemble.launch(float(z.x[0]), float(z.v[0]), n_particles, seed)
        _run_ensemble(z, ensemble, CounterStream(seed, k), coeff, bdata, grid, step)
        estimates = ensemble.estimates
        mean = float(estimates.mean())
        stderr = float(estimates.std(ddof=1) / math.sqrt(n_particles)) if n_particles > 1 else 0.0
        logger.debug("MC point %d (t=%g, x=%g, v=%g): %.6g ± %.2g", k, z.t, z.x[0], z.v[0], mean, stderr)
        results.append((mean, stderr))

    logger.info("✓ Monte Carlo estimates at %d points with %d particles each", len(results), n_particles)
    return results
