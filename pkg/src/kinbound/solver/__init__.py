"""Half-space solvers for the one-dimensional kinetic Fokker-Planck equation.

Two independent solvers share the same :class:`BoundaryData`: an IMEX grid
scheme (:func:`solve_grid`) and a Monte Carlo estimator over backward
characteristics (:func:`solve_mc`).
"""

from .grid import boundary_profile, solve_grid, verify_maximum_principle
from .io import read_field_dump, write_field_dump, write_traces
from .models import (
    BoundaryData,
    BoundaryTrace,
    HalfSpaceGrid,
    MaxPrincipleReport,
    ParticleEnsemble,
    SolutionField,
)
from .montecarlo import solve_mc
from .registry import BOUNDARY_DATA, COEFFICIENTS, bump_profile, make_boundary_data, make_coefficients

__all__ = [
    "BOUNDARY_DATA",
    "COEFFICIENTS",
    "BoundaryData",
    "BoundaryTrace",
    "HalfSpaceGrid",
    "MaxPrincipleReport",
    "ParticleEnsemble",
    "SolutionField",
    "boundary_profile",
    "bump_profile",
    "make_boundary_data",
    "make_coefficients",
    "read_field_dump",
    "solve_grid",
    "solve_mc",
    "verify_maximum_principle",
    "write_field_dump",
    "write_traces",
]
