r"""Kinetic boundary lab - numerical checks of boundary regularity for kinetic Fokker-Planck equations.

The package evaluates the explicit stationary solution ψ of the half-space
problem, builds and certifies barrier functions for the operator
∂_t + v·∇_x − ∇_v·(A∇_v) − B·∇_v, solves the one-dimensional inflow problem
on a grid or by Monte Carlo, and runs scripted experiments that check the
vanishing rate at incoming boundary points and the Hölder behavior at
grazing points.

Example usage:
    ```python
    from kinbound import Lemma, SolverConfig, certify_lemma, psi_exact, run_experiment

    print(psi_exact(-0.001, -0.5))

    certificate = certify_lemma(Lemma.BARRIER_G, 1e-6, -0.6, n_samples=20_000)
    print(certificate)

    config = SolverConfig(exact_psi=True, seed=7)
    report = run_experiment("vanishing", config)
    print(report.verdict, report.fitted["power"])
    ```
"""

from kinbound.certifier import CertificateReport, CoefficientField, Lemma, Verdict, certify_lemma
from kinbound.config import SolverConfig, load_config
from kinbound.errors import KinboundError
from kinbound.experiments import ExperimentKind, ExperimentReport, run_experiment, write_report
from kinbound.solver import BoundaryData, HalfSpaceGrid, SolutionField, solve_grid, solve_mc
from kinbound.special import classify_region, psi_exact, tricomi_u, upsilon

__version__ = "1.0.0"

__all__ = [
    "BoundaryData",
    "CertificateReport",
    "CoefficientField",
    "ExperimentKind",
    "ExperimentReport",
    "HalfSpaceGrid",
    "KinboundError",
    "Lemma",
    "SolutionField",
    "SolverConfig",
    "Verdict",
    "certify_lemma",
    "classify_region",
    "load_config",
    "psi_exact",
    "run_experiment",
    "solve_grid",
    "solve_mc",
    "tricomi_u",
    "upsilon",
    "write_report",
]
