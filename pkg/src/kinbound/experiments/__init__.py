"""Scripted checks of boundary regularity claims and their reports."""

from .gate import GATES, gated_run
from .gradient import run_gradient_experiment
from .models import EXIT_CODES, TRACEABILITY, ExperimentKind, ExperimentReport, FitPoint
from .oscillation import run_holder_experiment, run_oscillation_decay
from .report import ReportFormat, load_report, report_hash, write_report
from .runner import RUNNERS, run_experiment
from .sweep import run_sweep, sweep
from .vanishing import RateFit, fit_vanishing_rate, run_vanishing_experiment

__all__ = [
    "EXIT_CODES",
    "GATES",
    "RUNNERS",
    "TRACEABILITY",
    "ExperimentKind",
    "ExperimentReport",
    "FitPoint",
    "RateFit",
    "ReportFormat",
    "fit_vanishing_rate",
    "gated_run",
    "load_report",
    "report_hash",
    "run_experiment",
    "run_gradient_experiment",
    "run_holder_experiment",
    "run_oscillation_decay",
    "run_sweep",
    "run_vanishing_experiment",
    "sweep",
    "write_report",
]
