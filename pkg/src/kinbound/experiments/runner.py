"""Dispatch of experiments by name."""

import logging
from collections.abc import Callable

from kinbound.config import SolverConfig

from .gradient import run_gradient_experiment
from .models import ExperimentKind, ExperimentReport
from .oscillation import run_holder_experiment, run_oscillation_decay
from .vanishing import run_vanishing_experiment

logger = logging.getLogger(__name__)

type ExperimentRunner = Callable[[SolverConfig], ExperimentReport]

RUNNERS: dict[ExperimentKind, ExperimentRunner] = {
    ExperimentKind.VANISHING: run_vanishing_experiment,
    ExperimentKind.GRADIENT: run_gradient_experiment,
    ExperimentKind.OSCILLATION: run_oscillation_decay,
    ExperimentKind.HOLDER: run_holder_experiment,
}


def run_experiment(kind: ExperimentKind | str, config: SolverConfig) -> ExperimentReport:
    """Run one experiment; the report's ``exit_code`` maps its verdict to 0/2/3/4."""
    kind = ExperimentKind(kind)
    logger.info("Running %s experiment (seed %d)", kind.value, config.seed)
    return RUNNERS[kind](config)
