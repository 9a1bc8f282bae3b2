"""Certificate gating shared by all experiments."""

import logging
import time
from collections.abc import Callable

from kinbound.certifier.lemmas import Lemma, certify_lemma
from kinbound.certifier.models import Verdict
from kinbound.config import SolverConfig
from kinbound.errors import DegenerateInputError
from kinbound.utils.persistence import to_jsonable

from .models import ExperimentKind, ExperimentReport

logger = logging.getLogger(__name__)

GATES: dict[ExperimentKind, Lemma] = {
    ExperimentKind.VANISHING: Lemma.BARRIER_SS,
    ExperimentKind.GRADIENT: Lemma.PHASE_PROP,
    ExperimentKind.OSCILLATION: Lemma.BARRIER_G,
    ExperimentKind.HOLDER: Lemma.BARRIER_G,
}

type ExperimentBody = Callable[[SolverConfig, ExperimentReport], None]


def gated_run(kind: ExperimentKind, config: SolverConfig, body: ExperimentBody) -> ExperimentReport:
    """Certify the barrier an experiment relies on, then run the experiment body.

    The body fills the report in place. A certificate that does not pass
    yields verdict ``error`` without running the body; a
    :class:`DegenerateInputError` from the body yields ``degenerate``.
    """
    started = time.perf_counter()
    report = ExperimentReport(experiment=kind.value, inputs=to_jsonable(config.as_dict()), seed=config.seed)
    lemma = GATES[kind]
    certificate = certify_lemma(
        lemma,
        config.certificate_r_tilde,
        config.certificate_velocity,
        coeff=config.coefficient_field(),
        n_samples=config.certificate_samples,
        seed=config.seed,
    )
    report.certificate = to_jsonable(certificate.to_dict())

    if certificate.verdict is not Verdict.PASS:
        report.verdict = Verdict.ERROR
        report.reasons.append(f"certificate {lemma.value} returned {certificate.verdict.value}")
        logger.info("✗ %s aborted: certificate %s %s", kind.value, lemma.value, certificate.verdict.value)
    else:
        try:
            body(config, report)
        except DegenerateInputError as e:
            report.verdict = Verdict.DEGENERATE
            report.reasons.append(str(e))
            logger.warning("Degenerate input in %s experiment: %s", kind.value, e)

    report.wall_ms = 1000.0 * (time.perf_counter() - started)
    mark = "✓" if report.verdict is Verdict.PASS else "✗"
    logger.info("%s %s", mark, report)
    return report
