"""Command line entry point for the kinetic boundary lab.

Subcommands:

* ``psi eval``: value and region tag of the stationary solution ψ;
* ``barrier eval``: recipe parameters, constraint flags, anchor and barrier values;
* ``certify``: sample one barrier inequality and write its certificate;
* ``solve``: grid solve of a configured problem with boundary traces;
* ``experiment``: run one of the scripted regularity experiments.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from kinbound.barriers.models import BarrierMode
from kinbound.barriers.recipes import anchor_point, check_constraints, select_params
from kinbound.certifier.lemmas import Lemma, build_barrier, certify_lemma
from kinbound.certifier.models import Verdict
from kinbound.config import SolverConfig, load_config
from kinbound.errors import KinboundError
from kinbound.experiments.models import ExperimentKind
from kinbound.experiments.report import ReportFormat, write_report
from kinbound.experiments.runner import run_experiment
from kinbound.geometry.models import PhasePoint
from kinbound.solver.grid import boundary_profile, solve_grid, verify_maximum_principle
from kinbound.solver.io import write_field_dump, write_traces
from kinbound.special.psi import classify_region, log_psi, psi_exact
from kinbound.utils.persistence import to_jsonable, write_json_atomic

logger = logging.getLogger(__name__)

REGION_C_STAR = 0.5
CERTIFICATE_FAILURE_EXIT = 3
USAGE_EXIT = 1


def _psi_eval(args: argparse.Namespace) -> int:
    value = psi_exact(args.x, args.v)
    log_value = float(log_psi(args.x, args.v))
    region = classify_region(args.x, args.v, REGION_C_STAR)
    logger.info("psi(%g, %g) = %.17g", args.x, args.v, value)
    logger.info("log psi = %.17g", log_value)
    logger.info("region = %s (c* = %g)", region.tag.value, region.c_star)
    return 0


def _barrier_eval(args: argparse.Namespace) -> int:
    mode = BarrierMode(args.mode)
    theta0 = args.theta0 if args.theta0 is not None else mode.default_theta0
    params = select_params(mode, args.rtilde, args.vd, 1.0, theta0, check_window=False)
    verdict = check_constraints(params)
    for key, value in params.as_dict().items():
        logger.info("%s = %s", key, value)
    failures = verdict.failures()
    logger.info("constraints: %s", "ok" if not failures else "; ".join(failures))

    anchor = anchor_point(params)
    logger.info("anchor: xi_d = %.17g, eta_d = %.17g, rho0 = %.17g", anchor.xi_d, anchor.eta_d, anchor.rho0)
    if args.point is None:
        return 0

    t, x, v = args.point
    barrier = build_barrier(params, anchor)
    value = barrier.value(PhasePoint.of(t, x, v))
    logger.info("barrier(%g, %g, %g) = %.17g", t, x, v, value)
    return 0


def _certify(args: argparse.Namespace) -> int:
    report = certify_lemma(
        args.lemma,
        args.rtilde,
        args.vd,
        n_samples=args.samples,
        seed=args.seed,
        theta0=args.theta0,
    )
    write_json_atomic(args.out, to_jsonable(report.to_dict()))
    logger.info("%s", report)
    return 0 if report.verdict is Verdict.PASS else CERTIFICATE_FAILURE_EXIT


def _solve(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    grid = config.grid()
    store_every = config.store_every or None
    sol = solve_grid(grid, config.coefficient_field(), config.boundary_data(grid), store_every=store_every)

    out_dir = Path(args.out)
    write_field_dump(out_dir / "field.kfpf", sol)
    traces = [boundary_profile(sol, v) for v in config.probe_velocities]
    write_traces(out_dir, traces)

    check = verify_maximum_principle(sol)
    if check.ok:
        logger.info("✓ Maximum principle holds (overshoot %.3g)", check.overshoot)
    else:
        logger.warning("✗ Maximum principle overshoot %.3g", check.overshoot)
    return 0


def _experiment(args: argparse.Namespace) -> int:
    config = load_config(args.config) if args.config else SolverConfig()
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    report = run_experiment(args.kind, config)
    write_report(report, args.out, args.format)
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with every subcommand."""
    parser = argparse.ArgumentParser(prog="kinbound", description="Kinetic Fokker-Planck boundary lab")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    psi = commands.add_parser("psi", help="Stationary solution psi")
    psi_commands = psi.add_subparsers(dest="action", required=True)
    psi_eval = psi_commands.add_parser("eval", help="Evaluate psi and its region tag")
    psi_eval.add_argument("--x", type=float, required=True, help="Normal coordinate x_d <= 0")
    psi_eval.add_argument("--v", type=float, required=True, help="Normal velocity v_d")
    psi_eval.set_defaults(handler=_psi_eval)

    barrier = commands.add_parser("barrier", help="Barrier recipes")
    barrier_commands = barrier.add_subparsers(dest="action", required=True)
    barrier_eval = barrier_commands.add_parser("eval", help="Print recipe parameters and values")
    barrier_eval.add_argument("--mode", choices=[m.value for m in BarrierMode], required=True)
    barrier_eval.add_argument("--rtilde", type=float, required=True, help="Barrier scale")
    barrier_eval.add_argument("--vd", type=float, required=True, help="Base normal velocity (< 0)")
    barrier_eval.add_argument("--theta0", type=float, help="Override the recipe's theta0")
    barrier_eval.add_argument("--point", type=float, nargs=3, metavar=("T", "X", "V"))
    barrier_eval.set_defaults(handler=_barrier_eval)

    certify = commands.add_parser("certify", help="Certify a barrier inequality by sampling")
    certify.add_argument("--lemma", choices=[lemma.value for lemma in Lemma], required=True)
    certify.add_argument("--rtilde", type=float, required=True)
    certify.add_argument("--vd", type=float, required=True)
    certify.add_argument("--samples", type=int, default=100_000)
    certify.add_argument("--seed", type=int, default=0)
    certify.add_argument("--theta0", type=float)
    certify.add_argument("--out", type=Path, required=True, help="Certificate JSON path")
    certify.set_defaults(handler=_certify)

    solve = commands.add_parser("solve", help="Grid solve of a configured problem")
    solve.add_argument("--config", type=Path, required=True)
    solve.add_argument("--out", type=Path, required=True, help="Output directory")
    solve.set_defaults(handler=_solve)

    experiment = commands.add_parser("experiment", help="Run a regularity experiment")
    experiment.add_argument("kind", choices=[k.value for k in ExperimentKind])
    experiment.add_argument("--config", type=Path)
    experiment.add_argument("--seed", type=int)
    experiment.add_argument("--out", type=Path, required=True, help="Report directory")
    experiment.add_argument("--format", choices=[f.value for f in ReportFormat], default="json")
    experiment.set_defaults(handler=_experiment)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run the subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s")
    try:
        return args.handler(args)
    except KinboundError as e:
        logger.error("✗ %s", e)  # noqa: TRY400
        return USAGE_EXIT
    except OSError as e:
        logger.error("✗ %s", e)  # noqa: TRY400
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
