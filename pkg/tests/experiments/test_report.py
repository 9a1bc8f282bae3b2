"""Experiment reports, certificate gating, dispatch and sweeps."""

import csv
import json
from pathlib import Path

import pytest
from pytest_mock import MockerFixture

from kinbound.certifier.models import CertificateReport, Verdict
from kinbound.config import SolverConfig
from kinbound.experiments.models import EXIT_CODES, ExperimentKind, ExperimentReport, FitPoint
from kinbound.experiments.report import (
    CSV_HEADER,
    ReportFormat,
    load_report,
    report_hash,
    report_path,
    write_report,
)
from kinbound.experiments.runner import RUNNERS, run_experiment
from kinbound.experiments.sweep import run_sweep, sweep


@pytest.fixture
def report() -> ExperimentReport:
    """Fixture for a small filled-in report."""
    report = ExperimentReport(
        experiment="vanishing",
        inputs={"n_x": 32},
        fitted={"power": 3.01},
        fit_quality={"power_r_squared": 0.999},
        points=[FitPoint("v=-0.4", -0.01, -12.5, -12.49), FitPoint("v=-0.6", -0.02, -9.0, -9.01)],
        certificate={"lemma": "barrier-ss", "verdict": "pass", "wall_ms": 4.0},
        seed=7,
        wall_ms=12.0,
    )
    report.check_band("power", 3.01, 2.5, 3.5)
    return report


class TestExperimentReport:
    """Report model behaviour."""

    def test_check_band_when_inside_then_pass_kept(self, report: ExperimentReport) -> None:
        assert report.verdict is Verdict.PASS
        assert report.bands["power"] == [2.5, 3.5]
        assert report.reasons == []

    def test_check_band_when_outside_then_fail_with_reason(self, report: ExperimentReport) -> None:
        assert not report.check_band("r_squared", 0.5, 0.95, 1.0)
        assert report.verdict is Verdict.FAIL
        assert report.exit_code == 2
        assert report.reasons == ["r_squared=0.5 outside [0.95, 1]"]

    def test_check_band_when_already_degenerate_then_verdict_kept(self, report: ExperimentReport) -> None:
        report.verdict = Verdict.DEGENERATE
        report.check_band("power", 9.0, 2.5, 3.5)
        assert report.verdict is Verdict.DEGENERATE

    def test_exit_codes_when_listed_then_distinct(self) -> None:
        assert EXIT_CODES == {Verdict.PASS: 0, Verdict.FAIL: 2, Verdict.ERROR: 3, Verdict.DEGENERATE: 4}

    def test_from_dict_when_round_tripped_then_equal(self, report: ExperimentReport) -> None:
        assert ExperimentReport.from_dict(report.to_dict()) == report

    def test_fingerprint_when_wall_time_differs_then_equal(self, report: ExperimentReport) -> None:
        original = report.fingerprint
        report.wall_ms = 99.0
        report.certificate["wall_ms"] = 1.0
        assert report.fingerprint == original

    def test_str_when_formatted_then_summary(self, report: ExperimentReport) -> None:
        assert str(report) == "[vanishing] pass: power=3.01"

    def test_traceability_when_every_kind_then_described(self) -> None:
        for kind in ExperimentKind:
            assert ExperimentReport(experiment=kind.value).traceability


class TestReportFiles:
    """JSON and CSV output."""

    def test_report_path_when_formatted_then_named_by_seed(self, report: ExperimentReport, out_dir: Path) -> None:
        assert report_path(report, out_dir, "csv") == out_dir / "vanishing_seed7.csv"

    def test_write_report_when_json_then_loads_with_same_hash(self, report: ExperimentReport, out_dir: Path) -> None:
        path = write_report(report, out_dir)
        body = json.loads(path.read_text(encoding="utf-8"))
        assert body["hash"] == report_hash(report)
        assert body["traceability"] == report.traceability
        loaded = load_report(path)
        assert loaded == report
        assert report_hash(loaded) == body["hash"]

    def test_write_report_when_csv_then_one_row_per_point(self, report: ExperimentReport, out_dir: Path) -> None:
        path = write_report(report, out_dir, ReportFormat.CSV)
        with path.open(encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
        assert tuple(rows[0]) == CSV_HEADER
        assert rows[1] == ["vanishing", "v=-0.4", "-0.01", "-12.5", "-12.49"]
        assert len(rows) == 3
        assert not path.with_suffix(".csv.tmp").exists()

    def test_write_report_when_unknown_format_then_raises(self, report: ExperimentReport, out_dir: Path) -> None:
        with pytest.raises(ValueError, match="xml"):
            write_report(report, out_dir, "xml")


class TestGate:
    """Certificate gating of experiment bodies."""

    def test_gated_run_when_certificate_refused_then_error_without_body(
        self,
        fast_config: SolverConfig,
        mocker: MockerFixture,
    ) -> None:
        refused = CertificateReport(lemma="barrier-ss", constraint_failures=["window"])
        certify = mocker.patch("kinbound.experiments.gate.certify_lemma", return_value=refused)
        solve = mocker.patch("kinbound.experiments.vanishing.fit_vanishing_rate")
        report = run_experiment("vanishing", fast_config.replace(exact_psi=True))
        assert report.verdict is Verdict.ERROR
        assert report.exit_code == 3
        assert report.reasons == ["certificate barrier-ss returned error"]
        assert report.certificate["constraint_failures"] == ["window"]
        certify.assert_called_once()
        solve.assert_not_called()

    def test_gated_run_when_certificate_fails_then_error(
        self,
        fast_config: SolverConfig,
        mocker: MockerFixture,
    ) -> None:
        failed = CertificateReport(lemma="barrier-g", samples=10, violations=2)
        mocker.patch("kinbound.experiments.gate.certify_lemma", return_value=failed)
        report = run_experiment(ExperimentKind.HOLDER, fast_config.replace(exact_psi=True))
        assert report.exit_code == 3
        assert "returned fail" in report.reasons[0]


class TestRunner:
    """Dispatch by name."""

    def test_runners_when_listed_then_every_kind(self) -> None:
        assert set(RUNNERS) == set(ExperimentKind)

    def test_run_experiment_when_unknown_kind_then_raises(self, fast_config: SolverConfig) -> None:
        with pytest.raises(ValueError, match="spectral"):
            run_experiment("spectral", fast_config)


class TestSweep:
    """Serial and concurrent sweeps."""

    async def test_run_sweep_when_concurrent_then_order_kept(self) -> None:
        results = await run_sweep([lambda k=k: k * k for k in range(6)])
        assert results == [0, 1, 4, 9, 16, 25]

    @pytest.mark.parametrize("concurrent", [False, True])
    def test_sweep_when_mode_chosen_then_same_results(self, concurrent: bool) -> None:  # noqa: FBT001
        assert sweep([lambda: "a", lambda: "b"], concurrent=concurrent) == ["a", "b"]

    def test_sweep_when_no_tasks_then_empty(self) -> None:
        assert sweep([]) == []
