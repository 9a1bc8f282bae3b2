"""Command line subcommands and exit codes."""

import json
import logging
from pathlib import Path

import pytest

from kinbound.cli import main


@pytest.fixture
def log(caplog: pytest.LogCaptureFixture) -> pytest.LogCaptureFixture:
    """Fixture capturing INFO output of the command handlers."""
    caplog.set_level(logging.INFO)
    return caplog


@pytest.fixture
def fast_conf(tmp_path: Path) -> Path:
    """Fixture for a configuration file with small grids and cheap certificates."""
    path = tmp_path / "fast.conf"
    path.write_text(
        "n_x = 16\nn_v = 16\nboundary = psi\ncertificate_samples = 2000\nexact_psi = on\n",
        encoding="utf-8",
    )
    return path


def test_psi_eval_when_grazing_boundary_then_closed_form(log: pytest.LogCaptureFixture) -> None:
    assert main(["psi", "eval", "--x", "0", "--v", "1"]) == 0
    assert "psi(0, 1) = 0.6933" in log.text
    assert "region = " in log.text


class TestBarrierEval:
    """Recipe inspection."""

    def test_barrier_eval_when_incoming_then_parameters_and_anchor(self, log: pytest.LogCaptureFixture) -> None:
        assert main(["barrier", "eval", "--mode", "incoming_gradient", "--rtilde", "1e-6", "--vd", "-0.6"]) == 0
        assert "constraints: ok" in log.text
        assert "anchor: xi_d" in log.text
        assert "barrier(" not in log.text

    def test_barrier_eval_when_point_given_then_value(self, log: pytest.LogCaptureFixture) -> None:
        argv = ["barrier", "eval", "--mode", "incoming_gradient", "--rtilde", "1e-6", "--vd", "-0.6"]
        assert main([*argv, "--point", "0", "0", "-0.6"]) == 0
        assert "barrier(0, 0, -0.6) = " in log.text

    def test_barrier_eval_when_unknown_mode_then_usage_error(self) -> None:
        with pytest.raises(SystemExit) as exc_info:
            main(["barrier", "eval", "--mode", "cubic", "--rtilde", "1", "--vd", "-1"])
        assert exc_info.value.code == 2


class TestCertify:
    """Certificates written to disk."""

    def test_certify_when_inequality_holds_then_exit_zero(self, out_dir: Path) -> None:
        out = out_dir / "cert.json"
        argv = ["certify", "--lemma", "barrier-ss", "--rtilde", "1e-6", "--vd", "-0.6", "--samples", "2000"]
        assert main([*argv, "--out", str(out)]) == 0
        body = json.loads(out.read_text(encoding="utf-8"))
        assert body["verdict"] == "pass"
        assert body["samples"] == 2000

    def test_certify_when_refused_then_exit_three(self, out_dir: Path, log: pytest.LogCaptureFixture) -> None:
        out = out_dir / "refused.json"
        argv = ["certify", "--lemma", "phase-prop", "--rtilde", "1e-4", "--vd", "-0.6", "--samples", "500"]
        assert main([*argv, "--out", str(out)]) == 3
        body = json.loads(out.read_text(encoding="utf-8"))
        assert body["verdict"] == "error"
        assert body["constraint_failures"]
        assert "refused" in log.text


def test_solve_when_configured_then_dump_and_traces(fast_conf: Path, out_dir: Path) -> None:
    assert main(["solve", "--config", str(fast_conf), "--out", str(out_dir)]) == 0
    assert (out_dir / "field.kfpf").exists()
    assert (out_dir / "field.json").exists()
    assert list(out_dir.glob("trace_v*.csv"))


class TestExperiment:
    """Experiment runs from the command line."""

    def test_experiment_when_exact_psi_then_report_and_exit_zero(self, fast_conf: Path, out_dir: Path) -> None:
        argv = ["experiment", "oscillation", "--config", str(fast_conf), "--seed", "5", "--out", str(out_dir)]
        assert main(argv) == 0
        body = json.loads((out_dir / "oscillation_seed5.json").read_text(encoding="utf-8"))
        assert body["verdict"] == "pass"
        assert body["inputs"]["seed"] == 5
        assert len(body["hash"]) == 64

    def test_experiment_when_csv_format_then_points_written(self, fast_conf: Path, out_dir: Path) -> None:
        argv = ["experiment", "holder", "--config", str(fast_conf), "--out", str(out_dir), "--format", "csv"]
        assert main(argv) == 0
        assert (out_dir / "holder_seed0.csv").read_text(encoding="utf-8").startswith("experiment,series")

    def test_experiment_when_config_missing_then_exit_one(
        self,
        tmp_path: Path,
        out_dir: Path,
        log: pytest.LogCaptureFixture,
    ) -> None:
        argv = ["experiment", "vanishing", "--config", str(tmp_path / "absent.conf"), "--out", str(out_dir)]
        assert main(argv) == 1
        assert "Cannot read configuration" in log.text

    def test_experiment_when_config_invalid_then_exit_one(self, tmp_path: Path, out_dir: Path) -> None:
        path = tmp_path / "bad.conf"
        path.write_text("n_v = 15\n", encoding="utf-8")
        assert main(["experiment", "gradient", "--config", str(path), "--out", str(out_dir)]) == 1
