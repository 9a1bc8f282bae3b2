"""Writing and loading experiment reports."""

import csv
import logging
from enum import StrEnum
from pathlib import Path

from kinbound.utils.persistence import read_json, write_json_atomic

from .models import ExperimentReport

logger = logging.getLogger(__name__)

CSV_HEADER = ("experiment", "series", "x", "y", "fitted")


class ReportFormat(StrEnum):
    """On-disk report formats."""

    JSON = "json"
    CSV = "csv"


def report_path(report: ExperimentReport, out_dir: str | Path, fmt: ReportFormat | str) -> Path:
    """Return ``<out_dir>/<experiment>_seed<seed>.<fmt>``."""
    return Path(out_dir) / f"{report.experiment}_seed{report.seed}.{ReportFormat(fmt).value}"


def write_report(
    report: ExperimentReport,
    out_dir: str | Path,
    fmt: ReportFormat | str = ReportFormat.JSON,
) -> Path:
    """Write a report as JSON (full body) or CSV (one row per fitted point).

    Raises:
        OSError: If the directory or file cannot be written.

    """
    fmt = ReportFormat(fmt)
    path = report_path(report, out_dir, fmt)
    if fmt is ReportFormat.JSON:
        body = report.to_dict()
        body["hash"] = report.fingerprint
        write_json_atomic(path, body)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        temp_path = path.with_suffix(".csv.tmp")
        try:
            with temp_path.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(CSV_HEADER)
                for point in report.points:
                    values = (repr(float(v)) for v in (point.x, point.y, point.fitted))
                    writer.writerow([report.experiment, point.series, *values])
            temp_path.replace(path)
        except OSError:
            logger.exception("Failed to write %s", path)
            raise
    logger.info("✓ Wrote %s report to %s", fmt.value, path)
    return path


def load_report(path: str | Path) -> ExperimentReport:
    """Load a JSON report written by :func:`write_report`."""
    data = read_json(path)
    data.pop("hash", None)
    data.pop("traceability", None)
    return ExperimentReport.from_dict(data)


def report_hash(report: ExperimentReport) -> str:
    """SHA-256 of the report body without wall times."""
    return report.fingerprint
