"""Experiment reports."""

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

from kinbound.certifier.models import Verdict
from kinbound.utils.persistence import fingerprint


class ExperimentKind(StrEnum):
    """Available experiments."""

    VANISHING = "vanishing"
    GRADIENT = "gradient"
    OSCILLATION = "oscillation"
    HOLDER = "holder"


TRACEABILITY: dict[ExperimentKind, str] = {
    ExperimentKind.VANISHING: (
        "infinite-order vanishing at incoming boundary points: "
        "|f| <= exp(1 - c|n.v0|^3/dist) when the inflow data vanish; "
        "checked through the rate slope ~ |v_d|^3"
    ),
    ExperimentKind.GRADIENT: (
        "gradient estimate at incoming boundary points: "
        "f vanishes linearly in the x- and v-offsets from the boundary point"
    ),
    ExperimentKind.OSCILLATION: (
        "oscillation decay at the grazing set: osc over G_cr <= delta * osc over G_r "
        "with delta < 1; sharp Holder exponent 1/2 of the stationary solution psi"
    ),
    ExperimentKind.HOLDER: (
        "optimal Holder regularity at the grazing set: exponent 1/2 of psi; "
        "solver difference quotients bounded away from grazing"
    ),
}

EXIT_CODES: dict[Verdict, int] = {
    Verdict.PASS: 0,
    Verdict.FAIL: 2,
    Verdict.ERROR: 3,
    Verdict.DEGENERATE: 4,
}


@dataclass(frozen=True)
class FitPoint:
    """One point entering a fit, written as a CSV row."""

    series: str
    x: float
    y: float
    fitted: float

    def as_dict(self) -> dict[str, Any]:
        """Return the point as a mapping."""
        return {"series": self.series, "x": self.x, "y": self.y, "fitted": self.fitted}


@dataclass
class ExperimentReport:
    """Outcome of one experiment.

    ``verdict`` is ``error`` when the certificate the experiment relies on did
    not pass; the experiment itself is then skipped.
    """

    experiment: str
    inputs: dict[str, Any] = field(default_factory=dict)
    fitted: dict[str, float] = field(default_factory=dict)
    fit_quality: dict[str, float] = field(default_factory=dict)
    bands: dict[str, list[float]] = field(default_factory=dict)
    verdict: Verdict = Verdict.PASS
    reasons: list[str] = field(default_factory=list)
    points: list[FitPoint] = field(default_factory=list)
    certificate: dict[str, Any] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    wall_ms: float = 0.0

    @property
    def traceability(self) -> str:
        """The boundary-regularity claim this experiment checks."""
        try:
            return TRACEABILITY[ExperimentKind(self.experiment)]
        except ValueError:
            return ""

    @property
    def exit_code(self) -> int:
        """Process exit code for the verdict."""
        return EXIT_CODES[self.verdict]

    def to_dict(self) -> dict[str, Any]:
        """Return the JSON report body."""
        return {
            "experiment": self.experiment,
            "traceability": self.traceability,
            "inputs": dict(self.inputs),
            "fitted": dict(self.fitted),
            "fit_quality": dict(self.fit_quality),
            "bands": {k: list(v) for k, v in self.bands.items()},
            "verdict": self.verdict.value,
            "reasons": list(self.reasons),
            "points": [p.as_dict() for p in self.points],
            "certificate": dict(self.certificate),
            "diagnostics": dict(self.diagnostics),
            "seed": self.seed,
            "wall_ms": self.wall_ms,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentReport":
        """Rebuild a report from :meth:`to_dict` output."""
        return cls(
            experiment=data["experiment"],
            inputs=dict(data.get("inputs", {})),
            fitted=dict(data.get("fitted", {})),
            fit_quality=dict(data.get("fit_quality", {})),
            bands={k: list(v) for k, v in data.get("bands", {}).items()},
            verdict=Verdict(data["verdict"]),
            reasons=list(data.get("reasons", [])),
            points=[FitPoint(**p) for p in data.get("points", [])],
            certificate=dict(data.get("certificate", {})),
            diagnostics=dict(data.get("diagnostics", {})),
            seed=int(data.get("seed", 0)),
            wall_ms=float(data.get("wall_ms", 0.0)),
        )

    @property
    def fingerprint(self) -> str:
        """SHA-256 of the report without its wall time."""
        return fingerprint(self.to_dict())

    def check_band(self, name: str, value: float, low: float, high: float) -> bool:
        """Record a band check; a miss marks the report failed."""
        self.bands[name] = [low, high]
        inside = low <= value <= high
        if not inside:
            self.reasons.append(f"{name}={value:.6g} outside [{low:g}, {high:g}]")
            if self.verdict is Verdict.PASS:
                self.verdict = Verdict.FAIL
        return inside

    def __str__(self) -> str:
        """Return a one-line summary."""
        fitted = ", ".join(f"{k}={v:.4g}" for k, v in sorted(self.fitted.items()))
        return f"[{self.experiment}] {self.verdict.value}: {fitted}"
