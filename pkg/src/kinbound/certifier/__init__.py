"""Operator application and sampling certificates for the barrier inequalities."""

from .lemmas import InclusionReport, Lemma, build_barrier, certify_lemma, check_cylinder_inclusion
from .models import CertificateReport, CoefficientField, StencilConfig, Verdict
from .operator import (
    AnalyticBarrier,
    GrazingBarrier,
    LinearProfile,
    QuadraticBarrier,
    apply_L_fd,
    certify_region,
)

__all__ = [
    "AnalyticBarrier",
    "CertificateReport",
    "CoefficientField",
    "GrazingBarrier",
    "InclusionReport",
    "Lemma",
    "LinearProfile",
    "QuadraticBarrier",
    "StencilConfig",
    "Verdict",
    "apply_L_fd",
    "build_barrier",
    "certify_lemma",
    "certify_region",
    "check_cylinder_inclusion",
]
