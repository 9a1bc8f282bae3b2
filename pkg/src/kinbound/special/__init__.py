"""Special functions: Gamma, Tricomi's U and the explicit stationary solution ψ."""

from .gamma import gamma_fn
from .psi import (
    PsiRegion,
    RegionComparability,
    RegionTag,
    calibrate_c_star,
    classify_region,
    log_psi,
    log_upsilon,
    psi_comparability,
    psi_exact,
    sample_region,
    upsilon,
    upsilon_at_zero,
    upsilon_derivative_s0,
)
from .tricomi import kummer_m, tricomi_u

__all__ = [
    "PsiRegion",
    "RegionComparability",
    "RegionTag",
    "calibrate_c_star",
    "classify_region",
    "gamma_fn",
    "kummer_m",
    "log_psi",
    "log_upsilon",
    "psi_comparability",
    "psi_exact",
    "sample_region",
    "tricomi_u",
    "upsilon",
    "upsilon_at_zero",
    "upsilon_derivative_s0",
]
