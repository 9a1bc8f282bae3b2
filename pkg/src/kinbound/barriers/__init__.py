"""Barrier families: recipes, anchor points, quasi-distance and radial profiles."""

from .models import AnchorPoint, BarrierMode, BarrierParams, ConstraintVerdict
from .profiles import (
    ExpBarrierState,
    grazing_Psi,
    phi_ode_barrier,
    varphi_power,
    varphi_power_log_slope,
)
from .quasidist import (
    HypodistCheck,
    QuasiDistanceJet,
    check_hypodist,
    range_box,
    region_P_membership,
    rho,
    rho_t,
    rho_t_jet,
    sample_region_P,
    sample_region_P_T,
)
from .recipes import admissibility_window, anchor_point, check_constraints, select_params

__all__ = [
    "AnchorPoint",
    "BarrierMode",
    "BarrierParams",
    "ConstraintVerdict",
    "ExpBarrierState",
    "HypodistCheck",
    "QuasiDistanceJet",
    "admissibility_window",
    "anchor_point",
    "check_constraints",
    "check_hypodist",
    "grazing_Psi",
    "phi_ode_barrier",
    "range_box",
    "region_P_membership",
    "rho",
    "rho_t",
    "rho_t_jet",
    "sample_region_P",
    "sample_region_P_T",
    "select_params",
    "varphi_power",
    "varphi_power_log_slope",
]
