"""Kinetic geometry: group structure, gauge, cylinders, Hölder fits and flattening.

The kinetic scaling S_r(t, x, v) = (r²t, r³x, rv) and the Galilean composition
z₀∘z = (t + t₀, x + x₀ + t·v₀, v + v₀) leave the kinetic Fokker-Planck operator
invariant; everything here is built on those two maps.
"""

from .flatten import FlattenedCoefficients, flatten_coefficients
from .group import (
    compose,
    cylinder_contains,
    cylinder_contains_group_form,
    gauge,
    inverse,
    kinetic_degree,
    kinetic_scale,
)
from .holder import HolderFit, fit_holder_exponent, oscillation, sample_cylinder
from .models import (
    BatchField,
    FloatArray,
    GraphDomain,
    KineticCylinder,
    MultiIndex,
    PhasePoint,
    PhaseSamples,
)

__all__ = [
    "BatchField",
    "FlattenedCoefficients",
    "FloatArray",
    "GraphDomain",
    "HolderFit",
    "KineticCylinder",
    "MultiIndex",
    "PhasePoint",
    "PhaseSamples",
    "compose",
    "cylinder_contains",
    "cylinder_contains_group_form",
    "fit_holder_exponent",
    "flatten_coefficients",
    "gauge",
    "inverse",
    "kinetic_degree",
    "kinetic_scale",
    "oscillation",
    "sample_cylinder",
]
