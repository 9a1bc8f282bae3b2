"""Exception hierarchy for the kinetic boundary lab.

Every exception derives from :class:`KinboundError` and from the builtin that
best describes it, so callers may catch either the whole family or the usual
``ValueError`` / ``RuntimeError``.
"""


class KinboundError(Exception):
    """Base class for all errors raised by kinbound."""


class DomainError(KinboundError, ValueError):
    """Argument lies outside the mathematical domain of the operation."""


class UnsupportedParameterError(KinboundError, ValueError):
    """Parameters fall outside the validated numerical envelope.

    Distinct from :class:`DomainError`: the value is mathematically meaningful,
    but the implementation does not guarantee its stated accuracy there.
    """


class ConstraintViolationError(KinboundError, ValueError):
    """A barrier parameter constraint does not hold."""


class WindowViolationError(ConstraintViolationError):
    """r̃ lies outside the admissibility window of a parameter recipe."""


class StencilDomainError(KinboundError, ValueError):
    """A finite-difference stencil footprint leaves the function's domain."""


class SamplerStarvationError(KinboundError, RuntimeError):
    """A rejection sampler could not hit its target region."""


class StabilityError(KinboundError, ValueError):
    """A time step violates the CFL bound or coefficients are not finite."""


class DegenerateInputError(KinboundError, ValueError):
    """Experiment input carries no signal (zero trace, constant field)."""


class ConfigError(KinboundError, ValueError):
    """Malformed configuration text or unknown registry entry."""
