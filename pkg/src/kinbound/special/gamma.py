"""Gamma function by the Lanczos approximation with reflection."""

import math
from typing import overload

import numpy as np
from numpy.typing import ArrayLike

from kinbound.errors import DomainError
from kinbound.geometry.models import FloatArray

# Lanczos coefficients for g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def _sinpi(x: FloatArray) -> FloatArray:
    """sin(πx) with the argument reduced to [−1/2, 1/2] first."""
    n = np.round(x)
    sign = np.where(np.mod(n, 2.0) == 0.0, 1.0, -1.0)
    return sign * np.sin(np.pi * (x - n))


def _lanczos(x: FloatArray) -> FloatArray:
    """Γ(x) for x ≥ 1/2."""
    z = x - 1.0
    series = np.full_like(z, _LANCZOS_COEFFICIENTS[0])
    for i, coefficient in enumerate(_LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * np.power(t, z + 0.5) * np.exp(-t) * series


@overload
def gamma_fn(x: float) -> float: ...
@overload
def gamma_fn(x: FloatArray) -> FloatArray: ...
def gamma_fn(x: ArrayLike) -> float | FloatArray:
    """Evaluate Γ(x) for real x away from the poles.

    Arguments below 1/2 use the reflection Γ(x) = π / (sin(πx)·Γ(1 − x)).

    Args:
        x: Scalar or array of real arguments.

    Returns:
        Γ(x) with the shape of ``x``.

    Raises:
        DomainError: If any argument is a non-positive integer.

    """
    values = np.asarray(x, dtype=np.float64)
    poles = (values <= 0) & (values == np.round(values))
    if np.any(poles):
        msg = f"Gamma function has a pole at {float(values[poles].ravel()[0]):g}"
        raise DomainError(msg)

    flat = np.atleast_1d(values)
    result = np.empty_like(flat)
    upper = flat >= 0.5
    result[upper] = _lanczos(flat[upper])
    lower = ~upper
    if np.any(lower):
        reflected = flat[lower]
        result[lower] = np.pi / (_sinpi(reflected) * _lanczos(1.0 - reflected))

    if values.ndim == 0:
        return float(result[0])
    return result.reshape(values.shape)
