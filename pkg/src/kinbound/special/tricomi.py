"""Tricomi's confluent hypergeometric function U(a, b, x) for real x ≥ 0.

Three regimes cover the validated envelope −1 < a ≤ 4, 0 < b < 1:

* ``x < 4``: the two-Kummer-series representation

      U = Γ(1−b)/Γ(a−b+1)·M(a, b, x) + Γ(b−1)/Γ(a)·x^{1−b}·M(a−b+1, 2−b, x),

  each series summed until a term drops below 1e-16 of the partial sum;
* ``4 ≤ x < 30``: generalized Gauss-Laguerre quadrature of the integral
  representation for a > 0, and the contiguous recurrence in a for a ≤ 0;
* ``x ≥ 30``: the divergent large-argument series truncated at its smallest term.
"""

import logging
from functools import cache
from typing import overload

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from kinbound.errors import DomainError, UnsupportedParameterError
from kinbound.geometry.models import FloatArray
from kinbound.special.gamma import gamma_fn

logger = logging.getLogger(__name__)

SERIES_LIMIT = 4.0
ASYMPTOTIC_LIMIT = 30.0
SERIES_TOLERANCE = 1e-16
MAX_TERMS = 500
LAGUERRE_NODES = 64

A_RANGE = (-1.0, 4.0)
B_RANGE = (0.0, 1.0)


def _check_envelope(a: float, b: float) -> None:
    if not A_RANGE[0] < a <= A_RANGE[1]:
        msg = f"tricomi_u is validated for {A_RANGE[0]} < a <= {A_RANGE[1]}, got a={a}"
        raise UnsupportedParameterError(msg)
    if not B_RANGE[0] < b < B_RANGE[1]:
        msg = f"tricomi_u is validated for {B_RANGE[0]} < b < {B_RANGE[1]}, got b={b}"
        raise UnsupportedParameterError(msg)


def kummer_m(a: float, b: float, x: FloatArray) -> FloatArray:
    """Sum Kummer's series M(a, b, x) = Σ (a)_n x^n / ((b)_n n!) termwise."""
    term = np.ones_like(x)
    total = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for n in range(MAX_TERMS):
        term = np.where(active, term * (a + n) * x / ((b + n) * (n + 1)), 0.0)
        total = total + term
        active &= np.abs(term) >= SERIES_TOLERANCE * np.abs(total)
        if not np.any(active):
            break
    else:
        logger.warning("Kummer series hit %d terms for a=%g, b=%g", MAX_TERMS, a, b)
    return total


def _series_branch(a: float, b: float, x: FloatArray) -> FloatArray:
    first = gamma_fn(1.0 - b) / gamma_fn(a - b + 1.0) * kummer_m(a, b, x)
    if a == np.round(a) and a <= 0:
        # 1/Γ(a) vanishes; U reduces to a polynomial multiple of M
        return first
    second = (
        gamma_fn(b - 1.0) / gamma_fn(a)
        * np.power(x, 1.0 - b)
        * kummer_m(a - b + 1.0, 2.0 - b, x)
    )
    return first + second


@cache
def _laguerre_rule(alpha: float) -> tuple[FloatArray, FloatArray]:
    nodes, weights = special.roots_genlaguerre(LAGUERRE_NODES, alpha)
    return np.asarray(nodes, dtype=np.float64), np.asarray(weights, dtype=np.float64)


def _laguerre_branch(a: float, b: float, x: FloatArray) -> FloatArray:
    """U(a, b, x) = x^{−a}/Γ(a)·∫ e^{−s} s^{a−1} (1 + s/x)^{b−a−1} ds for a > 0."""
    nodes, weights = _laguerre_rule(a - 1.0)
    kernel = np.power(1.0 + nodes[None, :] / x[:, None], b - a - 1.0)
    return np.power(x, -a) / gamma_fn(a) * (kernel @ weights)


def _intermediate_branch(a: float, b: float, x: FloatArray) -> FloatArray:
    if a > 0:
        return _laguerre_branch(a, b, x)
    # U(a−1) = (x + 2a − b)·U(a) − a(a − b + 1)·U(a + 1), shifted so both right-hand terms have a > 0
    shifted = a + 1.0
    return (x + 2.0 * shifted - b) * _laguerre_branch(shifted, b, x) - shifted * (
        shifted - b + 1.0
    ) * _laguerre_branch(shifted + 1.0, b, x)


def _asymptotic_branch(a: float, b: float, x: FloatArray) -> FloatArray:
    """x^{−a}·Σ (a)_n (a−b+1)_n / n! · (−x)^{−n}, truncated at the smallest term."""
    term = np.ones_like(x)
    total = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for n in range(MAX_TERMS):
        next_term = -term * (a + n) * (a - b + 1.0 + n) / ((n + 1) * x)
        use = active & (np.abs(next_term) < np.abs(term))
        total = total + np.where(use, next_term, 0.0)
        term = np.where(use, next_term, term)
        active = use & (np.abs(next_term) >= SERIES_TOLERANCE * np.abs(total))
        if not np.any(active):
            break
    return np.power(x, -a) * total


@overload
def tricomi_u(a: float, b: float, x: float) -> float: ...
@overload
def tricomi_u(a: float, b: float, x: FloatArray) -> FloatArray: ...
def tricomi_u(a: float, b: float, x: ArrayLike) -> float | FloatArray:
    """Evaluate Tricomi's function U(a, b, x) for x ≥ 0.

    Args:
        a: First parameter, −1 < a ≤ 4.
        b: Second parameter, 0 < b < 1.
        x: Scalar or array of non-negative arguments.

    Returns:
        U(a, b, x) with the shape of ``x``; U(a, b, 0) = Γ(1−b)/Γ(a−b+1).

    Raises:
        UnsupportedParameterError: If (a, b) lies outside the validated envelope.
        DomainError: If any x is negative.

    """
    _check_envelope(a, b)
    values = np.asarray(x, dtype=np.float64)
    if np.any(values < 0) or np.any(np.isnan(values)):
        msg = "tricomi_u requires x >= 0"
        raise DomainError(msg)

    flat = np.atleast_1d(values).ravel()
    result = np.empty_like(flat)

    at_zero = flat == 0.0
    result[at_zero] = gamma_fn(1.0 - b) / gamma_fn(a - b + 1.0)

    series = (flat > 0.0) & (flat < SERIES_LIMIT)
    if np.any(series):
        result[series] = _series_branch(a, b, flat[series])

    intermediate = (flat >= SERIES_LIMIT) & (flat < ASYMPTOTIC_LIMIT)
    if np.any(intermediate):
        result[intermediate] = _intermediate_branch(a, b, flat[intermediate])

    asymptotic = flat >= ASYMPTOTIC_LIMIT
    if np.any(asymptotic):
        result[asymptotic] = _asymptotic_branch(a, b, flat[asymptotic])

    if values.ndim == 0:
        return float(result[0])
    return result.reshape(values.shape)
