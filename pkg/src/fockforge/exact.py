"""Exact rational bookkeeping for probabilities that are dyadic by construction."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Number = Union[Fraction, float]

SNAP_TOL = 1e-12
MAX_DYADIC_EXPONENT = 40


def snap_dyadic(value: float, tol: float = SNAP_TOL) -> Number:
    """Return ``p / 2**q`` if ``value`` is that close to one, else ``value`` unchanged.

    The smallest ``q`` wins, so 0.5 snaps to 1/2 rather than 2/4.
    """
    for q in range(MAX_DYADIC_EXPONENT + 1):
        p = round(value * 2**q)
        if abs(value - p / 2**q) < tol:
            return Fraction(p, 2**q)
    return float(value)


def exact_sum(values: Iterable[float]) -> Number:
    """Snap each value and add them, staying rational while every term is."""
    total: Number = Fraction(0)
    for v in values:
        total = total + snap_dyadic(v)
    return total


def is_exact(x: Number) -> bool:
    return isinstance(x, Fraction)


def fmt(x: Number) -> str:
    return str(x) if isinstance(x, Fraction) else f"{x:.12g}"
