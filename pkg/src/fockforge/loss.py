"""Success probability under uniform photon loss, as an exact polynomial in eta.

Uniform loss commutes with a passive network, so losing photons before the
network is the same as binomially thinning the lossless detector counts. Both
rules below only need the lossless pattern table.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .devices import Device, ParameterError
from .exact import Number, snap_dyadic
from .kraus import KrausOperator, Outcome, PatternTable, dyadic_total, kraus_table, pattern_labels, pattern_table

RULES = ("idle-unit", "unambiguous")
_SCALE = 40


@dataclass(frozen=True)
class LossModel:
    eta: float = 1.0
    rule: str = "idle-unit"

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ParameterError(f"eta must lie in [0, 1], got {self.eta}")
        if self.rule not in RULES:
            raise ParameterError(f"unknown loss rule {self.rule!r}")


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in eta with exact rational (or float) coefficients."""

    coeffs: dict[int, Number] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {k: v for k, v in sorted(self.coeffs.items()) if v != 0})

    def __call__(self, eta: float) -> float:
        return float(sum(float(c) * eta**k for k, c in self.coeffs.items()))

    def exact(self, eta: Fraction) -> Number:
        return sum((c * eta**k for k, c in self.coeffs.items()), Fraction(0))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return Polynomial(out)

    def derivative(self) -> "Polynomial":
        return Polynomial({k - 1: k * c for k, c in self.coeffs.items() if k})

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*eta^{k}" for k, c in self.coeffs.items())


def _thinning(kept: int, lost: int) -> dict[int, int]:
    """Integer coefficients of eta^kept (1 - eta)^lost."""
    return {kept + j: math.comb(lost, j) * (-1) ** j for j in range(lost + 1)}


def _idle_units(d: Device, r) -> int:
    pos = {mode: i for i, mode in enumerate(d.detected_modes)}
    idle = 0
    for unit in d.boosts:
        group = list(d.qubit_rails[unit.qubit]) + list(unit.aux_modes)
        if sum(r[pos[j]] for j in group) == 2:
            idle += 1
    return idle


def idle_unit_polynomial(d: Device, ops: list[KrausOperator]) -> Polynomial:
    """Each lossless success event needs every photon except those of idle boosters.

    A booster's coupling group (its two auxiliary modes and the rails of its
    qubit) always holds its own two photons plus whatever the analyser network
    routed onto those rails. When the group reads exactly two, no qubit photon
    reached it and the outcome is fixed by the other detectors, so losing that
    booster's photons leaves the herald intact.
    """
    coeffs: dict[int, Number] = {}
    for k in ops:
        if k.outcome is not Outcome.SUCCESS:
            continue
        for r, f in zip(k.patterns, k.factors):
            power = d.photons - 2 * _idle_units(d, r)
            p = snap_dyadic(abs(f) ** 2)
            coeffs[power] = coeffs.get(power, Fraction(0)) + p / 2**d.n
    return Polynomial(coeffs)


def unambiguous_polynomial(d: Device, ops: list[KrausOperator], table: PatternTable) -> Polynomial:
    """Accept a thinned pattern only if every lossless pattern above it heralds one success ray."""
    label = pattern_labels(ops)
    succ = [k.outcome is Outcome.SUCCESS for k in ops]
    ambiguous = -1
    herald: dict[tuple, int] = {}
    # weights are dyadic, so integer numerators over 2**SCALE keep the sums exact
    contrib: dict[tuple, dict[int, int]] = {}
    for r, w in zip(table.patterns, table.weights()):
        i = label[r] if succ[label[r]] else ambiguous
        weight = dyadic_total([w], _SCALE)
        if not isinstance(weight, Fraction):
            raise ValueError(f"pattern {r} has a non-dyadic weight")
        num = int(weight * 2**_SCALE)
        total = sum(r)
        ranges = [range(c + 1) for c in r]
        for rp in itertools.product(*ranges):
            h = herald.get(rp)
            if h is None:
                herald[rp] = i
            elif h != i:
                herald[rp] = ambiguous
            mult = 1
            for c, e in zip(r, rp):
                if e and e != c:
                    mult *= math.comb(c, e)
            slot = contrib.setdefault(rp, {})
            slot[total] = slot.get(total, 0) + mult * num
    coeffs: dict[int, int] = {}
    for rp, h in herald.items():
        if h == ambiguous:
            continue
        kept = sum(rp)
        for total, c in contrib[rp].items():
            for power, b in _thinning(kept, total - kept).items():
                coeffs[power] = coeffs.get(power, 0) + b * c
    return Polynomial({k: Fraction(c, 2**_SCALE * 2**d.n) for k, c in coeffs.items()})


def lossy_success_probability(
    d: Device,
    rule: str = "idle-unit",
    ops: list[KrausOperator] | None = None,
    table: PatternTable | None = None,
) -> Polynomial:
    """Success probability as a polynomial in the per-photon transmission eta.

    ``rule="idle-unit"`` credits a success event with tolerance to losing the
    photons of boosters it did not use. ``rule="unambiguous"`` accepts any
    thinned pattern whose possible lossless origins all herald the same
    success ray, which is never smaller.
    """
    if not d.is_analyser:
        raise ParameterError("loss polynomials are defined for analysers only")
    if rule not in RULES:
        raise ParameterError(f"unknown loss rule {rule!r}")
    if table is None:
        table = pattern_table(d)
    if ops is None:
        ops = kraus_table(d, table=table)
    if rule == "idle-unit":
        return idle_unit_polynomial(d, ops)
    return unambiguous_polynomial(d, ops, table)


def sweep(poly: Polynomial, etas: Iterable[float]) -> list[tuple[float, float]]:
    return [(float(e), poly(float(e))) for e in etas]
