"""Kraus operators of a device, one per detector pattern, grouped up to phase."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .devices import Device
from .dualrail import QubitString, bitstrings, complement, decode
from .exact import Number
from .fock import ATOL, Occupation, ResourceError, creation_columns, multiply_forms, normalise_poly

DEFAULT_MAX_PHOTONS = 16

# key of a Kraus weight: (occupation of the output rails, input bit string)
WeightKey = tuple[Occupation, QubitString]


class Outcome(Enum):
    SUCCESS = "SuccessEntangled"
    FAILURE = "Failure"
    INVALID = "Invalid"


def classify(weights: Mapping[Sequence[int], complex]) -> Outcome:
    """Success iff the support is a string and its complement with equal magnitudes."""
    support = {tuple(x): a for x, a in weights.items() if abs(a) > ATOL}
    if len(support) == 1:
        return Outcome.FAILURE
    if len(support) == 2:
        (x, a), (y, b) = support.items()
        if complement(x) == y and abs(abs(a) - abs(b)) < ATOL:
            return Outcome.SUCCESS
    return Outcome.INVALID


def _classify_keys(weights: Mapping[WeightKey, complex], n_out: int) -> Outcome:
    if n_out == 0:
        return classify({x: a for (_, x), a in weights.items()})
    flat = {}
    for (ket, x), a in weights.items():
        if abs(a) <= ATOL:
            continue
        bits = decode(ket)
        if bits is None:
            # output is not a qubit: a heralded failure of the fusion
            return Outcome.FAILURE
        flat[bits + x] = a
    return classify(flat)


@dataclass(frozen=True)
class KrausOperator:
    """Patterns sharing one functional up to a complex factor.

    ``weights`` is the combined operator: the shared direction, phase-fixed so
    its first entry is real and positive, scaled so its squared norm equals the
    summed squared norms of the member patterns. Pattern ``i`` on its own is
    ``factors[i]`` times the unit direction.
    """

    weights: dict[WeightKey, complex]
    patterns: tuple[Occupation, ...]
    factors: tuple[complex, ...]
    outcome: Outcome
    weight: Number

    @property
    def functional(self) -> dict[QubitString, complex]:
        """Bra-string weights, for operators whose output is the vacuum."""
        return {x: a for (ket, x), a in self.weights.items() if not ket}

    def pattern_weights(self, pattern: Sequence[int]) -> dict[WeightKey, complex]:
        i = self.patterns.index(tuple(pattern))
        norm = math.sqrt(sum(abs(a) ** 2 for a in self.weights.values()))
        return {k: self.factors[i] * a / norm for k, a in self.weights.items()}


@dataclass(frozen=True)
class PatternTable:
    """Amplitude of every (detector pattern, output occupation, input string).

    Row ``i`` of ``amps`` is the functional induced by ``patterns[i]``; its
    columns follow ``keys``.
    """

    n: int
    patterns: tuple[Occupation, ...]
    keys: tuple[WeightKey, ...]
    amps: np.ndarray

    def __len__(self):
        return len(self.patterns)

    def row(self, i: int) -> dict[WeightKey, complex]:
        return {k: complex(a) for k, a in zip(self.keys, self.amps[i]) if abs(a) > ATOL}

    def index(self) -> dict[Occupation, int]:
        return {r: i for i, r in enumerate(self.patterns)}

    def weights(self) -> np.ndarray:
        """Squared norm of each pattern's functional."""
        return np.sum(np.abs(self.amps) ** 2, axis=1)


def check_photons(d: Device, max_photons: int = DEFAULT_MAX_PHOTONS):
    if d.photons > max_photons:
        raise ResourceError(f"{d.photons} photons exceed the cap of {max_photons}")


def pattern_table(d: Device, max_photons: int = DEFAULT_MAX_PHOTONS) -> PatternTable:
    check_photons(d, max_photons)
    m = d.modes
    columns = creation_columns(d.unitary)
    # the auxiliary photons are the same for every input string: expand them once
    aux_modes = [j for j, c in d.aux_inputs for _ in range(c)]
    aux_poly = multiply_forms({(0,) * m: 1.0 + 0j}, columns, aux_modes)
    out_modes = [j for pair in d.output_rails for j in pair]
    det = d.detected_modes
    rows: dict[Occupation, int] = {}
    cols: dict[WeightKey, int] = {}
    ii: list[int] = []
    jj: list[int] = []
    vv: list[complex] = []
    for x in bitstrings(d.n):
        photon_modes = [rail[b] for rail, b in zip(d.qubit_rails, x)]
        poly = multiply_forms(aux_poly, columns, photon_modes)
        for s, amp in normalise_poly(poly, d.input_occupation(x)).items():
            ii.append(rows.setdefault(tuple(s[j] for j in det), len(rows)))
            jj.append(cols.setdefault((tuple(s[j] for j in out_modes), x), len(cols)))
            vv.append(amp)
    patterns = sorted(rows)
    keys = sorted(cols)
    rperm = np.empty(len(rows), dtype=np.int64)
    rperm[[rows[r] for r in patterns]] = np.arange(len(patterns))
    cperm = np.empty(len(cols), dtype=np.int64)
    cperm[[cols[k] for k in keys]] = np.arange(len(keys))
    amps = np.zeros((len(patterns), len(keys)), dtype=complex)
    np.add.at(amps, (rperm[np.asarray(ii, dtype=np.int64)], cperm[np.asarray(jj, dtype=np.int64)]), np.asarray(vv, dtype=complex))
    amps[np.abs(amps) <= ATOL] = 0
    keep = np.any(amps != 0, axis=1)
    return PatternTable(d.n, tuple(p for p, k in zip(patterns, keep) if k), tuple(keys), amps[keep])


def ray_labels(amps: np.ndarray, digits: int = 8) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Group rows that agree up to a complex scalar.

    Returns (group label per row, unit direction per row, factor per row) with
    row = factor * direction and the first nonzero entry of each direction
    real and positive.
    """
    norms = np.linalg.norm(amps, axis=1)
    first = np.argmax(np.abs(amps) > ATOL, axis=1)
    lead = amps[np.arange(len(amps)), first]
    factors = norms * lead / np.abs(lead)
    direction = amps / factors[:, None]
    scale = 10.0**digits
    key = np.concatenate([np.round(direction.real * scale), np.round(direction.imag * scale)], axis=1)
    _, labels = np.unique(key.astype(np.int64), axis=0, return_inverse=True)
    return labels.reshape(-1), direction, factors


def dyadic_total(values: np.ndarray, q: int = 40) -> Number:
    """Exact sum of values that are each a multiple of 2**-q, else a float."""
    scaled = np.asarray(values, dtype=float) * 2.0**q
    nums = np.round(scaled)
    if np.all(np.abs(scaled - nums) < 1e-3):
        return Fraction(sum(int(v) for v in nums), 2**q)
    return float(np.sum(values))


def group_patterns(table: PatternTable, n_out: int = 0) -> list[KrausOperator]:
    """Merge patterns whose functionals agree up to a complex scalar."""
    if not len(table):
        return []
    labels, direction, factors = ray_labels(table.amps)
    weights = table.weights()
    order = np.argsort(labels, kind="stable")
    bounds = np.flatnonzero(np.diff(labels[order])) + 1
    ops = []
    for members in np.split(order, bounds):
        f = factors[members]
        total = math.sqrt(float(np.sum(np.abs(f) ** 2)))
        rep = direction[members[0]]
        combined = {k: complex(a) * total for k, a in zip(table.keys, rep) if abs(a) > ATOL}
        ops.append(
            KrausOperator(
                weights=combined,
                patterns=tuple(table.patterns[i] for i in members),
                factors=tuple(complex(v) for v in f),
                outcome=_classify_keys(combined, n_out),
                weight=dyadic_total(weights[members]),
            )
        )
    rank = {Outcome.SUCCESS: 0, Outcome.FAILURE: 1, Outcome.INVALID: 2}
    ops.sort(key=lambda k: (rank[k.outcome], k.patterns[0]))
    return ops


def kraus_table(d: Device, max_photons: int = DEFAULT_MAX_PHOTONS, table: PatternTable | None = None) -> list[KrausOperator]:
    if table is None:
        table = pattern_table(d, max_photons)
    return group_patterns(table, len(d.output_rails))


def success_probability(d: Device, ops: list[KrausOperator] | None = None, max_photons: int = DEFAULT_MAX_PHOTONS) -> Number:
    """Heralded-success probability for a maximally mixed dual-rail input."""
    if ops is None:
        ops = kraus_table(d, max_photons)
    total = sum((k.weight for k in ops if k.outcome is Outcome.SUCCESS), Fraction(0))
    return total / 2**d.n


def pattern_labels(ops: list[KrausOperator]) -> dict[Occupation, int]:
    """Index of the operator each pattern belongs to."""
    return {r: i for i, k in enumerate(ops) for r in k.patterns}


def success_patterns(ops: list[KrausOperator]) -> set[Occupation]:
    return {r for k in ops if k.outcome is Outcome.SUCCESS for r in k.patterns}


def required_pnr(d: Device, scope: str = "distinguish", ops: list[KrausOperator] | None = None) -> int:
    """Detector resolution a device needs.

    ``"distinguish"``: smallest saturation level K (detectors report min(r, K))
    at which every success outcome is still identified unambiguously.
    ``"success"``: largest count in any success pattern.
    ``"all"``: largest count in any pattern that occurs.
    """
    if ops is None:
        ops = kraus_table(d)
    if scope == "all":
        return max(max(r, default=0) for k in ops for r in k.patterns)
    if scope == "success":
        return max((max(r, default=0) for r in success_patterns(ops)), default=0)
    if scope != "distinguish":
        raise ValueError(f"unknown scope {scope!r}")
    label = pattern_labels(ops)
    is_success = [k.outcome is Outcome.SUCCESS for k in ops]
    top = max(max(r, default=0) for r in label)
    for level in range(1, top + 1):
        seen: dict[Occupation, set[int]] = {}
        for r, i in label.items():
            seen.setdefault(tuple(min(c, level) for c in r), set()).add(i)
        if all(len(ids) == 1 for ids in seen.values() if any(is_success[i] for i in ids)):
            return level
    return top
