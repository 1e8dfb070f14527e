"""Dual-rail qubits: qubit i lives on modes (2i, 2i+1); |0> = |10>>, |1> = |01>>."""

from __future__ import annotations

import itertools
from typing import Iterator, Optional, Sequence

from .fock import DimensionError, FockState, FockSuperposition, Occupation

QubitString = tuple[int, ...]

_RAIL = {0: (1, 0), 1: (0, 1)}
_BIT = {(1, 0): 0, (0, 1): 1}


def encode(x: Sequence[int]) -> FockState:
    bits = tuple(int(b) for b in x)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"not a bit string: {x}")
    if not bits:
        raise DimensionError("need at least one qubit")
    return FockState(tuple(n for b in bits for n in _RAIL[b]))


def encode_occupation(x: Sequence[int]) -> Occupation:
    return tuple(n for b in x for n in _RAIL[int(b)])


def decode(f: FockState | Sequence[int]) -> Optional[QubitString]:
    """Inverse of :func:`encode`; ``None`` if any mode pair is not |10>> or |01>>."""
    occ = f.occupations if isinstance(f, FockState) else tuple(f)
    if len(occ) % 2:
        raise DimensionError(f"dual-rail decoding needs an even mode count, got {len(occ)}")
    bits = []
    for k in range(0, len(occ), 2):
        b = _BIT.get((occ[k], occ[k + 1]))
        if b is None:
            return None
        bits.append(b)
    return tuple(bits)


def bitstrings(n: int) -> Iterator[QubitString]:
    return itertools.product((0, 1), repeat=n)


def complement(x: Sequence[int]) -> QubitString:
    return tuple(1 - b for b in x)


def project_dr(state: FockSuperposition, n: int) -> FockSuperposition:
    """Drop every term that is not a valid n-qubit dual-rail encoding."""
    if state.modes != 2 * n:
        raise DimensionError(f"{n} qubits need {2 * n} modes, state has {state.modes}")
    return FockSuperposition(state.modes, {occ: a for occ, a in state.terms.items() if decode(occ) is not None})


def qubit_state(amplitudes: dict[Sequence[int], complex]) -> FockSuperposition:
    """Dual-rail Fock superposition from a map of bit strings to amplitudes."""
    n = len(next(iter(amplitudes)))
    return FockSuperposition(2 * n, {encode_occupation(x): a for x, a in amplitudes.items()})
