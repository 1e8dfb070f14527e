"""Success probability of boosted analysers without the full pattern table.

Every booster couples only to its own qubit's two rails, and it does so after
the analyser network. The modes therefore split into independent groups: a
boosted qubit's rails plus its two auxiliary modes, or an unboosted qubit's
rails alone. With N[s, x] the network amplitudes on the qubit rails and G_q
the group transfer amplitudes, a detector pattern r has

    A[r, x] = sum_s N[s, x] * prod_q G_q(r_q | s_q).

The sum is organised by how many network photons land in each group, and the
first group's pattern index is streamed so memory stays bounded. Success is
decided pattern by pattern; grouping never changes whether a pattern heralds
success, so the Kraus grouping step is not needed here.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .devices import _bs, ghz_chain
from .dualrail import bitstrings
from .fock import ModeUnitary, creation_columns, multiply_forms, normalise_poly
from .kraus import dyadic_total

ZERO = 1e-9


def _network_amplitudes(n: int) -> dict[tuple, np.ndarray]:
    """Qubit-rail occupation after the analyser network -> amplitude per input string."""
    cols = creation_columns(ModeUnitary(ghz_chain(n)))
    xs = list(bitstrings(n))
    out: dict[tuple, np.ndarray] = {}
    for k, x in enumerate(xs):
        occ = tuple(v for b in x for v in ((0, 1) if b else (1, 0)))
        modes = [2 * i + b for i, b in enumerate(x)]
        poly = multiply_forms({(0,) * (2 * n): 1.0 + 0j}, cols, modes)
        for s, a in normalise_poly(poly, occ).items():
            out.setdefault(s, np.zeros(len(xs), dtype=complex))[k] = a
    return out


def _booster_unitary() -> ModeUnitary:
    # local modes: rail 0, rail 1, aux a, aux b
    return ModeUnitary(_bs(4, 1, 3) @ _bs(4, 0, 2) @ _bs(4, 2, 3))


def _group_matrix(k: int, boosted: bool) -> tuple[list[tuple], np.ndarray]:
    """Transfer amplitudes from the k-photon rail states into group patterns.

    Columns follow the rail states (k-j, j) for j = 0..k.
    """
    rails = [(k - j, j) for j in range(k + 1)]
    if not boosted:
        return rails, np.eye(k + 1, dtype=complex)
    cols = creation_columns(_booster_unitary())
    rows: dict[tuple, int] = {}
    entries = []
    for c, (n0, n1) in enumerate(rails):
        occ = (n0, n1, 1, 1)
        modes = [0] * n0 + [1] * n1 + [2, 3]
        poly = multiply_forms({(0, 0, 0, 0): 1.0 + 0j}, cols, modes)
        for r, a in normalise_poly(poly, occ).items():
            entries.append((rows.setdefault(r, len(rows)), c, a))
    mat = np.zeros((len(rows), k + 1), dtype=complex)
    for i, c, a in entries:
        mat[i, c] += a
    return sorted(rows, key=rows.get), mat


def _success_rows(amps: np.ndarray, n: int) -> np.ndarray:
    """Rows whose support is {x, complement x} with equal moduli."""
    mag = np.abs(amps)
    nz = mag > ZERO
    ok = nz.sum(axis=1) == 2
    first = np.argmax(nz, axis=1)
    partner = (2**n - 1) ^ first
    idx = np.arange(len(amps))
    ok &= nz[idx, partner] & (np.abs(mag[idx, first] - mag[idx, partner]) < ZERO)
    return ok


def compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        edges = (-1,) + cut + (total + parts - 1,)
        yield tuple(edges[i + 1] - edges[i] - 1 for i in range(parts))


def boosted_analyser_stats(n: int, boost: Sequence[int]) -> tuple[Fraction | float, int]:
    """P_S of the n-qubit analyser with boosters on the given qubits, and the
    largest single-detector count among its success patterns.

    Matches :func:`fockforge.kraus.success_probability` on the device built
    by ``boosted(ghz_analyser(n), boost)``, but never stores more than one
    slice of the pattern table.
    """
    boost = set(boost)
    net = _network_amplitudes(n)
    groups = {(k, b): _group_matrix(k, b) for b in (False, True) for k in range(n + 1)}
    total: Fraction | float = Fraction(0)
    top = 0
    for comp in compositions(n, n):
        states = [[(k - j, j) for j in range(k + 1)] for k in comp]
        shape = tuple(k + 1 for k in comp) + (2**n,)
        tensor = np.zeros(shape, dtype=complex)
        for idx in itertools.product(*(range(k + 1) for k in comp)):
            s = tuple(v for q, j in enumerate(idx) for v in states[q][j])
            vec = net.get(s)
            if vec is not None:
                tensor[idx] = vec
        if not np.any(tensor):
            continue
        pats, mats = zip(*(groups[(k, q in boost)] for q, k in enumerate(comp)))
        # largest count in each group pattern, broadcast over groups 1..n-1
        peaks = np.zeros(tuple(len(p) for p in pats[1:]), dtype=int)
        for q in range(1, n):
            view = [1] * (n - 1)
            view[q - 1] = len(pats[q])
            peaks = np.maximum(peaks, np.array([max(r) for r in pats[q]]).reshape(view))
        peaks = peaks.reshape(-1)
        # apply groups 1..n-1 once, then stream the first group's patterns
        rest = tensor
        for q in range(1, n):
            rest = np.moveaxis(np.tensordot(mats[q], rest, axes=([1], [q])), 0, q)
        for r0, row in zip(pats[0], mats[0]):
            slab = np.tensordot(row, rest, axes=([0], [0])).reshape(-1, 2**n)
            ok = _success_rows(slab, n)
            if np.any(ok):
                total = total + dyadic_total(np.sum(np.abs(slab[ok]) ** 2, axis=1))
                top = max(top, max(r0), int(peaks[ok].max()))
    return total / 2**n, top


def boosted_analyser_success(n: int, boost: Sequence[int]) -> Fraction | float:
    return boosted_analyser_stats(n, boost)[0]
