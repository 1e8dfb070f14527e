"""Closed-form detection-pattern rules for the unboosted analyser and fusion.

The analyser network mixes rails in cyclic pairs: pair ``i`` joins the second
rail of qubit ``i`` with the first rail of qubit ``i+1`` (modes 2i+1, 2i+2),
and the closing pair joins mode 0 (first rail of qubit 0) with mode 2n-1
(second rail of qubit n-1). Each pair's counts depend only on the two qubit
values it touches, so the amplitude of every pattern factorises pair by pair.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .dualrail import QubitString

Pair = tuple[int, int]


def analyser_pairs(n: int) -> list[Pair]:
    """Mode pairs read together, in qubit order; the last is the closing pair."""
    return [(2 * i + 1, 2 * i + 2) for i in range(n - 1)] + [(0, 2 * n - 1)]


def _pair_bits(x: Sequence[int], i: int, n: int) -> tuple[int, int]:
    """(photon from the pair's first mode, photon from its second mode)."""
    if i < n - 1:
        return int(x[i] == 1), int(x[i + 1] == 0)
    return int(x[0] == 0), int(x[n - 1] == 1)


def local_amplitude(first: int, second: int, counts: tuple[int, int]) -> float:
    """<rp, rq| applied to the pair's creation operators on vacuum.

    A photon on the first mode of a pair exits as (a_p + a_q)/sqrt2, one on the
    second mode as (a_p - a_q)/sqrt2; the 1/sqrt2 factors are left out here.
    """
    rp, rq = counts
    if rp + rq != first + second:
        return 0.0
    if first and second:
        # (a_p + a_q)(a_p - a_q) = a_p^2 - a_q^2
        return {(2, 0): math.sqrt(2), (0, 2): -math.sqrt(2)}.get(counts, 0.0)
    if first:
        return 1.0
    if second:
        return 1.0 if rp else -1.0
    return 1.0


def predicted_amplitude(x: Sequence[int], r: Sequence[int]) -> float:
    """<r| U |x> for the n-qubit analyser, from the pair factorisation."""
    n = len(x)
    amp = 2 ** (-n / 2)
    for i, (p, q) in enumerate(analyser_pairs(n)):
        amp *= local_amplitude(*_pair_bits(x, i, n), (r[p], r[q]))
        if amp == 0:
            return 0.0
    return amp


def infer_input(r: Sequence[int]) -> Optional[QubitString]:
    """The unique input string consistent with ``r``, or None when every pair
    reads one photon (then only x_i = x_{i+1} for all i is known)."""
    n = len(r) // 2
    x: list[Optional[int]] = [None] * n
    for i, (p, q) in enumerate(analyser_pairs(n)):
        counts = (r[p], r[q])
        j, k = (i, (i + 1) % n) if i < n - 1 else (n - 1, 0)
        if counts in ((2, 0), (0, 2)):
            # photons from both ends: qubit j on its 1 rail, qubit k on its 0 rail
            x[j], x[k] = 1, 0
        elif counts == (0, 0):
            x[j], x[k] = 0, 1
    if all(v is None for v in x):
        return None
    # equal neighbours across every single-photon pair fill in the rest
    for _ in range(n):
        for i in range(n):
            if x[i] is None and x[i - 1] is not None:
                x[i] = x[i - 1]
    return tuple(x)


def ghz_sign(r: Sequence[int]) -> int:
    """Relative sign between the all-0 and all-1 branches for an ambiguous pattern.

    With y_i = 1 when pair i reads (0,1), even parity of y and the closing pair
    reading (1,0) gives the + state; each flip of either condition flips it.
    """
    n = len(r) // 2
    pairs = analyser_pairs(n)
    parity = sum(1 for p, q in pairs[:-1] if (r[p], r[q]) == (0, 1)) % 2
    p, q = pairs[-1]
    closing = 0 if (r[p], r[q]) == (1, 0) else 1
    return -1 if (parity + closing) % 2 else 1


def fusion_sign_exponent(r: Sequence[int]) -> int:
    """k in the fusion map (-1)^k |0><0...0| + |1><1...1|.

    ``r`` lists the counts on the detected modes 1 .. 2n-2 in order; k is the
    number of mixed pairs whose photon left on the second mode.
    """
    return sum(1 for i in range(0, len(r), 2) if (r[i], r[i + 1]) == (0, 1)) % 2
