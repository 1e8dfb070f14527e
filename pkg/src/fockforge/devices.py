"""Linear-optical measurement devices acting on dual-rail qubits.

A device is a passive network plus a detector layout. Qubit ``i`` enters on
``qubit_rails[i]``; auxiliary photons enter on fixed modes; every mode that is
not an output rail is read by a photon-number-resolving detector.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .fock import BS_MATRIX, ModeUnitary

MIN_QUBITS = 2
MAX_QUBITS = 8

ANALYSER_KINDS = ("bell", "ghz")
KINDS = ANALYSER_KINDS + ("fusion",)


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class BoostUnit:
    """One single-qubit auxiliary booster: two one-photon modes on qubit ``qubit``."""

    qubit: int
    aux_modes: tuple[int, int]


@dataclass(frozen=True)
class Device:
    kind: str
    n: int
    unitary: ModeUnitary
    qubit_rails: tuple[tuple[int, int], ...]
    aux_inputs: tuple[tuple[int, int], ...] = ()
    detected_modes: tuple[int, ...] = ()
    output_rails: tuple[tuple[int, int], ...] = ()
    boosts: tuple[BoostUnit, ...] = field(default=())

    def __post_init__(self):
        m = self.unitary.modes
        if self.kind not in KINDS:
            raise ParameterError(f"unknown device kind {self.kind!r}")
        if len(self.qubit_rails) != self.n:
            raise ParameterError("one rail pair per qubit")
        rails = [j for pair in self.qubit_rails for j in pair]
        aux = [j for j, _ in self.aux_inputs]
        if len(set(rails + aux)) != len(rails) + len(aux):
            raise ParameterError("qubit rails and auxiliary modes must be disjoint")
        out = [j for pair in self.output_rails for j in pair]
        if sorted(set(self.detected_modes) | set(out)) != list(range(m)) or set(self.detected_modes) & set(out):
            raise ParameterError("detected modes and output rails must partition the modes")
        if any(not 0 <= j < m for j in rails + aux):
            raise ParameterError("mode index out of range")

    @property
    def modes(self) -> int:
        return self.unitary.modes

    @property
    def is_analyser(self) -> bool:
        return self.kind in ANALYSER_KINDS

    @property
    def photons(self) -> int:
        return self.n + sum(c for _, c in self.aux_inputs)

    @property
    def boosted(self) -> tuple[int, ...]:
        return tuple(u.qubit for u in self.boosts)

    def input_occupation(self, x) -> tuple[int, ...]:
        occ = [0] * self.modes
        for (r0, r1), b in zip(self.qubit_rails, x):
            occ[r1 if b else r0] += 1
        for j, c in self.aux_inputs:
            occ[j] += c
        return tuple(occ)

    def label(self) -> str:
        name = {"bell": "bell", "ghz": f"ghz{self.n}", "fusion": f"fusion{self.n}"}[self.kind]
        if self.boosts:
            name += "+sqa" + ",".join(str(q) for q in self.boosted)
        return name


def _bs(m: int, i: int, j: int) -> np.ndarray:
    mat = np.eye(m, dtype=complex)
    mat[np.ix_([i, j], [i, j])] = BS_MATRIX
    return mat


def _check_n(n: int):
    if not isinstance(n, (int, np.integer)) or not MIN_QUBITS <= n <= MAX_QUBITS:
        raise ParameterError(f"qubit count must be in [{MIN_QUBITS}, {MAX_QUBITS}], got {n}")


def _rails(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((2 * i, 2 * i + 1) for i in range(n))


def ghz_chain(n: int) -> np.ndarray:
    """Scattering matrix of the n-qubit analyser: mix each qubit's second rail
    with the next qubit's first rail, then close the loop between the outermost rails."""
    m = 2 * n
    u = np.eye(m, dtype=complex)
    for i in range(n - 1):
        u = _bs(m, 2 * i + 1, 2 * i + 2) @ u
    return _bs(m, 0, 2 * n - 1) @ u


def ghz_analyser(n: int) -> Device:
    _check_n(n)
    m = 2 * n
    return Device(
        kind="bell" if n == 2 else "ghz",
        n=n,
        unitary=ModeUnitary(ghz_chain(n)),
        qubit_rails=_rails(n),
        detected_modes=tuple(range(m)),
    )


def bell_analyser() -> Device:
    return ghz_analyser(2)


def type1_fusion(n: int) -> Device:
    """n dual-rail qubits in, one out on the outermost modes (0, 2n-1).

    Interior pairs (1,2), (3,4), ... are mixed and detected."""
    _check_n(n)
    m = 2 * n
    u = np.eye(m, dtype=complex)
    for i in range(n - 1):
        u = _bs(m, 2 * i + 1, 2 * i + 2) @ u
    return Device(
        kind="fusion",
        n=n,
        unitary=ModeUnitary(u),
        qubit_rails=_rails(n),
        detected_modes=tuple(range(1, m - 1)),
        output_rails=((0, m - 1),),
    )


def attach_sqa_beta(d: Device, qubit: int) -> Device:
    """Add a booster on ``qubit``: two single photons meet on a beamsplitter, then
    each auxiliary mode is mixed with one rail of the qubit after the analyser network."""
    if not d.is_analyser:
        raise ParameterError("boosting is only defined for analysers")
    if not 0 <= qubit < d.n:
        raise ParameterError(f"qubit index {qubit} out of range for {d.n} qubits")
    if qubit in d.boosted:
        raise ParameterError(f"qubit {qubit} is already boosted")
    m0 = d.modes
    m = m0 + 2
    a, b = m0, m0 + 1
    r0, r1 = d.qubit_rails[qubit]
    base = np.eye(m, dtype=complex)
    base[:m0, :m0] = d.unitary.matrix
    u = _bs(m, r1, b) @ _bs(m, r0, a) @ _bs(m, a, b) @ base
    return replace(
        d,
        unitary=ModeUnitary(u),
        aux_inputs=d.aux_inputs + ((a, 1), (b, 1)),
        detected_modes=d.detected_modes + (a, b),
        boosts=d.boosts + (BoostUnit(qubit, (a, b)),),
    )


def boosted(d: Device, qubits) -> Device:
    for q in qubits:
        d = attach_sqa_beta(d, q)
    return d


def build_device(kind: str, n: int | None = None, boost=()) -> Device:
    """Construct a device from the CLI-style spec (kind, qubit count, boosted qubits)."""
    if kind == "bell":
        if n not in (None, 2):
            raise ParameterError("a Bell analyser has two qubits")
        d = bell_analyser()
    elif kind == "ghz":
        d = ghz_analyser(3 if n is None else n)
    elif kind == "fusion":
        d = type1_fusion(2 if n is None else n)
    else:
        raise ParameterError(f"unknown device kind {kind!r}")
    return boosted(d, boost)
