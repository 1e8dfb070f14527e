"""Photon-level simulation of extracted schemes.

The scheme is run device by device on one global Fock state. Seed states are
created only when their first consumer runs, every device acts on its own
modes (qubit rails plus any auxiliary photons) through its multiphoton
transformation, and the chosen detector pattern is imposed immediately, so
the state never holds more than the currently live photons.

Input boundaries are handled through the Choi state: each input wire is one
half of a Bell pair whose other half is kept as a reference qubit. The output
vector is ordered reference qubits first, then outputs, which matches the
leg order of :func:`fockforge.zx.tensor.to_tensor`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np
from scipy.linalg import hadamard

from ..devices import Device, boosted, ghz_analyser, type1_fusion
from ..fock import BS_MATRIX, ModeUnitary, ResourceError, creation_columns, multiply_forms, normalise_poly
from ..kraus import KrausOperator, Outcome, kraus_table
from .extract import LOScheme, Node
from .tensor import canonical

MAX_PHOTONS = 16
MAX_QUBITS = 8
PRUNE = 1e-14
MATCH_ATOL = 1e-9


def x_measurement() -> Device:
    """One-qubit analyser: a beamsplitter across the rails, both modes detected."""
    return Device(kind="ghz", n=1, unitary=ModeUnitary(BS_MATRIX), qubit_rails=((0, 1),), detected_modes=(0, 1))


@lru_cache(maxsize=None)
def node_device(kind: str, size: int, boost: tuple[int, ...] = ()) -> Device:
    if kind == "analyser":
        return x_measurement() if size == 1 else boosted(ghz_analyser(size), boost)
    if kind == "fusion":
        return type1_fusion(size)
    raise ValueError(f"{kind} nodes are not measurement devices")


@lru_cache(maxsize=None)
def device_ops(kind: str, size: int, boost: tuple[int, ...] = ()) -> tuple[KrausOperator, ...]:
    return tuple(kraus_table(node_device(kind, size, boost)))


@dataclass
class _State:
    """Sparse Fock state over the live modes, which carry integer labels."""

    modes: list[int]
    terms: dict[tuple, complex]
    next_label: int = 0

    def fresh(self, k: int) -> list[int]:
        labels = list(range(self.next_label, self.next_label + k))
        self.next_label += k
        return labels

    def copy(self) -> "_State":
        return _State(list(self.modes), dict(self.terms), self.next_label)

    def norm2(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.terms.values()))

    def append(self, labels: list[int], local: Mapping[tuple, complex]):
        """Tensor on a new block of modes."""
        self.modes = self.modes + labels
        self.terms = {occ + o: a * b for occ, a in self.terms.items() for o, b in local.items()}


class _Local:
    """Evolution of one device's modes, cached per local input occupation."""

    def __init__(self, u: ModeUnitary):
        self.m = u.modes
        self.columns = creation_columns(u)
        self.cache: dict[tuple, dict] = {}

    def __call__(self, occ: tuple) -> dict:
        out = self.cache.get(occ)
        if out is None:
            modes = [j for j, c in enumerate(occ) for _ in range(c)]
            out = normalise_poly(multiply_forms({(0,) * self.m: 1.0 + 0j}, self.columns, modes), occ)
            self.cache[occ] = out
        return out


@lru_cache(maxsize=None)
def _local(kind: str, size: int, boost: tuple[int, ...]) -> _Local:
    if kind == "hadamard":
        return _Local(ModeUnitary(BS_MATRIX))
    return _Local(node_device(kind, size, boost).unitary)


def _apply(
    state: _State,
    rails: list[int],
    local: _Local,
    in_modes: list[int],
    aux: Mapping[int, int],
    detected: Sequence[int],
    pattern: Sequence[int],
    survivors: Sequence[int],
) -> list[int]:
    """Run a device: ``rails[i]`` feeds local mode ``in_modes[i]``; returns
    the labels given to the surviving local modes."""
    pos = [state.modes.index(r) for r in rails]
    keep = [i for i in range(len(state.modes)) if i not in set(pos)]
    new_labels = state.fresh(len(survivors))
    pattern = tuple(pattern)
    terms: dict[tuple, complex] = {}
    for occ, a in state.terms.items():
        loc = [0] * local.m
        for p, j in zip(pos, in_modes):
            loc[j] = occ[p]
        for j, c in aux.items():
            loc[j] += c
        rest = tuple(occ[i] for i in keep)
        for out, b in local(tuple(loc)).items():
            if tuple(out[j] for j in detected) != pattern:
                continue
            key = rest + tuple(out[j] for j in survivors)
            terms[key] = terms.get(key, 0j) + a * b
    state.modes = [state.modes[i] for i in keep] + new_labels
    state.terms = {k: v for k, v in terms.items() if abs(v) > 1e-15}
    return new_labels


def _ghz_local(size: int) -> dict[tuple, complex]:
    zeros = tuple(v for _ in range(size) for v in (1, 0))
    ones = tuple(v for _ in range(size) for v in (0, 1))
    return {zeros: 1 / math.sqrt(2), ones: 1 / math.sqrt(2)}


@dataclass(frozen=True)
class DeviceOutcome:
    node: str
    group: int
    pattern: tuple[int, ...]
    probability_factor: float = 1.0


@dataclass(frozen=True)
class SimulationResult:
    state: np.ndarray | None
    probability: float
    outcomes: tuple[DeviceOutcome, ...] = field(default=())

    @property
    def heralded(self) -> bool:
        return self.state is not None


def _photons(s: LOScheme, boosting: Mapping[str, Sequence[int]]) -> int:
    total = sum(n.size for n in s.of_kind("seed")) + 2 * len(s.of_kind("input"))
    return total + sum(2 * len(v) for v in boosting.values())


# chooser: node -> list of (group index, KrausOperator) to explore
Chooser = Callable[[Node, tuple[KrausOperator, ...]], Sequence[tuple[int, KrausOperator]]]


def success_groups(node: Node, ops: tuple[KrausOperator, ...]) -> list[tuple[int, KrausOperator]]:
    return [(i, k) for i, k in enumerate(ops) if k.outcome is Outcome.SUCCESS]


def run_branches(
    s: LOScheme,
    chooser: Chooser = success_groups,
    boosting: Mapping[str, Sequence[int]] | None = None,
    max_photons: int = MAX_PHOTONS,
    max_qubits: int = MAX_QUBITS,
) -> Iterator[SimulationResult]:
    """Depth-first over device outcomes; shared prefixes are simulated once.

    Each explored Kraus group is simulated with its first pattern; the other
    patterns of the group give the same state, so their probability is added
    through the group's factor ratio.
    """
    boosting = {k: tuple(sorted(v)) for k, v in (boosting or {}).items()}
    photons = _photons(s, boosting)
    if photons > max_photons:
        raise ResourceError(f"scheme uses {photons} photons, cap is {max_photons}")
    n_out = len(s.of_kind("output")) + len(s.of_kind("input"))
    if n_out > max_qubits:
        raise ResourceError(f"scheme has {n_out} output qubits, cap is {max_qubits}")
    steps = [s.node(v) for v in s.order if s.node(v).kind not in ("seed", "input")]
    state = _State([], {(): 1.0 + 0j})
    wires: dict[tuple, list[int]] = {}
    refs: dict[int, list[int]] = {}
    yield from _step(s, steps, 0, state, wires, refs, (), chooser, boosting)


def _rails_for(s: LOScheme, ref: tuple, state: _State, wires: dict, refs: dict) -> list[int]:
    """Rails of the wire arriving at ``ref``, creating its seed on first use."""
    w = s.wire_into(ref)
    if w.src not in wires:
        src = s.node(w.src[0])
        if src.kind == "seed":
            labels = state.fresh(2 * src.size)
            state.append(labels, _ghz_local(src.size))
            for i in range(src.size):
                wires[(src.id, i)] = labels[2 * i: 2 * i + 2]
        elif src.kind == "input":
            labels = state.fresh(4)
            state.append(labels, _ghz_local(2))
            refs[src.size] = labels[:2]
            wires[(src.id, 0)] = labels[2:]
        else:
            raise RuntimeError(f"wire from {src.id} used before it was produced")
    return wires.pop(w.src)


def _step(s, steps, k, state, wires, refs, outcomes, chooser, boosting) -> Iterator[SimulationResult]:
    if k == len(steps):
        yield _finish(s, state, wires, refs, outcomes)
        return
    node = steps[k]
    if node.kind in ("output", "identity", "hadamard"):
        rails = _rails_for(s, (node.id, 0), state, wires, refs)
        if node.kind == "hadamard":
            rails = _apply(state, rails, _local("hadamard", 1, ()), [0, 1], {}, [], (), [0, 1])
        if node.kind == "output":
            wires[("out", node.size)] = rails
        else:
            wires[(node.id, 0)] = rails
        yield from _step(s, steps, k + 1, state, wires, refs, outcomes, chooser, boosting)
        return
    boost = boosting.get(node.id, ())
    dev = node_device(node.kind, node.size, boost)
    ops = device_ops(node.kind, node.size, boost)
    inputs = [_rails_for(s, (node.id, i), state, wires, refs) for i in range(node.size)]
    for g, op in chooser(node, ops):
        st = state.copy()
        wr = dict(wires)
        rails = [r for pair in inputs for r in pair]
        in_modes = [j for pair in dev.qubit_rails for j in pair]
        survivors = [j for pair in dev.output_rails for j in pair]
        out = _apply(st, rails, _local(node.kind, node.size, boost), in_modes, dict(dev.aux_inputs), dev.detected_modes, op.patterns[0], survivors)
        f = np.abs(np.asarray(op.factors)) ** 2
        ratio = float(f.sum() / f[0])
        st.terms = {key: v * math.sqrt(ratio) for key, v in st.terms.items()}
        if survivors:
            wr[(node.id, 0)] = out
        rec = outcomes + (DeviceOutcome(node.id, g, op.patterns[0], ratio),)
        if st.norm2() < PRUNE:
            yield SimulationResult(None, 0.0, rec)
            continue
        yield from _step(s, steps, k + 1, st, wr, dict(refs), rec, chooser, boosting)


def _finish(s: LOScheme, state: _State, wires: dict, refs: dict, outcomes) -> SimulationResult:
    rails = [refs[n.size] for n in s.inputs] + [wires[("out", n.size)] for n in s.outputs]
    pos = {label: i for i, label in enumerate(state.modes)}
    vec = np.zeros(2 ** len(rails), dtype=complex)
    for occ, a in state.terms.items():
        idx = 0
        for r0, r1 in rails:
            pair = (occ[pos[r0]], occ[pos[r1]])
            if pair not in ((1, 0), (0, 1)):
                raise RuntimeError("an output mode pair does not hold one photon")
            idx = 2 * idx + pair[1]
        vec[idx] += a
    prob = float(np.vdot(vec, vec).real)
    if prob < PRUNE:
        return SimulationResult(None, 0.0, outcomes)
    return SimulationResult(vec / math.sqrt(prob), prob, outcomes)


def simulate_scheme(
    s: LOScheme,
    choices: Mapping[str, int | Sequence[int]] | None = None,
    boosting: Mapping[str, Sequence[int]] | None = None,
    max_photons: int = MAX_PHOTONS,
) -> SimulationResult:
    """One run with a chosen outcome per device.

    ``choices`` maps a device node to a Kraus group index or to a detector
    pattern; devices left out take their first success group.
    """
    choices = dict(choices or {})

    def pick(node: Node, ops):
        c = choices.get(node.id)
        if c is None:
            return success_groups(node, ops)[:1]
        if isinstance(c, int):
            return [(c, ops[c])]
        for i, k in enumerate(ops):
            if tuple(c) in k.patterns:
                # simulate exactly this pattern: a single-pattern operator
                j = k.patterns.index(tuple(c))
                single = KrausOperator(k.weights, (k.patterns[j],), (k.factors[j],), k.outcome, k.weight)
                return [(i, single)]
        raise ValueError(f"pattern {c} never occurs at {node.id}")

    return next(run_branches(s, pick, boosting, max_photons))


# Pauli frames


@dataclass(frozen=True)
class FrameMatch:
    fidelity: float
    x: int
    z: int
    n: int

    @property
    def ok(self) -> bool:
        return self.fidelity > 1 - MATCH_ATOL

    def label(self) -> str:
        """One letter per qubit: I, X, Z or Y (meaning XZ)."""
        out = []
        for q in range(self.n):
            bit = 1 << (self.n - 1 - q)
            out.append("IZXY"[(2 if self.x & bit else 0) + (1 if self.z & bit else 0)])
        return "".join(out)


def pauli_frame(state: np.ndarray, target: np.ndarray, frame_qubits: Sequence[int] | None = None) -> FrameMatch:
    """Best X^a Z^b (on ``frame_qubits``, default all) taking ``state`` to ``target``.

    For each bit-flip mask a, the overlap with every phase mask b is one
    Walsh-Hadamard transform of conj(target) * X^a state.
    """
    psi = canonical(state)
    tau = canonical(target)
    dim = len(psi)
    n = dim.bit_length() - 1
    allowed = 0
    for q in range(n) if frame_qubits is None else frame_qubits:
        allowed |= 1 << (n - 1 - q)
    idx = np.arange(dim)
    masks = idx[(idx & ~allowed) == 0]
    shifted = psi[idx[None, :] ^ masks[:, None]] * np.conj(tau)[None, :]
    overlaps = np.abs(shifted @ hadamard(dim).T) ** 2
    overlaps[:, (idx & ~allowed) != 0] = 0
    a, b = np.unravel_index(int(np.argmax(overlaps)), overlaps.shape)
    return FrameMatch(float(overlaps[a, b]), int(masks[a]), int(b), n)


@dataclass(frozen=True)
class VerifyReport:
    branches: int
    passed: int
    min_fidelity: float
    total_probability: float
    frames: tuple[tuple[tuple[DeviceOutcome, ...], str, float], ...]

    @property
    def ok(self) -> bool:
        return self.branches > 0 and self.passed == self.branches


def verify_scheme(
    s: LOScheme,
    target: np.ndarray,
    boosting: Mapping[str, Sequence[int]] | None = None,
    limit: int | None = None,
    max_photons: int = MAX_PHOTONS,
) -> VerifyReport:
    """Run every combination of success groups (or the first ``limit``) and
    compare each heralded output with ``target`` up to a Pauli frame on the
    output qubits."""
    n_ref = len(s.inputs)
    n = n_ref + len(s.outputs)
    frame_qubits = list(range(n_ref, n))
    frames = []
    passed = 0
    fids = []
    total = 0.0
    for res in itertools.islice(run_branches(s, success_groups, boosting, max_photons), limit):
        total += res.probability
        if not res.heralded:
            continue
        m = pauli_frame(res.state, target, frame_qubits)
        fids.append(m.fidelity)
        passed += m.ok
        frames.append((res.outcomes, m.label(), res.probability))
    return VerifyReport(len(frames), passed, min(fids, default=0.0), total, tuple(frames))
