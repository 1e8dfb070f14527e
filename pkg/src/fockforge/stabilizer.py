"""Dense stabilizer and graph-state vectors, built without any diagram machinery.

Used as independent oracles for the diagram compiler and the simulator.
Qubit 0 is the most significant bit of a basis index.
"""

from __future__ import annotations

import itertools
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli(label: str) -> np.ndarray:
    """Dense matrix of a Pauli string such as ``"XZIZ"``; an optional leading ``-`` flips the sign."""
    sign = -1 if label.startswith("-") else 1
    return sign * reduce(np.kron, (PAULI[c] for c in label.lstrip("+-")))


def on_qubits(n: int, ops: dict[int, str]) -> str:
    return "".join(ops.get(q, "I") for q in range(n))


_PRODUCT = {
    ("X", "Y"): (1j, "Z"), ("Y", "Z"): (1j, "X"), ("Z", "X"): (1j, "Y"),
    ("Y", "X"): (-1j, "Z"), ("Z", "Y"): (-1j, "X"), ("X", "Z"): (-1j, "Y"),
}


def pauli_product(a: str, b: str) -> str:
    """Label of a*b; raises if the product carries an imaginary phase."""
    phase = (-1 if a.startswith("-") else 1) * (-1 if b.startswith("-") else 1)
    out = []
    for p, q in zip(a.lstrip("+-"), b.lstrip("+-")):
        if p == "I" or q == "I":
            out.append(q if p == "I" else p)
        elif p == q:
            out.append("I")
        else:
            f, r = _PRODUCT[(p, q)]
            phase *= f
            out.append(r)
    if phase not in (1, -1):
        raise ValueError(f"{a}*{b} is not Hermitian")
    return ("-" if phase == -1 else "") + "".join(out)


def codespace_projector(generators: Sequence[str]) -> np.ndarray:
    n = len(generators[0].lstrip("+-"))
    proj = np.eye(2**n, dtype=complex)
    for g in generators:
        proj = proj @ (np.eye(2**n) + pauli(g)) / 2
    return proj


def stabilizer_state(generators: Sequence[str]) -> np.ndarray:
    """The +1 eigenvector shared by n independent commuting generators."""
    proj = codespace_projector(generators)
    j = int(np.argmax(np.linalg.norm(proj, axis=0)))
    v = proj[:, j]
    return v / np.linalg.norm(v)


def in_codespace(vec: np.ndarray, generators: Iterable[str], atol: float = 1e-9) -> bool:
    v = vec / np.linalg.norm(vec)
    return all(np.allclose(pauli(g) @ v, v, atol=atol) for g in generators)


def graph_generators(n: int, edges: Iterable[tuple[int, int]]) -> list[str]:
    """K_v = X_v times Z on every neighbour of v."""
    nbrs: dict[int, set[int]] = {v: set() for v in range(n)}
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    return [on_qubits(n, {v: "X", **{u: "Z" for u in nbrs[v]}}) for v in range(n)]


def graph_state_vector(n: int, edges: Iterable[tuple[int, int]]) -> np.ndarray:
    """|+>^n followed by a CZ on every edge."""
    bits = np.array(list(itertools.product((0, 1), repeat=n)))
    phase = np.ones(2**n)
    for a, b in edges:
        phase *= np.where(bits[:, a] & bits[:, b], -1.0, 1.0)
    return phase.astype(complex) / 2 ** (n / 2)


def ghz_vector(n: int) -> np.ndarray:
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 2**-0.5
    return v


def pauli_group(n: int, max_weight: int) -> list[str]:
    """Every Pauli string of weight at most ``max_weight``."""
    out = []
    for w in range(max_weight + 1):
        for support in itertools.combinations(range(n), w):
            for letters in itertools.product("XYZ", repeat=w):
                out.append(on_qubits(n, dict(zip(support, letters))))
    return out


def knill_laflamme(generators: Sequence[str], distance: int, atol: float = 1e-9) -> bool:
    """P E P is proportional to P for every Pauli E of weight below ``distance``."""
    n = len(generators[0].lstrip("+-"))
    proj = codespace_projector(generators)
    tr = np.trace(proj).real
    for e in pauli_group(n, distance - 1):
        m = proj @ pauli(e) @ proj
        c = np.trace(m) / tr
        if not np.allclose(m, c * proj, atol=atol):
            return False
    return True
