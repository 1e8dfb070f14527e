"""Tensor semantics of phase-free diagrams by variable elimination.

Every group of Z spiders joined by plain wires shares one bit. Hadamard
wires contribute H[a, b] between the bits at their ends, boundaries get their
own bits, and all internal bits are summed out one at a time (smallest
intermediate first). ``numpy.einsum`` handles each step, which keeps the
label count small whatever the diagram size.
"""

from __future__ import annotations

import math
import string
from typing import Mapping, Sequence

import numpy as np

from ..fock import ResourceError
from .diagram import ZXDiagram

MAX_BOUNDARY = 12
MAX_FACTOR_BITS = 24
EQ_ATOL = 1e-9

H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
ID2 = np.eye(2, dtype=complex)

Factor = tuple[tuple, np.ndarray]


def _find(parent: dict, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _factors(d: ZXDiagram) -> tuple[list[Factor], set, dict[int, tuple]]:
    parent = {s.id: s.id for s in d.spiders}
    for e in d.edges:
        if not e.hadamard and e.a[0] == e.b[0] == "spider":
            ra, rb = _find(parent, e.a[1]), _find(parent, e.b[1])
            if ra != rb:
                parent[ra] = rb

    def var(end):
        if end[0] == "boundary":
            return ("b", end[1])
        return ("s", _find(parent, end[1]))

    internal = {("s", _find(parent, s.id)) for s in d.spiders}
    factors: list[Factor] = []
    for e in d.edges:
        va, vb = var(e.a), var(e.b)
        if not e.hadamard and e.a[0] == e.b[0] == "spider":
            continue
        mat = H if e.hadamard else ID2
        if va == vb:
            factors.append(((va,), np.diag(mat).copy()))
        else:
            factors.append(((va, vb), mat))
    bvars = {k: ("b", k) for k in d.inputs + d.outputs}
    return factors, internal, bvars


def _einsum(factors: list[Factor], keep: Sequence) -> np.ndarray:
    labels: dict = {}
    for vs, _ in factors:
        for v in vs:
            labels.setdefault(v, string.ascii_letters[len(labels)])
    for v in keep:
        labels.setdefault(v, string.ascii_letters[len(labels)])
    spec = ",".join("".join(labels[v] for v in vs) for vs, _ in factors)
    spec += "->" + "".join(labels[v] for v in keep)
    arrays = [t for _, t in factors]
    if not factors:
        # no factor mentions anything: the sum is over free bits only
        return np.ones((2,) * len(keep), dtype=complex)
    return np.einsum(spec, *arrays, optimize=len(factors) > 2)


def _eliminate(factors: list[Factor], internal: set) -> tuple[list[Factor], complex]:
    """Sum out every internal bit; returns remaining factors and a scalar."""
    factors = list(factors)
    scalar = 1.0 + 0j
    pending = set(internal)
    while pending:
        # cost of eliminating v: size of the union of its neighbours
        best, best_vars = None, None
        for v in pending:
            vs = set()
            for f_vars, _ in factors:
                if v in f_vars:
                    vs.update(f_vars)
            if best is None or len(vs) < len(best_vars):
                best, best_vars = v, vs
        v = best
        touching = [f for f in factors if v in f[0]]
        rest = [f for f in factors if v not in f[0]]
        keep = tuple(sorted(best_vars - {v}, key=repr))
        if len(keep) > MAX_FACTOR_BITS:
            raise ResourceError(f"contraction needs a {len(keep)}-bit intermediate")
        if not touching:
            scalar *= 2
        else:
            t = _einsum(touching, keep)
            if keep:
                rest.append((keep, t))
            else:
                scalar *= complex(t)
        factors = rest
        pending.discard(v)
    return factors, scalar


def contract(
    d: ZXDiagram,
    effects: Mapping[int, np.ndarray] | None = None,
    open_legs: Sequence[int] | None = None,
) -> np.ndarray:
    """Contract ``d`` with optional one-qubit effects on some boundaries.

    Boundaries listed in ``effects`` are closed with the given 2-vectors; the
    remaining ones (in ``open_legs`` order, default inputs then outputs) stay
    as tensor indices. Returns an unnormalised array of shape (2,)*len(open).
    """
    effects = dict(effects or {})
    factors, internal, bvars = _factors(d)
    if open_legs is None:
        open_legs = [k for k in d.boundary_order if k not in effects]
    for k, vec in effects.items():
        factors.append(((bvars[k],), np.asarray(vec, dtype=complex)))
    closed = {bvars[k] for k in effects}
    factors, scalar = _eliminate(factors, internal | closed)
    keep = [bvars[k] for k in open_legs]
    out = _einsum(factors, keep) if factors else np.ones((2,) * len(keep), dtype=complex)
    return scalar * out


def canonical(vec: np.ndarray, atol: float = EQ_ATOL) -> np.ndarray:
    """Unit norm, first entry above tolerance made real and positive."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if norm < atol:
        return np.zeros_like(v)
    v = v / norm
    k = int(np.argmax(np.abs(v) > atol))
    return v * (abs(v[k]) / v[k])


def to_tensor(d: ZXDiagram, normalise: bool = True) -> np.ndarray:
    """State vector over the boundary wires, inputs first then outputs.

    Index bit order is big-endian in boundary order, so boundary ``j`` is
    bit ``len-1-j`` of the flat index.
    """
    legs = d.boundary_order
    if len(legs) > MAX_BOUNDARY:
        raise ResourceError(f"{len(legs)} boundary wires exceed the cap of {MAX_BOUNDARY}")
    t = contract(d).reshape(-1)
    return canonical(t) if normalise else t


def equal_up_to_scalar(a: np.ndarray, b: np.ndarray, atol: float = EQ_ATOL) -> bool:
    ca, cb = canonical(a, atol), canonical(b, atol)
    return ca.shape == cb.shape and bool(np.allclose(ca, cb, atol=atol))


def equivalent(d1: ZXDiagram, d2: ZXDiagram, samples: int = 4, open_count: int = 8, seed: int = 0) -> bool:
    """Tensor equality up to one global scalar.

    Small diagrams are compared exactly. Larger ones are closed with the same
    random product effects on all but ``open_count`` legs; the concatenated
    results must agree up to a single scalar.
    """
    legs1, legs2 = d1.boundary_order, d2.boundary_order
    if len(d1.inputs) != len(d2.inputs) or len(d1.outputs) != len(d2.outputs):
        return False
    if len(legs1) <= MAX_BOUNDARY:
        return equal_up_to_scalar(to_tensor(d1, False), to_tensor(d2, False))
    rng = np.random.default_rng(seed)
    n = len(legs1)
    chunks1, chunks2 = [], []
    for _ in range(samples):
        opened = sorted(rng.choice(n, size=min(open_count, n), replace=False))
        vecs = {i: rng.normal(size=2) + 1j * rng.normal(size=2) for i in range(n) if i not in opened}
        chunks1.append(contract(d1, {legs1[i]: v for i, v in vecs.items()}, [legs1[i] for i in opened]).reshape(-1))
        chunks2.append(contract(d2, {legs2[i]: v for i, v in vecs.items()}, [legs2[i] for i in opened]).reshape(-1))
    return equal_up_to_scalar(np.concatenate(chunks1), np.concatenate(chunks2))


def basis_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = 2 * idx + int(b)
    return idx
