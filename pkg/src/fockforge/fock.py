"""Multimode Fock states and their evolution through passive linear optics.

Amplitudes are complex doubles. A state is a sparse map from occupation
tuples to amplitudes; basis order is lexicographic on the occupation tuple.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

ATOL = 1e-9
# amplitudes smaller than this are treated as exact zeros after evolution
ZERO_CUTOFF = 1e-13
MAX_PHOTONS = 20

Occupation = tuple[int, ...]


class DimensionError(ValueError):
    """Mode counts or matrix shapes do not line up."""


class ResourceError(RuntimeError):
    """A photon, mode or qubit cap was exceeded."""


@dataclass(frozen=True, order=True)
class FockState:
    occupations: Occupation

    def __post_init__(self):
        occ = tuple(int(n) for n in self.occupations)
        if not occ:
            raise DimensionError("a Fock state needs at least one mode")
        if any(n < 0 for n in occ):
            raise ValueError(f"negative occupation in {occ}")
        object.__setattr__(self, "occupations", occ)

    @property
    def modes(self) -> int:
        return len(self.occupations)

    @property
    def photons(self) -> int:
        return sum(self.occupations)

    @classmethod
    def vacuum(cls, modes: int) -> "FockState":
        return cls((0,) * modes)

    def __str__(self):
        return "|" + ",".join(map(str, self.occupations)) + ">>"


@dataclass(frozen=True)
class FockSuperposition:
    """Sparse superposition of Fock states over a fixed number of modes."""

    modes: int
    terms: Mapping[Occupation, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.modes < 1:
            raise DimensionError("modes must be positive")
        clean = {}
        for occ, amp in self.terms.items():
            if isinstance(occ, FockState):
                occ = occ.occupations
            occ = tuple(occ)
            if len(occ) != self.modes:
                raise DimensionError(f"term {occ} does not have {self.modes} modes")
            amp = complex(amp)
            if abs(amp) > ZERO_CUTOFF:
                clean[occ] = clean.get(occ, 0j) + amp
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def basis(cls, state: FockState | Sequence[int], amplitude: complex = 1.0):
        occ = state.occupations if isinstance(state, FockState) else tuple(state)
        return cls(len(occ), {occ: amplitude})

    @classmethod
    def vacuum(cls, modes: int):
        return cls(modes, {(0,) * modes: 1.0})

    def __iter__(self) -> Iterator[tuple[Occupation, complex]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def amplitude(self, occ: Sequence[int] | FockState) -> complex:
        if isinstance(occ, FockState):
            occ = occ.occupations
        return self.terms.get(tuple(occ), 0j)

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.terms.values()))

    def photon_numbers(self) -> set[int]:
        return {sum(occ) for occ in self.terms}

    def scaled(self, factor: complex) -> "FockSuperposition":
        return FockSuperposition(self.modes, {k: v * factor for k, v in self.terms.items()})

    def __add__(self, other: "FockSuperposition") -> "FockSuperposition":
        if other.modes != self.modes:
            raise DimensionError("cannot add states on different mode counts")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0j) + v
        return FockSuperposition(self.modes, out)

    def isclose(self, other: "FockSuperposition", atol: float = ATOL) -> bool:
        if other.modes != self.modes:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.amplitude(k) - other.amplitude(k)) <= atol for k in keys)

    def tensor(self, other: "FockSuperposition") -> "FockSuperposition":
        out = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                out[a + b] = x * y
        return FockSuperposition(self.modes + other.modes, out)


@dataclass(frozen=True)
class ModeUnitary:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"scattering matrix must be square, got {m.shape}")
        dev = np.linalg.norm(m @ m.conj().T - np.eye(m.shape[0]))
        if dev > ATOL:
            raise ValueError(f"matrix is not unitary (deviation {dev:.2e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def modes(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, modes: int) -> "ModeUnitary":
        return cls(np.eye(modes))

    def isclose(self, other: "ModeUnitary", atol: float = ATOL) -> bool:
        return self.modes == other.modes and np.allclose(self.matrix, other.matrix, atol=atol)


BS_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def beamsplitter(i: int, j: int, m: int) -> ModeUnitary:
    """50:50 beamsplitter ``[[1, 1], [1, -1]]/sqrt(2)`` on modes ``i < j``."""
    if not (0 <= i < j < m):
        raise IndexError(f"beamsplitter needs 0 <= i < j < m, got i={i}, j={j}, m={m}")
    u = np.eye(m, dtype=complex)
    u[np.ix_([i, j], [i, j])] = BS_MATRIX
    return ModeUnitary(u)


def compose(u1: ModeUnitary, u2: ModeUnitary) -> ModeUnitary:
    """Network applying ``u1`` first and then ``u2``."""
    if u1.modes != u2.modes:
        raise DimensionError(f"mode mismatch: {u1.modes} vs {u2.modes}")
    return ModeUnitary(u2.matrix @ u1.matrix)


def compose_all(unitaries: Iterable[ModeUnitary], modes: int) -> ModeUnitary:
    out = ModeUnitary.identity(modes)
    for u in unitaries:
        out = compose(out, u)
    return out


def embed(u: np.ndarray | ModeUnitary, modes: Sequence[int], m: int) -> ModeUnitary:
    """Place a k-mode network on the listed modes of an m-mode register."""
    small = u.matrix if isinstance(u, ModeUnitary) else np.asarray(u, dtype=complex)
    if small.shape != (len(modes), len(modes)):
        raise DimensionError("network size does not match the mode list")
    big = np.eye(m, dtype=complex)
    big[np.ix_(list(modes), list(modes))] = small
    return ModeUnitary(big)


def permanent(matrix) -> complex:
    """Matrix permanent by Ryser's formula, visiting subsets in Gray-code order.

    Cost is O(2^k k) for a k x k matrix.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"permanent needs a square matrix, got shape {a.shape}")
    k = a.shape[0]
    if k == 0:
        return 1.0 + 0j
    if k > MAX_PHOTONS:
        raise ResourceError(f"permanent of a {k}x{k} matrix exceeds the cap of {MAX_PHOTONS}")
    if k == 1:
        return complex(a[0, 0])
    row_sums = np.zeros(k, dtype=complex)
    total = 0j
    sign = -1 if k % 2 else 1  # (-1)^k
    gray_prev = 0
    for step in range(1, 1 << k):
        gray = step ^ (step >> 1)
        flipped = gray ^ gray_prev
        col = flipped.bit_length() - 1
        if gray & flipped:
            row_sums += a[:, col]
        else:
            row_sums -= a[:, col]
        gray_prev = gray
        # (-1)^{|S|} with |S| = popcount(gray)
        term = np.prod(row_sums)
        total += -term if bin(gray).count("1") % 2 else term
    return complex(sign * total)


def permanent_naive(matrix) -> complex:
    """Sum over all permutations. Only for cross-checking small matrices."""
    a = np.asarray(matrix, dtype=complex)
    k = a.shape[0]
    if a.ndim != 2 or a.shape[1] != k:
        raise DimensionError("square matrix required")
    return complex(sum(np.prod([a[i, p[i]] for i in range(k)]) for p in itertools.permutations(range(k))))


def _check_modes(state: FockSuperposition, u: ModeUnitary):
    if state.modes != u.modes:
        raise DimensionError(f"state has {state.modes} modes, network has {u.modes}")
    for occ in state.terms:
        if sum(occ) > MAX_PHOTONS:
            raise ResourceError(f"{sum(occ)} photons exceeds the cap of {MAX_PHOTONS}")


def _factorial_norm(occ: Occupation) -> float:
    return math.prod(math.factorial(n) for n in occ)


def fock_states(modes: int, photons: int) -> Iterator[Occupation]:
    """All occupation tuples with the given photon number, lexicographic order."""
    if modes == 1:
        yield (photons,)
        return
    for first in range(photons, -1, -1):
        for rest in fock_states(modes - 1, photons - first):
            yield (first,) + rest


def creation_columns(u: "ModeUnitary") -> list[list[tuple[int, complex]]]:
    """Nonzero entries of each column: input mode i maps to sum_j U[j, i] a_j^dag."""
    mat = u.matrix
    return [[(j, mat[j, i]) for j in range(u.modes) if abs(mat[j, i]) > ZERO_CUTOFF] for i in range(u.modes)]


def multiply_forms(poly: dict, columns: list, photon_modes: Iterable[int]) -> dict:
    """Multiply a creation-operator polynomial by one linear form per listed input mode."""
    for mode in photon_modes:
        nxt: dict[Occupation, complex] = {}
        for mono, c in poly.items():
            for j, uj in columns[mode]:
                key = mono[:j] + (mono[j] + 1,) + mono[j + 1:]
                nxt[key] = nxt.get(key, 0j) + c * uj
        poly = {k: v for k, v in nxt.items() if abs(v) > ZERO_CUTOFF}
    return poly


def normalise_poly(poly: dict, occ_in: Occupation) -> dict:
    """Turn monomial coefficients into Fock amplitudes for input ``occ_in``."""
    norm_in = math.sqrt(_factorial_norm(occ_in))
    return {s: c * math.sqrt(_factorial_norm(s)) / norm_in for s, c in poly.items()}


def _expand_one(occ: Occupation, columns: list[list[tuple[int, complex]]], m: int) -> dict:
    photon_modes = [mode for mode, count in enumerate(occ) for _ in range(count)]
    poly = multiply_forms({(0,) * m: 1.0 + 0j}, columns, photon_modes)
    return normalise_poly(poly, occ)


def evolve(state: FockSuperposition, u: ModeUnitary, method: str = "expand") -> FockSuperposition:
    """Apply the multiphoton transformation of ``u`` to ``state``.

    ``method="permanent"`` evaluates every output amplitude as
    per(U[s, t]) / sqrt(prod s! prod t!) over the full output basis.
    ``method="expand"`` multiplies out the creation-operator linear forms,
    which touches only the reachable outputs; both give identical amplitudes.
    """
    _check_modes(state, u)
    m = u.modes
    mat = u.matrix
    out: dict[Occupation, complex] = {}
    if method == "expand":
        columns = creation_columns(u)
        for occ, amp in state.terms.items():
            for s, c in _expand_one(occ, columns, m).items():
                out[s] = out.get(s, 0j) + amp * c
    elif method == "permanent":
        for occ, amp in state.terms.items():
            cols = [i for i, n in enumerate(occ) for _ in range(n)]
            norm_in = _factorial_norm(occ)
            for s in fock_states(m, sum(occ)):
                rows = [j for j, n in enumerate(s) for _ in range(n)]
                sub = mat[np.ix_(rows, cols)]
                c = permanent(sub) / math.sqrt(_factorial_norm(s) * norm_in)
                out[s] = out.get(s, 0j) + amp * c
    else:
        raise ValueError(f"unknown evolution method {method!r}")
    return FockSuperposition(m, out)


def project_pattern(
    state: FockSuperposition,
    detected: Sequence[int],
    pattern: Sequence[int],
) -> tuple[dict[Occupation, complex], float]:
    """Condition ``state`` on photon counts ``pattern`` in modes ``detected``.

    Returns the subnormalized amplitude table over the remaining modes (in
    increasing mode order) and the probability of the pattern.
    """
    detected = list(detected)
    if len(detected) != len(pattern):
        raise DimensionError("pattern length must match the detected modes")
    if len(set(detected)) != len(detected) or any(not 0 <= d < state.modes for d in detected):
        raise IndexError(f"invalid detected modes {detected}")
    keep = [i for i in range(state.modes) if i not in set(detected)]
    pattern = tuple(pattern)
    table: dict[Occupation, complex] = {}
    for occ, amp in state.terms.items():
        if tuple(occ[d] for d in detected) == pattern:
            rest = tuple(occ[i] for i in keep)
            table[rest] = table.get(rest, 0j) + amp
    prob = float(sum(abs(a) ** 2 for a in table.values()))
    if prob == 0.0:
        return {}, 0.0
    return table, prob


def pattern_distribution(state: FockSuperposition, detected: Sequence[int]) -> dict[Occupation, float]:
    """Probability of every detector pattern appearing in ``state``."""
    detected = list(detected)
    keep = [i for i in range(state.modes) if i not in set(detected)]
    grouped: dict[Occupation, dict[Occupation, complex]] = {}
    for occ, amp in state.terms.items():
        r = tuple(occ[d] for d in detected)
        rest = tuple(occ[i] for i in keep)
        slot = grouped.setdefault(r, {})
        slot[rest] = slot.get(rest, 0j) + amp
    return {r: float(sum(abs(a) ** 2 for a in t.values())) for r, t in sorted(grouped.items())}
