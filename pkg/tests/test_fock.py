import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from fockforge.dualrail import bitstrings, complement, decode, encode, encode_occupation, project_dr, qubit_state
from fockforge.fock import (
    BS_MATRIX,
    DimensionError,
    FockState,
    FockSuperposition,
    ModeUnitary,
    beamsplitter,
    compose,
    embed,
    evolve,
    fock_states,
    pattern_distribution,
    permanent,
    permanent_naive,
    project_pattern,
)

complex_matrices = st.integers(1, 6).flatmap(
    lambda k: st.lists(
        st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=k * k, max_size=k * k
    ).map(lambda v: np.array(v).reshape(k, k))
)


@settings(max_examples=150)
@given(complex_matrices)
def test_ryser_matches_permutation_sum(m):
    assert abs(permanent(m) - permanent_naive(m)) <= 1e-9 * max(1.0, abs(permanent_naive(m)))


def test_permanent_known_values():
    assert permanent(np.ones((4, 4))) == pytest.approx(24)
    assert permanent(np.eye(5)) == pytest.approx(1)
    assert permanent(np.array([[1, 2], [3, 4]])) == pytest.approx(10)


def test_hong_ou_mandel():
    out = evolve(FockSuperposition.basis((1, 1)), beamsplitter(0, 1, 2))
    assert abs(out.amplitude((1, 1))) < 1e-12
    assert abs(out.amplitude((2, 0))) ** 2 == pytest.approx(0.5)
    assert abs(out.amplitude((0, 2))) ** 2 == pytest.approx(0.5)


def test_beamsplitter_matrix_convention():
    u = beamsplitter(1, 3, 4).matrix
    assert np.allclose(u[np.ix_([1, 3], [1, 3])], BS_MATRIX)
    assert u[0, 0] == 1 and u[2, 2] == 1


@settings(max_examples=30)
@given(st.integers(2, 4), st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_evolution_methods_agree_and_preserve_norm(m, n, seed):
    u = ModeUnitary(unitary_group.rvs(m, random_state=seed))
    occ = next(iter(fock_states(m, n)))
    a = evolve(FockSuperposition.basis(occ), u, "expand")
    b = evolve(FockSuperposition.basis(occ), u, "permanent")
    assert a.isclose(b)
    assert a.norm_squared() == pytest.approx(1.0)
    assert a.photon_numbers() == {n}


def test_fock_state_count():
    for m, n in [(2, 3), (4, 2), (5, 3)]:
        assert len(list(fock_states(m, n))) == math.comb(n + m - 1, n)


def test_compose_applies_first_argument_first():
    a, b = beamsplitter(0, 1, 3), beamsplitter(1, 2, 3)
    assert np.allclose(compose(a, b).matrix, b.matrix @ a.matrix)
    start = FockSuperposition.basis((1, 1, 0))
    assert evolve(start, compose(a, b)).isclose(evolve(evolve(start, a), b))


def test_embed_places_block():
    u = embed(BS_MATRIX, [0, 2], 3)
    assert np.allclose(u.matrix[np.ix_([0, 2], [0, 2])], BS_MATRIX)


def test_validation_errors():
    with pytest.raises(DimensionError):
        ModeUnitary(np.ones((2, 3)))
    with pytest.raises(ValueError):
        ModeUnitary(np.ones((2, 2)))
    with pytest.raises(ValueError):
        FockState((1, -1))
    with pytest.raises(DimensionError):
        evolve(FockSuperposition.basis((1, 0, 0)), beamsplitter(0, 1, 2))
    with pytest.raises(IndexError):
        beamsplitter(1, 1, 3)


def test_projection_and_distribution():
    st_ = evolve(FockSuperposition.basis((1, 1, 0)), beamsplitter(0, 1, 3))
    dist = pattern_distribution(st_, [0])
    assert sum(dist.values()) == pytest.approx(1.0)
    table, p = project_pattern(st_, [0], [2])
    assert p == pytest.approx(dist[(2,)])
    assert set(table) == {(0, 0)}


@given(st.lists(st.integers(0, 1), min_size=1, max_size=6))
def test_dual_rail_round_trip(x):
    x = tuple(x)
    assert decode(encode(x)) == x
    assert encode_occupation(x) == encode(x).occupations
    assert complement(complement(x)) == x


def test_decode_rejects_non_qubit():
    assert decode((1, 1, 1, 0)) is None
    assert decode((0, 0)) is None
    with pytest.raises(DimensionError):
        decode((1, 0, 1))


def test_bit_zero_is_first_rail():
    assert encode_occupation((0, 1)) == (1, 0, 0, 1)


def test_project_dr_and_qubit_state():
    s = qubit_state({(0, 0): 1, (1, 1): 1})
    assert len(s) == 2
    noisy = s + FockSuperposition.basis((2, 0, 0, 0))
    assert len(project_dr(noisy, 2)) == 2
    assert len(list(bitstrings(3))) == 8
