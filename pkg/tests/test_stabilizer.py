import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fockforge.stabilizer import (
    graph_generators,
    graph_state_vector,
    ghz_vector,
    in_codespace,
    knill_laflamme,
    pauli,
    pauli_product,
    stabilizer_state,
)
from fockforge.zx.tensor import equal_up_to_scalar

edge_sets = st.integers(2, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
)


@given(edge_sets)
def test_graph_state_is_the_stabilizer_state(case):
    n, pairs = case
    edges = sorted({(min(a, b), max(a, b)) for a, b in pairs if a != b})
    gens = graph_generators(n, edges)
    vec = graph_state_vector(n, edges)
    assert in_codespace(vec, gens)
    assert equal_up_to_scalar(stabilizer_state(gens), vec)


def test_ghz_stabilizers():
    assert in_codespace(ghz_vector(3), ["XXX", "ZZI", "IZZ"])
    assert not in_codespace(ghz_vector(3), ["-XXX"])


def test_pauli_products():
    assert pauli_product("XX", "ZZ") == "-YY"
    assert np.allclose(pauli("XZ") @ pauli("XZ"), np.eye(4))
    assert np.allclose(pauli(pauli_product("XX", "ZZ")), pauli("XX") @ pauli("ZZ"))
    # XZ = -iY has an imaginary phase
    with pytest.raises(ValueError):
        pauli_product("XI", "ZI")


def test_five_qubit_code_distance():
    gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
    assert knill_laflamme(gens, 3)
    assert not knill_laflamme(gens, 4)
    # the repetition code corrects bit flips only
    assert not knill_laflamme(["ZZI", "IZZ"], 3)
