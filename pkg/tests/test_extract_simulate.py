from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockforge.devices import ParameterError
from fockforge.fock import ResourceError
from fockforge.stabilizer import ghz_vector, graph_state_vector
from fockforge.zx import DiagramBuilder
from fockforge.zx.extract import (
    ConversionError,
    LOScheme,
    check_full_loss_detection,
    extract_scheme,
    scheme_metrics,
)
from fockforge.zx.fixtures import FIXTURES, qpc_encoder_diagram
from fockforge.zx.simulate import pauli_frame, simulate_scheme, verify_scheme
from fockforge.zx.tensor import to_tensor

# (P_S, photons, max PNR, fully loss-detecting) for every fixture
METRICS = {
    "ghz4_direct": (Fraction(1), 4, 0, True),
    "ghz4_bells": (Fraction(1, 8), 8, 1, True),
    "ghz4_bell_tree": (Fraction(1, 8), 8, 1, True),
    "ghz4_ghz3": (Fraction(1, 2), 6, 1, True),
    "ring6_type1": (Fraction(1, 8), 9, 1, False),
    "ring6_bent": (Fraction(1, 64), 15, 1, True),
    "ring6_one_ghz3": (Fraction(1, 64), 13, 1, True),
    "ring6_bells": (Fraction(1, 128), 14, 1, True),
    "ring6_qpc22": (Fraction(1, 2**25), 50, 1, True),
    "two_chain_ghz3": (Fraction(1, 128), 24, 1, True),
    "two_chain_bells": (Fraction(1, 32768), 32, 1, True),
    "two_chain_ghz5": (Fraction(1, 65536), 34, 1, True),
    "five_qubit_code": (Fraction(1, 16384), 20, 1, False),
    "surface_code": (Fraction(1, 512), 21, 1, True),
}


@pytest.mark.parametrize("name", sorted(METRICS))
def test_fixture_metrics(name):
    m = scheme_metrics(extract_scheme(FIXTURES[name]()))
    p, photons, pnr, loss = METRICS[name]
    assert m.success_probability == p
    assert m.photon_count == photons
    assert m.max_pnr == pnr
    assert m.fully_loss_detecting is loss


def test_loss_witness_path():
    m = scheme_metrics(extract_scheme(FIXTURES["ring6_type1"]()))
    assert m.loss_witness[0].startswith("F") and m.loss_witness[-1].startswith("out")


def test_boosted_metrics():
    s = extract_scheme(FIXTURES["ghz4_bells"]())
    m = scheme_metrics(s, {"A": (0, 1, 2, 3)})
    assert m.success_probability == Fraction(17, 64)
    assert m.photon_count == 16
    assert m.max_pnr == 3
    assert m.device_inventory == {"analyser4+boost": 1}
    assert scheme_metrics(extract_scheme(FIXTURES["two_chain_ghz5"]()), {"FA": range(5), "FB": range(5)}).success_probability == (
        Fraction(41, 256) ** 2 / 2**8
    )
    with pytest.raises(ParameterError):
        scheme_metrics(s, {"C0": (0,)})
    with pytest.raises(ParameterError):
        scheme_metrics(s, {"A": (7,)})


def test_two_chain_boosted_comparison():
    ghz5 = scheme_metrics(extract_scheme(FIXTURES["two_chain_ghz5"]()), {"FA": range(5), "FB": range(5)})
    bells = scheme_metrics(extract_scheme(FIXTURES["two_chain_bells"]()), {"X": (0, 1)})
    assert ghz5.success_probability > bells.success_probability
    assert ghz5.photon_count - bells.photon_count == 20 - 4 + 2
    assert ghz5.seed_inventory["bell"] == bells.seed_inventory["bell"] + 1


def test_scheme_json_round_trip():
    s = extract_scheme(FIXTURES["ring6_bells"]())
    back = LOScheme.loads(s.dumps(scheme_metrics(s)))
    assert back == s


def test_order_is_topological():
    s = extract_scheme(FIXTURES["ring6_qpc22"]())
    pos = {v: i for i, v in enumerate(s.order)}
    assert all(pos[w.src[0]] < pos[w.dst[0]] for w in s.wires)
    assert sorted(s.order) == sorted(n.id for n in s.nodes)


def test_conversion_errors():
    b = DiagramBuilder()
    b.spider("M", 2, 2)
    b.input("M")
    b.input("M")
    b.output("M")
    b.output("M")
    with pytest.raises(ConversionError) as err:
        extract_scheme(b.build())
    assert err.value.violations
    # a fusion feeding itself through another fusion is a directed cycle
    c = DiagramBuilder()
    c.seed("S", 2)
    c.spider("F1", 2, 1)
    c.spider("F2", 2, 1)
    c.link("S", "F1")
    c.link("S", "F2")
    c.link("F1", "F2")
    c.link("F2", "F1")
    c.spider("A", 0, 0)
    with pytest.raises(ConversionError, match="cycle"):
        extract_scheme(c.build())


def test_loss_detection_on_plain_wire():
    assert check_full_loss_detection(extract_scheme(FIXTURES["ghz4_direct"]()))


# simulation


@pytest.mark.parametrize(
    "name,target,p",
    [
        ("ghz4_bells", "ghz", Fraction(1, 8)),
        ("ghz4_bell_tree", "ghz", Fraction(1, 8)),
        ("ghz4_ghz3", "ghz", Fraction(1, 2)),
        ("ring6_type1", "ring", Fraction(1, 8)),
        ("ring6_bent", "ring", Fraction(1, 64)),
        ("ring6_one_ghz3", "ring", Fraction(1, 64)),
        ("ring6_bells", "ring", Fraction(1, 128)),
    ],
)
def test_verify_fixture(name, target, p):
    vec = ghz_vector(4) if target == "ghz" else graph_state_vector(6, [(i, (i + 1) % 6) for i in range(6)])
    rep = verify_scheme(extract_scheme(FIXTURES[name]()), vec)
    assert rep.ok
    assert rep.min_fidelity > 1 - 1e-9
    assert abs(rep.total_probability - float(p)) < 1e-9


def test_verify_wrong_target_fails():
    rep = verify_scheme(extract_scheme(FIXTURES["ghz4_bells"]()), graph_state_vector(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    assert not rep.ok
    assert rep.min_fidelity < 0.5


def test_boosted_simulation_matches_metrics():
    s = extract_scheme(FIXTURES["ghz4_bells"]())
    rep = verify_scheme(s, ghz_vector(4), boosting={"A": (0, 1, 2, 3)})
    assert rep.ok
    assert abs(rep.total_probability - 17 / 64) < 1e-9


def test_encoder_with_input_matches_choi_state():
    d = qpc_encoder_diagram(1, 2)
    s = extract_scheme(d)
    rep = verify_scheme(s, to_tensor(d))
    assert rep.ok
    assert abs(rep.total_probability - float(scheme_metrics(s).success_probability)) < 1e-9


def test_simulate_single_pattern_choice():
    s = extract_scheme(FIXTURES["ghz4_ghz3"]())
    res = simulate_scheme(s, {"A": (1, 1, 0, 0)})
    assert res.heralded
    assert res.outcomes[0].pattern == (1, 1, 0, 0)
    # four equally likely success patterns share P_S = 1/2
    assert abs(res.probability - 0.125) < 1e-12
    assert pauli_frame(res.state, ghz_vector(4)).ok
    with pytest.raises(ValueError):
        simulate_scheme(s, {"A": (3, 0, 0, 0)})


def test_simulation_caps():
    with pytest.raises(ResourceError):
        next(iter([verify_scheme(extract_scheme(FIXTURES["two_chain_bells"]()), np.zeros(2**8))]))
    with pytest.raises(ResourceError):
        verify_scheme(extract_scheme(FIXTURES["ghz4_bells"]()), ghz_vector(4), max_photons=4)


@settings(max_examples=50)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_pauli_frame_recovers_random_pauli(n, seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    psi /= np.linalg.norm(psi)
    x, z = int(rng.integers(2**n)), int(rng.integers(2**n))
    idx = np.arange(2**n)
    signs = np.array([(-1) ** bin(i & z).count("1") for i in idx])
    moved = (signs * psi)[idx ^ x]
    m = pauli_frame(moved, psi)
    assert m.ok
    assert len(m.label()) == n
