from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockforge import patterns
from fockforge.devices import (
    MAX_QUBITS,
    ParameterError,
    attach_sqa_beta,
    bell_analyser,
    boosted,
    build_device,
    ghz_analyser,
    type1_fusion,
)
from fockforge.dualrail import bitstrings
from fockforge.factorised import boosted_analyser_stats, compositions
from fockforge.fock import ResourceError, fock_states
from fockforge.kraus import (
    Outcome,
    classify,
    kraus_table,
    pattern_table,
    required_pnr,
    success_patterns,
    success_probability,
)

# devices small enough to rebuild inside property tests
SMALL = [
    ("bell", None, ()),
    ("ghz", 3, ()),
    ("ghz", 4, ()),
    ("fusion", 2, ()),
    ("fusion", 3, ()),
    ("fusion", 4, ()),
    ("bell", None, (0,)),
    ("bell", None, (1,)),
    ("bell", None, (0, 1)),
    ("ghz", 3, (1,)),
    ("ghz", 3, (0, 2)),
]


@settings(max_examples=len(SMALL) * 2)
@given(st.sampled_from(SMALL))
def test_measurement_completeness(spec):
    d = build_device(*spec)
    table = pattern_table(d)
    # every input string is a unit vector, so the pattern weights sum to 2^n
    assert table.weights().sum() == pytest.approx(2**d.n)
    ops = kraus_table(d, table=table)
    assert sum(k.weight for k in ops) == 2**d.n
    assert all(isinstance(k.weight, Fraction) for k in ops)


@pytest.mark.parametrize("spec", SMALL)
def test_unitaries_and_photon_counts(spec):
    d = build_device(*spec)
    u = d.unitary.matrix
    assert np.allclose(u @ u.conj().T, np.eye(d.modes))
    assert d.photons == d.n + 2 * len(spec[2])
    assert d.modes == 2 * d.n + 2 * len(spec[2])


def test_bell_table_oracle():
    ops = kraus_table(bell_analyser())
    succ = [k for k in ops if k.outcome is Outcome.SUCCESS]
    assert len(ops) == 4 and len(succ) == 2
    for k in succ:
        f = k.functional
        assert set(f) == {(0, 0), (1, 1)}
        assert abs(abs(f[(0, 0)]) - abs(f[(1, 1)])) < 1e-12
    signs = sorted(np.sign((k.functional[(1, 1)] / k.functional[(0, 0)]).real) for k in succ)
    assert signs == [-1, 1]
    assert success_probability(bell_analyser()) == Fraction(1, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_ghz_success_probability(n):
    assert success_probability(ghz_analyser(n)) == Fraction(1, 2 ** (n - 1))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_fusion_success_probability(n):
    assert success_probability(type1_fusion(n)) == Fraction(1, 2 ** (n - 1))


def test_fusion_failure_is_heralded_not_invalid():
    ops = kraus_table(type1_fusion(3))
    assert {k.outcome for k in ops} == {Outcome.SUCCESS, Outcome.FAILURE}


def test_classify():
    assert classify({(0, 0): 1, (1, 1): -1}) is Outcome.SUCCESS
    assert classify({(0, 1): 1}) is Outcome.FAILURE
    assert classify({(0, 0): 1, (1, 1): 0.5}) is Outcome.INVALID
    assert classify({(0, 0): 1, (0, 1): 1}) is Outcome.INVALID


def test_pattern_weights_reconstruct_rows():
    d = ghz_analyser(3)
    table = pattern_table(d)
    ops = kraus_table(d, table=table)
    idx = table.index()
    for k in ops:
        for r in k.patterns:
            row = table.row(idx[r])
            got = k.pattern_weights(r)
            for key, a in row.items():
                assert abs(got[key] - a) < 1e-9


def test_required_pnr_scopes():
    plain = kraus_table(ghz_analyser(3))
    assert required_pnr(ghz_analyser(3), "success", plain) == 1
    assert required_pnr(ghz_analyser(3), "all", plain) == 2
    d = boosted(bell_analyser(), (0, 1))
    ops = kraus_table(d)
    assert required_pnr(d, "success", ops) >= 2
    with pytest.raises(ValueError):
        required_pnr(d, "bogus", ops)


def test_parameter_errors():
    with pytest.raises(ParameterError):
        ghz_analyser(1)
    with pytest.raises(ParameterError):
        ghz_analyser(MAX_QUBITS + 1)
    with pytest.raises(ParameterError):
        attach_sqa_beta(type1_fusion(2), 0)
    with pytest.raises(ParameterError):
        attach_sqa_beta(bell_analyser(), 2)
    with pytest.raises(ParameterError):
        boosted(bell_analyser(), (0, 0))
    with pytest.raises(ParameterError):
        build_device("bell", 3)
    with pytest.raises(ParameterError):
        build_device("laser", 2)


def test_photon_cap():
    with pytest.raises(ResourceError):
        pattern_table(boosted(ghz_analyser(4), (0, 1, 2, 3)), max_photons=8)


# closed-form pattern rules


@settings(max_examples=200)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 1), min_size=n, max_size=n))))
def test_pattern_rule_amplitudes_sum_to_one(case):
    """For a fixed input the predicted amplitudes form a unit vector over patterns."""
    n, x = case
    total = 0.0
    for r in fock_states(2 * n, n):
        total += patterns.predicted_amplitude(x, r) ** 2
    assert total == pytest.approx(1.0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pattern_rules_against_table(n):
    table = pattern_table(ghz_analyser(n))
    for i, r in enumerate(table.patterns):
        for x in bitstrings(n):
            a = table.amps[i, table.keys.index(((), x))]
            assert abs(a - patterns.predicted_amplitude(x, r)) < 1e-9


def test_ghz_sign_examples():
    # n=2: pair (1,2) and closing pair (0,3); the closing pair reading (1,0) with
    # the other pair not reading (0,1) gives the + state
    assert patterns.ghz_sign((1, 1, 0, 0)) == 1
    assert patterns.ghz_sign((0, 0, 1, 1)) == 1
    assert patterns.ghz_sign((0, 1, 0, 1)) == -1
    assert patterns.ghz_sign((1, 0, 1, 0)) == -1


def test_fusion_sign_exponent():
    assert patterns.fusion_sign_exponent((1, 0)) == 0
    assert patterns.fusion_sign_exponent((0, 1)) == 1
    assert patterns.fusion_sign_exponent((0, 1, 0, 1)) == 0


# boosting


@pytest.mark.parametrize(
    "make,boost,want",
    [
        (bell_analyser, (0,), Fraction(5, 8)),
        (bell_analyser, (1,), Fraction(5, 8)),
        (bell_analyser, (0, 1), Fraction(3, 4)),
        (lambda: ghz_analyser(4), (1, 3), Fraction(25, 128)),
        (lambda: ghz_analyser(4), (0, 2), Fraction(25, 128)),
    ],
)
def test_boosted_probabilities(make, boost, want):
    assert success_probability(boosted(make(), boost)) == want


@pytest.mark.parametrize("n,boost", [(2, (0,)), (2, (0, 1)), (3, (0,)), (3, (1, 2)), (3, (0, 1, 2)), (4, (1, 3))])
def test_factorised_matches_dense(n, boost):
    d = boosted(ghz_analyser(n), boost)
    ops = kraus_table(d)
    p, level = boosted_analyser_stats(n, boost)
    assert p == success_probability(d, ops)
    assert level == max(max(r) for r in success_patterns(ops))


def test_compositions():
    comps = list(compositions(3, 2))
    assert comps == [(0, 3), (1, 2), (2, 1), (3, 0)]
