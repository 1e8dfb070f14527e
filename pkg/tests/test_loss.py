from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fockforge.devices import ParameterError, bell_analyser, boosted, ghz_analyser, type1_fusion
from fockforge.kraus import kraus_table, pattern_table, success_probability
from fockforge.loss import LossModel, Polynomial, lossy_success_probability, sweep

CASES = {
    "bell": bell_analyser(),
    "ghz3": ghz_analyser(3),
    "bell+1": boosted(bell_analyser(), (0,)),
    "bell+2": boosted(bell_analyser(), (0, 1)),
    "ghz3+all": boosted(ghz_analyser(3), (0, 1, 2)),
    "ghz3+1": boosted(ghz_analyser(3), (1,)),
}
POLYS = {
    (name, rule): lossy_success_probability(d, rule)
    for name, d in CASES.items()
    for rule in ("idle-unit", "unambiguous")
}


def test_unboosted_is_all_photons_surviving():
    assert POLYS[("bell", "idle-unit")].coeffs == {2: Fraction(1, 2)}
    assert POLYS[("ghz3", "idle-unit")].coeffs == {3: Fraction(1, 4)}


def test_reference_polynomials_small():
    assert POLYS[("bell+2", "idle-unit")].coeffs == {4: Fraction(1, 2), 6: Fraction(1, 4)}
    assert POLYS[("ghz3+all", "idle-unit")].coeffs == {7: Fraction(3, 8), 9: Fraction(1, 16)}


@pytest.mark.parametrize("key", sorted(POLYS))
def test_lossless_limit_and_zero(key):
    poly = POLYS[key]
    assert poly.exact(Fraction(1)) == success_probability(CASES[key[0]])
    assert poly(0.0) == 0.0


@given(st.sampled_from(sorted(POLYS)), st.floats(0, 1), st.floats(0, 1))
def test_monotone_in_eta(key, a, b):
    lo, hi = sorted((a, b))
    poly = POLYS[key]
    assert poly(lo) <= poly(hi) + 1e-15


@pytest.mark.parametrize("name", sorted(CASES))
def test_eleven_point_grid_non_decreasing(name):
    vals = [p for _, p in sweep(POLYS[(name, "idle-unit")], np.linspace(0, 1, 11))]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@given(st.sampled_from(sorted(CASES)), st.floats(0, 1))
def test_unambiguous_rule_never_smaller(name, eta):
    assert POLYS[(name, "unambiguous")](eta) >= POLYS[(name, "idle-unit")](eta) - 1e-15


def test_polynomial_algebra():
    p = Polynomial({2: Fraction(1, 2), 0: 0})
    q = Polynomial({3: Fraction(1, 4)})
    assert (p + q).coeffs == {2: Fraction(1, 2), 3: Fraction(1, 4)}
    assert (p + q).derivative().coeffs == {1: Fraction(1), 2: Fraction(3, 4)}
    assert str(p) == "(1/2)*eta^2"
    assert str(Polynomial()) == "0"


def test_validation():
    with pytest.raises(ParameterError):
        LossModel(eta=1.5)
    with pytest.raises(ParameterError):
        LossModel(rule="other")
    with pytest.raises(ParameterError):
        lossy_success_probability(type1_fusion(2))
    with pytest.raises(ParameterError):
        lossy_success_probability(bell_analyser(), "other")


def test_reuses_precomputed_table():
    d = CASES["bell+1"]
    table = pattern_table(d)
    ops = kraus_table(d, table=table)
    assert lossy_success_probability(d, ops=ops, table=table) == POLYS[("bell+1", "idle-unit")]
