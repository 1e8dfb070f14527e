"""Acceptance criteria, one test per criterion (parametrised where the criterion
lists cases). Each records a PASS/FAIL line printed at the end of the run.

Tolerances: probabilities are compared as exact fractions; amplitudes to 1e-9;
the boosting ratio to 0.1 % of 1.417.
"""

import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from fockforge import checks
from fockforge.devices import bell_analyser, boosted, ghz_analyser, type1_fusion
from fockforge.kraus import kraus_table, pattern_table, success_probability
from fockforge.loss import lossy_success_probability

RATIO_TARGET, RATIO_RTOL = 1.417, 1e-3


def record(key: str, ok: bool, text: str):
    ACCEPTANCE_LINES[key] = f"{'PASS' if ok else 'FAIL'}  criterion {key:<5} {text}"


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_c01_bell_table():
    (ok, detail), dt = timed(checks.check_bell)
    ok = ok and dt < 1.0
    record("1", ok, f"Bell analyser table, P_S = 1/2 ({detail}; {dt:.2f} s < 1 s)")
    assert ok, detail


def test_c02_ghz_analysers():
    t = time.perf_counter()
    rows = {n: checks.check_ghz(n) for n in range(2, 6)}
    dt = time.perf_counter() - t
    probs = {n: success_probability(ghz_analyser(n)) for n in range(2, 6)}
    ok = all(r[0] for r in rows.values()) and dt < 10 and all(p == Fraction(1, 2 ** (n - 1)) for n, p in probs.items())
    record("2", ok, f"n-GHZ analysers n=2..5: P_S {', '.join(map(str, probs.values()))} ({dt:.1f} s < 10 s)")
    assert ok, rows


def test_c03_pattern_rules():
    rows = {n: checks.check_pattern_rules(n) for n in range(2, 6)}
    ok = all(r[0] for r in rows.values())
    record("3", ok, "pattern case table and sign rule, n<=5: " + "; ".join(r[1] for r in rows.values()))
    assert ok, rows


BOOSTED = [
    ("bell one unit", bell_analyser, (0,), Fraction(5, 8)),
    ("bell two units", bell_analyser, (0, 1), Fraction(3, 4)),
    ("4-GHZ {1,3}", lambda: ghz_analyser(4), (1, 3), Fraction(25, 128)),
    ("4-GHZ all", lambda: ghz_analyser(4), (0, 1, 2, 3), Fraction(17, 64)),
]


def test_c04_boosting():
    t = time.perf_counter()
    got = {}
    for name, make, boost, want in BOOSTED:
        d = boosted(make(), boost)
        got[name] = (success_probability(d, checks._ops(d.kind, d.n, boost)), want)
    table_ok, table_detail = checks.check_boost_table()
    dt = time.perf_counter() - t
    ok = all(p == w for p, w in got.values()) and table_ok and dt < 120
    values = ", ".join(f"{k} {p}" for k, (p, _) in got.items())
    record("4", ok, f"boosted P_S: {values}; one-unit table: {table_detail} ({dt:.1f} s < 120 s)")
    assert ok, (got, table_detail)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_c05_conjecture(n, request):
    """Conjecture test: the closed form against exact simulation."""
    if n == 5 and not request.config.getoption("--conjecture-n5"):
        pytest.skip("n=5 runs with --conjecture-n5")
    sim = checks.boosted_analyser_success(n, tuple(range(n)))
    formula = checks.conjecture_formula(n)
    ok = sim == formula
    record(f"5.n{n}", ok, f"conjecture test n={n}: simulated {sim}, formula {formula}")
    assert sim == formula


def test_c06_fusion():
    rows = {n: checks.check_fusion(n) for n in range(2, 6)}
    probs = [success_probability(type1_fusion(n)) for n in range(2, 6)]
    ok = all(r[0] for r in rows.values()) and probs == [Fraction(1, 2 ** (n - 1)) for n in range(2, 6)]
    record("6", ok, f"type-I fusion n=2..5: P_S {', '.join(map(str, probs))}, sign rule violations 0")
    assert ok, rows


LOSS = {
    "Bell": (bell_analyser, {4: Fraction(1, 2), 6: Fraction(1, 4)}),
    "3-GHZ": (lambda: ghz_analyser(3), {7: Fraction(3, 8), 9: Fraction(1, 16)}),
    "4-GHZ": (lambda: ghz_analyser(4), {8: Fraction(1, 16), 10: Fraction(3, 16), 12: Fraction(1, 64)}),
}


def test_c07_loss_polynomials():
    t = time.perf_counter()
    got = {}
    for name, (make, want) in LOSS.items():
        base = make()
        d = boosted(base, tuple(range(base.n)))
        table = pattern_table(d)
        got[name] = (lossy_success_probability(d, ops=kraus_table(d, table=table), table=table), want)
    dt = time.perf_counter() - t
    ok = all(p.coeffs == w for p, w in got.values()) and dt < 600
    record("7", ok, "lossy P_S: " + "; ".join(f"{k}: {p}" for k, (p, _) in got.items()) + f" ({dt:.1f} s < 600 s)")
    assert ok, got


def test_c08_fixtures():
    rows = {name: checks.check_fixture(name) for name in checks.FIXTURE_EXPECT}
    states = checks.check_fixture_states()
    ok = all(r[0] for r in rows.values()) and states[0]
    bad = [k for k, r in rows.items() if not r[0]]
    text = f"{len(rows)} compiled fixtures match reference metrics; tensors: {states[1]}"
    record("8", ok, text + (f"; bad {bad}" if bad else ""))
    assert ok, (rows, states)


def test_c09_simulation():
    rows = {name: checks.check_simulation(name) for name in checks.SIM_CASES}
    ok = all(r[0] for r in rows.values())
    record("9", ok, "end-to-end: " + "; ".join(f"{k}: {r[1].split(',')[0]}" for k, r in rows.items()))
    assert ok, rows


def test_c10_boosting_comparison():
    direct, tree = checks.boosted_forms()
    ratio = direct / tree
    ok = direct == Fraction(17, 64) and tree == Fraction(3, 16) and abs(float(ratio) / RATIO_TARGET - 1) < RATIO_RTOL
    record("10", ok, f"boosted direct {direct} vs tree {tree}: ratio {ratio} = {float(ratio):.4f} (1.417 +- 0.1%)")
    assert ok


def test_c11_properties():
    rows = {
        "rewrites": checks.check_rewrites(200),
        "completeness": checks.check_completeness(),
        "permanent": checks.check_permanent(),
        "loss monotone": checks.check_loss_monotone(11),
    }
    ok = all(r[0] for r in rows.values())
    record("11", ok, "property sweeps: " + "; ".join(r[1] for r in rows.values()))
    assert ok, rows

