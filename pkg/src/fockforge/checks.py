"""The reproduction matrix: every reference number, recomputed and compared exactly.

Each check returns ``(ok, detail)``. Checks marked ``gating=False`` are
reported but do not decide the overall verdict.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from . import patterns
from .devices import Device, bell_analyser, boosted, ghz_analyser, type1_fusion
from .dualrail import bitstrings, complement, decode
from .factorised import boosted_analyser_success
from .fock import permanent, permanent_naive
from .kraus import KrausOperator, Outcome, kraus_table, pattern_table, required_pnr, success_probability
from .loss import Polynomial, lossy_success_probability
from .stabilizer import (
    ghz_vector,
    graph_generators,
    graph_state_vector,
    in_codespace,
    knill_laflamme,
    on_qubits,
    pauli,
    pauli_product,
)

Result = tuple[bool, str]

AMP_ATOL = 1e-9
RATIO_RTOL = 1e-3


@dataclass(frozen=True)
class Check:
    id: str
    group: str
    title: str
    run: Callable[[], Result]
    budget: float | None = None
    gating: bool = True


@dataclass(frozen=True)
class CheckResult:
    check: Check
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.ok else ("FAIL" if self.check.gating else "FAIL (report-only)")
        return f"{mark:<18} {self.check.id:<26} {self.detail}"


def run_check(c: Check) -> CheckResult:
    t = time.perf_counter()
    try:
        ok, detail = c.run()
    except Exception as exc:  # a crash is a failure, reported with its message
        ok, detail = False, f"error: {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t
    if ok and c.budget is not None and dt > c.budget:
        ok, detail = False, f"{detail}; over the {c.budget:g} s budget"
    return CheckResult(c, ok, detail, dt)


# shared device data; the boosted 4-GHZ table is reused by several checks


@lru_cache(maxsize=None)
def _device(kind: str, n: int, boost: tuple[int, ...] = ()) -> Device:
    d = {"ghz": ghz_analyser, "fusion": type1_fusion}[kind](n) if kind != "bell" else bell_analyser()
    return boosted(d, boost) if boost else d


@lru_cache(maxsize=None)
def _tables(kind: str, n: int, boost: tuple[int, ...] = ()):
    d = _device(kind, n, boost)
    table = pattern_table(d)
    return d, table, kraus_table(d, table=table)


def _ops(kind: str, n: int, boost: tuple[int, ...] = ()) -> list[KrausOperator]:
    return _tables(kind, n, boost)[2]


def _ray(op: KrausOperator, n: int) -> np.ndarray:
    """Unit bra vector over input strings, for vacuum-output operators."""
    vec = np.zeros(2**n, dtype=complex)
    for x, a in op.functional.items():
        vec[int("".join(map(str, x)), 2)] = a
    return vec / np.linalg.norm(vec)


def _same_ray(a: np.ndarray, b: np.ndarray) -> bool:
    return abs(abs(np.vdot(a, b)) - 1) < AMP_ATOL


def _bra(n: int, terms: dict[str, complex]) -> np.ndarray:
    vec = np.zeros(2**n, dtype=complex)
    for s, c in terms.items():
        vec[int(s, 2)] = c
    return vec / np.linalg.norm(vec)


def _match_table(ops: list[KrausOperator], n: int, expected: list[tuple[np.ndarray, Fraction, Outcome]]) -> Result:
    """Pair every computed operator with one expected (ray, weight, outcome), one to one."""
    if len(ops) != len(expected):
        return False, f"{len(ops)} operators, expected {len(expected)}"
    left = list(expected)
    for op in ops:
        ray = _ray(op, n)
        hit = next(
            (i for i, e in enumerate(left) if _same_ray(ray, e[0]) and op.weight == e[1] and op.outcome is e[2]),
            None,
        )
        if hit is None:
            return False, f"unexpected operator weight={op.weight} outcome={op.outcome.value}"
        del left[hit]
    return True, "all operators matched"


# 1. Bell analyser


def check_bell() -> Result:
    ops = _ops("bell", 2)
    s, f = Outcome.SUCCESS, Outcome.FAILURE
    one = Fraction(1)
    expected = [
        (_bra(2, {"00": 1, "11": 1}), one, s),
        (_bra(2, {"00": 1, "11": -1}), one, s),
        (_bra(2, {"01": 1}), one, f),
        (_bra(2, {"10": 1}), one, f),
    ]
    ok, detail = _match_table(ops, 2, expected)
    n_pat = sum(len(k.patterns) for k in ops)
    p = success_probability(_device("bell", 2), ops)
    ok = ok and n_pat == 8 and p == Fraction(1, 2)
    return ok, f"{detail}; {n_pat} patterns; P_S = {p}"


# 2. n-GHZ analysers


def check_ghz(n: int) -> Result:
    ops = _ops("ghz", n)
    p = success_probability(_device("ghz", n), ops)
    succ = [k for k in ops if k.outcome is Outcome.SUCCESS]
    binary = all(max(r) <= 1 for k in succ for r in k.patterns)
    rays_ok = all(
        len(k.functional) == 2 and complement(next(iter(k.functional))) in k.functional for k in succ
    )
    fail = [k for k in ops if k.outcome is Outcome.FAILURE]
    singles = all(len(k.functional) == 1 for k in fail)
    covered = {x for k in fail for x in k.functional}
    nonconst = {x for x in bitstrings(n) if len(set(x)) == 2}
    invalid = sum(1 for k in ops if k.outcome is Outcome.INVALID)
    ok = p == Fraction(1, 2 ** (n - 1)) and binary and rays_ok and singles and covered == nonconst and not invalid
    return ok, (
        f"P_S = {p}; success counts <= 1: {binary}; "
        f"failure strings {len(covered)}/{2**n - 2} non-constant, one per operator: {singles}"
    )


# 3. pattern rules


def check_pattern_rules(n: int) -> Result:
    d, table, ops = _tables("ghz", n)
    xs = list(bitstrings(n))
    col = {x: table.keys.index(((), x)) for x in xs}
    bad = 0
    sign_bad = 0
    for i, r in enumerate(table.patterns):
        row = table.amps[i]
        for x in xs:
            if abs(row[col[x]] - patterns.predicted_amplitude(x, r)) > AMP_ATOL:
                bad += 1
        support = [x for x in xs if abs(row[col[x]]) > AMP_ATOL]
        inferred = patterns.infer_input(r)
        if inferred is not None:
            bad += support != [inferred]
        else:
            # every pair saw one photon: the constant strings, signed by the parity rule
            x0, x1 = (0,) * n, (1,) * n
            bad += sorted(support) != [x0, x1]
            ratio = row[col[x1]] / row[col[x0]]
            sign_bad += abs(ratio - patterns.ghz_sign(r)) > AMP_ATOL
    total = len(table.patterns) * len(xs)
    return bad == 0 and sign_bad == 0, f"{total} amplitudes, {bad} case-table and {sign_bad} sign violations"


# 4. boosting


BOOST_CASES = {
    "bell-one": ("bell", 2, (0,), Fraction(5, 8)),
    "bell-two": ("bell", 2, (0, 1), Fraction(3, 4)),
    "ghz4-odd": ("ghz", 4, (1, 3), Fraction(25, 128)),
    "ghz4-all": ("ghz", 4, (0, 1, 2, 3), Fraction(17, 64)),
}


def check_boost(case: str) -> Result:
    kind, n, boost, want = BOOST_CASES[case]
    p = success_probability(_device(kind, n, boost), _ops(kind, n, boost))
    return p == want, f"P_S = {p}, expected {want}"


def check_boost_table() -> Result:
    """One booster on the Bell analyser: six operators with the reference weights."""
    ops = _ops("bell", 2, (0,))
    s, f = Outcome.SUCCESS, Outcome.FAILURE
    expected = [
        (_bra(2, {"00": 1, "11": 1}), Fraction(1), s),
        (_bra(2, {"00": 1, "11": -1}), Fraction(1), s),
        (_bra(2, {"01": 1, "10": 1}), Fraction(1, 4), s),
        (_bra(2, {"01": 1, "10": -1}), Fraction(1, 4), s),
        (_bra(2, {"01": 1}), Fraction(3, 4), f),
        (_bra(2, {"10": 1}), Fraction(3, 4), f),
    ]
    ok, detail = _match_table(ops, 2, expected)
    weights = ", ".join(str(k.weight) for k in ops)
    return ok, f"{detail}; squared norms {weights}"


# 5. conjectured closed form for full boosting


def conjecture_formula(n: int) -> Fraction:
    base = Fraction(4 + n, 2 ** (n + 1))
    if n % 2 == 0:
        return base + Fraction(1, 2) ** Fraction(5 * n - 8, 2)
    return base + n * Fraction(1, 2) ** Fraction(5 * n - 9, 2)


def check_conjecture(n: int) -> Result:
    p = boosted_analyser_success(n, tuple(range(n)))
    want = conjecture_formula(n)
    return p == want, f"simulated {p}, formula {want}"


# 6. type-I fusion


def check_fusion(n: int) -> Result:
    d, table, ops = _tables("fusion", n)
    p = success_probability(d, ops)
    zeros, ones = (0,) * n, (1,) * n
    bad = 0
    checked = 0
    for i, r in enumerate(table.patterns):
        row = table.row(i)
        flat = {}
        for (ket, x), a in row.items():
            bits = decode(ket)
            flat[(bits, x)] = a
        if set(flat) != {((0,), zeros), ((1,), ones)}:
            continue  # not a success pattern
        checked += 1
        a0, a1 = flat[((0,), zeros)], flat[((1,), ones)]
        k = patterns.fusion_sign_exponent(r)
        bad += abs(a0 / a1 - (-1) ** k) > AMP_ATOL
    n_succ = sum(len(k.patterns) for k in ops if k.outcome is Outcome.SUCCESS)
    ok = bad == 0 and checked == n_succ and p == Fraction(1, 2 ** (n - 1))
    return ok, f"P_S = {p}; {checked} success patterns, {bad} sign violations"


# 7. loss polynomials


LOSS_CASES = {
    "bell": ("bell", 2, {4: Fraction(1, 2), 6: Fraction(1, 4)}),
    "ghz3": ("ghz", 3, {7: Fraction(3, 8), 9: Fraction(1, 16)}),
    "ghz4": ("ghz", 4, {8: Fraction(1, 16), 10: Fraction(3, 16), 12: Fraction(1, 64)}),
}


def loss_polynomial(kind: str, n: int, boost: tuple[int, ...] | None = None) -> Polynomial:
    boost = tuple(range(n)) if boost is None else boost
    d, table, ops = _tables(kind, n, boost)
    return lossy_success_probability(d, ops=ops, table=table)


def check_loss(case: str) -> Result:
    kind, n, want = LOSS_CASES[case]
    poly = loss_polynomial(kind, n)
    return poly.coeffs == want, f"P_S(eta) = {poly}"


# 8. compiled fixtures


FIXTURE_EXPECT = {
    "ghz4_bells": dict(p=Fraction(1, 8), seeds={"bell": 4}, loss=True),
    "ghz4_bell_tree": dict(p=Fraction(1, 8), seeds={"bell": 4}),
    "ghz4_ghz3": dict(p=Fraction(1, 2), seeds={"ghz3": 2}),
    "ring6_type1": dict(p=Fraction(1, 8), loss=False),
    "ring6_one_ghz3": dict(p=Fraction(1, 64), loss=True),
    "ring6_bells": dict(p=Fraction(1, 128), seeds={"bell": 7}, loss=True),
    "ring6_qpc22": dict(
        p=Fraction(1, 2**25), seeds={"bell": 25}, devices={"fusion2": 13, "fusion3": 5, "analyser3": 1}
    ),
    "two_chain_ghz3": dict(p=Fraction(1, 128), seeds={"ghz3": 8}),
    "two_chain_bells": dict(p=Fraction(1, 32768), seeds={"bell": 16}),
    "five_qubit_code": dict(p=Fraction(1, 16384), seeds={"bell": 10}, devices={"fusion3": 5, "analyser5": 1}),
    "surface_code": dict(p=Fraction(1, 512), seeds={"bell": 2, "ghz3": 4, "ghz4": 1}, devices={"analyser4": 3}),
}


def fixture_metrics(name: str, boosting=None):
    from .zx.extract import extract_scheme, scheme_metrics
    from .zx.fixtures import FIXTURES

    return scheme_metrics(extract_scheme(FIXTURES[name]()), boosting)


def check_fixture(name: str) -> Result:
    want = FIXTURE_EXPECT[name]
    m = fixture_metrics(name)
    problems = []
    if m.success_probability != want["p"]:
        problems.append(f"P_S {m.success_probability} != {want['p']}")
    if "seeds" in want and m.seed_inventory != want["seeds"]:
        problems.append(f"seeds {m.seed_inventory}")
    for dev, count in want.get("devices", {}).items():
        if m.device_inventory.get(dev, 0) != count:
            problems.append(f"{dev} x{m.device_inventory.get(dev, 0)} != {count}")
    if "loss" in want and m.fully_loss_detecting != want["loss"]:
        problems.append(f"loss-detecting {m.fully_loss_detecting}")
    summary = f"P_S = {m.success_probability}; seeds {m.seed_inventory}; loss-detecting {m.fully_loss_detecting}"
    return not problems, summary if not problems else "; ".join(problems)


def _ring(n: int) -> list[tuple[int, int]]:
    return [(i, (i + 1) % n) for i in range(n)]


SURFACE_X = (("q00", "q01", "q10", "q11"), ("q11", "q12", "q21", "q22"), ("q01", "q02"), ("q20", "q21"))
SURFACE_Z = (("q01", "q02", "q11", "q12"), ("q10", "q11", "q20", "q21"), ("q00", "q10"), ("q12", "q22"))


def surface_stabilizers() -> list[str]:
    from .zx.fixtures import SURFACE_QUBITS

    idx = {q: i for i, q in enumerate(SURFACE_QUBITS)}
    out = []
    for letter, groups in (("X", SURFACE_X), ("Z", SURFACE_Z)):
        for g in groups:
            out.append(on_qubits(9, {idx[q]: letter for q in g}))
    return out


def five_qubit_stabilizers() -> list[str]:
    k = graph_generators(5, _ring(5))
    return [pauli_product(k[i], k[i + 1]) for i in range(4)]


def check_fixture_states() -> Result:
    """Every fixture's tensor against an oracle built without diagrams."""
    from .zx.fixtures import FIXTURES, SURFACE_QUBITS, ring6_qpc22_target, two_chain_target
    from .zx.tensor import equivalent, to_tensor

    fails = []
    ghz4 = ghz_vector(4)
    ring = graph_state_vector(6, _ring(6))
    for name in ("ghz4_direct", "ghz4_bells", "ghz4_bell_tree", "ghz4_ghz3"):
        if not _same_ray(to_tensor(FIXTURES[name]()), ghz4):
            fails.append(name)
    for name in ("ring6_type1", "ring6_bent", "ring6_one_ghz3", "ring6_bells"):
        if not _same_ray(to_tensor(FIXTURES[name]()), ring):
            fails.append(name)
    if not equivalent(FIXTURES["ring6_qpc22"](), ring6_qpc22_target()):
        fails.append("ring6_qpc22")
    for name in ("two_chain_ghz3", "two_chain_bells", "two_chain_ghz5"):
        if not equivalent(FIXTURES[name](), two_chain_target()):
            fails.append(name)
    if not in_codespace(to_tensor(FIXTURES["five_qubit_code"]()), five_qubit_stabilizers()):
        fails.append("five_qubit_code")
    if not knill_laflamme(five_qubit_stabilizers(), 3):
        fails.append("five_qubit_code distance")
    enc = to_tensor(FIXTURES["surface_code"](), normalise=False)
    e0, e1 = enc[:512], enc[512:]
    idx = {q: i for i, q in enumerate(SURFACE_QUBITS)}
    col0 = pauli(on_qubits(9, {idx[q]: "X" for q in ("q00", "q10", "q20")}))
    row0 = pauli(on_qubits(9, {idx[q]: "Z" for q in ("q00", "q01", "q02")}))
    stabs = surface_stabilizers()
    surface_ok = (
        in_codespace(e0, stabs)
        and in_codespace(e1, stabs)
        and abs(np.linalg.norm(e0) - np.linalg.norm(e1)) < AMP_ATOL
        and abs(np.vdot(e0, e1)) < AMP_ATOL
        and np.allclose(col0 @ e0, e0, atol=AMP_ATOL)
        and np.allclose(col0 @ e1, -e1, atol=AMP_ATOL)
        and np.allclose(row0 @ e0, e1, atol=AMP_ATOL)
    )
    if not surface_ok:
        fails.append("surface_code")
    return not fails, "all fixtures match their oracles" if not fails else "mismatch: " + ", ".join(fails)


# 9. end-to-end simulation


SIM_CASES = {
    "ghz4_bells": ("ghz", Fraction(1, 8)),
    "ghz4_bell_tree": ("ghz", Fraction(1, 8)),
    "ghz4_ghz3": ("ghz", Fraction(1, 2)),
    "ring6_bells": ("ring", Fraction(1, 128)),
}


def check_simulation(name: str) -> Result:
    from .zx.extract import extract_scheme
    from .zx.fixtures import FIXTURES
    from .zx.simulate import verify_scheme

    kind, p = SIM_CASES[name]
    target = ghz_vector(4) if kind == "ghz" else graph_state_vector(6, _ring(6))
    rep = verify_scheme(extract_scheme(FIXTURES[name]()), target)
    ok = rep.ok and abs(rep.total_probability - float(p)) < AMP_ATOL
    return ok, (
        f"{rep.passed}/{rep.branches} branches match up to Pauli frame, "
        f"min fidelity {rep.min_fidelity:.12f}, total probability {rep.total_probability:.12g} (expected {p})"
    )


# 10. boosting comparison


def boosted_forms() -> tuple[Fraction, Fraction]:
    direct = fixture_metrics("ghz4_bells", {"A": (0, 1, 2, 3)}).success_probability
    tree = fixture_metrics("ghz4_bell_tree", {"A": (0, 1)}).success_probability
    return direct, tree


def check_comparison() -> Result:
    direct, tree = boosted_forms()
    ratio = direct / tree
    ok = direct == Fraction(17, 64) and tree == Fraction(3, 16) and abs(float(ratio) / 1.417 - 1) < RATIO_RTOL
    return ok, f"{direct} vs {tree}: ratio {ratio} = {float(ratio):.4f}, a {float(ratio - 1):.1%} increase"


# 11. property sweeps (deterministic seeds)


def check_rewrites(count: int = 200, seed: int = 0) -> Result:
    from .zx.randomdiag import random_diagram, random_rewrite
    from .zx.tensor import equivalent

    rng = np.random.default_rng(seed)
    done = bad = 0
    while done < count:
        d = random_diagram(rng)
        step = random_rewrite(d, rng)
        if step is None:
            continue
        done += 1
        bad += not equivalent(d, step[1])
    return bad == 0, f"{count} random diagrams, {bad} rewrites changed the tensor"


def _all_devices() -> list[tuple[str, int, tuple[int, ...]]]:
    out = [("bell", 2, ())]
    out += [("ghz", n, ()) for n in range(2, 6)]
    out += [("fusion", n, ()) for n in range(2, 6)]
    out += [("bell", 2, (0,)), ("bell", 2, (0, 1)), ("ghz", 3, (0, 1, 2)), ("ghz", 4, (1, 3)), ("ghz", 4, (0, 1, 2, 3))]
    return out


def check_completeness() -> Result:
    bad = []
    for kind, n, boost in _all_devices():
        d, table, ops = _tables(kind, n, boost)
        total = sum((k.weight for k in ops), Fraction(0))
        if total != 2**n or abs(table.weights().sum() - 2**n) > AMP_ATOL:
            bad.append(_device(kind, n, boost).label())
    return not bad, f"{len(_all_devices())} devices sum to 2^n" if not bad else "incomplete: " + ", ".join(bad)


def check_permanent(seed: int = 0, trials: int = 20) -> Result:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(1, 7):
        for _ in range(trials):
            m = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
            worst = max(worst, abs(permanent(m) - permanent_naive(m)))
    return worst < AMP_ATOL, f"Ryser vs permutation sum for k <= 6, max deviation {worst:.1e}"


def check_loss_monotone(points: int = 11) -> Result:
    etas = np.linspace(0, 1, points)
    bad = []
    for kind, n, boost in _all_devices():
        d = _device(kind, n, boost)
        if not d.is_analyser:
            continue
        poly = loss_polynomial(kind, n, boost)
        vals = [poly(e) for e in etas]
        if vals[0] != 0 or any(b < a - 1e-15 for a, b in zip(vals, vals[1:])):
            bad.append(d.label())
        if poly.exact(Fraction(1)) != success_probability(d, _ops(kind, n, boost)):
            bad.append(d.label() + " at eta=1")
    return not bad, f"non-decreasing on {points} points for every analyser" if not bad else "violations: " + ", ".join(bad)


def check_pnr() -> Result:
    """Resolution needed by the boosted 4-GHZ analyser's success patterns."""
    ops = _ops("ghz", 4, (0, 1, 2, 3))
    need = required_pnr(_device("ghz", 4, (0, 1, 2, 3)), "success", ops)
    plain = required_pnr(_device("ghz", 4), "success", _ops("ghz", 4))
    return plain == 1 and need >= 2, f"unboosted {plain}, fully boosted {need}"


def all_checks(conjecture_n5: bool = False) -> list[Check]:
    cs = [Check("kraus.bell", "kraus", "Bell analyser Kraus table", check_bell, budget=1.0)]
    cs += [Check(f"ghz.n{n}", "ghz", f"{n}-GHZ analyser", lambda n=n: check_ghz(n)) for n in range(2, 6)]
    cs += [
        Check(f"patterns.n{n}", "patterns", f"case table and sign rule, n={n}", lambda n=n: check_pattern_rules(n))
        for n in range(2, 6)
    ]
    cs += [Check(f"boost.{c}", "boost", f"boosted P_S, {c}", lambda c=c: check_boost(c)) for c in BOOST_CASES]
    cs.append(Check("boost.table", "boost", "one-booster Bell table", check_boost_table))
    ns = (2, 3, 4, 5) if conjecture_n5 else (2, 3, 4)
    cs += [
        Check(f"conjecture.n{n}", "conjecture", f"conjectured P_S, n={n}", lambda n=n: check_conjecture(n), gating=False)
        for n in ns
    ]
    cs += [Check(f"fusion.n{n}", "fusion", f"type-I {n}-fusion", lambda n=n: check_fusion(n)) for n in range(2, 6)]
    cs += [Check(f"loss.{c}", "loss", f"lossy P_S, boosted {c}", lambda c=c: check_loss(c)) for c in LOSS_CASES]
    cs += [Check(f"zx.{f}", "zx", f"compiled metrics, {f}", lambda f=f: check_fixture(f)) for f in FIXTURE_EXPECT]
    cs.append(Check("zx.states", "zx", "fixture tensors against oracles", check_fixture_states))
    cs += [Check(f"sim.{f}", "sim", f"simulated {f}", lambda f=f: check_simulation(f)) for f in SIM_CASES]
    cs.append(Check("compare.boosting", "compare", "boosted direct vs tree form", check_comparison))
    cs += [
        Check("props.rewrites", "props", "rewrites preserve tensors", check_rewrites),
        Check("props.completeness", "props", "pattern weights sum to 2^n", check_completeness),
        Check("props.permanent", "props", "Ryser permanent", check_permanent),
        Check("props.loss-monotone", "props", "lossy P_S non-decreasing", check_loss_monotone),
        Check("props.pnr", "props", "boosting raises required resolution", check_pnr),
    ]
    return cs


def select(checks: Iterable[Check], patterns_: Iterable[str] = ()) -> list[Check]:
    """Checks whose id or group contains any of the filter strings."""
    pats = list(patterns_)
    if not pats:
        return list(checks)
    return [c for c in checks if any(p in c.id or p == c.group for p in pats)]


def run_all(checks: Iterable[Check]) -> list[CheckResult]:
    return [run_check(c) for c in checks]


def verdict(results: Iterable[CheckResult]) -> bool:
    return all(r.ok for r in results if r.check.gating)
