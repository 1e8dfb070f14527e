import json

import pytest
from click.testing import CliRunner

from fockforge.cli import main
from fockforge.zx import DiagramBuilder
from fockforge.zx.fixtures import FIXTURES


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def _csv(text):
    lines = text.strip().splitlines()
    return lines[0], {float(e): float(p) for e, p in (l.split(",") for l in lines[1:])}


def test_kraus_bell_output():
    r = run("kraus", "--kind", "bell")
    assert r.exit_code == 0
    assert r.output.splitlines()[0].startswith("device bell")
    assert "patterns (2): 0011 1100" in r.output
    assert r.output.rstrip().endswith("P_S = 1/2")


def test_kraus_bad_parameters_exit_2():
    assert run("kraus", "--kind", "ghz", "-n", "1").exit_code == 2
    assert run("kraus", "--kind", "laser").exit_code == 2
    assert run("kraus", "--kind", "bell", "--boost", "5").exit_code == 2


def test_kraus_photon_cap_exit_4():
    assert run("kraus", "--kind", "ghz", "-n", "4", "--boost", "0", "--boost", "1", "--max-photons", "6").exit_code == 4


def test_loss_sweep_boosted_bell():
    r = run("loss-sweep", "--kind", "bell", "--boost", "0", "--boost", "1", "--quiet")
    assert r.exit_code == 0
    header, rows = _csv(r.output)
    assert header == "eta,p_success"
    assert len(rows) == 11
    assert rows[1.0] == pytest.approx(0.75)
    assert rows[0.0] == 0.0
    assert list(rows.values()) == sorted(rows.values())


def test_loss_sweep_to_file(tmp_path):
    out = tmp_path / "s.csv"
    r = run("loss-sweep", "--kind", "ghz", "-n", "3", "--eta-steps", "3", "--out", out, "--quiet")
    assert r.exit_code == 0
    _, rows = _csv(out.read_text())
    # unboosted 3-GHZ analyser: P_S(eta) = eta^3 / 4
    assert rows[0.5] == pytest.approx(0.125 / 4)


def test_loss_sweep_bad_grid_exit_2():
    assert run("loss-sweep", "--kind", "bell", "--eta-start", "0.8", "--eta-stop", "0.2").exit_code == 2
    assert run("loss-sweep", "--kind", "bell", "--eta-stop", "1.5").exit_code == 2


def test_compile_and_verify_round_trip(tmp_path):
    diagram = tmp_path / "d.json"
    diagram.write_text(FIXTURES["ghz4_bells"]().dumps())
    scheme = tmp_path / "s.json"
    r = run("compile", diagram, "--out", scheme)
    assert r.exit_code == 0, r.output
    assert "1/8" in r.output
    assert json.loads(scheme.read_text())["metrics"]["photon_count"] == 8
    ok = run("verify", scheme, "--target", "ghz:4")
    assert ok.exit_code == 0 and ok.output.rstrip().endswith("PASS")
    assert run("verify", scheme).exit_code == 0
    bad = run("verify", scheme, "--target", "ring:4")
    assert bad.exit_code == 1 and bad.output.rstrip().endswith("FAIL")
    assert run("verify", scheme, "--target", "ghz:3").exit_code == 2


def test_compile_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run("compile", broken).exit_code == 2
    b = DiagramBuilder()
    b.spider("M", 2, 2)
    b.input("M")
    b.input("M")
    b.output("M")
    b.output("M")
    bad = tmp_path / "bad.json"
    bad.write_text(b.build().dumps())
    r = run("compile", bad)
    assert r.exit_code == 3
    assert "2->2" in r.output
    assert run("compile").exit_code == 2
    assert run("compile", "--fixture", "nope").exit_code == 2


def test_compile_loss_witness():
    r = run("compile", "--fixture", "ring6_type1")
    assert r.exit_code == 0
    assert "loss witness: F" in r.output


def test_verify_photon_cap_exit_4(tmp_path):
    scheme = tmp_path / "s.json"
    assert run("compile", "--fixture", "surface_code", "--out", scheme).exit_code == 0
    assert run("verify", scheme).exit_code == 4


def test_reproduce_is_deterministic():
    a = run("reproduce", "--filter", "kraus", "--filter", "patterns", "--quiet")
    b = run("reproduce", "--filter", "kraus", "--filter", "patterns", "--quiet")
    assert a.exit_code == 0
    assert a.output == b.output
    assert "5/5 checks passed" in a.output
    assert run("reproduce", "--filter", "nothing-matches").exit_code == 2
