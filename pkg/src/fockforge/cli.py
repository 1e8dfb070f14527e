"""Command-line front end.

Exit codes: 0 success, 1 check failure, 2 usage or parse error, 3 diagram not
convertible, 4 photon or qubit cap exceeded.
"""

from __future__ import annotations

import json
import sys
import time
from fractions import Fraction

import click
import numpy as np

from .devices import ParameterError, build_device
from .dualrail import decode
from .exact import fmt
from .fock import ResourceError
from .kraus import DEFAULT_MAX_PHOTONS, KrausOperator, kraus_table, pattern_table, success_probability

EXIT_CHECK, EXIT_USAGE, EXIT_CONVERSION, EXIT_RESOURCE = 1, 2, 3, 4


def _fail(message: str, code: int):
    click.echo(message, err=True)
    sys.exit(code)


def _device(kind: str, n: int | None, boost: tuple[int, ...]):
    try:
        return build_device(kind, n, tuple(boost))
    except ParameterError as exc:
        raise click.UsageError(str(exc))


def _bits(x) -> str:
    return "".join(map(str, x))


def _term(key, a: complex) -> str:
    ket, x = key
    c = f"{a.real:+.6f}" if abs(a.imag) < 1e-12 else f"({a.real:+.6f}{a.imag:+.6f}j)"
    if not ket:
        return f"{c}<{_bits(x)}|"
    bits = decode(ket)
    out = _bits(bits) if bits is not None else "occ" + _bits(ket)
    return f"{c}|{out}><{_bits(x)}|"


def format_operator(i: int, op: KrausOperator) -> list[str]:
    norm = float(np.sqrt(sum(abs(a) ** 2 for a in op.weights.values())))
    terms = " ".join(_term(k, op.weights[k] / norm) for k in sorted(op.weights, key=lambda k: (k[1], k[0])))
    pats = " ".join(_bits(r) for r in op.patterns)
    return [
        f"K{i:<3} {op.outcome.value:<17} weight {fmt(op.weight):<8} direction {terms}",
        f"     patterns ({len(op.patterns)}): {pats}",
    ]


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Exact linear-optics device analysis and ZX scheme compilation."""


@main.command()
@click.option("--kind", type=click.Choice(["bell", "ghz", "fusion"]), required=True)
@click.option("-n", "n", type=int, default=None, help="Number of input qubits.")
@click.option("--boost", type=int, multiple=True, help="Qubit index to couple a booster to (repeatable).")
@click.option("--max-photons", type=int, default=DEFAULT_MAX_PHOTONS, show_default=True)
def kraus(kind, n, boost, max_photons):
    """Print the grouped Kraus operators of a device and its success probability."""
    d = _device(kind, n, boost)
    try:
        ops = kraus_table(d, max_photons)
    except ResourceError as exc:
        _fail(str(exc), EXIT_RESOURCE)
    click.echo(f"device {d.label()}: {d.n} qubits, {d.modes} modes, {d.photons} photons")
    for i, op in enumerate(ops):
        for line in format_operator(i, op):
            click.echo(line)
    click.echo(f"P_S = {fmt(success_probability(d, ops))}")


@main.command("loss-sweep")
@click.option("--kind", type=click.Choice(["bell", "ghz"]), required=True)
@click.option("-n", "n", type=int, default=None)
@click.option("--boost", type=int, multiple=True)
@click.option("--rule", type=click.Choice(["idle-unit", "unambiguous"]), default="idle-unit", show_default=True)
@click.option("--eta-start", type=float, default=0.0, show_default=True)
@click.option("--eta-stop", type=float, default=1.0, show_default=True)
@click.option("--eta-steps", type=int, default=11, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the CSV here instead of stdout.")
@click.option("--max-photons", type=int, default=DEFAULT_MAX_PHOTONS, show_default=True)
@click.option("--quiet", is_flag=True, help="Do not print the exact polynomial to stderr.")
def loss_sweep(kind, n, boost, rule, eta_start, eta_stop, eta_steps, out, max_photons, quiet):
    """Lossy success probability on a grid of per-photon transmissions, as CSV."""
    from .loss import lossy_success_probability, sweep

    if not (0.0 <= eta_start <= 1.0 and 0.0 <= eta_stop <= 1.0) or eta_steps < 1 or eta_stop < eta_start:
        raise click.UsageError("need 0 <= eta-start <= eta-stop <= 1 and eta-steps >= 1")
    d = _device(kind, n, boost)
    try:
        table = pattern_table(d, max_photons)
    except ResourceError as exc:
        _fail(str(exc), EXIT_RESOURCE)
    poly = lossy_success_probability(d, rule, kraus_table(d, table=table), table)
    etas = np.linspace(eta_start, eta_stop, eta_steps)
    rows = ["eta,p_success"] + [f"{e:.12g},{p:.12g}" for e, p in sweep(poly, etas)]
    if not quiet:
        click.echo(f"# {d.label()} ({rule}): P_S(eta) = {poly}", err=True)
        click.echo(f"# P_S(1) = {fmt(poly.exact(Fraction(1)))}", err=True)
    text = "\n".join(rows) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _parse_boost(specs: tuple[str, ...], scheme) -> dict[str, tuple[int, ...]]:
    """NODE:Q,Q,... or NODE alone for every qubit of that analyser."""
    out = {}
    for spec in specs:
        node, _, qubits = spec.partition(":")
        try:
            size = scheme.node(node).size
        except KeyError:
            raise click.UsageError(f"no node {node!r} in the scheme")
        try:
            out[node] = tuple(int(q) for q in qubits.split(",")) if qubits else tuple(range(size))
        except ValueError:
            raise click.UsageError(f"bad boost spec {spec!r}; expected NODE:Q,Q,...")
    return out


def _load_diagram(path: str | None, fixture: str | None):
    from .zx.diagram import DiagramError, ZXDiagram
    from .zx.fixtures import FIXTURES

    if (path is None) == (fixture is None):
        raise click.UsageError("give exactly one of DIAGRAM or --fixture")
    if fixture is not None:
        if fixture not in FIXTURES:
            raise click.UsageError(f"unknown fixture {fixture!r}; choose from {', '.join(FIXTURES)}")
        return FIXTURES[fixture]()
    try:
        with open(path) as fh:
            return ZXDiagram.loads(fh.read())
    except (OSError, ValueError, KeyError, TypeError, DiagramError) as exc:
        _fail(f"cannot read diagram {path}: {exc}", EXIT_USAGE)


@main.command()
@click.argument("diagram", required=False, type=click.Path(dir_okay=False))
@click.option("--fixture", default=None, help="Compile a built-in example diagram instead of a file.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Where to write the scheme JSON.")
@click.option("--boost", multiple=True, help="NODE:Q,Q boosts an analyser's qubits; NODE alone boosts all.")
def compile(diagram, fixture, out, boost):
    """Translate an LO-convertible diagram into a linear-optical scheme and report its costs."""
    from .zx.extract import ConversionError, extract_scheme, scheme_metrics

    d = _load_diagram(diagram, fixture)
    try:
        scheme = extract_scheme(d)
    except ConversionError as exc:
        click.echo("diagram is not LO-convertible:", err=True)
        for v in exc.violations:
            click.echo(f"  - {v}", err=True)
        sys.exit(EXIT_CONVERSION)
    try:
        metrics = scheme_metrics(scheme, _parse_boost(boost, scheme))
    except ParameterError as exc:
        raise click.UsageError(str(exc))
    for line in metrics.lines():
        click.echo(line)
    if metrics.loss_witness:
        click.echo("loss witness: " + " -> ".join(metrics.loss_witness))
    if out:
        with open(out, "w") as fh:
            fh.write(scheme.dumps(metrics) + "\n")


def _target(spec: str, scheme) -> np.ndarray:
    from .stabilizer import ghz_vector, graph_state_vector
    from .zx.diagram import ZXDiagram
    from .zx.tensor import to_tensor

    kind, _, arg = spec.partition(":")
    try:
        if kind == "ghz":
            return ghz_vector(int(arg))
        if kind == "ring":
            n = int(arg)
            return graph_state_vector(n, [(i, (i + 1) % n) for i in range(n)])
        if kind == "diagram":
            with open(arg) as fh:
                return to_tensor(ZXDiagram.loads(fh.read()))
    except (OSError, ValueError, KeyError) as exc:
        raise click.UsageError(f"bad target {spec!r}: {exc}")
    if kind == "source":
        if scheme.source is None:
            raise click.UsageError("the scheme carries no source diagram; give --target")
        return to_tensor(scheme.source)
    raise click.UsageError(f"bad target {spec!r}; use ghz:N, ring:N, diagram:FILE or source")


@main.command()
@click.argument("scheme_file", type=click.Path(dir_okay=False))
@click.option("--target", default="source", show_default=True, help="ghz:N, ring:N, diagram:FILE or source.")
@click.option("--limit", type=int, default=None, help="Only simulate the first N outcome combinations.")
@click.option("--boost", multiple=True, help="NODE:Q,Q as for compile.")
@click.option("--max-photons", type=int, default=16, show_default=True)
def verify(scheme_file, target, limit, boost, max_photons):
    """Simulate a scheme over its success outcomes and compare with a target state."""
    from .zx.extract import LOScheme, scheme_metrics
    from .zx.simulate import verify_scheme

    try:
        with open(scheme_file) as fh:
            scheme = LOScheme.loads(fh.read())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        _fail(f"cannot read scheme {scheme_file}: {exc}", EXIT_USAGE)
    boosting = _parse_boost(boost, scheme)
    vec = _target(target, scheme)
    n_qubits = len(scheme.outputs) + len(scheme.inputs)
    if len(vec) != 2**n_qubits:
        raise click.UsageError(f"target has {int(np.log2(len(vec)))} qubits, scheme outputs {n_qubits}")
    try:
        rep = verify_scheme(scheme, vec, boosting, limit, max_photons)
    except ResourceError as exc:
        _fail(str(exc), EXIT_RESOURCE)
    expected = scheme_metrics(scheme, boosting).success_probability
    click.echo(f"branches: {rep.branches}, matching up to Pauli frame: {rep.passed}")
    click.echo(f"min fidelity: {rep.min_fidelity:.12f}")
    click.echo(f"total probability: {rep.total_probability:.12g} (predicted {expected})")
    ok = rep.ok
    if limit is None:
        prob_ok = abs(rep.total_probability - float(expected)) < 1e-9
        click.echo(f"probability check: {'pass' if prob_ok else 'fail'}")
        ok = ok and prob_ok
    click.echo("PASS" if ok else "FAIL")
    sys.exit(0 if ok else EXIT_CHECK)


@main.command()
@click.option("--filter", "filters", multiple=True, help="Only checks whose id contains this or whose group equals it.")
@click.option("--conjecture-n5", is_flag=True, help="Add the n=5 conjecture row (about a minute).")
@click.option("--quiet", is_flag=True, help="Omit the timing line.")
def reproduce(filters, conjecture_n5, quiet):
    """Recompute every reference number and print a pass/fail matrix."""
    from .checks import all_checks, run_check, select

    t0 = time.perf_counter()
    checks = select(all_checks(conjecture_n5), filters)
    if not checks:
        raise click.UsageError(f"no check matches {', '.join(filters)}")
    results = []
    for c in checks:
        r = run_check(c)
        results.append(r)
        click.echo(r.line())
    gating = [r for r in results if r.check.gating]
    failed = sum(not r.ok for r in gating)
    reported = sum(not r.ok for r in results if not r.check.gating)
    click.echo(f"{len(gating) - failed}/{len(gating)} checks passed; {reported} report-only rows failed")
    if not quiet:
        click.echo(f"wall time: {time.perf_counter() - t0:.1f} s")
    sys.exit(EXIT_CHECK if failed else 0)


if __name__ == "__main__":
    main()
