"""LO-convertible diagrams for the worked generation schemes, plus targets.

Outputs are always listed in vertex order of the target state. Spider names:
C/B/D/E are Bell seeds, G/Q are GHZ seeds, F/K/T are fusions, A/X/P/L/I are
analysers.
"""

from __future__ import annotations

from typing import Callable

from .diagram import DiagramBuilder, ZXDiagram, graph_state, plug_output


def ghz4_direct() -> ZXDiagram:
    b = DiagramBuilder()
    b.seed("G", 4)
    for _ in range(4):
        b.output("G")
    return b.build()


def ghz4_bells() -> ZXDiagram:
    """Four Bell seeds, one qubit of each into a 4-qubit analyser."""
    b = DiagramBuilder()
    for i in range(4):
        b.seed(f"C{i}", 2)
    b.spider("A", 4, 0)
    for i in range(4):
        b.output(f"C{i}")
        b.link(f"C{i}", "A")
    return b.build()


def ghz4_bell_tree() -> ZXDiagram:
    """The 4-qubit analyser split into two 2-fusions feeding a Bell analyser."""
    b = DiagramBuilder()
    for i in range(4):
        b.seed(f"C{i}", 2)
    b.spider("F1", 2, 1)
    b.spider("F2", 2, 1)
    b.spider("A", 2, 0)
    for i in range(4):
        b.output(f"C{i}")
        b.link(f"C{i}", "F1" if i < 2 else "F2")
    b.link("F1", "A")
    b.link("F2", "A")
    return b.build()


def ghz4_ghz3() -> ZXDiagram:
    """Two 3-GHZ seeds joined by a Bell analyser."""
    b = DiagramBuilder()
    b.seed("G1", 3)
    b.seed("G2", 3)
    b.spider("A", 2, 0)
    for g in ("G1", "G2"):
        b.output(g)
        b.output(g)
        b.link(g, "A")
    return b.build()


def ring6_type1() -> ZXDiagram:
    """Three 3-GHZ seeds closed into a ring by three 2-fusions."""
    b = DiagramBuilder()
    for j in range(3):
        b.seed(f"G{j}", 3)
        b.spider(f"F{j}", 2, 1)
    for j in range(3):
        b.link(f"G{j}", f"F{j}", hadamard=True)
        b.link(f"G{(j + 1) % 3}", f"F{j}", hadamard=True)
    for j in range(3):
        b.output(f"G{j}")
        b.output(f"F{j}")
    return b.build()


def ring6_bent() -> ZXDiagram:
    """The fusion outputs bent back through Bell seeds: three 3-qubit analysers."""
    b = DiagramBuilder()
    for j in range(3):
        b.seed(f"G{j}", 3)
        b.seed(f"B{j}", 2)
        b.spider(f"A{j}", 3, 0)
    for j in range(3):
        b.link(f"G{j}", f"A{j}", hadamard=True)
        b.link(f"G{(j + 1) % 3}", f"A{j}", hadamard=True)
        b.link(f"B{j}", f"A{j}")
    for j in range(3):
        b.output(f"G{j}")
        b.output(f"B{j}")
    return b.build()


def _ring_chain(b: DiagramBuilder, first: str):
    """Bell seeds B1..B5 fused along a chain that starts at ``first`` and
    closes on the Bell analyser X."""
    prev = first
    for j in range(1, 6):
        b.seed(f"B{j}", 2)
        b.spider(f"F{j}", 2, 1)
        b.link(prev, f"F{j}", hadamard=True)
        b.link(f"B{j}", f"F{j}")
        prev = f"F{j}"
    b.link(prev, "X", hadamard=True)


def ring6_one_ghz3() -> ZXDiagram:
    """One 3-GHZ and five Bell seeds; every fusion output ends in the analyser."""
    b = DiagramBuilder()
    b.seed("G", 3)
    b.spider("X", 2, 0)
    b.output("G")
    b.link("G", "X")
    _ring_chain(b, "G")
    for j in range(1, 6):
        b.output(f"B{j}")
    return b.build()


def ring6_bells() -> ZXDiagram:
    """The 3-GHZ seed of :func:`ring6_one_ghz3` replaced by two Bells and a fusion."""
    b = DiagramBuilder()
    b.seed("Ca", 2)
    b.seed("Cb", 2)
    b.spider("T", 2, 1)
    b.spider("X", 2, 0)
    b.output("Ca")
    b.link("Ca", "T")
    b.link("Cb", "T")
    b.link("T", "X")
    _ring_chain(b, "Cb")
    for j in range(1, 6):
        b.output(f"B{j}")
    return b.build()


def _parity_block(b: DiagramBuilder, name: str, into: str, hadamard: bool = True) -> list[str]:
    """Two Bell seeds fused into a 2-qubit repetition block feeding ``into``."""
    cups = [f"{name}c0", f"{name}c1"]
    for c in cups:
        b.seed(c, 2)
    b.spider(name, 2, 1)
    for c in cups:
        b.link(c, name)
    b.link(name, into, hadamard=hadamard)
    return cups


def ring6_qpc22() -> ZXDiagram:
    """Six-ring with every vertex encoded in the (2,2) parity code, from Bell seeds only."""
    b = DiagramBuilder()
    b.spider("T0", 2, 1)
    for j in range(1, 6):
        b.spider(f"V{j}", 3, 1)
    b.spider("X", 3, 0)
    b.seed("E", 2)
    cups: list[list[str]] = []
    for j in range(6):
        into = "T0" if j == 0 else f"V{j}"
        cups.append(_parity_block(b, f"K{j}a", into) + _parity_block(b, f"K{j}b", into))
    b.link("T0", "X")
    b.link("E", "X")
    b.link("E", "V1", hadamard=True)
    for j in range(1, 5):
        b.link(f"V{j}", f"V{j + 1}", hadamard=True)
    b.link("V5", "X", hadamard=True)
    for vertex in cups:
        for c in vertex:
            b.output(c)
    return b.build()


def _two_chain(block: Callable[[DiagramBuilder, str, str], list[tuple[str, int]]], final: str) -> ZXDiagram:
    b = DiagramBuilder()
    legs = []
    if final == "bell":
        b.spider("FA", 4, 1)
        b.spider("FB", 4, 1)
        b.spider("X", 2, 0)
    else:
        b.spider("FA", 5, 0)
        b.spider("FB", 5, 0)
        b.seed("E", 2)
    for a in ("A", "B"):
        for t in range(4):
            legs += block(b, f"Q{a}{t}", f"F{a}")
    if final == "bell":
        b.link("FA", "X")
        b.link("FB", "X", hadamard=True)
    else:
        b.link("E", "FA")
        b.link("E", "FB", hadamard=True)
    for name, count in legs:
        for _ in range(count):
            b.output(name)
    return b.build()


def _ghz3_block(b: DiagramBuilder, name: str, into: str) -> list[tuple[str, int]]:
    b.seed(name, 3)
    b.link(name, into, hadamard=True)
    return [(name, 2)]


def _bell_block(b: DiagramBuilder, name: str, into: str) -> list[tuple[str, int]]:
    return [(c, 1) for c in _parity_block(b, name, into)]


def two_chain_ghz3() -> ZXDiagram:
    """Encoded two-chain from eight 3-GHZ seeds: two 4-fusions and a Bell analyser."""
    return _two_chain(_ghz3_block, "bell")


def two_chain_bells() -> ZXDiagram:
    """As :func:`two_chain_ghz3` with each 3-GHZ seed made from two Bells and a 2-fusion."""
    return _two_chain(_bell_block, "bell")


def two_chain_ghz5() -> ZXDiagram:
    """The closing Bell effect turned into a Bell seed: two 5-qubit analysers."""
    return _two_chain(_bell_block, "ghz5")


def five_qubit_code() -> ZXDiagram:
    """Logical state of the 5-qubit code: ten Bells, five 3-fusions, one 5-qubit analyser.

    The ring of fusions carries the cyclic graph; the analyser joins a hub
    vertex adjacent to every ring vertex and measures it out.
    """
    b = DiagramBuilder()
    b.spider("I", 5, 0)
    for i in range(5):
        b.seed(f"D{i}", 2)
        b.seed(f"E{i}", 2)
        b.spider(f"F{i}", 3, 1)
    for i in range(5):
        b.link(f"D{i}", "I")
        b.link(f"D{i}", f"F{i}", hadamard=True)
        b.link(f"E{i}", f"F{i}")
        b.link(f"E{i}", f"F{(i + 1) % 5}", hadamard=True)
    for i in range(5):
        b.output(f"F{i}")
    return b.build()


SURFACE_QUBITS = tuple(f"q{r}{c}" for r in range(3) for c in range(3))


def surface_code() -> ZXDiagram:
    """Distance-3 surface-code encoder: one input, nine outputs in row-major order.

    Seeds hold Z-correlated groups of data qubits; two analysers impose the
    weight-4 Z checks and a third ties the input to the logical Z along row 0.
    """
    b = DiagramBuilder()
    for p in ("P01", "P10", "L"):
        b.spider(p, 4, 0)
    b.input("L")
    owner = {}
    seeds = {
        "S0010": (("q00", "q10"), ("P10", "L")),
        "S1222": (("q12", "q22"), ("P01",)),
        "S01": (("q01",), ("P01", "L")),
        "S02": (("q02",), ("P01", "L")),
        "S11": (("q11",), ("P01", "P10")),
        "S20": (("q20",), ("P10",)),
        "S21": (("q21",), ("P10",)),
    }
    for name, (qubits, checks) in seeds.items():
        b.seed(name, len(qubits) + len(checks))
        for q in qubits:
            owner[q] = name
        for c in checks:
            b.link(name, c, hadamard=True)
    for q in SURFACE_QUBITS:
        b.output(owner[q])
    return b.build()


def qpc_encoder_diagram(n: int, m: int) -> ZXDiagram:
    """Encoder of the (n, m) parity code: n blocks of m qubits.

    The input meets n block seeds in an (n+1)-qubit analyser; each block seed
    sends m qubits to the output and one, through a Hadamard, to the analyser.
    """
    if n < 1 or m < 1:
        raise ValueError("the parity code needs n, m >= 1")
    b = DiagramBuilder()
    b.spider("A", n + 1, 0)
    b.input("A")
    for t in range(n):
        b.seed(f"Q{t}", m + 1)
        b.link(f"Q{t}", "A", hadamard=True)
    for t in range(n):
        for _ in range(m):
            b.output(f"Q{t}")
    return b.build()


def repetition_encoder(m: int) -> ZXDiagram:
    b = DiagramBuilder()
    b.spider("R", 1, m)
    b.input("R")
    for _ in range(m):
        b.output("R")
    return b.build()


def ring_graph(n: int = 6) -> ZXDiagram:
    return graph_state(n, [(i, (i + 1) % n) for i in range(n)])


def encode_all(d: ZXDiagram, encoder: ZXDiagram, stem: str = "enc") -> ZXDiagram:
    """Plug ``encoder`` into every output of ``d``, keeping output order."""
    for i, k in enumerate(list(d.outputs)):
        d = plug_output(d, k, encoder, f"{stem}{i}_")
    return d


def ring6_qpc22_target() -> ZXDiagram:
    return encode_all(ring_graph(6), qpc_encoder_diagram(2, 2))


def two_chain_target() -> ZXDiagram:
    rep = encode_all(graph_state(2, [(0, 1)]), repetition_encoder(2), "rep")
    return encode_all(rep, qpc_encoder_diagram(2, 2), "qpc")


FIXTURES: dict[str, Callable[[], ZXDiagram]] = {
    "ghz4_direct": ghz4_direct,
    "ghz4_bells": ghz4_bells,
    "ghz4_bell_tree": ghz4_bell_tree,
    "ghz4_ghz3": ghz4_ghz3,
    "ring6_type1": ring6_type1,
    "ring6_bent": ring6_bent,
    "ring6_one_ghz3": ring6_one_ghz3,
    "ring6_bells": ring6_bells,
    "ring6_qpc22": ring6_qpc22,
    "two_chain_ghz3": two_chain_ghz3,
    "two_chain_bells": two_chain_bells,
    "two_chain_ghz5": two_chain_ghz5,
    "five_qubit_code": five_qubit_code,
    "surface_code": surface_code,
}
