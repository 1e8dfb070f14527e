"""Translation of LO-convertible diagrams into linear-optical schemes.

Each spider becomes one device: 0->n a seed generator, n->0 an n-qubit
analyser, n->1 a type-I n-fusion, 1->1 a plain wire. A Hadamard edge becomes
a 50:50 beamsplitter across the two rails of the qubit it carries.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .. import FORMAT
from ..devices import ParameterError, type1_fusion
from ..factorised import boosted_analyser_stats
from ..kraus import success_probability
from .diagram import ZXDiagram, is_lo_convertible, orient, spider_role

NODE_KINDS = ("seed", "analyser", "fusion", "identity", "hadamard", "input", "output")

PortRef = tuple[str, int]


class ConversionError(ValueError):
    def __init__(self, violations: Sequence[str]):
        self.violations = tuple(violations)
        super().__init__("diagram is not LO-convertible: " + "; ".join(self.violations))


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    size: int = 1
    spider: str | None = None

    @property
    def n_in(self) -> int:
        return {"seed": 0, "input": 0, "output": 1, "hadamard": 1, "identity": 1}.get(self.kind, self.size)

    @property
    def n_out(self) -> int:
        return {"seed": self.size, "analyser": 0, "output": 0}.get(self.kind, 1)


@dataclass(frozen=True)
class Wire:
    src: PortRef
    dst: PortRef


@dataclass(frozen=True)
class LOScheme:
    nodes: tuple[Node, ...]
    wires: tuple[Wire, ...]
    order: tuple[str, ...]
    source: ZXDiagram | None = None

    def node(self, nid: str) -> Node:
        for n in self.nodes:
            if n.id == nid:
                return n
        raise KeyError(nid)

    def of_kind(self, kind: str) -> list[Node]:
        return [n for n in self.nodes if n.kind == kind]

    def wire_into(self, ref: PortRef) -> Wire:
        for w in self.wires:
            if w.dst == ref:
                return w
        raise KeyError(ref)

    def wire_from(self, ref: PortRef) -> Wire:
        for w in self.wires:
            if w.src == ref:
                return w
        raise KeyError(ref)

    @property
    def outputs(self) -> list[Node]:
        """Output ports in the source diagram's output order."""
        return sorted(self.of_kind("output"), key=lambda n: n.size)

    @property
    def inputs(self) -> list[Node]:
        return sorted(self.of_kind("input"), key=lambda n: n.size)

    def to_json(self, metrics: "SchemeMetrics | None" = None) -> dict:
        out = {
            "format": FORMAT,
            "nodes": [{"id": n.id, "kind": n.kind, "size": n.size, "spider": n.spider} for n in self.nodes],
            "wires": [{"from": list(w.src), "to": list(w.dst)} for w in self.wires],
            "order": list(self.order),
        }
        if self.source is not None:
            out["source"] = self.source.to_json()
        if metrics is not None:
            out["metrics"] = metrics.to_json()
        return out

    def dumps(self, metrics: "SchemeMetrics | None" = None) -> str:
        return json.dumps(self.to_json(metrics), indent=1)

    @classmethod
    def from_json(cls, data: dict) -> "LOScheme":
        if data.get("format") != FORMAT:
            raise ValueError(f"unsupported scheme format {data.get('format')!r}")
        nodes = [Node(n["id"], n["kind"], int(n["size"]), n.get("spider")) for n in data["nodes"]]
        wires = [Wire((w["from"][0], int(w["from"][1])), (w["to"][0], int(w["to"][1]))) for w in data["wires"]]
        source = ZXDiagram.from_json(data["source"]) if "source" in data else None
        return cls(tuple(nodes), tuple(wires), tuple(data["order"]), source)

    @classmethod
    def loads(cls, text: str) -> "LOScheme":
        return cls.from_json(json.loads(text))


def _topological(nodes: list[Node], wires: list[Wire]) -> tuple[str, ...]:
    indeg = {n.id: 0 for n in nodes}
    succ: dict[str, list[str]] = {n.id: [] for n in nodes}
    for w in wires:
        indeg[w.dst[0]] += 1
        succ[w.src[0]].append(w.dst[0])
    ready = deque(n.id for n in nodes if indeg[n.id] == 0)
    order = []
    while ready:
        v = ready.popleft()
        order.append(v)
        for u in succ[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                ready.append(u)
    if len(order) != len(nodes):
        stuck = sorted(v for v, k in indeg.items() if k > 0)
        raise ConversionError([f"directed cycle through {', '.join(stuck)}"])
    return tuple(order)


def extract_scheme(d: ZXDiagram) -> LOScheme:
    check = is_lo_convertible(d)
    if not check:
        raise ConversionError(check.violations)
    nodes: list[Node] = []
    for k in d.inputs:
        nodes.append(Node(f"in{k}", "input", k))
    for s in d.spiders:
        role = spider_role(s)
        if role == "seed":
            nodes.append(Node(s.id, "seed", s.n_out, s.id))
        elif role == "analyser":
            nodes.append(Node(s.id, "analyser", s.n_in, s.id))
        elif role == "identity":
            nodes.append(Node(s.id, "identity", 1, s.id))
        else:
            nodes.append(Node(s.id, "fusion", s.n_in, s.id))
    for k in d.outputs:
        nodes.append(Node(f"out{k}", "output", k))

    def src_ref(end) -> PortRef:
        if end[0] == "boundary":
            return (f"in{end[1]}", 0)
        return (end[1], end[2] - d.spider(end[1]).n_in)

    def dst_ref(end) -> PortRef:
        if end[0] == "boundary":
            return (f"out{end[1]}", 0)
        return (end[1], end[2])

    wires: list[Wire] = []
    for i, e in enumerate(d.edges):
        src, dst = orient(d, e)
        if e.hadamard:
            h = Node(f"h{i}", "hadamard", 1)
            nodes.append(h)
            wires.append(Wire(src_ref(src), (h.id, 0)))
            wires.append(Wire((h.id, 0), dst_ref(dst)))
        else:
            wires.append(Wire(src_ref(src), dst_ref(dst)))
    return LOScheme(tuple(nodes), tuple(wires), _topological(nodes, wires), d)


# metrics


@lru_cache(maxsize=None)
def analyser_stats(n: int, boost: tuple[int, ...] = ()) -> tuple[Fraction, int]:
    """(P_S, largest count in a success pattern) of a possibly boosted analyser."""
    if n == 1:
        # single-qubit X measurement: a beamsplitter and two detectors, always heralded
        return Fraction(1), 1
    return boosted_analyser_stats(n, boost)


@lru_cache(maxsize=None)
def fusion_probability(n: int) -> Fraction:
    return success_probability(type1_fusion(n))


@dataclass(frozen=True)
class LossDetection:
    ok: bool
    witness: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def check_full_loss_detection(s: LOScheme) -> LossDetection:
    """Fails iff some output port descends from a type-I fusion output.

    Every node has at most one output per wire, so the descendants of a
    fusion output form one path; it is harmless when it ends in an analyser.
    """
    for f in (n for n in s.nodes if n.kind == "fusion"):
        path = [f.id]
        ref: PortRef = (f.id, 0)
        while True:
            nxt = s.wire_from(ref).dst[0]
            path.append(nxt)
            kind = s.node(nxt).kind
            if kind == "output":
                return LossDetection(False, tuple(path))
            if kind == "analyser":
                break
            ref = (nxt, 0)
    return LossDetection(True)


@dataclass(frozen=True)
class SchemeMetrics:
    success_probability: Fraction
    seed_inventory: dict[str, int]
    device_inventory: dict[str, int]
    photon_count: int
    fully_loss_detecting: bool
    max_pnr: int
    loss_witness: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "success_probability": str(self.success_probability),
            "seed_inventory": self.seed_inventory,
            "device_inventory": self.device_inventory,
            "photon_count": self.photon_count,
            "fully_loss_detecting": self.fully_loss_detecting,
            "max_pnr": self.max_pnr,
        }

    def lines(self) -> list[str]:
        return [
            f"P_S = {self.success_probability}",
            "seeds: " + (", ".join(f"{v} {k}" for k, v in self.seed_inventory.items()) or "none"),
            "devices: " + (", ".join(f"{v} {k}" for k, v in self.device_inventory.items()) or "none"),
            f"photons: {self.photon_count}",
            f"fully loss-detecting: {'yes' if self.fully_loss_detecting else 'no'}",
            f"max PNR: {self.max_pnr}",
        ]


def seed_name(size: int) -> str:
    return {1: "plus", 2: "bell"}.get(size, f"ghz{size}")


def device_name(node: Node) -> str:
    return f"{node.kind}{node.size}"


def scheme_metrics(s: LOScheme, boosting: Mapping[str, Sequence[int]] | None = None) -> SchemeMetrics:
    """Probability, inventories and costs; ``boosting`` maps analyser ids to boosted qubits."""
    boosting = {k: tuple(sorted(set(v))) for k, v in (boosting or {}).items()}
    for nid, qubits in boosting.items():
        node = s.node(nid)
        if node.kind != "analyser":
            raise ParameterError(f"boosting is only allowed on analysers, {nid} is a {node.kind}")
        if node.size < 2 or any(not 0 <= q < node.size for q in qubits):
            raise ParameterError(f"bad boost qubits {qubits} for {nid}")
    p = Fraction(1)
    pnr = 0
    seeds: Counter = Counter()
    devices: Counter = Counter()
    photons = 0
    for node in s.nodes:
        if node.kind == "seed":
            seeds[seed_name(node.size)] += 1
            photons += node.size
        elif node.kind == "input":
            photons += 1
        elif node.kind == "analyser":
            boost = boosting.get(node.id, ())
            prob, level = analyser_stats(node.size, boost)
            p *= prob
            pnr = max(pnr, level)
            photons += 2 * len(boost)
            devices[device_name(node) + ("+boost" if boost else "")] += 1
        elif node.kind == "fusion":
            p *= fusion_probability(node.size)
            pnr = max(pnr, 1)
            devices[device_name(node)] += 1
        elif node.kind == "hadamard":
            devices["beamsplitter"] += 1
    loss = check_full_loss_detection(s)
    return SchemeMetrics(
        success_probability=p,
        seed_inventory=dict(sorted(seeds.items())),
        device_inventory=dict(sorted(devices.items())),
        photon_count=photons,
        fully_loss_detecting=loss.ok,
        max_pnr=pnr,
        loss_witness=loss.witness,
    )
