"""Phase-free ZX diagrams built from Z spiders, plain wires and Hadamard wires.

Spider ports ``0 .. n_in-1`` are inputs and ``n_in .. n_in+n_out-1`` are
outputs. Open wires end on numbered boundaries, listed in ``inputs`` or
``outputs``. Tensor semantics ignore direction; direction only matters when
a diagram is read as a linear-optical scheme.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .. import FORMAT

# ("spider", id, port) or ("boundary", index)
Endpoint = tuple


class DiagramError(ValueError):
    pass


def port(spider_id: str, p: int) -> Endpoint:
    return ("spider", spider_id, p)


def boundary(k: int) -> Endpoint:
    return ("boundary", k)


@dataclass(frozen=True)
class Spider:
    id: str
    n_in: int
    n_out: int

    @property
    def arity(self) -> int:
        return self.n_in + self.n_out

    def is_input(self, p: int) -> bool:
        return p < self.n_in


@dataclass(frozen=True)
class Edge:
    a: Endpoint
    b: Endpoint
    hadamard: bool = False

    def other(self, end: Endpoint) -> Endpoint:
        return self.b if end == self.a else self.a


@dataclass(frozen=True)
class ZXDiagram:
    spiders: tuple[Spider, ...] = ()
    edges: tuple[Edge, ...] = ()
    outputs: tuple[int, ...] = ()
    inputs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "spiders", tuple(self.spiders))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        self.validate()

    def validate(self):
        ids = [s.id for s in self.spiders]
        if len(set(ids)) != len(ids):
            raise DiagramError("duplicate spider id")
        by_id = {s.id: s for s in self.spiders}
        seen: set[Endpoint] = set()
        for e in self.edges:
            for end in (e.a, e.b):
                if end in seen:
                    raise DiagramError(f"endpoint {end} has more than one edge")
                seen.add(end)
                if end[0] == "spider":
                    s = by_id.get(end[1])
                    if s is None or not 0 <= end[2] < s.arity:
                        raise DiagramError(f"edge refers to a missing port {end}")
                elif end[0] != "boundary":
                    raise DiagramError(f"bad endpoint {end}")
        for s in self.spiders:
            for p in range(s.arity):
                if ("spider", s.id, p) not in seen:
                    raise DiagramError(f"port {p} of spider {s.id} is not connected")
        bounds = {end[1] for end in seen if end[0] == "boundary"}
        listed = list(self.inputs) + list(self.outputs)
        if len(set(listed)) != len(listed) or set(listed) != bounds:
            raise DiagramError("every boundary must be listed exactly once as an input or an output")

    # lookups

    def spider(self, sid: str) -> Spider:
        for s in self.spiders:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def edge_at(self, end: Endpoint) -> Edge:
        for e in self.edges:
            if end in (e.a, e.b):
                return e
        raise KeyError(end)

    def edge_index(self, a: Endpoint, b: Endpoint) -> int:
        for i, e in enumerate(self.edges):
            if {e.a, e.b} == {a, b}:
                return i
        raise KeyError((a, b))

    def edges_between(self, s1: str, s2: str) -> list[int]:
        return [
            i
            for i, e in enumerate(self.edges)
            if e.a[0] == e.b[0] == "spider" and {e.a[1], e.b[1]} == {s1, s2}
        ]

    @property
    def boundary_order(self) -> tuple[int, ...]:
        """Inputs then outputs: the index order of :func:`to_tensor` legs."""
        return self.inputs + self.outputs

    def fresh_id(self, stem: str) -> str:
        ids = {s.id for s in self.spiders}
        k = 0
        while f"{stem}{k}" in ids:
            k += 1
        return f"{stem}{k}"

    # serialisation

    def to_json(self) -> dict:
        def enc(end):
            return {"spider": end[1], "port": end[2]} if end[0] == "spider" else {"boundary": end[1]}

        out = {
            "format": FORMAT,
            "spiders": [{"id": s.id, "in": s.n_in, "out": s.n_out} for s in self.spiders],
            "edges": [{"a": enc(e.a), "b": enc(e.b), "hadamard": e.hadamard} for e in self.edges],
            "outputs": [{"boundary": k} for k in self.outputs],
        }
        if self.inputs:
            out["inputs"] = [{"boundary": k} for k in self.inputs]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: dict) -> "ZXDiagram":
        if not isinstance(data, dict):
            raise DiagramError("diagram JSON must be an object")
        fmt = data.get("format", FORMAT)
        if fmt != FORMAT:
            raise DiagramError(f"unsupported format {fmt!r}")

        def dec(obj) -> Endpoint:
            if "boundary" in obj:
                return ("boundary", int(obj["boundary"]))
            return ("spider", str(obj["spider"]), int(obj["port"]))

        def bnd(obj) -> int:
            if "boundary" not in obj:
                raise DiagramError("outputs and inputs must be boundary endpoints")
            return int(obj["boundary"])

        try:
            spiders = [Spider(str(s["id"]), int(s["in"]), int(s["out"])) for s in data["spiders"]]
            edges = [Edge(dec(e["a"]), dec(e["b"]), bool(e.get("hadamard", False))) for e in data["edges"]]
            outputs = [bnd(o) for o in data["outputs"]]
            inputs = [bnd(o) for o in data.get("inputs", [])]
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram: {exc}") from exc
        return cls(spiders, edges, outputs, inputs)

    @classmethod
    def loads(cls, text: str) -> "ZXDiagram":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"invalid JSON: {exc}") from exc
        return cls.from_json(data)


def _is_source(d: ZXDiagram, end: Endpoint) -> bool:
    if end[0] == "boundary":
        return end[1] in d.inputs
    return not d.spider(end[1]).is_input(end[2])


def orient(d: ZXDiagram, e: Edge) -> tuple[Endpoint, Endpoint] | None:
    """(source, sink) of an edge, or None if both ends face the same way."""
    sa, sb = _is_source(d, e.a), _is_source(d, e.b)
    if sa and not sb:
        return e.a, e.b
    if sb and not sa:
        return e.b, e.a
    return None


@dataclass(frozen=True)
class Convertibility:
    ok: bool
    violations: tuple[str, ...] = field(default=())

    def __bool__(self):
        return self.ok


def spider_role(s: Spider) -> str | None:
    """Optical role of a spider in LO-convertible form, or None."""
    if s.n_in == 0:
        return "seed"
    if s.n_out == 0:
        return "analyser"
    if s.n_out == 1:
        return "identity" if s.n_in == 1 else "fusion"
    return None


def is_lo_convertible(d: ZXDiagram) -> Convertibility:
    """Every spider must be 0->n, n->1, n->0 or 1->1 and every wire must run
    from an output (or input boundary) to an input (or output boundary)."""
    bad = []
    for s in d.spiders:
        if spider_role(s) is None:
            bad.append(f"spider {s.id} is {s.n_in}->{s.n_out}")
    for e in d.edges:
        if orient(d, e) is None:
            bad.append(f"wire {e.a}-{e.b} does not run from an output to an input")
    return Convertibility(not bad, tuple(bad))


class DiagramBuilder:
    """Incremental construction with automatic port allocation.

    ``spider`` reserves arities; ``link`` joins the next free output port of
    one spider to the next free input port of another.
    """

    def __init__(self):
        self._spiders: dict[str, list[int]] = {}
        self._next: dict[str, list[int]] = {}
        self._edges: list[Edge] = []
        self._outputs: list[int] = []
        self._inputs: list[int] = []
        self._nb = 0

    def spider(self, sid: str, n_in: int, n_out: int) -> str:
        if sid in self._spiders:
            raise DiagramError(f"duplicate spider id {sid}")
        self._spiders[sid] = [n_in, n_out]
        self._next[sid] = [0, n_in]
        return sid

    def seed(self, sid: str, n: int) -> str:
        return self.spider(sid, 0, n)

    def _take(self, sid: str, output: bool) -> Endpoint:
        n_in, n_out = self._spiders[sid]
        nxt = self._next[sid]
        if output:
            if nxt[1] >= n_in + n_out:
                raise DiagramError(f"spider {sid} has no free output port")
            p, nxt[1] = nxt[1], nxt[1] + 1
        else:
            if nxt[0] >= n_in:
                raise DiagramError(f"spider {sid} has no free input port")
            p, nxt[0] = nxt[0], nxt[0] + 1
        return ("spider", sid, p)

    def link(self, src: str, dst: str, hadamard: bool = False):
        self._edges.append(Edge(self._take(src, True), self._take(dst, False), hadamard))

    def output(self, src: str, hadamard: bool = False) -> int:
        k = self._nb
        self._nb += 1
        self._edges.append(Edge(self._take(src, True), ("boundary", k), hadamard))
        self._outputs.append(k)
        return k

    def input(self, dst: str, hadamard: bool = False) -> int:
        k = self._nb
        self._nb += 1
        self._edges.append(Edge(("boundary", k), self._take(dst, False), hadamard))
        self._inputs.append(k)
        return k

    def build(self) -> ZXDiagram:
        spiders = [Spider(sid, a, b) for sid, (a, b) in self._spiders.items()]
        return ZXDiagram(spiders, self._edges, self._outputs, self._inputs)


def relabel_boundaries(d: ZXDiagram, start: int = 0) -> ZXDiagram:
    """Renumber boundaries consecutively: inputs first, then outputs."""
    mapping = {k: start + i for i, k in enumerate(d.inputs + d.outputs)}

    def fix(end):
        return ("boundary", mapping[end[1]]) if end[0] == "boundary" else end

    edges = [Edge(fix(e.a), fix(e.b), e.hadamard) for e in d.edges]
    return ZXDiagram(d.spiders, edges, [mapping[k] for k in d.outputs], [mapping[k] for k in d.inputs])


def prefix_ids(d: ZXDiagram, prefix: str) -> ZXDiagram:
    def fix(end):
        return ("spider", prefix + end[1], end[2]) if end[0] == "spider" else end

    spiders = [Spider(prefix + s.id, s.n_in, s.n_out) for s in d.spiders]
    return ZXDiagram(spiders, [Edge(fix(e.a), fix(e.b), e.hadamard) for e in d.edges], d.outputs, d.inputs)


def plug_output(d: ZXDiagram, k: int, sub: ZXDiagram, prefix: str) -> ZXDiagram:
    """Feed output ``k`` of ``d`` into the single input of ``sub``.

    The outputs of ``sub`` take the place of output ``k``.
    """
    if len(sub.inputs) != 1:
        raise DiagramError("the plugged diagram needs exactly one input")
    sub = prefix_ids(sub, prefix)
    base = max(d.inputs + d.outputs, default=-1) + 1
    sub = relabel_boundaries(sub, base)
    (kin,) = sub.inputs
    e_out = d.edge_at(("boundary", k))
    e_in = sub.edge_at(("boundary", kin))
    a = e_out.other(("boundary", k))
    b = e_in.other(("boundary", kin))
    if e_out.hadamard and e_in.hadamard:
        # two Hadamards cancel
        joined = [Edge(a, b, False)]
    else:
        joined = [Edge(a, b, e_out.hadamard or e_in.hadamard)]
    edges = [e for e in d.edges if e is not e_out] + [e for e in sub.edges if e is not e_in] + joined
    pos = d.outputs.index(k)
    outputs = d.outputs[:pos] + sub.outputs + d.outputs[pos + 1:]
    return ZXDiagram(d.spiders + sub.spiders, edges, outputs, d.inputs)


def graph_state(n: int, graph_edges: Iterable[tuple[int, int]]) -> ZXDiagram:
    """Graph state as Z spiders joined by Hadamard wires, one output each."""
    b = DiagramBuilder()
    graph_edges = list(graph_edges)
    deg = [0] * n
    for u, v in graph_edges:
        deg[u] += 1
        deg[v] += 1
    # orient every graph edge from lower to higher vertex
    ins = [sum(1 for u, v in graph_edges if max(u, v) == i) for i in range(n)]
    for i in range(n):
        b.spider(f"v{i}", ins[i], deg[i] - ins[i] + 1)
    for u, v in graph_edges:
        b.link(f"v{min(u, v)}", f"v{max(u, v)}", hadamard=True)
    for i in range(n):
        b.output(f"v{i}")
    return b.build()

