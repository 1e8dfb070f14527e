"""Tensor-preserving rewrites on phase-free Z-spider diagrams."""

from __future__ import annotations

from typing import Iterable

from ..devices import ParameterError
from .diagram import Edge, Spider, ZXDiagram


class RewriteError(ValueError):
    pass


def _remap(d: ZXDiagram, mapping: dict, spiders: list[Spider], extra: Iterable[Edge] = (), drop=()) -> ZXDiagram:
    edges = []
    for i, e in enumerate(d.edges):
        if i in drop:
            continue
        edges.append(Edge(mapping.get(e.a, e.a), mapping.get(e.b, e.b), e.hadamard))
    return ZXDiagram(spiders, edges + list(extra), d.outputs, d.inputs)


def spider_fuse(d: ZXDiagram, edge: int) -> ZXDiagram:
    """Merge the two spiders joined by plain edge ``edge`` into one.

    The merged spider keeps the first spider's id; its inputs are the
    remaining inputs of both spiders and likewise for outputs.
    """
    e = d.edges[edge]
    if e.a[0] != "spider" or e.b[0] != "spider":
        raise RewriteError("fusion needs an edge between two spiders")
    if e.hadamard:
        raise RewriteError("cannot fuse along a Hadamard edge")
    if e.a[1] == e.b[1]:
        raise RewriteError("edge is a self-loop")
    # keep the spider whose port is the source so ids stay readable
    sa, sb = d.spider(e.a[1]), d.spider(e.b[1])
    used = {e.a, e.b}
    ins, outs = [], []
    for s in (sa, sb):
        for p in range(s.arity):
            end = ("spider", s.id, p)
            if end in used:
                continue
            (ins if s.is_input(p) else outs).append(end)
    merged = Spider(sa.id, len(ins), len(outs))
    mapping = {end: ("spider", merged.id, i) for i, end in enumerate(ins + outs)}
    spiders = [merged if s.id == sa.id else s for s in d.spiders if s.id != sb.id]
    return _remap(d, mapping, spiders, drop={edge})


def spider_unfuse(d: ZXDiagram, spider_id: str, part: Iterable[int], new_id: str | None = None) -> ZXDiagram:
    """Split a spider in two, joined by a plain edge.

    Ports in ``part`` stay on ``spider_id``, which gains an output port; the
    rest move to a new spider, which gains an input port fed from it.
    """
    s = d.spider(spider_id)
    part = sorted(set(part))
    rest = [p for p in range(s.arity) if p not in part]
    if not part or not rest or any(not 0 <= p < s.arity for p in part):
        raise ParameterError("unfusing needs a nontrivial partition of the ports")
    new_id = new_id or d.fresh_id(spider_id + "_")
    a_in = [p for p in part if s.is_input(p)]
    a_out = [p for p in part if not s.is_input(p)]
    b_in = [p for p in rest if s.is_input(p)]
    b_out = [p for p in rest if not s.is_input(p)]
    sa = Spider(spider_id, len(a_in), len(a_out) + 1)
    sb = Spider(new_id, len(b_in) + 1, len(b_out))
    mapping = {}
    for i, p in enumerate(a_in + a_out):
        mapping[("spider", spider_id, p)] = ("spider", spider_id, i)
    for i, p in enumerate(b_in):
        mapping[("spider", spider_id, p)] = ("spider", new_id, i)
    for i, p in enumerate(b_out):
        mapping[("spider", spider_id, p)] = ("spider", new_id, len(b_in) + 1 + i)
    link = Edge(("spider", spider_id, sa.arity - 1), ("spider", new_id, len(b_in)))
    spiders = []
    for t in d.spiders:
        if t.id == spider_id:
            spiders += [sa, sb]
        else:
            spiders.append(t)
    return _remap(d, mapping, spiders, extra=[link])


def _cup_out(d: ZXDiagram, spider_id: str, out_ports: list[int]) -> ZXDiagram:
    """Replace the listed output legs by Bell seeds feeding new inputs."""
    s = d.spider(spider_id)
    ins = list(range(s.n_in))
    outs = [p for p in range(s.n_in, s.arity) if p not in out_ports]
    n_new_in = len(ins) + len(out_ports)
    new = Spider(spider_id, n_new_in, len(outs))
    mapping = {("spider", spider_id, p): ("spider", spider_id, i) for i, p in enumerate(ins)}
    for i, p in enumerate(outs):
        mapping[("spider", spider_id, p)] = ("spider", spider_id, n_new_in + i)
    spiders = [new if t.id == spider_id else t for t in d.spiders]
    extra, drop = [], set()
    taken = {t.id for t in spiders}
    cup_of = {}
    for k, p in enumerate(out_ports):
        cid = f"{spider_id}_bell{k}"
        while cid in taken:
            cid += "_"
        taken.add(cid)
        cup_of[("spider", spider_id, p)] = ("spider", cid, 0)
        spiders.append(Spider(cid, 0, 2))
        extra.append(Edge(("spider", cid, 1), ("spider", spider_id, len(ins) + k)))
    for end, seed_leg in cup_of.items():
        old = d.edge_at(end)
        i = d.edges.index(old)
        if i in drop:
            continue  # self-loop between two cupped legs, already rewired
        drop.add(i)
        far = old.other(end)
        far = cup_of.get(far) or mapping.get(far, far)
        extra.append(Edge(seed_leg, far, old.hadamard))
    return _remap(d, mapping, spiders, extra=extra, drop=drop)


def eliminate_multi_output(d: ZXDiagram, spider_id: str) -> ZXDiagram:
    """n->m spider (m >= 2) becomes an (n+m-1)->1 spider plus m-1 Bell seeds.

    The first output leg stays; every other output is supplied by one leg of
    a new Bell seed whose partner leg enters the spider.
    """
    s = d.spider(spider_id)
    if s.n_out < 2:
        raise ParameterError(f"spider {spider_id} has {s.n_out} outputs; need at least 2")
    return _cup_out(d, spider_id, list(range(s.n_in + 1, s.arity)))


def bend_output_through_input(d: ZXDiagram, spider_id: str, out_port: int | None = None) -> ZXDiagram:
    """Turn one output leg of a spider into an input fed by a new Bell seed.

    On an n->1 fusion spider this gives an (n+1)->0 analyser whose former
    output is now the free leg of the Bell seed.
    """
    s = d.spider(spider_id)
    if s.n_out < 1:
        raise ParameterError(f"spider {spider_id} has no output to bend")
    if out_port is None:
        out_port = s.n_in
    if s.is_input(out_port) or out_port >= s.arity:
        raise ParameterError(f"port {out_port} is not an output of {spider_id}")
    return _cup_out(d, spider_id, [out_port])
