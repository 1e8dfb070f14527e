"""Random phase-free diagrams and random applicable rewrites, for property checks."""

from __future__ import annotations

import numpy as np

from .diagram import Edge, Spider, ZXDiagram
from .rewrite import bend_output_through_input, eliminate_multi_output, spider_fuse, spider_unfuse

REWRITES = ("fuse", "unfuse", "eliminate", "bend")


def random_diagram(rng: np.random.Generator, max_spiders: int = 5, max_arity: int = 4, max_boundary: int = 10) -> ZXDiagram:
    """Spiders with random arities, ports paired at random, Hadamard flags at random."""
    while True:
        k = int(rng.integers(1, max_spiders + 1))
        spiders = []
        for i in range(k):
            arity = int(rng.integers(1, max_arity + 1))
            n_in = int(rng.integers(0, arity + 1))
            spiders.append(Spider(f"s{i}", n_in, arity - n_in))
        ports = [("spider", s.id, p) for s in spiders for p in range(s.arity)]
        n_bound = int(rng.integers(0, min(max_boundary, len(ports)) + 1))
        if (len(ports) - n_bound) % 2:
            n_bound -= 1
        if n_bound < 0:
            continue
        order = rng.permutation(len(ports))
        ports = [ports[i] for i in order]
        edges = []
        n_inputs = int(rng.integers(0, n_bound + 1))
        for b in range(n_bound):
            edges.append(Edge(("boundary", b), ports[b], bool(rng.integers(2))))
        rest = ports[n_bound:]
        for a, c in zip(rest[0::2], rest[1::2]):
            edges.append(Edge(a, c, bool(rng.integers(2))))
        inputs = list(range(n_inputs))
        outputs = list(range(n_inputs, n_bound))
        return ZXDiagram(spiders, edges, outputs, inputs)


def random_rewrite(d: ZXDiagram, rng: np.random.Generator, kind: str | None = None) -> tuple[str, ZXDiagram] | None:
    """Apply one randomly chosen applicable rewrite; None if none applies."""
    kinds = [kind] if kind else [REWRITES[i] for i in rng.permutation(len(REWRITES))]
    for k in kinds:
        if k == "fuse":
            cands = [
                i
                for i, e in enumerate(d.edges)
                if not e.hadamard and e.a[0] == e.b[0] == "spider" and e.a[1] != e.b[1]
            ]
            if cands:
                return k, spider_fuse(d, int(rng.choice(cands)))
        elif k == "unfuse":
            cands = [s for s in d.spiders if s.arity >= 2]
            if cands:
                s = cands[int(rng.integers(len(cands)))]
                size = int(rng.integers(1, s.arity))
                part = rng.choice(s.arity, size=size, replace=False)
                return k, spider_unfuse(d, s.id, [int(p) for p in part])
        elif k == "eliminate":
            cands = [s for s in d.spiders if s.n_out >= 2]
            if cands:
                return k, eliminate_multi_output(d, cands[int(rng.integers(len(cands)))].id)
        elif k == "bend":
            cands = [s for s in d.spiders if s.n_out >= 1]
            if cands:
                s = cands[int(rng.integers(len(cands)))]
                port = s.n_in + int(rng.integers(s.n_out))
                return k, bend_output_through_input(d, s.id, port)
    return None
