"""Phase-free ZX diagrams, their rewrites, and translation to linear optics."""

from .diagram import (
    DiagramBuilder,
    DiagramError,
    Edge,
    Spider,
    ZXDiagram,
    graph_state,
    is_lo_convertible,
)
from .tensor import canonical, equivalent, to_tensor

__all__ = [
    "DiagramBuilder",
    "DiagramError",
    "Edge",
    "Spider",
    "ZXDiagram",
    "canonical",
    "equivalent",
    "graph_state",
    "is_lo_convertible",
    "to_tensor",
]
