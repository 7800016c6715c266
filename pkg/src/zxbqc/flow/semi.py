from __future__ import annotations

from dataclasses import dataclass

from ..zx.diagram import ZXDiagram
from ..zx.graphlike import reduce_semi_graph_like
from .opengraph import OpenGraph, open_graph_of
from .pauli import DEFAULT_LIMIT, PauliFlowData, find_flow


@dataclass(frozen=True)
class ReducedFlow:
    """A flow on the reduced graph plus the fusion map back to split spiders."""

    graph: OpenGraph
    flow: PauliFlowData
    parent_of: dict[int, int]

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for c, p in sorted(self.parent_of.items()):
            if p in self.graph.vertices:
                out.setdefault(p, []).append(c)
        return out

    def lifted(self) -> PauliFlowData:
        kids = self.children()
        layers = tuple(frozenset(c for p in layer for c in kids[p]) for layer in self.flow.layers)
        f = {}
        for p, K in self.flow.f.items():
            lifted_K = frozenset(c for v in K for c in kids[v])
            for c in kids[p]:
                f[c] = lifted_K
        return PauliFlowData(f, layers)


def reduced_flow(d: ZXDiagram, limit: int = DEFAULT_LIMIT) -> ReducedFlow | None:
    reduced, parent_of = reduce_semi_graph_like(d)
    g = open_graph_of(reduced)
    flow = find_flow(g, limit=limit)
    if flow is None:
        return None
    parent_of = {c: p for c, p in parent_of.items() if not d.is_boundary(c)}
    return ReducedFlow(g, flow, parent_of)


def flow_of_semi_graph_like(d: ZXDiagram, limit: int = DEFAULT_LIMIT) -> PauliFlowData | None:
    """Flow of the reduced diagram, lifted so split siblings share a layer."""
    rf = reduced_flow(d, limit)
    return None if rf is None else rf.lifted()
