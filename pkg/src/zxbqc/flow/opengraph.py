from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..zx.diagram import HADAMARD, ZXDiagram
from ..zx.graphlike import graph_like_violations

PLANES = ("XY", "XZ", "YZ", "X", "Y", "Z")


class FlowError(ValueError):
    pass


@dataclass(frozen=True)
class OpenGraph:
    """Simple graph with designated inputs/outputs and planes on non-outputs."""

    vertices: frozenset[int]
    edges: frozenset[frozenset[int]]
    inputs: frozenset[int]
    outputs: frozenset[int]
    planes: Mapping[int, str]
    adj: Mapping[int, frozenset[int]] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            if a not in adj or b not in adj:
                raise FlowError(f"edge {a}-{b} references an unknown vertex")
            adj[a].add(b)
            adj[b].add(a)
        if not (self.inputs <= self.vertices and self.outputs <= self.vertices):
            raise FlowError("inputs/outputs must be vertices")
        for v in self.vertices - self.outputs:
            if self.planes.get(v) not in PLANES:
                raise FlowError(f"vertex {v} lacks a measurement plane")
        object.__setattr__(self, "adj", {v: frozenset(n) for v, n in adj.items()})

    @classmethod
    def build(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]],
              inputs: Iterable[int], outputs: Iterable[int],
              planes: Mapping[int, str] | None = None) -> OpenGraph:
        vs = frozenset(vertices)
        outs = frozenset(outputs)
        planes = dict(planes) if planes is not None else {v: "XY" for v in vs - outs}
        return cls(vs, frozenset(frozenset(e) for e in edges), frozenset(inputs), outs,
                   {v: p for v, p in planes.items() if v not in outs})

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    @property
    def non_outputs(self) -> list[int]:
        return sorted(self.vertices - self.outputs)


def plane_of_phase(phase) -> str:
    return "X" if phase.is_pauli() else "XY"


def odd_neighborhood(g: OpenGraph, K: Iterable[int]) -> frozenset[int]:
    acc: set[int] = set()
    for v in K:
        if v not in g.vertices:
            raise FlowError(f"unknown vertex {v}")
        acc ^= g.adj[v]
    return frozenset(acc)


def open_graph_of(d: ZXDiagram) -> OpenGraph:
    """Open graph of a graph-like diagram: interior spiders and their H edges.

    Inputs/outputs are the interior spiders attached to input/output boundaries.
    """
    bad = graph_like_violations(d)
    if bad:
        raise FlowError(f"diagram is not graph-like: {bad[0]}")
    interior = d.interior_ids()
    ins = [d.neighbors(b)[0] for b in d.inputs]
    outs = [d.neighbors(b)[0] for b in d.outputs]
    edges = []
    for w in d.wires.values():
        if w.kind == HADAMARD and not d.is_boundary(w.a) and not d.is_boundary(w.b):
            edges.append((w.a, w.b))
    planes = {v: plane_of_phase(d.spider(v).phase) for v in interior}
    return OpenGraph.build(interior, edges, ins, outs, planes)
