"""Bundled swap-test fixture: an open graph with a hand-transcribed flow table.

Vertex names (``Q1``, ``v3``...) map to integer ids by their position in the
fixture's vertex list.  The edge list is inferred from the printed correction
and odd-neighbourhood columns, so the fixture records it as such.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources as ir

from .flow import OpenGraph, PauliFlowData, find_flow, odd_neighborhood, verify_pauli_flow
from .phase import Phase
from .zx.diagram import HADAMARD, IO, REGULAR, ZXDiagram


@dataclass(frozen=True)
class Fixture:
    names: tuple[str, ...]
    graph: OpenGraph
    flow: PauliFlowData
    printed_odd: dict[int, frozenset[int]]

    def name(self, v: int | None) -> str:
        return "-" if v is None else self.names[v]

    def ids(self, names) -> frozenset[int]:
        return frozenset(self.names.index(n) for n in names)


def _text(name: str) -> str:
    return ir.files("zxbqc.data").joinpath(name).read_text()


def swap_test_circuit_text() -> str:
    return _text("swap_test.qc")


def swap_test_fixture() -> Fixture:
    raw = json.loads(_text("swap_test_fixture.json"))
    names = tuple(raw["vertices"])
    idx = {n: i for i, n in enumerate(names)}
    g = OpenGraph.build(
        range(len(names)), [(idx[a], idx[b]) for a, b in raw["edges"]],
        [idx[n] for n in raw["inputs"]], [idx[n] for n in raw["outputs"]],
        {idx[n]: p for n, p in raw["planes"].items() if n not in raw["outputs"]},
    )
    f = {idx[u]: frozenset(idx[v] for v in k) for u, k in raw["correction_sets"].items()}
    layers = tuple(frozenset(idx[n] for n in step) for step in raw["steps"])
    odd = {idx[u]: frozenset(idx[v] for v in o) for u, o in raw["printed_odd"].items()}
    return Fixture(names, g, PauliFlowData(f, layers), odd)


def fixture_diagram(fx: Fixture) -> ZXDiagram:
    """Graph-like diagram whose open graph is the fixture's."""
    d = ZXDiagram([], [])
    quarter = Phase(1, 2)
    for v in range(len(fx.names)):
        plane = fx.graph.planes.get(v, "XY")
        d.add_spider("Z", quarter if plane == "XY" else Phase(), sid=v)
    for e in sorted(tuple(sorted(e)) for e in fx.graph.edges):
        d.add_wire(e[0], e[1], HADAMARD)
    nxt = len(fx.names)
    for role, group in (("in", fx.graph.inputs), ("out", fx.graph.outputs)):
        for rank, v in enumerate(sorted(group)):
            b = d.add_spider("Z", Phase(), io=IO(role, rank), sid=nxt)
            d.add_wire(b, v, REGULAR)
            nxt += 1
    return d


def fixture_discrepancies(fx: Fixture | None = None) -> list[str]:
    """Every place the transcribed table disagrees with the (inferred) graph.

    Covers the printed odd-neighbourhood column and each Pauli-flow
    condition that the printed correction sets violate.
    """
    fx = fx or swap_test_fixture()
    lines = []
    for u in sorted(fx.printed_odd):
        actual = odd_neighborhood(fx.graph, fx.flow.f[u])
        printed = fx.printed_odd[u]
        if actual != printed:
            extra = ", ".join(fx.name(v) for v in sorted(actual - printed)) or "none"
            missing = ", ".join(fx.name(v) for v in sorted(printed - actual)) or "none"
            lines.append(f"odd column, {fx.name(u)}: computed has extra [{extra}], missing [{missing}]")
    for v in verify_pauli_flow(fx.graph, fx.flow):
        other = f" against {fx.name(v.v)}" if v.v is not None else ""
        lines.append(f"condition {v.condition}, {fx.name(v.u)}{other}: {v.detail}")
    if find_flow(fx.graph) is None:
        lines.append("search: no Pauli flow exists for this graph with these planes")
    return lines


def discrepancy_report() -> str:
    fx = swap_test_fixture()
    body = fixture_discrepancies(fx)
    head = [
        "# Swap-test flow table: machine-checked discrepancies",
        "",
        "Generated by `python3 scripts/gen_discrepancies.py`; the test suite checks this file is current.",
        "The edge list is inferred from the table, so some entries may reflect the inference.",
        "",
        f"Vertices: {len(fx.names)}. Measurement steps: {len(fx.flow.layers)}. Findings: {len(body)}.",
        "",
    ]
    return "\n".join(head + [f"- {line}" for line in body]) + "\n"
