from pathlib import Path

from zxbqc.flow import open_graph_of, verify_pauli_flow
from zxbqc.fixtures import (discrepancy_report, fixture_diagram, fixture_discrepancies,
                            swap_test_circuit_text, swap_test_fixture)
from zxbqc.obfuscate import prepare
from zxbqc.zx.circuit import from_circuit, parse_circuit
from zxbqc.zx.graphlike import is_graph_like

ROOT = Path(__file__).resolve().parent.parent


def test_fixture_shape():
    fx = swap_test_fixture()
    assert len(fx.names) == 13
    assert fx.graph.inputs == fx.ids(["Q1", "Q2"])
    assert fx.graph.outputs == fx.ids(["v5", "v11"])
    assert [len(l) for l in fx.flow.layers] == [7, 2, 2, 2]


def test_fixture_diagram_reproduces_the_open_graph():
    fx = swap_test_fixture()
    d = fixture_diagram(fx)
    assert is_graph_like(d)
    g = open_graph_of(d)
    assert g.edges == fx.graph.edges
    assert g.inputs == fx.graph.inputs and g.outputs == fx.graph.outputs
    assert verify_pauli_flow(g, fx.flow) == verify_pauli_flow(fx.graph, fx.flow)


def test_table_rows_that_hold():
    fx = swap_test_fixture()
    from zxbqc.flow import odd_neighborhood
    for u in fx.ids(["Q2", "v1", "v2", "v3", "v4", "v6", "v7", "v9", "v10"]):
        assert odd_neighborhood(fx.graph, fx.flow.f[u]) == fx.printed_odd[u]


def test_discrepancy_list_is_stable():
    lines = fixture_discrepancies()
    assert "odd column, Q1: computed has extra [v2], missing [none]" in lines
    assert "odd column, v8: computed has extra [v7], missing [none]" in lines
    assert any(l.startswith("condition 7, v1") for l in lines)


def test_committed_discrepancy_document_is_current():
    assert (ROOT / "docs" / "swap_test_discrepancies.md").read_text() == discrepancy_report()


def test_swap_test_core_gives_four_blocks():
    prog = prepare(from_circuit(parse_circuit(swap_test_circuit_text())), rng=0)
    assert prog.block_count == 4
