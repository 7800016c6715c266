import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import seeded_circuits
from zxbqc.flow import (FlowError, OpenGraph, PauliFlowData, find_flow, odd_neighborhood,
                        open_graph_of, reduced_flow, verify_pauli_flow)
from zxbqc.zx.circuit import from_circuit
from zxbqc.zx.graphlike import to_graph_like


def line(n):
    return OpenGraph.build(range(n), [(i, i + 1) for i in range(n - 1)], [0], [n - 1])


def random_open_graph(seed, n):
    rng = np.random.default_rng(seed)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.35]
    k = int(rng.integers(1, max(2, n // 2)))
    order = rng.permutation(n)
    ins, outs = order[:k], order[-k:]
    planes = {v: ("X" if rng.random() < 0.3 else "XY") for v in range(n) if v not in outs}
    return OpenGraph.build(range(n), edges, ins.tolist(), outs.tolist(), planes)


def test_odd_neighbourhood_is_symmetric_difference():
    g = line(4)
    assert odd_neighborhood(g, {1}) == {0, 2}
    assert odd_neighborhood(g, {1, 3}) == {0}


def test_causal_flow_on_a_line():
    g = line(5)
    flow = find_flow(g, method="causal")
    assert flow is not None and verify_pauli_flow(g, flow) == []
    assert flow.f[0] == frozenset({1})


def test_no_flow_when_inputs_outnumber_outputs():
    g = OpenGraph.build(range(3), [(0, 2), (1, 2)], [0, 1], [2])
    for method in ("auto", "gf2", "exhaustive"):
        assert find_flow(g, method=method) is None


def test_size_limit_is_enforced():
    with pytest.raises(FlowError):
        find_flow(line(10), limit=5)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 8))
def test_gf2_search_agrees_with_exhaustive_oracle(seed, n):
    g = random_open_graph(seed, n)
    fast, slow = find_flow(g, method="gf2"), find_flow(g, method="exhaustive")
    assert (fast is None) == (slow is None)
    for flow in (fast, slow):
        if flow is not None:
            assert verify_pauli_flow(g, flow) == []


def test_graph_like_circuits_always_have_flow():
    for c in seeded_circuits(25, seed=3):
        g = open_graph_of(to_graph_like(from_circuit(c)))
        flow = find_flow(g, limit=1000)
        assert flow is not None and verify_pauli_flow(g, flow) == []


@pytest.fixture
def good():
    g = line(4)
    return g, find_flow(g)


def test_tampered_layers_are_caught(good):
    g, flow = good
    missing = PauliFlowData(flow.f, flow.layers[1:])
    assert {v.condition for v in verify_pauli_flow(g, missing)} >= {0}
    flipped = PauliFlowData(flow.f, tuple(reversed(flow.layers)))
    assert any(v.condition in (1, 2) for v in verify_pauli_flow(g, flipped))


def test_tampered_correction_set_is_caught(good):
    g, flow = good
    f = dict(flow.f)
    f[0] = frozenset({2})
    assert any(v.condition == 4 or v.condition == 2 for v in verify_pauli_flow(g, PauliFlowData(f, flow.layers)))


def test_x_plane_condition(good):
    g = OpenGraph.build(range(3), [(0, 1), (1, 2)], [0], [2], {0: "XY", 1: "X"})
    bad = PauliFlowData({0: frozenset({1}), 1: frozenset({0, 2})},
                        (frozenset({0}), frozenset({1}), frozenset({2})))
    assert any(v.condition == 7 for v in verify_pauli_flow(g, bad))


def test_json_round_trip(good):
    g, flow = good
    back, planes = PauliFlowData.from_dict(json.loads(flow.to_json(dict(g.planes))))
    assert back == flow and planes == dict(g.planes)
    with pytest.raises(FlowError):
        PauliFlowData.from_dict({"layers": [["a"]], "f": {}})


def test_reduced_flow_lifts_to_split_children():
    from zxbqc.obfuscate import prepare
    prog = prepare(from_circuit(seeded_circuits(1, seed=9)[0]), rng=0)
    rf = reduced_flow(prog.diagram, limit=100_000)
    assert rf is not None and verify_pauli_flow(rf.graph, rf.flow) == []
    lifted = rf.lifted()
    layer = lifted.layer_of()
    for child, parent in rf.parent_of.items():
        assert layer[child] == rf.flow.layer_of()[parent]
