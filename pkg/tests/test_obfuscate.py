import json

import numpy as np
import pytest

from conftest import seeded_circuits
from zxbqc.flow import verify_pauli_flow
from zxbqc.obfuscate import (EVEN, ODD, prepare, program_from_json, program_to_public_json,
                             program_to_secrets_json)
from zxbqc.obfuscate.stages import (PreparationError, add_dummy_resources, check_locality, hub_degree,
                                    hubs, initial_partition, protocol_normal_form, split_phases)
from zxbqc.phase import Phase
from zxbqc.zx.circuit import from_circuit, parse_circuit
from zxbqc.zx.tensor import equal_up_to_scalar

SMALL = seeded_circuits(8, qubits=(1, 3), depth=(1, 3), seed=21)


@pytest.mark.parametrize("idx", range(len(SMALL)))
def test_every_stage_preserves_the_tensor(idx):
    prog = prepare(from_circuit(SMALL[idx]), rng=idx, keep_stages=True)
    nf = prog.stages["normal_form"]
    for name in ("split", "externalize", "subdivide", "pad"):
        assert equal_up_to_scalar(nf, prog.stages[name]), name


def test_split_children_sum_to_parent_phase():
    nf = protocol_normal_form(from_circuit(parse_circuit("qubits 1\nH 0\nT 0\nH 0\n")))
    beta = {s: Phase(3, 2) for s in nf.interior_ids()}
    sd, smap = split_phases(nf, beta)
    for parent, (e, o) in smap.parent.items():
        assert sd.spider(e).phase + sd.spider(o).phase == smap.alpha[parent]
        assert sd.spider(o).phase == Phase(3, 2)


def test_pipeline_outputs_are_local_and_flowed():
    for i, c in enumerate(seeded_circuits(15, seed=4)):
        prog = prepare(from_circuit(c), rng=i)
        assert check_locality(prog.diagram, prog.partition) == []
        assert verify_pauli_flow(prog.rflow.graph, prog.rflow.flow) == []
        for a, b in prog.edge_ids:
            assert abs(prog.partition.block_of[a] - prog.partition.block_of[b]) == 1
        assert len(set(prog.edge_ids.values())) == len(prog.edge_ids)


def test_roles_cover_every_qubit():
    prog = prepare(from_circuit(SMALL[0]), rng=1)
    assert set(prog.roles) == set(prog.qubits())
    n_split = sum(1 for r in prog.roles.values() if r == EVEN)
    assert n_split == sum(1 for r in prog.roles.values() if r == ODD) == len(prog.split.parent)


def test_pad_to_max_equalises_hub_degrees_per_block():
    for i, c in enumerate(seeded_circuits(6, seed=8)):
        prog = prepare(from_circuit(c), rng=i, pad="max")
        d, part = prog.diagram, prog.partition
        per_block: dict[int, set[int]] = {}
        for h in hubs(d):
            per_block.setdefault(part.block_of[h], set()).add(hub_degree(d, h))
        assert all(len(v) == 1 for v in per_block.values())


def test_padding_policy_errors():
    sd, _ = split_phases(protocol_normal_form(from_circuit(SMALL[1])))
    part = initial_partition(sd)
    with pytest.raises(PreparationError):
        add_dummy_resources(sd, part, {10**6: 3})
    some_hub = hubs(sd)[0]
    with pytest.raises(PreparationError):
        add_dummy_resources(sd, part, {some_hub: 0})
    with pytest.raises(PreparationError):
        add_dummy_resources(sd, part, "lots")


def test_public_file_carries_no_phases():
    prog = prepare(from_circuit(parse_circuit("qubits 2\nH 0\nT 0\nCX 0 1\n")), rng=3)
    text = program_to_public_json(prog, agents=2)
    data = json.loads(text)
    assert "phase" not in text and "alpha" not in text
    assert all(set(v["planes"]) == {"XY"} for v in data["blocks"])


def test_program_round_trip_and_tamper_detection():
    prog = prepare(from_circuit(SMALL[2]), rng=5)
    pub, sec = program_to_public_json(prog), program_to_secrets_json(prog)
    back = program_from_json(pub, sec)
    assert back.public_views() == prog.public_views()
    assert program_to_secrets_json(back) == sec
    other = program_to_public_json(prepare(from_circuit(SMALL[2]), rng=6))
    with pytest.raises(PreparationError):
        program_from_json(other, sec)
    with pytest.raises(PreparationError):
        program_from_json(pub, "{}")


def test_preparation_is_deterministic_in_the_seed():
    a = program_to_secrets_json(prepare(from_circuit(SMALL[3]), rng=42))
    b = program_to_secrets_json(prepare(from_circuit(SMALL[3]), rng=42))
    c = program_to_secrets_json(prepare(from_circuit(SMALL[3]), rng=np.random.default_rng(43)))
    assert a == b != c


def test_identity_circuit_gives_two_blocks():
    prog = prepare(from_circuit(parse_circuit("qubits 1\n")), rng=0)
    assert prog.block_count == 2
    assert prog.profile()["max_degree"] == 1
