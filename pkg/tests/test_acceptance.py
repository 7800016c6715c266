"""Acceptance criteria 1-8, each recorded as one PASS/FAIL line in the terminal summary."""
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import record, seeded_circuits
from zxbqc.audit import (collusion_recover, correction_leakage_demo, indistinguishability,
                         leakage_profile, masked_angle_uniformity, outcome_uniformity)
from zxbqc.fixtures import discrepancy_report, fixture_discrepancies, swap_test_circuit_text
from zxbqc.flow import verify_pauli_flow
from zxbqc.flow.semi import reduced_flow
from zxbqc.obfuscate import prepare
from zxbqc.resources import protocol_cost, ubqc_cost
from zxbqc.runtime import exact_distribution, run_program
from zxbqc.zx.circuit import from_circuit, output_distribution, parse_circuit
from zxbqc.zx.tensor import equal_up_to_scalar

CIRCUITS = seeded_circuits(50, qubits=(2, 4), depth=(1, 6), seed=2024)
THREE_SIGMA_FAMILY = 0.0027


@pytest.fixture(scope="module")
def programs():
    return [prepare(from_circuit(c), rng=i, keep_stages=True) for i, c in enumerate(CIRCUITS)]


def test_criterion_1_exact_correctness(programs):
    start = time.perf_counter()
    worst = 0.0
    for i, (c, prog) in enumerate(zip(CIRCUITS, programs)):
        oracle = output_distribution(c)
        for m in (2, 3):
            res = exact_distribution(prog, m, seed=1000 * m + i)
            worst = max(worst, float(np.abs(res.exact_distribution - oracle).max()))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 600
    record("criterion 1", ok, f"max error {worst:.2e}, {elapsed:.1f}s")
    assert ok


@pytest.mark.slow
def test_criterion_2_sampled_correctness(programs):
    worst = 0.0
    for i, (c, prog) in enumerate(zip(CIRCUITS, programs)):
        oracle = output_distribution(c)
        for m in (2, 3):
            res = run_program(prog, m, 10_000, seed=1000 * m + i)
            worst = max(worst, 0.5 * float(np.abs(res.frequencies() - oracle).sum()))
    record("criterion 2", worst <= 0.05, f"max TV {worst:.4f}")
    assert worst <= 0.05


def test_criterion_3_stage_equivalence_and_flow(programs):
    bad = []
    for i, prog in enumerate(programs):
        nf = prog.stages["normal_form"]
        for name in ("split", "externalize", "subdivide", "pad"):
            stage = prog.stages[name]
            if not equal_up_to_scalar(nf, stage):
                bad.append(f"{i}:{name}:tensor")
            rf = reduced_flow(stage, limit=100_000)
            if rf is None or verify_pauli_flow(rf.graph, rf.flow):
                bad.append(f"{i}:{name}:flow")
    record("criterion 3", not bad, f"{len(programs)} circuits x 4 stages" + (f", failures {bad[:3]}" if bad else ""))
    assert not bad


def _three_sigma(freq, p, n):
    return abs(freq - p) <= 3 * np.sqrt(max(p * (1 - p), 0.0) / n)


def test_criterion_4a_fixture_blocks_and_table():
    prog = prepare(from_circuit(parse_circuit(swap_test_circuit_text())), rng=0)
    doc = Path(__file__).resolve().parent.parent / "docs" / "swap_test_discrepancies.md"
    documented = doc.read_text() == discrepancy_report() and len(fixture_discrepancies()) > 0
    ok = prog.block_count == 4 and documented
    record("criterion 4a", ok, f"{prog.block_count} blocks, table discrepancies documented: {documented}")
    assert ok


@pytest.mark.xfail(strict=True, reason="swap test with classical inputs measures 12 qubits after padding, not 13")
def test_criterion_4b_fixture_vertex_count():
    prog = prepare(from_circuit(parse_circuit(swap_test_circuit_text())), rng=0)
    n = len(prog.qubits())
    record("criterion 4b", n == 13, f"{n} measured qubits vs 13 in the fixture")
    assert n == 13


def test_criterion_4c_swap_test_physics():
    n = 10_000
    same = parse_circuit("qubits 2\nH 0\nT 0\nH 1\nT 1\nCX 0 1\nH 0\n")
    ortho = parse_circuit("qubits 2\nH 0\nT 0\nH 1\nT 1\nX 1\nCX 0 1\nH 0\n")
    f_same = run_program(prepare(from_circuit(same), rng=1), 2, n, seed=1).frequencies()[3]
    p_orth = output_distribution(ortho)[3]
    f_orth = run_program(prepare(from_circuit(ortho), rng=2), 2, n, seed=2).frequencies()[3]
    ok = f_same == 0.0 and _three_sigma(f_orth, p_orth, n)
    record("criterion 4c", ok, f"identical P(11)={f_same:.4f}, orthogonal {f_orth:.4f} vs {p_orth:.4f}")
    assert ok


def test_criterion_5_blindness():
    sample = [CIRCUITS[i] for i in range(0, 50, 10)] + [parse_circuit(swap_test_circuit_text())]
    level = 1 - (1 - THREE_SIGMA_FAMILY) ** (1 / len(sample))
    worst_a, worst_c = [], []
    for i, c in enumerate(sample):
        prog = prepare(from_circuit(c), rng=i)
        res = run_program(prog, 2, 10_000, seed=50 + i)
        ra = outcome_uniformity(res, prog, level=level)
        rc = masked_angle_uniformity(res, prog, level=0.01 / len(sample))
        worst_a.append(ra.passed)
        worst_c.append(rc.passed)
    a = prepare(from_circuit(parse_circuit("qubits 2\nH 0\nT 0\nCX 0 1\nH 1\nT 1\n")), rng=5)
    b = prepare(from_circuit(parse_circuit("qubits 2\nH 0\nRZ 0 7/4\nCX 0 1\nH 1\nRZ 1 3/4\n")), rng=5)
    assert leakage_profile(a, 2) == leakage_profile(b, 2)
    rb = indistinguishability(a, b, 2, trials=10_000, seed=7)
    ok = all(worst_a) and rb.passed and all(worst_c)
    record("criterion 5", ok, f"(a) {sum(worst_a)}/{len(sample)} programs uniform, "
           f"(b) TV {rb.statistic:.4f}, (c) {sum(worst_c)}/{len(sample)} programs chi2-uniform")
    assert ok


def test_criterion_6_leakage_demo():
    masked, unmasked = correction_leakage_demo(parse_circuit("qubits 2\nH 0\nT 0\nH 0\nCX 0 1\n"))
    ok = unmasked.statistic > 0.1 and masked.statistic <= 0.05
    record("criterion 6", ok, f"unmasked TV {unmasked.statistic:.3f}, masked TV {masked.statistic:.3f}")
    assert ok


def test_criterion_7_collusion(programs):
    adjacent_ok, distant_empty, recovered = True, True, 0
    for prog in programs[:10]:
        res = run_program(prog, 2, 8, seed=3)
        spanning: dict[tuple[int, int], set[int]] = {}
        for e, o in prog.split.parent.values():
            key = tuple(sorted((prog.partition.block_of[e], prog.partition.block_of[o])))
            spanning.setdefault(key, set()).add(prog.rflow.parent_of[e])
        for shot in range(8):
            for j in range(prog.block_count - 1):
                rec = collusion_recover(prog, res, (j, j + 1), shot=shot)
                adjacent_ok &= set(rec) == spanning.get((j, j + 1), set())
                adjacent_ok &= all(ph == prog.alpha_of(p) for p, ph in rec.items())
                recovered += len(rec)
            for j in range(prog.block_count - 2):
                distant_empty &= collusion_recover(prog, res, (j, j + 2), shot=shot) == {}
    ok = adjacent_ok and distant_empty and recovered > 0
    record("criterion 7", ok, f"{recovered} exact recoveries, non-adjacent empty: {distant_empty}")
    assert ok


def test_criterion_8_resource_table():
    frozen = {
        ("single", 1, 1): (3, 5, 8),
        ("multi", 5, 2): (84, 42, 80),
    }
    ok = all((r.qubits, r.external_entanglement, r.internal_entanglement) == v
             for (var, d, w), v in frozen.items() for r in [ubqc_cost(d, w, var)])
    p = protocol_cost(5, 2, 3)
    ok &= (p.qubits, p.external_entanglement, p.internal_entanglement) == (24, 11, 18)
    checked = 0
    for d in range(2, 21):
        for w in range(1, 21):
            for t in sorted({0, d * w // 4, d * w // 2}):
                single, multi, prot = ubqc_cost(d, w, "single"), ubqc_cost(d, w, "multi"), protocol_cost(d, w, t)
                ok &= (single.qubits, single.external_entanglement, single.internal_entanglement) == \
                    (2 * w + 1, 4 * d * w + w, 8 * d * w)
                ok &= multi.qubits == 8 * d * w + 2 * w
                ok &= (prot.qubits, prot.external_entanglement, prot.internal_entanglement) == \
                    (3 * d * w - 6 * w + 2 * t, d * w - w + t, 2 * d * w - 4 * w + 2 * t)
                ok &= prot.external_entanglement <= multi.external_entanglement
                checked += 1
    record("criterion 8", ok, f"{checked} grid points")
    assert ok
