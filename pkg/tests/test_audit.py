import numpy as np
import pytest

from zxbqc.audit import (AuditError, AuditReport, collusion_recover, correction_leakage_demo,
                         edge_id_independence, indistinguishability, leakage_profile,
                         masked_angle_uniformity, outcome_uniformity)
from zxbqc.fixtures import swap_test_circuit_text
from zxbqc.obfuscate import prepare
from zxbqc.runtime import ScheduleBuilder, run_program
from zxbqc.zx.circuit import from_circuit, parse_circuit

LEAKY = "qubits 2\nH 0\nT 0\nH 0\nCX 0 1\n"


def prog_of(text, seed=0, **kw):
    return prepare(from_circuit(parse_circuit(text)), rng=seed, **kw)


def test_leakage_profile_from_public_views():
    ident = leakage_profile(prog_of("qubits 1\n"), 2)
    assert ident.block_count == 2 and ident.max_degree == 1
    assert leakage_profile(prog_of(swap_test_circuit_text()), 2).block_count == 4
    prog = prog_of("qubits 2\nH 0\nT 0\nCX 0 1\nH 1\n", pad="max")
    assert leakage_profile(prog, 2).max_degree == prog.profile()["max_degree"]


def test_report_verdict_text():
    r = AuditReport("x", 0.5, 1.0, True, 10)
    assert "verdict: pass" in r.to_text()


def test_outcome_uniformity_on_honest_run_and_from_transcripts():
    prog = prog_of("qubits 2\nH 0\nT 0\nCX 0 1\n")
    res = run_program(prog, 2, 2000, seed=4)
    assert outcome_uniformity(res, prog).passed
    b = ScheduleBuilder(prog, res.compiled, 2)
    rng = np.random.default_rng(0)
    trs = [t for i in range(1000) for t in b.transcripts(res.shots, i, b.draw_perms(rng))]
    assert outcome_uniformity(trs).passed


def test_outcome_uniformity_errors():
    with pytest.raises(AuditError):
        outcome_uniformity([])
    prog = prog_of("qubits 1\nH 0\n")
    with pytest.raises(AuditError):
        outcome_uniformity(run_program(prog, 2, 100, seed=0), prog)
    with pytest.raises(AuditError):
        outcome_uniformity(run_program(prog, 2, 100, seed=0))


def test_masked_angles_uniform():
    prog = prog_of("qubits 2\nH 0\nT 0\nCX 0 1\nH 1\nT 1\n")
    assert masked_angle_uniformity(run_program(prog, 2, 4000, seed=1), prog).passed


def test_unmasked_bare_run_fails_outcome_uniformity():
    prog = prog_of(LEAKY, split=False)
    assert not outcome_uniformity(run_program(prog, 2, 4000, seed=0, masks=False), prog).passed


def test_indistinguishability_self_and_profile_mismatch():
    a = prog_of("qubits 2\nH 0\nT 0\nCX 0 1\n", seed=3)
    assert indistinguishability(a, a, 2, trials=3000, seed=0).passed
    with pytest.raises(AuditError):
        indistinguishability(a, prog_of("qubits 1\nH 0\n"), 2, trials=100)


def test_leakage_demo_pairs():
    masked, unmasked = correction_leakage_demo(parse_circuit(LEAKY), samples=4000)
    assert unmasked.passed and unmasked.statistic > 0.1
    assert masked.passed
    m2, u2 = correction_leakage_demo(parse_circuit("qubits 1\nH 0\n"), samples=4000)
    assert m2.passed and not u2.passed


def test_collusion_adjacent_versus_distant():
    prog = prog_of("qubits 2\nH 0\nT 0\nCX 0 1\nH 1\nRZ 1 3/4\n", seed=2)
    res = run_program(prog, 2, 20, seed=5)
    got = {}
    for j in range(prog.block_count - 1):
        for shot in range(20):
            rec = collusion_recover(prog, res, (j, j + 1), shot=shot)
            for p, ph in rec.items():
                assert ph == prog.alpha_of(p)
            got.update(rec)
    assert len(got) == len(prog.split.parent)
    assert collusion_recover(prog, res, (0, 2)) == {}


def test_edge_ids_carry_no_degree_information():
    prog = prog_of("qubits 3\nH 0\nCX 0 1\nT 1\nCX 1 2\nH 2\nT 0\n", seed=1)
    assert edge_id_independence(prog, resamples=999).passed
