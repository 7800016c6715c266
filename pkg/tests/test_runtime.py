import dataclasses
import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import seeded_circuits
from zxbqc.obfuscate import prepare
from zxbqc.runtime import (KERNELS, RuntimeFailure, ScheduleBuilder, check_locality, compile_program,
                           draw_secrets, exact_distribution, read_transcripts, run_compiled,
                           run_program, write_transcripts)
from zxbqc.runtime.schedule import AgentSchedule, ScheduleOp
from zxbqc.zx.circuit import from_circuit, output_distribution, parse_circuit

CIRCS = seeded_circuits(6, seed=31)
PROGS = [prepare(from_circuit(c), rng=i) for i, c in enumerate(CIRCS)]


@pytest.mark.parametrize("idx", range(3))
def test_exact_mode_matches_oracle(idx, backend):
    res = exact_distribution(PROGS[idx], 2, seed=idx, backend=backend)
    assert np.abs(res.exact_distribution - output_distribution(CIRCS[idx])).max() < 1e-9


def test_kernels_agree_shot_by_shot():
    if "cython" not in KERNELS:
        pytest.skip("compiled kernel not built")
    c = compile_program(PROGS[1])
    secrets = draw_secrets(c, 64, np.random.default_rng(0))
    a = run_compiled(c, *secrets, backend="python")
    b = run_compiled(c, *secrets, backend="cython")
    for f in ("angles", "outcomes", "xz", "out_bits"):
        assert np.array_equal(getattr(a, f), getattr(b, f)), f
    assert np.allclose(a.weight, b.weight)


def test_sampled_mode_is_close_to_oracle():
    res = run_program(PROGS[0], 3, 4000, seed=2)
    tv = 0.5 * np.abs(res.frequencies() - output_distribution(CIRCS[0])).sum()
    assert tv < 0.05


def test_sampling_is_seed_deterministic_and_job_independent():
    a = run_program(PROGS[2], 2, 2500, seed=9)
    b = run_program(PROGS[2], 2, 2500, seed=9, jobs=2)
    assert a.histogram() == b.histogram()
    assert a.histogram() != run_program(PROGS[2], 2, 2500, seed=10).histogram()


def test_enumerated_branches_are_a_probability_distribution():
    prog = prepare(from_circuit(parse_circuit("qubits 1\nH 0\nT 0\n")), rng=0)
    res = exact_distribution(prog, 2)
    n_meas = res.compiled.n_slots - len(res.compiled.final_slots)
    assert n_meas <= 12 and res.branches == 2**n_meas
    assert abs(res.shots.weight.sum() - 1) < 1e-9


def test_sampled_branches_agree_with_each_other():
    res = exact_distribution(PROGS[3], 2, branches=6)
    assert res.branches == 6
    assert res.branch_spread < 1e-9


def test_bad_arguments():
    with pytest.raises(RuntimeFailure):
        run_program(PROGS[0], 0, 10)
    with pytest.raises(RuntimeFailure):
        run_program(PROGS[0], 2, 0)


def test_masks_off_leave_angles_unshifted():
    c = compile_program(PROGS[0])
    beta, bmask, coins, urand = draw_secrets(c, 8, np.random.default_rng(1), masks=False)
    assert not bmask.any()
    assert (beta[:, c.split_parent == 0] == 0).all()


def test_schedules_and_transcripts_are_local(tmp_path):
    prog = PROGS[4]
    res = run_program(prog, 3, 1000, seed=1)
    builder = ScheduleBuilder(prog, res.compiled, 3)
    rng = np.random.default_rng(0)
    scheds = builder.schedules(res.shots.coins[0], builder.draw_perms(rng))
    trs = builder.transcripts(res.shots, 0, builder.draw_perms(rng))
    assert check_locality(scheds, trs) == []
    n_pairs = len(res.compiled.pairs)
    assert sum(op.op == "bell" for s in scheds for op in s.setup) == 2 * n_pairs
    write_transcripts(tmp_path, builder, res.shots, rng)
    back = read_transcripts(tmp_path)
    assert len(back) == 3 * 1000
    assert all(r.angle is None or "/2^" in r.angle for t in back[:10] for r in t.records)


def test_locality_checker_flags_remote_access():
    bad = [AgentSchedule(0, [0], [ScheduleOp("cz", "0:0", "1:0")], [ScheduleOp("bell", "0:1")])]
    problems = check_locality(bad, agents=2)
    assert any("remote" in p for p in problems)
    assert any("during execution" in p for p in problems)


def test_lazy_allocation_bounds_live_qubits():
    for prog in PROGS:
        c = compile_program(prog)
        assert c.max_live <= 20
        assert c.max_live < len(prog.qubits()) or len(prog.qubits()) <= 20


def test_backend_selection_from_environment():
    code = "from zxbqc.runtime import DEFAULT_BACKEND; print(DEFAULT_BACKEND)"
    env = dict(os.environ, ZXBQC_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_swap_test_identical_inputs_never_both_one():
    circ = parse_circuit("qubits 2\nH 0\nT 0\nH 1\nT 1\nCX 0 1\nH 0\n")
    res = exact_distribution(prepare(from_circuit(circ), rng=0), 2)
    assert res.exact_distribution[3] < 1e-12
