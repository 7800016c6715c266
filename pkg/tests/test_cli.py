import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from zxbqc.cli import main
from zxbqc.fixtures import fixture_diagram, swap_test_fixture
from zxbqc.zx.circuit import output_distribution, parse_circuit

GOLDEN = Path(__file__).parent / "golden"
ORTHO = "qubits 2\nH 0\nT 0\nH 1\nT 1\nX 1\nCX 0 1\nH 0\n"


def run(*argv):
    return main([str(a) for a in argv])


def test_convert_matches_golden_file(tmp_path, capsys):
    out = tmp_path / "sw.zx"
    assert run("convert", GOLDEN / "swap_test.qc", "--out", out) == 0
    assert "graph-like: yes" in capsys.readouterr().out
    assert out.read_bytes() == (GOLDEN / "swap_test.zx").read_bytes()


def test_convert_reports_bad_line(tmp_path, capsys):
    bad = tmp_path / "bad.qc"
    bad.write_text("qubits 1\nH 0\nROT 0\n")
    assert run("convert", bad, "--out", tmp_path / "x.zx") == 1
    assert "line 3" in capsys.readouterr().err


def test_empty_circuit_converts(tmp_path):
    src = tmp_path / "e.qc"
    src.write_text("qubits 1\n")
    assert run("convert", src, "--out", tmp_path / "e.zx") == 0


def test_full_pipeline_is_deterministic_and_correct(tmp_path):
    src = tmp_path / "o.qc"
    src.write_text(ORTHO)
    files = {}
    for rep in range(2):
        d = tmp_path / f"r{rep}"
        d.mkdir()
        assert run("convert", src, "--out", d / "c.zx") == 0
        assert run("prepare", "--diagram", d / "c.zx", "--agents", 2, "--seed", 11,
                   "--out", d / "p.zxp", "--secrets", d / "s.zxs") == 0
        assert run("run", "--program", d / "p.zxp", "--secrets", d / "s.zxs", "--agents", 2,
                   "--samples", 5000, "--seed", 3, "--out", d / "h.json") == 0
        assert run("run", "--program", d / "p.zxp", "--secrets", d / "s.zxs", "--agents", 2,
                   "--seed", 3, "--out", d / "e.json", "--exact") == 0
        files[rep] = {f: (d / f).read_bytes() for f in ("c.zx", "p.zxp", "s.zxs", "h.json", "e.json")}
    assert files[0] == files[1]
    hist = json.loads(files[0]["h.json"])
    oracle = output_distribution(parse_circuit(ORTHO))
    freq = np.array([hist.get(format(i, "02b"), 0) for i in range(4)]) / 5000
    assert 0.5 * np.abs(freq - oracle).sum() <= 0.05
    exact = json.loads(files[0]["e.json"])
    assert abs(exact["11"] - oracle[3]) < 1e-9


def test_flow_find_and_verify(tmp_path):
    dpath = tmp_path / "fx.zx"
    assert run("flow", "--diagram", GOLDEN / "swap_test.zx", "--out", tmp_path / "f.json") == 0
    assert run("flow", "--diagram", GOLDEN / "swap_test.zx", "--verify", tmp_path / "f.json",
               "--out", tmp_path / "v1.txt") == 0
    assert (tmp_path / "v1.txt").read_text().startswith("verdict: pass")
    fx = swap_test_fixture()
    dpath.write_text(fixture_diagram(fx).to_json())
    assert run("flow", "--diagram", dpath) == 2
    table = tmp_path / "table.json"
    table.write_text(fx.flow.to_json())
    assert run("flow", "--diagram", dpath, "--verify", table, "--out", tmp_path / "v2.txt") == 2
    assert "condition 7" in (tmp_path / "v2.txt").read_text()


def test_prepare_rejects_single_agent(tmp_path):
    src = tmp_path / "c.qc"
    src.write_text("qubits 1\nH 0\n")
    run("convert", src, "--out", tmp_path / "c.zx")
    assert run("prepare", "--diagram", tmp_path / "c.zx", "--agents", 1, "--seed", 0,
               "--out", tmp_path / "p", "--secrets", tmp_path / "s") == 1


def test_audit_subcommands(tmp_path):
    src = tmp_path / "c.qc"
    src.write_text("qubits 2\nH 0\nT 0\nH 0\nCX 0 1\n")
    run("convert", src, "--out", tmp_path / "c.zx")
    run("prepare", "--diagram", tmp_path / "c.zx", "--agents", 2, "--seed", 1,
        "--out", tmp_path / "p.zxp", "--secrets", tmp_path / "s.zxs")
    assert run("run", "--program", tmp_path / "p.zxp", "--secrets", tmp_path / "s.zxs", "--agents", 2,
               "--samples", 1200, "--seed", 1, "--out", tmp_path / "h.json",
               "--transcripts", tmp_path / "tr") == 0
    assert run("audit", "uniformity", "--transcripts", tmp_path / "tr", "--out", tmp_path / "u.txt") == 0
    assert "verdict: pass" in (tmp_path / "u.txt").read_text()
    assert run("audit", "leakage-demo", "--circuit", src, "--samples", 3000,
               "--out", tmp_path / "l.txt") == 0
    assert run("audit", "distinguish", "--program-a", tmp_path / "p.zxp", "--secrets-a", tmp_path / "s.zxs",
               "--program-b", tmp_path / "p.zxp", "--secrets-b", tmp_path / "s.zxs",
               "--trials", 2000, "--seed", 0, "--out", tmp_path / "d.txt") == 0
    assert run("audit", "collude", "--program", tmp_path / "p.zxp", "--secrets", tmp_path / "s.zxs",
               "--blocks", 0, 2, "--out", tmp_path / "c.txt") == 0
    assert "recovered: 0" in (tmp_path / "c.txt").read_text()


def test_audit_uniformity_missing_directory(tmp_path):
    assert run("audit", "uniformity", "--transcripts", tmp_path / "nothing") == 1


def test_resources_command(capsys):
    assert run("resources", "--depth", 5, "--width", 2, "--twoqubit", 3, "--format", "csv") == 0
    assert "protocol,many,24,11,18,False" in capsys.readouterr().out
    assert run("resources", "--depth", 5, "--width", 2, "--twoqubit", 6) == 1


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "zxbqc.cli", "resources", "--depth", "3", "--width", "1",
                          "--twoqubit", "0"], capture_output=True, text=True)
    assert out.returncode == 0 and "ubqc-single" in out.stdout


@pytest.mark.parametrize("argv", [[], ["bogus"]])
def test_usage_errors_exit_nonzero(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
