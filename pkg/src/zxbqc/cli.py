"""Command-line entry point.

Exit codes: 0 success, 1 domain error (bad input, impossible request),
2 verification failure (a flow or audit check came back negative).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import audit, resources
from .flow import PauliFlowData, find_flow, open_graph_of, verify_pauli_flow
from .obfuscate import prepare, program_from_json, program_to_public_json, program_to_secrets_json
from .runtime import (RuntimeFailure, ScheduleBuilder, exact_distribution, read_transcripts, run_program,
                      write_transcripts)
from .zx.circuit import from_circuit, parse_circuit
from .zx.diagram import ZXDiagram
from .zx.graphlike import is_graph_like, reduce_semi_graph_like, to_graph_like

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2


class VerificationFailure(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_program(program: str, secrets: str):
    return program_from_json(_read(program), _read(secrets))


def _agents(n: int) -> int:
    if n < 2:
        raise ValueError("the protocol needs at least two agents")
    return n


def cmd_convert(a) -> int:
    d = to_graph_like(from_circuit(parse_circuit(_read(a.circuit))))
    Path(a.out).write_text(d.to_json())
    print(f"graph-like: {'yes' if is_graph_like(d) else 'no'}")
    return EXIT_OK


def cmd_flow(a) -> int:
    d = ZXDiagram.from_json(_read(a.diagram))
    reduced, _ = reduce_semi_graph_like(d) if not is_graph_like(d) else (d, None)
    g = open_graph_of(reduced)
    if a.verify:
        flow, planes = PauliFlowData.from_dict(json.loads(_read(a.verify)))
        problems = verify_pauli_flow(g, flow, planes or None)
        lines = ["verdict: pass" if not problems else f"verdict: fail ({len(problems)} violations)"]
        lines += [str(v) for v in problems]
        _emit("\n".join(lines) + "\n", a.out)
        return EXIT_VERIFY if problems else EXIT_OK
    flow = find_flow(g, limit=a.limit)
    if flow is None:
        raise VerificationFailure("no Pauli flow exists for this diagram")
    _emit(flow.to_json(dict(g.planes)), a.out)
    return EXIT_OK


def cmd_prepare(a) -> int:
    d = ZXDiagram.from_json(_read(a.diagram))
    prog = prepare(d, rng=a.seed, pad=a.pad)
    Path(a.out).write_text(program_to_public_json(prog, _agents(a.agents)))
    Path(a.secrets).write_text(program_to_secrets_json(prog))
    prof = prog.profile()
    print(f"blocks: {prof['block_count']} qubits: {len(prog.qubits())} max degree: {prof['max_degree']}")
    return EXIT_OK


def cmd_run(a) -> int:
    prog = _load_program(a.program, a.secrets)
    agents = _agents(a.agents)
    if a.exact:
        res = exact_distribution(prog, agents, seed=a.seed)
        n = res.compiled.n_outputs
        hist = {format(i, f"0{n}b") if n else "": round(float(p), 12)
                for i, p in enumerate(res.exact_distribution) if p > 1e-15}
    else:
        res = run_program(prog, agents, a.samples, seed=a.seed, jobs=a.jobs)
        hist = res.histogram()
        if a.transcripts:
            builder = ScheduleBuilder(prog, res.compiled, agents)
            write_transcripts(Path(a.transcripts), builder, res.shots,
                              np.random.default_rng([a.seed, 1]))
    Path(a.out).write_text(json.dumps(hist, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


def _report(reports, out: str | None) -> int:
    _emit("\n".join(r.to_text() for r in reports), out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def cmd_audit(a) -> int:
    if a.audit_cmd == "uniformity":
        return _report([audit.outcome_uniformity(read_transcripts(Path(a.transcripts)))], a.out)
    if a.audit_cmd == "distinguish":
        pa = _load_program(a.program_a, a.secrets_a)
        pb = _load_program(a.program_b, a.secrets_b)
        return _report([audit.indistinguishability(pa, pb, _agents(a.agents), a.trials, a.seed)], a.out)
    if a.audit_cmd == "leakage-demo":
        masked, unmasked = audit.correction_leakage_demo(parse_circuit(_read(a.circuit)),
                                                         samples=a.samples, seed=a.seed)
        return _report([unmasked, masked], a.out)
    prog = _load_program(a.program, a.secrets)
    res = run_program(prog, _agents(a.agents), a.shot + 1, seed=a.seed)
    rec = audit.collusion_recover(prog, res, tuple(a.blocks), shot=a.shot)
    lines = [f"blocks: {a.blocks[0]} {a.blocks[1]}", f"recovered: {len(rec)}"]
    lines += [f"parent {p}: {ph}" for p, ph in sorted(rec.items())]
    _emit("\n".join(lines) + "\n", a.out)
    return EXIT_OK


def cmd_resources(a) -> int:
    rows = resources.comparison_table(a.depth, a.width, a.twoqubit)
    sys.stdout.write(resources.format_table(rows, a.format))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zxbqc", description="Blind multi-agent quantum computation toolkit.")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("convert", help="circuit file to graph-like diagram")
    c.add_argument("circuit")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_convert)

    f = sub.add_parser("flow", help="find or verify a Pauli flow")
    f.add_argument("--diagram", required=True)
    f.add_argument("--verify", metavar="FLOW_JSON")
    f.add_argument("--out")
    f.add_argument("--limit", type=int, default=100_000)
    f.set_defaults(func=cmd_flow)

    r = sub.add_parser("prepare", help="obfuscate a diagram into a multi-block program")
    r.add_argument("--diagram", required=True)
    r.add_argument("--agents", type=int, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--secrets", required=True)
    r.add_argument("--pad", choices=["max", "none"], default="max")
    r.set_defaults(func=cmd_prepare)

    x = sub.add_parser("run", help="execute a prepared program")
    x.add_argument("--program", required=True)
    x.add_argument("--secrets", required=True)
    x.add_argument("--agents", type=int, required=True)
    x.add_argument("--samples", type=int, default=10_000)
    x.add_argument("--seed", type=int, required=True)
    x.add_argument("--out", required=True)
    x.add_argument("--exact", action="store_true")
    x.add_argument("--transcripts", metavar="DIR")
    x.add_argument("--jobs", type=int, default=1)
    x.set_defaults(func=cmd_run)

    au = sub.add_parser("audit", help="blindness checks")
    asub = au.add_subparsers(dest="audit_cmd", required=True)
    u = asub.add_parser("uniformity")
    u.add_argument("--transcripts", required=True)
    d = asub.add_parser("distinguish")
    for side in ("a", "b"):
        d.add_argument(f"--program-{side}", required=True)
        d.add_argument(f"--secrets-{side}", required=True)
    d.add_argument("--agents", type=int, default=2)
    d.add_argument("--trials", type=int, default=10_000)
    d.add_argument("--seed", type=int, required=True)
    lk = asub.add_parser("leakage-demo")
    lk.add_argument("--circuit", required=True)
    lk.add_argument("--samples", type=int, default=10_000)
    lk.add_argument("--seed", type=int, default=0)
    co = asub.add_parser("collude")
    co.add_argument("--program", required=True)
    co.add_argument("--secrets", required=True)
    co.add_argument("--blocks", type=int, nargs=2, required=True, metavar=("J", "K"))
    co.add_argument("--agents", type=int, default=2)
    co.add_argument("--seed", type=int, default=0)
    co.add_argument("--shot", type=int, default=0)
    for s in (u, d, lk, co):
        s.add_argument("--out")
    au.set_defaults(func=cmd_audit)

    rs = sub.add_parser("resources", help="resource comparison table")
    rs.add_argument("--depth", type=int, required=True)
    rs.add_argument("--width", type=int, required=True)
    rs.add_argument("--twoqubit", type=int, required=True)
    rs.add_argument("--format", choices=["table", "csv"], default="table")
    rs.set_defaults(func=cmd_resources)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, RuntimeFailure, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
