"""Agent-side views of a run: schedules, transcripts and locality checks.

An agent owns every block ``k`` with ``k % agents == agent``.  Qubits are
named ``"<block>:<label>"``; labels are permuted per sample so that the
name of a qubit carries no information across shots.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..obfuscate import ObfuscatedProgram
from .compile import OP_MEAS, PAIR_HADAMARD, Compiled
from .execute import ShotData


@dataclass(frozen=True)
class ScheduleOp:
    op: str                      # "bell" | "cz" | "measure"
    qubit: str
    other: str | None = None     # CZ partner
    edge_id: str | None = None
    hadamard: int | None = None  # Bell-pair local H decoration


@dataclass
class AgentSchedule:
    agent: int
    blocks: list[int]
    setup: list[ScheduleOp] = field(default_factory=list)
    measure: list[ScheduleOp] = field(default_factory=list)


@dataclass(frozen=True)
class TranscriptRecord:
    """What an agent sees for one operation.  There is no field for secrets."""

    op: str
    qubit: str
    other: str | None = None
    edge_id: str | None = None
    hadamard: int | None = None
    angle: str | None = None
    outcome: int | None = None


@dataclass
class AgentTranscript:
    agent: int
    sample: int
    records: list[TranscriptRecord]


def owner(block: int, agents: int) -> int:
    return block % agents


class ScheduleBuilder:
    """Precomputed static structure shared by all samples of one run."""

    def __init__(self, prog: ObfuscatedProgram, c: Compiled, agents: int):
        self.prog, self.c, self.agents = prog, c, agents
        d, part = prog.diagram, prog.partition
        self.block_of = part.block_of
        self.sizes = [len(part.members(k)) for k in range(part.block_count)]
        self.local = sorted(
            (min(w.a, w.b), max(w.a, w.b)) for w in d.wires.values()
            if not d.is_boundary(w.a) and not d.is_boundary(w.b)
            and part.block_of[w.a] == part.block_of[w.b]
        )
        if c.exact:
            raise ValueError("transcripts are only defined for sampled runs")
        self.meas_slots = [int(i[2]) for i in c.instr if i[0] == OP_MEAS]

    def _name(self, s: int, perms: list[np.ndarray]) -> str:
        k = self.block_of[s]
        return f"{k}:{int(perms[k][self.prog.labels[s]])}"

    def draw_perms(self, rng: np.random.Generator) -> list[np.ndarray]:
        return [rng.permutation(n) for n in self.sizes]

    def schedules(self, coins: np.ndarray, perms: list[np.ndarray]) -> list[AgentSchedule]:
        out = [AgentSchedule(a, [k for k in range(len(self.sizes)) if owner(k, self.agents) == a])
               for a in range(self.agents)]
        for i, (a, b, kind) in enumerate(self.c.pairs):
            coin = int(coins[i])
            if kind == PAIR_HADAMARD:
                ha = hb = coin
            else:
                ha, hb = (1, 0) if coin == 0 else (0, 1)
            eid = f"{self.prog.edge_ids[(min(a, b), max(a, b))]:016x}"
            for s, h in ((a, ha), (b, hb)):
                ag = owner(self.block_of[s], self.agents)
                out[ag].setup.append(ScheduleOp("bell", self._name(s, perms), edge_id=eid, hadamard=h))
        for a, b in self.local:
            ag = owner(self.block_of[a], self.agents)
            out[ag].setup.append(ScheduleOp("cz", self._name(a, perms), self._name(b, perms)))
        for slot in self.meas_slots:
            s = self.c.slot_spider[slot]
            ag = owner(self.block_of[s], self.agents)
            out[ag].measure.append(ScheduleOp("measure", self._name(s, perms)))
        for sch in out:
            sch.setup.sort(key=lambda o: (o.op, o.qubit, o.other or "", o.edge_id or ""))
        return out

    def transcripts(self, shots: ShotData, sample: int, perms: list[np.ndarray]) -> list[AgentTranscript]:
        scheds = self.schedules(shots.coins[sample], perms)
        k = self.c.k
        recs: list[list[TranscriptRecord]] = [[] for _ in range(self.agents)]
        for sch in scheds:
            for op in sch.setup:
                recs[sch.agent].append(TranscriptRecord(op.op, op.qubit, op.other, op.edge_id, op.hadamard))
        for slot in self.meas_slots:
            s = self.c.slot_spider[slot]
            ag = owner(self.block_of[s], self.agents)
            recs[ag].append(TranscriptRecord(
                "measure", self._name(s, perms),
                angle=f"{int(shots.angles[sample, slot])}/2^{k}",
                outcome=int(shots.outcomes[sample, slot])))
        return [AgentTranscript(a, sample, recs[a]) for a in range(self.agents)]


def check_locality(schedules: list[AgentSchedule], transcripts: list[AgentTranscript] = (),
                   agents: int | None = None) -> list[str]:
    """Violations of the no-communication rule; empty when the run is local."""
    agents = agents if agents is not None else len(schedules)
    problems = []

    def block(name: str | None) -> int | None:
        if name is None:
            return None
        head = name.split(":", 1)[0]
        return int(head) if head.isdigit() else -1

    for sch in schedules:
        for op in sch.setup + sch.measure:
            for q in (op.qubit, op.other):
                b = block(q)
                if b is not None and (b < 0 or owner(b, agents) != sch.agent):
                    problems.append(f"agent {sch.agent}: {op.op} touches remote qubit {q}")
        if any(op.op == "bell" for op in sch.measure):
            problems.append(f"agent {sch.agent}: entanglement requested during execution")
    for tr in transcripts:
        started = False
        for r in tr.records:
            for q in (r.qubit, r.other):
                b = block(q)
                if b is not None and (b < 0 or owner(b, agents) != tr.agent):
                    problems.append(f"agent {tr.agent} sample {tr.sample}: {r.op} names remote qubit {q}")
            if r.op == "measure":
                started = True
            elif started:
                problems.append(f"agent {tr.agent} sample {tr.sample}: {r.op} after measurements began")
    return problems


def write_transcripts(directory: Path, builder: ScheduleBuilder, shots: ShotData,
                      rng: np.random.Generator) -> None:
    """One JSON-lines file per agent, one line per sample."""
    directory.mkdir(parents=True, exist_ok=True)
    handles = [open(directory / f"agent_{a}.jsonl", "w") for a in range(builder.agents)]
    try:
        for i in range(shots.angles.shape[0]):
            for tr in builder.transcripts(shots, i, builder.draw_perms(rng)):
                rows = []
                for r in tr.records:
                    row = {"op": r.op, "qubit": r.qubit}
                    for f in ("other", "edge_id", "hadamard", "angle", "outcome"):
                        v = getattr(r, f)
                        if v is not None:
                            row[f] = v
                    rows.append(row)
                handles[tr.agent].write(json.dumps({"agent": tr.agent, "sample": i, "records": rows},
                                                   sort_keys=True) + "\n")
    finally:
        for h in handles:
            h.close()


def read_transcripts(directory: Path) -> list[AgentTranscript]:
    out = []
    for path in sorted(Path(directory).glob("agent_*.jsonl")):
        with open(path) as fh:
            for line in fh:
                data = json.loads(line)
                recs = [TranscriptRecord(**r) for r in data["records"]]
                out.append(AgentTranscript(int(data["agent"]), int(data["sample"]), recs))
    if not out:
        raise FileNotFoundError(f"no transcripts in {directory}")
    return out
