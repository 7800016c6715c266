"""Statistical blindness checks over what agents observe.

Every check returns an ``AuditReport`` whose verdict is exactly the
comparison of ``statistic`` against ``threshold``.  Checks that scan many
slots at once apply a family-wise correction so that the stated level holds
for the whole family, not per slot.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .obfuscate import ObfuscatedProgram, prepare
from .phase import Phase
from .runtime import AgentTranscript, RunResult, owner, run_program
from .runtime.compile import OP_MEAS, ROLE_EVEN, ROLE_ODD
from .zx.circuit import Circuit, from_circuit

THREE_SIGMA_LEVEL = 0.0027
TV_THRESHOLD = 0.05
LEAK_THRESHOLD = 0.1
CHI2_LEVEL = 0.01
MIN_SAMPLES = 1000


class AuditError(ValueError):
    pass


@dataclass(frozen=True)
class LeakageProfile:
    max_degree: int
    block_sizes: tuple[int, ...]
    block_count: int
    agents: int


@dataclass(frozen=True)
class AuditReport:
    test: str
    statistic: float
    threshold: float
    passed: bool
    samples: int
    detail: str = ""

    def to_text(self) -> str:
        verdict = "pass" if self.passed else "fail"
        lines = [f"test: {self.test}", f"statistic: {self.statistic:.6g}",
                 f"threshold: {self.threshold:.6g}", f"verdict: {verdict}", f"samples: {self.samples}"]
        if self.detail:
            lines.append(f"detail: {self.detail}")
        return "\n".join(lines) + "\n"


def leakage_profile(prog: ObfuscatedProgram, agents: int) -> LeakageProfile:
    """Profile recomputed from the public views alone."""
    views = prog.public_views()
    max_deg = 0
    for v in views:
        deg = [0] * v["qubits"]
        for a, b in v["wires"]:
            deg[a] += 1
            deg[b] += 1
        for s in v["stubs"]:
            deg[s["qubit"]] += 1
        max_deg = max(max_deg, *deg) if deg else max_deg
    return LeakageProfile(max_deg, tuple(v["qubits"] for v in views), len(views), agents)


# -- per-agent observations ----------------------------------------------------

def _agent_slots(result: RunResult, prog: ObfuscatedProgram) -> dict[int, list[int]]:
    """Measured slots of each agent in execution order."""
    c = result.compiled
    out: dict[int, list[int]] = defaultdict(list)
    for ins in c.instr:
        if ins[0] == OP_MEAS:
            slot = int(ins[2])
            out[owner(prog.partition.block_of[c.slot_spider[slot]], result.agents)].append(slot)
    return dict(sorted(out.items()))


def _outcome_columns(source, prog: ObfuscatedProgram | None) -> dict[str, np.ndarray]:
    if isinstance(source, RunResult):
        if prog is None:
            raise AuditError("a RunResult needs its program to attribute slots to agents")
        return {f"agent {a} position {i}": source.shots.outcomes[:, s]
                for a, slots in _agent_slots(source, prog).items() for i, s in enumerate(slots)}
    rows: dict[tuple[int, int], list[int]] = defaultdict(list)
    for tr in source:
        pos = 0
        for r in tr.records:
            if r.op == "measure":
                rows[(tr.agent, pos)].append(int(r.outcome))
                pos += 1
    return {f"agent {a} position {i}": np.array(v) for (a, i), v in sorted(rows.items())}


def outcome_uniformity(source: RunResult | list[AgentTranscript], prog: ObfuscatedProgram | None = None,
                       level: float = THREE_SIGMA_LEVEL) -> AuditReport:
    """Every measured outcome bit against Bernoulli(1/2).

    The 3-sigma level is shared across all slots with a Sidak correction; the
    statistic is the worst z-score and the threshold the corrected critical z.
    """
    cols = _outcome_columns(source, prog)
    if not cols:
        raise AuditError("no outcomes to test")
    n = min(len(v) for v in cols.values())
    if n < MIN_SAMPLES:
        raise AuditError(f"need at least {MIN_SAMPLES} samples, got {n}")
    per_test = 1 - (1 - level) ** (1 / len(cols))
    crit = float(stats.norm.isf(per_test / 2))
    worst, name = 0.0, ""
    for key, v in cols.items():
        z = abs(v.mean() - 0.5) / (0.5 / np.sqrt(len(v)))
        if z > worst:
            worst, name = float(z), key
    return AuditReport("outcome-uniformity", worst, crit, worst <= crit, n,
                       f"{len(cols)} slots, worst at {name}" if name else f"{len(cols)} slots")


def masked_angle_uniformity(result: RunResult, prog: ObfuscatedProgram, level: float = CHI2_LEVEL
                            ) -> AuditReport:
    """Chi-squared test of each split child's sent angle against the uniform law.

    Split children range over the whole phase group.  Fixed-phase qubits are
    only masked by a pi shift, so they are tested over their two-point orbit.
    Bonferroni: the statistic is the smallest p-value times the slot count.
    """
    c = result.compiled
    group = 2 ** (c.k + 1)
    half = group // 2
    pvals = []
    for slots in _agent_slots(result, prog).values():
        for s in slots:
            a = result.shots.angles[:, s].astype(np.int64)
            if c.slot_role[s] in (ROLE_EVEN, ROLE_ODD):
                counts = np.bincount(a, minlength=group)
            else:
                counts = np.array([np.count_nonzero(a < half), np.count_nonzero(a >= half)])
            pvals.append(float(stats.chisquare(counts).pvalue))
    if not pvals:
        raise AuditError("no measured slots")
    adjusted = min(1.0, min(pvals) * len(pvals))
    return AuditReport("masked-angle-uniformity", adjusted, level, adjusted > level,
                       result.shots.angles.shape[0], f"{len(pvals)} slots, Bonferroni-adjusted p")


def _features(result: RunResult, prog: ObfuscatedProgram) -> dict[str, np.ndarray]:
    feats = {}
    for a, slots in _agent_slots(result, prog).items():
        for i, s in enumerate(slots):
            feats[f"agent {a} angle {i}"] = result.shots.angles[:, s].astype(np.int64)
            feats[f"agent {a} outcome {i}"] = result.shots.outcomes[:, s].astype(np.int64)
    return feats


def _tv(x: np.ndarray, y: np.ndarray, size: int) -> float:
    px = np.bincount(x, minlength=size) / len(x)
    py = np.bincount(y, minlength=size) / len(y)
    return 0.5 * float(np.abs(px - py).sum())


def indistinguishability(prog_a: ObfuscatedProgram, prog_b: ObfuscatedProgram, agents: int,
                         trials: int = 10_000, seed: int = 0, masks: bool = True,
                         threshold: float = TV_THRESHOLD) -> AuditReport:
    """Max TV distance between matching per-agent transcript features of two programs."""
    pa, pb = leakage_profile(prog_a, agents), leakage_profile(prog_b, agents)
    if pa != pb:
        raise AuditError(f"leakage profiles differ: {pa} vs {pb}")
    ra = run_program(prog_a, agents, trials, seed=seed, masks=masks)
    rb = run_program(prog_b, agents, trials, seed=seed + 1, masks=masks)
    fa, fb = _features(ra, prog_a), _features(rb, prog_b)
    if fa.keys() != fb.keys():
        raise AuditError("the programs send different numbers of messages")
    size = 2 ** (max(ra.compiled.k, rb.compiled.k) + 1)
    scale = lambda r: 2 ** (max(ra.compiled.k, rb.compiled.k) - r.compiled.k)  # noqa: E731
    worst, name = 0.0, ""
    for key in fa:
        xa, xb = fa[key], fb[key]
        if "angle" in key:
            xa, xb = xa * scale(ra), xb * scale(rb)
        tv = _tv(xa, xb, size)
        if tv > worst:
            worst, name = tv, key
    return AuditReport("indistinguishability", worst, threshold, worst <= threshold, trials,
                       f"{len(fa)} features, worst at {name}" if name else "")


def correction_leakage_demo(circ: Circuit, samples: int = 10_000, seed: int = 0, agents: int = 2,
                            threshold_leak: float = LEAK_THRESHOLD,
                            threshold_masked: float = TV_THRESHOLD) -> tuple[AuditReport, AuditReport]:
    """Outcome bias seen by agents with masks off, then on.  Returns (masked, unmasked).

    The program is prepared without spider splitting, so each measured qubit
    carries its parent's corrected distribution.  Flow determinism keeps
    non-output outcomes uniform; the bias appears on the output spiders, whose
    raw outcomes equal the computation result unless masked.  The statistic
    is the largest TV distance from a fair bit over every agent-measured slot.
    """
    prog = prepare(from_circuit(circ), rng=seed, split=False)
    outs = set(prog.output_parents())
    reports = {}
    for masks in (False, True):
        res = run_program(prog, agents, samples, seed=seed, masks=masks)
        c = res.compiled
        worst, where = 0.0, ""
        for a, slots in _agent_slots(res, prog).items():
            for i, s in enumerate(slots):
                tv = abs(float(res.shots.outcomes[:, s].mean()) - 0.5)
                if tv > worst:
                    kind = "output" if c.parents[c.slot_parent[s]] in outs else "intermediate"
                    worst, where = tv, f"agent {a} position {i} ({kind})"
        detail = f"worst at {where}" if where else ""
        if masks:
            reports[True] = AuditReport("leakage-demo-masked", worst, threshold_masked,
                                        worst <= threshold_masked, samples, detail)
        else:
            reports[False] = AuditReport("leakage-demo-unmasked", worst, threshold_leak,
                                         worst > threshold_leak, samples, detail)
    return reports[True], reports[False]


def collusion_recover(prog: ObfuscatedProgram, result: RunResult, blocks: tuple[int, int],
                      shot: int = 0) -> dict[int, Phase]:
    """Phases of every parent whose two children lie in the merged blocks.

    Inverts the angle binding using the pooled angles, the adaptation flags
    and the mask bits.  Children of one parent always sit in adjacent blocks,
    so non-adjacent pairs recover nothing.
    """
    j, k = blocks
    if abs(j - k) != 1:
        return {}
    c = result.compiled
    mod = 2 ** (c.k + 1)
    half = mod // 2
    part = prog.partition
    slot_of = {s: i for i, s in enumerate(c.slot_spider)}
    found: dict[int, Phase] = {}
    for e, o in sorted(prog.split.parent.values()):
        if {part.block_of[e], part.block_of[o]} != {j, k} or e not in slot_of or o not in slot_of:
            continue
        se, so = slot_of[e], slot_of[o]
        sh = result.shots
        theta_e, theta_o = int(sh.angles[shot, se]), int(sh.angles[shot, so])
        flags = int(sh.xz[shot, se])
        sign = -1 if flags & 1 else 1
        zpi = half if flags & 2 else 0
        num = sign * (theta_e - zpi) - half * int(sh.bmask[shot, se])
        num += sign * theta_o - half * int(sh.bmask[shot, so])
        found[prog.rflow.parent_of[e]] = Phase(num % mod, c.k)
    return found


def edge_id_independence(prog: ObfuscatedProgram, resamples: int = 2000, seed: int = 0,
                         level: float = CHI2_LEVEL) -> AuditReport:
    """Permutation test: edge ids carry no information about endpoint degrees."""
    d = prog.diagram
    deg = {s: sum(1 for w in d.incident(s) if not d.is_boundary(d.wire(w).other(s)))
           for s in d.interior_ids()}
    keys = sorted(prog.edge_ids)
    if len(keys) < 3:
        raise AuditError("too few edge ids for a permutation test")
    ids = np.array([prog.edge_ids[k] / 2.0**64 for k in keys])
    degs = np.array([deg[a] + deg[b] for a, b in keys], dtype=float)

    def corr(x, y):
        return stats.spearmanr(x, y).statistic if np.ptp(y) > 0 else 0.0

    res = stats.permutation_test((ids, degs), corr, permutation_type="pairings",
                                 n_resamples=resamples, random_state=seed)
    p = float(res.pvalue)
    return AuditReport("edge-id-independence", p, level, p > level, len(keys))
