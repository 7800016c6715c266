"""Lower a prepared program to a static instruction list for the shot kernel.

Qubits are materialised lazily: a qubit (and its Bell partner) is allocated
only when it, or a neighbour, is about to be measured, and measured qubits
are discarded.  All entangling operations commute, so this reordering gives
the same state as preparing the whole resource up front.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..flow import odd_neighborhood
from ..obfuscate import EVEN, ODD, ObfuscatedProgram
from ..zx.diagram import HADAMARD

OP_ALLOC, OP_CZ, OP_DECOR, OP_MEAS, OP_PDONE, OP_FINAL = range(6)
ROLE_EVEN, ROLE_ODD, ROLE_FIXED = 0, 1, 2
PAIR_REGULAR, PAIR_HADAMARD = 0, 1


@dataclass
class Compiled:
    instr: np.ndarray          # int32 [n, 5]
    k: int                     # angles are integers modulo 2**(k+1), unit pi/2**k
    alpha: np.ndarray          # int64 [P] secret parent phase numerators
    parents: list[int]         # reduced vertex id per parent index
    split_parent: np.ndarray   # int32 [P] 1 when the parent has even/odd children
    out_rank: np.ndarray       # int32 [P] output rank or -1
    slot_spider: list[int]     # spider id per measurement slot
    slot_parent: np.ndarray    # int32 [S]
    slot_role: np.ndarray      # int32 [S]
    slot_fixed: np.ndarray     # int64 [S]
    x_ptr: np.ndarray
    x_idx: np.ndarray
    z_ptr: np.ndarray
    z_idx: np.ndarray
    pairs: list[tuple[int, int, int]]  # (spider a, spider b, kind)
    final_slots: np.ndarray    # int32 slots live at OP_FINAL, by bit position
    n_outputs: int
    max_live: int
    exact: bool

    @property
    def n_slots(self) -> int:
        return len(self.slot_spider)

    @property
    def n_parents(self) -> int:
        return len(self.parents)


def compile_program(prog: ObfuscatedProgram, exact: bool = False) -> Compiled:
    d, part, rf = prog.diagram, prog.partition, prog.rflow
    k = prog.den_pow
    mod = 2 ** (k + 1)
    children = rf.children()
    parents = sorted(children)
    pidx = {p: i for i, p in enumerate(parents)}
    outs = prog.output_parents()
    out_rank = np.full(len(parents), -1, dtype=np.int32)
    for r, p in enumerate(outs):
        out_rank[pidx[p]] = r
    alpha = np.array([prog.alpha_of(p).at(k) % mod for p in parents], dtype=np.int64)
    split_parent = np.array([1 if len(children[p]) == 2 else 0 for p in parents], dtype=np.int32)

    # corrections in the reduced graph
    g = rf.graph
    x_ptr, x_idx, z_ptr, z_idx = [0], [], [0], []
    for p in parents:
        K = rf.flow.f.get(p, frozenset())
        xs = sorted(pidx[v] for v in K if v != p)
        zs = sorted(pidx[v] for v in odd_neighborhood(g, K) if v != p)
        if p in g.outputs:
            xs, zs = [], []
        x_idx += xs
        z_idx += zs
        x_ptr.append(len(x_idx))
        z_ptr.append(len(z_idx))

    # wires
    bell: dict[int, tuple[int, int]] = {}  # spider -> (partner, pair index)
    local: dict[int, list[int]] = {s: [] for s in d.interior_ids()}
    pairs: list[tuple[int, int, int]] = []
    for w in sorted(d.wires.values(), key=lambda w: (min(w.a, w.b), max(w.a, w.b))):
        if d.is_boundary(w.a) or d.is_boundary(w.b):
            continue
        if part.block_of[w.a] != part.block_of[w.b]:
            if w.a in bell or w.b in bell:
                raise ValueError(f"spider in two Bell pairs near wire {w.a}-{w.b}")
            kind = PAIR_HADAMARD if w.kind == HADAMARD else PAIR_REGULAR
            bell[w.a] = (w.b, len(pairs))
            bell[w.b] = (w.a, len(pairs))
            pairs.append((w.a, w.b, kind))
        else:
            if w.kind != HADAMARD:
                raise ValueError(f"regular wire {w.a}-{w.b} inside a block")
            local[w.a].append(w.b)
            local[w.b].append(w.a)

    order = [(p, sorted(children[p])) for p in _measurement_order(prog, children, local, bell)]

    instr: list[tuple[int, int, int, int, int]] = []
    live: list[int] = []
    measured: set[int] = set()
    max_live = 0

    def alloc_one(s: int) -> None:
        nonlocal max_live
        live.append(s)
        instr.append((OP_ALLOC, 0, 0, 0, 0))
        max_live = max(max_live, len(live))

    def cz_local(s: int) -> None:
        for n in local[s]:
            if n in live and n != s:
                instr.append((OP_CZ, live.index(s), live.index(n), 0, 0))

    def ensure(s: int) -> None:
        if s in live or s in measured:
            return
        if s in bell:
            r, pi_ = bell[s]
            a, b, kind = pairs[pi_]
            alloc_one(a)
            alloc_one(b)
            pa, pb = live.index(a), live.index(b)
            instr.append((OP_CZ, pa, pb, 0, 0))
            instr.append((OP_DECOR, pa, pb, kind, pi_))
            cz_local(a)
            cz_local(b)
        else:
            alloc_one(s)
            cz_local(s)

    slot_spider: list[int] = []
    slot_parent: list[int] = []
    slot_role: list[int] = []
    slot_fixed: list[int] = []

    def new_slot(s: int, p: int) -> int:
        slot_spider.append(s)
        slot_parent.append(pidx[p])
        role = prog.roles.get(s)
        slot_role.append(ROLE_EVEN if role == EVEN else ROLE_ODD if role == ODD else ROLE_FIXED)
        slot_fixed.append(d.spider(s).phase.at(k) % mod if role not in (EVEN, ODD) else 0)
        return len(slot_spider) - 1

    final_slots: list[int] = []
    output_set = set(outs)
    for p, kids in order:
        if exact and p in output_set:
            continue
        for s in kids:
            ensure(s)
            for n in d.neighbors(s):
                if not d.is_boundary(n):
                    ensure(n)
            slot = new_slot(s, p)
            pos = live.index(s)
            instr.append((OP_MEAS, pos, slot, 0, 0))
            live.pop(pos)
            measured.add(s)
        instr.append((OP_PDONE, pidx[p], 0, 0, 0))
    if exact:
        for p, kids in order:
            if p in output_set:
                for s in kids:
                    ensure(s)
        if len(live) != sum(len(children[p]) for p in output_set):
            raise ValueError("non-output qubits still live at the end of the schedule")
        slot_of = {}
        for p, kids in order:
            if p in output_set:
                for s in kids:
                    slot_of[s] = new_slot(s, p)
        final_slots = [slot_of[s] for s in live]
        instr.append((OP_FINAL, 0, 0, 0, 0))

    return Compiled(
        instr=np.array(instr, dtype=np.int32).reshape(-1, 5),
        k=k, alpha=alpha, parents=parents, split_parent=split_parent, out_rank=out_rank,
        slot_spider=slot_spider,
        slot_parent=np.array(slot_parent, dtype=np.int32),
        slot_role=np.array(slot_role, dtype=np.int32),
        slot_fixed=np.array(slot_fixed, dtype=np.int64),
        x_ptr=np.array(x_ptr, dtype=np.int32), x_idx=np.array(x_idx, dtype=np.int32),
        z_ptr=np.array(z_ptr, dtype=np.int32), z_idx=np.array(z_idx, dtype=np.int32),
        pairs=pairs, final_slots=np.array(final_slots, dtype=np.int32),
        n_outputs=len(outs), max_live=max_live, exact=exact,
    )


def _measurement_order(prog: ObfuscatedProgram, children: dict[int, list[int]],
                       local: dict[int, list[int]], bell: dict[int, tuple[int, int]]) -> list[int]:
    """A linear extension of the flow's precedence that keeps few qubits live.

    ``u`` must precede ``v`` when ``v`` receives a Z correction from ``u``, or
    an X correction while not being X-plane.  Outputs come last.  Among ready
    vertices, pick the one whose measurement allocates the fewest new qubits.
    """
    rf = prog.rflow
    g = rf.graph
    layer = rf.flow.layer_of()
    preds: dict[int, set[int]] = {p: set() for p in children}
    for u, K in rf.flow.f.items():
        if u in g.outputs:
            continue
        for v in odd_neighborhood(g, K):
            if v != u:
                preds[v].add(u)
        for v in K:
            if v != u and (v in g.outputs or g.planes.get(v) != "X"):
                preds[v].add(u)
    non_out = [p for p in children if p not in g.outputs]
    for o in g.outputs:
        preds[o] |= set(non_out)
    d = prog.diagram
    nbrs = {s: [n for n in d.neighbors(s) if not d.is_boundary(n)] for s in d.interior_ids()}
    live: set[int] = set()
    done: set[int] = set()
    measured: set[int] = set()
    order: list[int] = []

    def needed(p: int) -> set[int]:
        want: set[int] = set()
        for s in children[p]:
            want.add(s)
            want.update(nbrs[s])
        extra = {bell[s][0] for s in want if s in bell}
        return (want | extra) - live - measured

    remaining = set(children)
    while remaining:
        ready = [p for p in remaining if preds[p] <= done]
        if not ready:
            raise ValueError("flow precedence is cyclic")
        best = min(ready, key=lambda p: (len(needed(p)) - len(children[p]), layer[p], p))
        live |= needed(best)
        live -= set(children[best])
        measured |= set(children[best])
        done.add(best)
        remaining.discard(best)
        order.append(best)
    return order
