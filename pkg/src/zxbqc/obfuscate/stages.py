"""Individual preparation stages.  Each returns new objects and preserves the tensor."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..flow import find_flow, open_graph_of
from ..phase import Phase
from ..zx.diagram import HADAMARD, REGULAR, ZXDiagram
from ..zx.graphlike import graph_like_violations, to_graph_like

EVEN, ODD, STUB, DUMMY, SINGLE = "even", "odd", "stub", "dummy", "single"


class PreparationError(ValueError):
    pass


@dataclass(frozen=True)
class BlockPartition:
    block_of: Mapping[int, int]
    block_count: int

    def members(self, k: int) -> list[int]:
        return sorted(s for s, b in self.block_of.items() if b == k)

    def with_spiders(self, extra: Mapping[int, int]) -> BlockPartition:
        merged = dict(self.block_of)
        merged.update(extra)
        return BlockPartition(merged, max(self.block_count, max(merged.values(), default=-1) + 1))


@dataclass(frozen=True)
class SplitMap:
    parent: Mapping[int, tuple[int, int]]  # parent id -> (even, odd)
    alpha: Mapping[int, Phase] = field(default_factory=dict)

    def child_parent(self) -> dict[int, int]:
        out = {}
        for p, (e, o) in self.parent.items():
            out[e] = p
            out[o] = p
        return out


def protocol_normal_form(d: ZXDiagram) -> ZXDiagram:
    """Absorb |0> inputs, go graph-like, and give every output a Hadamard leg.

    With a Hadamard leg, the X-basis outcome of the output spider equals the
    computational-basis readout of the original circuit qubit.
    """
    d = d.copy()
    for b in d.inputs:
        (w,) = [d.wire(x) for x in d.incident(b)] if d.degree(b) == 1 else (None,)
        if w is None:
            raise PreparationError(f"input {b} must have exactly one wire")
        s = w.other(b)
        d.remove_spider(b)
        plug = d.add_spider("X" if w.kind == REGULAR else "Z")
        d.add_wire(plug, s, REGULAR)
    d.inputs = ()
    d = to_graph_like(d)
    if not d.outputs:
        raise PreparationError("diagram has no outputs")
    for b in d.outputs:
        (wid,) = d.incident(b)
        w = d.wire(wid)
        if w.kind == REGULAR:
            s = w.other(b)
            d.remove_wire(wid)
            z = d.add_spider("Z")
            d.add_wire(s, z, HADAMARD)
            d.add_wire(z, b, HADAMARD)
    bad = graph_like_violations(d)
    if bad:  # pragma: no cover
        raise PreparationError(f"normal form is not graph-like: {bad[0]}")
    if find_flow(open_graph_of(d), limit=10_000) is None:
        raise PreparationError("normal form has no Pauli flow")
    return d


def output_spiders(d: ZXDiagram) -> list[int]:
    """Interior spiders attached to output boundaries, by output rank."""
    return [d.neighbors(b)[0] for b in d.outputs]


def compute_depths(d: ZXDiagram) -> dict[int, int]:
    """Graph distance from each interior spider to the nearest output spider."""
    outs = output_spiders(d)
    if not outs:
        raise PreparationError("no outputs")
    depth = {o: 0 for o in outs}
    queue = deque(outs)
    while queue:
        v = queue.popleft()
        for n in d.neighbors(v):
            if n not in depth and not d.is_boundary(n):
                depth[n] = depth[v] + 1
                queue.append(n)
    missing = [s for s in d.interior_ids() if s not in depth]
    if missing:
        raise PreparationError(f"spider {missing[0]} cannot reach an output")
    return depth


def split_phases(d: ZXDiagram, beta: Mapping[int, Phase] | None = None) -> tuple[ZXDiagram, SplitMap]:
    """Replace each spider by an (even, odd) pair joined by a regular wire.

    The odd child keeps the wires towards the outputs; the even child takes
    wires towards deeper spiders and those between equal-depth spiders.
    Phases are ``alpha - beta`` (even) and ``beta`` (odd); ``beta`` defaults
    to zero, the symbolic placeholder bound per sample at run time.
    """
    depth = compute_depths(d)
    beta = beta or {}
    out = ZXDiagram()
    nxt = d.next_spider_id()
    parent: dict[int, tuple[int, int]] = {}
    alpha: dict[int, Phase] = {}
    for sid in d.spider_ids():
        s = d.spider(sid)
        if d.is_boundary(sid):
            out.add_spider(s.color, s.phase, s.io, sid=sid)
            continue
        b = beta.get(sid, Phase())
        e = out.add_spider("Z", s.phase - b, sid=nxt)
        o = out.add_spider("Z", b, sid=nxt + 1)
        nxt += 2
        out.add_wire(e, o, REGULAR)
        parent[sid] = (e, o)
        alpha[sid] = s.phase
    out.inputs, out.outputs = d.inputs, d.outputs
    for wid in d.wire_ids():
        w = d.wire(wid)
        a, b = w.a, w.b
        if d.is_boundary(a) or d.is_boundary(b):
            bnd, s = (a, b) if d.is_boundary(a) else (b, a)
            inner = parent[s][1] if bnd in d.outputs else parent[s][0]
            out.add_wire(inner, bnd, w.kind)
            continue
        if depth[a] < depth[b]:
            a, b = b, a
        if depth[a] > depth[b]:
            out.add_wire(parent[a][1], parent[b][0], w.kind)
        else:
            out.add_wire(parent[a][0], parent[b][0], w.kind)
    return out, SplitMap(parent, alpha)


def initial_partition(d: ZXDiagram) -> BlockPartition:
    """Blocks by breadth-first distance (over all wires) from the output legs."""
    seeds = output_spiders(d)
    block = {s: 0 for s in seeds}
    queue = deque(seeds)
    while queue:
        v = queue.popleft()
        for n in d.neighbors(v):
            if n not in block and not d.is_boundary(n):
                block[n] = block[v] + 1
                queue.append(n)
    missing = [s for s in d.interior_ids() if s not in block]
    if missing:
        raise PreparationError(f"spider {missing[0]} cannot reach an output")
    return BlockPartition(block, max(block.values()) + 1)


def _partner(d: ZXDiagram, s: int) -> int | None:
    regs = [d.wire(w).other(s) for w in d.incident(s) if d.wire(w).kind == REGULAR
            and not d.is_boundary(d.wire(w).other(s))]
    return regs[0] if len(regs) == 1 else None


def internal_wires(d: ZXDiagram, p: BlockPartition) -> list[int]:
    return [wid for wid in d.wire_ids()
            if not d.is_boundary(d.wire(wid).a) and not d.is_boundary(d.wire(wid).b)
            and p.block_of[d.wire(wid).a] == p.block_of[d.wire(wid).b]]


def externalize_internal_edges(d: ZXDiagram, p: BlockPartition) -> ZXDiagram:
    """Move one end of each intra-block Hadamard wire onto its split partner.

    Valid because partners are joined by a regular wire, so both ends belong
    to the same fused spider.
    """
    d = d.copy()
    for wid in internal_wires(d, p):
        w = d.wire(wid)
        if w.kind != HADAMARD:
            raise PreparationError(f"regular wire {w.a}-{w.b} inside a block")
        a, b = sorted((w.a, w.b))
        pa = _partner(d, a)
        if pa is None or abs(p.block_of[pa] - p.block_of[b]) != 1:
            raise PreparationError(f"internal wire {a}-{b} has no adjacent partner")
        d.reattach(wid, a, pa)
    return d


def _fresh_ids(rng: np.random.Generator, taken: set[int], n: int) -> list[int]:
    out = []
    while len(out) < n:
        x = int(rng.integers(0, 2**63, dtype=np.int64)) * 2 + int(rng.integers(0, 2))
        if x not in taken:
            taken.add(x)
            out.append(x)
    return out


def wire_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def subdivide_interblock_edges(d: ZXDiagram, p: BlockPartition, rng: np.random.Generator,
                               taken: set[int] | None = None
                               ) -> tuple[ZXDiagram, BlockPartition, dict[tuple[int, int], int]]:
    """Each inter-block Hadamard wire ``V-V'`` becomes ``V-W-W'-V'`` (all Hadamard)."""
    d = d.copy()
    taken = set() if taken is None else taken
    extra: dict[int, int] = {}
    ids: dict[tuple[int, int], int] = {}
    for wid in d.wire_ids():
        w = d.wire(wid)
        if w.kind != HADAMARD or d.is_boundary(w.a) or d.is_boundary(w.b):
            continue
        if p.block_of[w.a] == p.block_of[w.b]:
            continue
        d.remove_wire(wid)
        wa = d.add_spider("Z")
        wb = d.add_spider("Z")
        d.add_wire(w.a, wa, HADAMARD)
        d.add_wire(wa, wb, HADAMARD)
        d.add_wire(wb, w.b, HADAMARD)
        extra[wa] = p.block_of[w.a]
        extra[wb] = p.block_of[w.b]
        ids[wire_key(wa, wb)] = _fresh_ids(rng, taken, 1)[0]
    return d, p.with_spiders(extra), ids


def hub_degree(d: ZXDiagram, s: int) -> int:
    return sum(1 for w in d.incident(s) if not d.is_boundary(d.wire(w).other(s)))


def hubs(d: ZXDiagram) -> list[int]:
    """Spiders holding a regular wire (the split children)."""
    return [s for s in d.interior_ids() if _partner(d, s) is not None]


def add_dummy_resources(d: ZXDiagram, p: BlockPartition, policy="max",
                        rng: np.random.Generator | None = None, taken: set[int] | None = None
                        ) -> tuple[ZXDiagram, BlockPartition, dict[tuple[int, int], int]]:
    """Append ``hub - w - w'`` Hadamard chains (phase 0) to raise hub degrees.

    ``policy`` is ``"none"``, ``"max"`` (pad each hub to its block's maximum
    hub degree) or a mapping ``hub -> target degree``.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    taken = set() if taken is None else taken
    hub_list = hubs(d)
    if policy == "none":
        return d, p, {}
    if policy == "max":
        best: dict[int, int] = {}
        for h in hub_list:
            k = p.block_of[h]
            best[k] = max(best.get(k, 0), hub_degree(d, h))
        target = {h: best[p.block_of[h]] for h in hub_list}
    elif isinstance(policy, Mapping):
        target = dict(policy)
        for h, t in target.items():
            if h not in d.spiders or d.is_boundary(h):
                raise PreparationError(f"padding targets unknown spider {h}")
            if t < hub_degree(d, h):
                raise PreparationError(f"target degree {t} below current degree of {h}")
    else:
        raise PreparationError(f"unknown padding policy {policy!r}")
    d = d.copy()
    extra: dict[int, int] = {}
    ids: dict[tuple[int, int], int] = {}
    for h in sorted(target):
        k = p.block_of[h]
        k2 = k - 1 if k >= 1 else k + 1
        for _ in range(target[h] - hub_degree(d, h)):
            w = d.add_spider("Z")
            w2 = d.add_spider("Z")
            d.add_wire(h, w, HADAMARD)
            d.add_wire(w, w2, HADAMARD)
            extra[w], extra[w2] = k, k2
            ids[wire_key(w, w2)] = _fresh_ids(rng, taken, 1)[0]
    return d, p.with_spiders(extra), ids


def interblock_wires(d: ZXDiagram, p: BlockPartition) -> list[tuple[int, int]]:
    return sorted(
        wire_key(w.a, w.b) for w in d.wires.values()
        if not d.is_boundary(w.a) and not d.is_boundary(w.b) and p.block_of[w.a] != p.block_of[w.b]
    )


def check_locality(d: ZXDiagram, p: BlockPartition) -> list[str]:
    """Structural invariants of a finished program; empty list when all hold."""
    problems = []
    bell: dict[int, int] = {}
    for w in d.wires.values():
        if d.is_boundary(w.a) or d.is_boundary(w.b):
            continue
        ka, kb = p.block_of[w.a], p.block_of[w.b]
        if w.kind == REGULAR and abs(ka - kb) != 1:
            problems.append(f"regular wire {w.a}-{w.b} not between adjacent blocks")
        if ka != kb:
            if abs(ka - kb) != 1:
                problems.append(f"wire {w.a}-{w.b} skips blocks ({ka}, {kb})")
            for s in (w.a, w.b):
                bell[s] = bell.get(s, 0) + 1
    for s, n in sorted(bell.items()):
        if n > 1:
            problems.append(f"spider {s} has {n} cross-block wires")
    for s in d.interior_ids():
        if sum(1 for w in d.incident(s) if d.wire(w).kind == REGULAR
               and not d.is_boundary(d.wire(w).other(s))) > 1:
            problems.append(f"spider {s} has more than one regular wire")
    return problems


def roles_of(d: ZXDiagram, split: SplitMap, dummies: set[int]) -> dict[int, str]:
    roles = {}
    for e, o in split.parent.values():
        roles[e], roles[o] = EVEN, ODD
    for s in d.interior_ids():
        if s not in roles:
            roles[s] = DUMMY if s in dummies else STUB
    return roles
