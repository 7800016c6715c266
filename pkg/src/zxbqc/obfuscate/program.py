"""The full preparation pipeline and the prepared-program container."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..flow import PauliFlowData, ReducedFlow, reduced_flow
from ..flow.pauli import FlowError
from ..phase import Phase
from ..zx.diagram import ZXDiagram
from .stages import (
    DUMMY, EVEN, ODD, SINGLE, STUB, BlockPartition, PreparationError, SplitMap,
    add_dummy_resources, check_locality, compute_depths, externalize_internal_edges,
    initial_partition, interblock_wires, protocol_normal_form, split_phases,
    subdivide_interblock_edges, wire_key, _fresh_ids,
)

FLOW_LIMIT = 100_000
MIN_DEN_POW = 2


@dataclass
class ObfuscatedProgram:
    """Client-side prepared program.

    ``diagram`` stores the even child with phase ``alpha`` and the odd child
    with phase 0, i.e. the instance with all secrets zero.
    """

    diagram: ZXDiagram
    partition: BlockPartition
    split: SplitMap
    roles: dict[int, str]
    rflow: ReducedFlow
    edge_ids: dict[tuple[int, int], int]
    labels: dict[int, int]
    den_pow: int
    normal_form: ZXDiagram | None = None
    stages: dict[str, ZXDiagram] = field(default_factory=dict, repr=False)

    @property
    def flow(self) -> PauliFlowData:
        return self.rflow.lifted()

    @property
    def block_count(self) -> int:
        return self.partition.block_count

    def qubits(self) -> list[int]:
        return self.diagram.interior_ids()

    def output_parents(self) -> list[int]:
        """Reduced-graph vertex for each output rank."""
        d = self.diagram
        return [self.rflow.parent_of[d.neighbors(b)[0]] for b in d.outputs]

    def alpha_of(self, parent: int) -> Phase:
        """Secret phase of a reduced vertex (0 for stubs and dummies)."""
        kids = [c for c, p in self.rflow.parent_of.items() if p == parent]
        total = Phase()
        for c in kids:
            total = total + self.diagram.spider(c).phase
        return total

    def public_views(self) -> list[dict]:
        return [public_view(self, k) for k in range(self.block_count)]

    def profile(self) -> dict:
        """Quantities an agent can observe: block sizes, hub degrees, block count."""
        d, p = self.diagram, self.partition
        sizes = [len(p.members(k)) for k in range(self.block_count)]
        degs = sorted(sum(1 for w in d.incident(s) if not d.is_boundary(d.wire(w).other(s)))
                      for s in d.interior_ids())
        return {"block_count": self.block_count, "block_sizes": sizes,
                "max_degree": max(degs, default=0), "degrees": degs}


def public_view(prog: ObfuscatedProgram, k: int) -> dict:
    d, p = prog.diagram, prog.partition
    members = p.members(k)
    lab = prog.labels
    local = []
    stubs = []
    for a, b in sorted(wire_key(w.a, w.b) for w in d.wires.values()):
        if d.is_boundary(a) or d.is_boundary(b):
            continue
        ka, kb = p.block_of[a], p.block_of[b]
        if ka == kb == k:
            local.append(sorted((lab[a], lab[b])))
        elif k in (ka, kb):
            mine = a if ka == k else b
            stubs.append({"qubit": lab[mine], "edge_id": f"{prog.edge_ids[(a, b)]:016x}"})
    layers = []
    kids = {c: par for c, par in prog.rflow.parent_of.items()}
    for layer in prog.rflow.flow.layers:
        here = sorted(lab[c] for c in members if kids[c] in layer)
        if here:
            layers.append(here)
    return {
        "block": k,
        "qubits": len(members),
        "planes": ["XY"] * len(members),
        "wires": sorted(local),
        "stubs": sorted(stubs, key=lambda s: (s["qubit"], s["edge_id"])),
        "layers": layers,
    }


def prepare(d: ZXDiagram, rng: np.random.Generator | int | None = 0, pad="max",
            split: bool = True, keep_stages: bool = False) -> ObfuscatedProgram:
    """Run the whole preparation pipeline on a diagram.

    ``split=False`` skips phase splitting (and hence externalisation); it
    exists to reproduce plain measurement-based execution for comparisons.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    nf = protocol_normal_form(d)
    stages: dict[str, ZXDiagram] = {"normal_form": nf}
    if split:
        sd, smap = split_phases(nf)
        stages["split"] = sd
        part = initial_partition(sd)
        sd = externalize_internal_edges(sd, part)
        stages["externalize"] = sd
    else:
        sd = nf.copy()
        smap = SplitMap({}, {})
        depth = compute_depths(nf)
        part = BlockPartition(depth, max(depth.values()) + 1)
    taken: set[int] = set()
    sd, part, ids = subdivide_interblock_edges(sd, part, rng, taken)
    stages["subdivide"] = sd
    before_pad = set(sd.interior_ids())
    sd, part, pad_ids = add_dummy_resources(sd, part, pad if split else "none", rng, taken)
    stages["pad"] = sd
    ids.update(pad_ids)
    for key in interblock_wires(sd, part):
        if key not in ids:
            ids[key] = _fresh_ids(rng, taken, 1)[0]
    if split:
        problems = check_locality(sd, part)
        if problems:
            raise PreparationError(problems[0])
    try:
        rf = reduced_flow(sd, limit=FLOW_LIMIT)
    except FlowError as exc:  # pragma: no cover
        raise PreparationError(str(exc)) from exc
    if rf is None:
        raise PreparationError("prepared diagram has no Pauli flow")
    roles: dict[int, str] = {}
    for e, o in smap.parent.values():
        roles[e], roles[o] = EVEN, ODD
    dummies = set(sd.interior_ids()) - before_pad
    for s in sd.interior_ids():
        if s not in roles:
            if s in dummies:
                roles[s] = DUMMY
            elif s in nf.spiders and not split:
                roles[s] = SINGLE
            else:
                roles[s] = STUB
    labels: dict[int, int] = {}
    for k in range(part.block_count):
        members = part.members(k)
        perm = rng.permutation(len(members))
        for s, l in zip(members, perm):
            labels[s] = int(l)
    den_pow = max([MIN_DEN_POW] + [sd.spider(s).phase.k for s in sd.interior_ids()])
    return ObfuscatedProgram(sd, part, smap, roles, rf, ids, labels, den_pow, nf,
                             stages if keep_stages else {})


# -- serialisation -----------------------------------------------------------

def program_to_public_json(prog: ObfuscatedProgram, agents: int | None = None) -> str:
    data = {
        "format": "zxbqc-program",
        "version": 1,
        "block_count": prog.block_count,
        "den_pow": prog.den_pow,
        "outputs": len(prog.diagram.outputs),
        "blocks": prog.public_views(),
    }
    if agents is not None:
        data["agents"] = agents
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def program_to_secrets_json(prog: ObfuscatedProgram) -> str:
    rf = prog.rflow
    data = {
        "format": "zxbqc-secrets",
        "version": 1,
        "diagram": prog.diagram.to_dict(),
        "block_of": {str(s): b for s, b in sorted(prog.partition.block_of.items())},
        "block_count": prog.block_count,
        "split": {str(p): list(c) for p, c in sorted(prog.split.parent.items())},
        "alpha": {str(p): str(a) for p, a in sorted(prog.split.alpha.items())},
        "roles": {str(s): r for s, r in sorted(prog.roles.items())},
        "parent_of": {str(c): p for c, p in sorted(rf.parent_of.items())},
        "flow": rf.flow.to_dict(dict(rf.graph.planes)),
        "edge_ids": [[a, b, f"{i:016x}"] for (a, b), i in sorted(prog.edge_ids.items())],
        "labels": {str(s): l for s, l in sorted(prog.labels.items())},
        "den_pow": prog.den_pow,
    }
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def program_from_json(public_text: str, secrets_text: str) -> ObfuscatedProgram:
    """Rebuild the client-side program and check it against the public file."""
    from ..flow import open_graph_of, verify_pauli_flow
    from ..zx.graphlike import reduce_semi_graph_like
    try:
        pub = json.loads(public_text)
        sec = json.loads(secrets_text)
        if pub.get("format") != "zxbqc-program" or sec.get("format") != "zxbqc-secrets":
            raise PreparationError("not a zxbqc program/secrets pair")
        d = ZXDiagram.from_dict(sec["diagram"])
        part = BlockPartition({int(s): int(b) for s, b in sec["block_of"].items()},
                              int(sec["block_count"]))
        smap = SplitMap({int(p): tuple(c) for p, c in sec["split"].items()},
                        {int(p): Phase.parse(a) for p, a in sec["alpha"].items()})
        roles = {int(s): r for s, r in sec["roles"].items()}
        parent_of = {int(c): int(p) for c, p in sec["parent_of"].items()}
        flow, _ = PauliFlowData.from_dict(sec["flow"])
        ids = {(int(a), int(b)): int(i, 16) for a, b, i in sec["edge_ids"]}
        labels = {int(s): int(l) for s, l in sec["labels"].items()}
        den_pow = int(sec["den_pow"])
    except (KeyError, TypeError, ValueError) as exc:
        raise PreparationError(f"malformed program files: {exc}") from exc
    reduced, _ = reduce_semi_graph_like(d)
    g = open_graph_of(reduced)
    if verify_pauli_flow(g, flow):
        raise PreparationError("stored flow does not verify")
    prog = ObfuscatedProgram(d, part, smap, roles, ReducedFlow(g, flow, parent_of), ids,
                             labels, den_pow)
    if prog.public_views() != pub.get("blocks"):
        raise PreparationError("program file does not match the secrets file")
    return prog


__all__ = [
    "DUMMY", "EVEN", "ODD", "SINGLE", "STUB", "ObfuscatedProgram", "prepare",
    "program_from_json", "program_to_public_json", "program_to_secrets_json", "public_view",
]
