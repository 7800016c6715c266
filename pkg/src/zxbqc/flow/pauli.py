"""Pauli-flow verification and search.

Conditions are numbered as in the usual definition of Pauli flow:

1. ``v in f(u)``, ``v != u``, plane(v) not X/Y  =>  ``u < v``
2. ``not u < v``, ``v != u``, plane(v) not Y/Z  =>  ``v not in Odd(f(u))``
3. ``not u < v``, ``v != u``, plane(v) == Y  =>  ``v in f(u) iff v in Odd(f(u))``
4-9. the per-plane conditions on ``u`` itself (XY, XZ, YZ, X, Z, Y).

Condition 0 collects structural problems (missing entries, inputs in a
correction set, bad layering).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping

from .opengraph import FlowError, OpenGraph, odd_neighborhood

DEFAULT_LIMIT = 64
EXHAUSTIVE_LIMIT = 12


@dataclass(frozen=True)
class PauliFlowData:
    f: Mapping[int, frozenset[int]]
    layers: tuple[frozenset[int], ...]

    def layer_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}

    def to_dict(self, planes: Mapping[int, str] | None = None) -> dict:
        out = {
            "layers": [sorted(l) for l in self.layers],
            "f": {str(u): sorted(k) for u, k in sorted(self.f.items())},
        }
        if planes is not None:
            out["planes"] = {str(v): p for v, p in sorted(planes.items())}
        return out

    def to_json(self, planes: Mapping[int, str] | None = None) -> str:
        return json.dumps(self.to_dict(planes), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> tuple[PauliFlowData, dict[int, str]]:
        try:
            layers = tuple(frozenset(int(v) for v in l) for l in data["layers"])
            f = {int(u): frozenset(int(v) for v in k) for u, k in data["f"].items()}
            planes = {int(v): str(p) for v, p in data.get("planes", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise FlowError(f"malformed flow data: {exc}") from exc
        return cls(f, layers), planes


@dataclass(frozen=True)
class FlowViolation:
    condition: int
    u: int | None
    v: int | None
    detail: str

    def __str__(self) -> str:
        who = f"u={self.u}" + (f", v={self.v}" if self.v is not None else "")
        return f"condition {self.condition} ({who}): {self.detail}"


def _per_vertex(g: OpenGraph, u: int, K: frozenset[int], before) -> list[FlowViolation]:
    """Check conditions 1-9 for ``u`` with correction set ``K``.

    ``before(u, v)`` answers ``u < v``.
    """
    out = []
    odd = odd_neighborhood(g, K)
    for v in sorted(K):
        if v != u and g.planes.get(v) not in ("X", "Y") and not before(u, v):
            out.append(FlowViolation(1, u, v, "correction target not measured later"))
    for v in sorted(g.vertices - g.outputs - {u}):
        if before(u, v):
            continue
        plane = g.planes[v]
        if plane not in ("Y", "Z") and v in odd:
            out.append(FlowViolation(2, u, v, "earlier or unordered vertex receives a Z correction"))
        if plane == "Y" and (v in K) != (v in odd):
            out.append(FlowViolation(3, u, v, "Y-plane vertex corrected inconsistently"))
    plane = g.planes[u]
    inK, inOdd = u in K, u in odd
    rules = {
        "XY": (4, not inK and inOdd),
        "XZ": (5, inK and inOdd),
        "YZ": (6, inK and not inOdd),
        "X": (7, inOdd),
        "Z": (8, inK),
        "Y": (9, inK != inOdd),
    }
    cond, ok = rules[plane]
    if not ok:
        out.append(FlowViolation(cond, u, None, f"{plane}-plane requirement on u fails"))
    return out


def verify_pauli_flow(g: OpenGraph, flow: PauliFlowData,
                      planes: Mapping[int, str] | None = None) -> list[FlowViolation]:
    """Return all violations; an empty list means the flow is valid."""
    out: list[FlowViolation] = []
    layer = flow.layer_of()
    seen: set[int] = set()
    for l in flow.layers:
        dup = seen & l
        if dup:
            out.append(FlowViolation(0, min(dup), None, "vertex appears in two layers"))
        seen |= l
    for v in sorted(seen - g.vertices):
        out.append(FlowViolation(0, v, None, "unknown vertex in layers"))
    for v in sorted(g.vertices - seen):
        out.append(FlowViolation(0, v, None, "vertex missing from layers"))
    if planes:
        for v, p in sorted(planes.items()):
            if v in g.outputs:
                continue
            if g.planes.get(v) != p:
                out.append(FlowViolation(0, v, None, f"plane {p} differs from derived {g.planes.get(v)}"))
    for u in sorted(set(flow.f) - (g.vertices - g.outputs)):
        out.append(FlowViolation(0, u, None, "correction set given for an output or unknown vertex"))

    def before(a: int, b: int) -> bool:
        return a in layer and b in layer and layer[a] < layer[b]

    for u in g.non_outputs:
        if u not in flow.f:
            out.append(FlowViolation(0, u, None, "no correction set"))
            continue
        K = flow.f[u]
        bad = sorted(K - g.vertices)
        if bad:
            out.append(FlowViolation(0, u, bad[0], "correction set names an unknown vertex"))
            continue
        for v in sorted(K & g.inputs):
            out.append(FlowViolation(0, u, v, "correction set contains an input"))
        out.extend(_per_vertex(g, u, K, before))
    return out


# -- search ----------------------------------------------------------------

def _causal_flow(g: OpenGraph) -> PauliFlowData | None:
    f: dict[int, frozenset[int]] = {}
    processed = set(g.outputs)
    correctors = set(g.outputs - g.inputs)
    rounds: list[set[int]] = [set(g.outputs)]
    while True:
        new_p: set[int] = set()
        new_c: set[int] = set()
        for v in sorted(correctors):
            cand = [u for u in g.adj[v] if u not in processed]
            if len(cand) == 1 and cand[0] not in new_p:
                u = cand[0]
                f[u] = frozenset({v})
                new_p.add(u)
                new_c.add(v)
        if not new_p:
            if processed == set(g.vertices):
                return PauliFlowData(f, tuple(frozenset(r) for r in reversed(rounds)))
            return None
        processed |= new_p
        correctors = (correctors - new_c) | (new_p - g.inputs)
        rounds.append(new_p)


def _gf2_flow(g: OpenGraph) -> PauliFlowData | None:
    solved = set(g.outputs)
    unsolved = set(g.vertices - g.outputs)
    f: dict[int, frozenset[int]] = {}
    rounds: list[set[int]] = [set(g.outputs)]
    while unsolved:
        rows = sorted(unsolved)
        rix = {v: i for i, v in enumerate(rows)}
        cols = sorted(
            v for v in g.vertices - g.inputs
            if v in solved or g.planes.get(v) == "X"
        )
        # matrix rows as column bitmasks, with an identity tracking row ops
        mat = []
        for r in rows:
            bits = 0
            for j, c in enumerate(cols):
                if r in g.adj[c]:
                    bits |= 1 << j
            mat.append(bits)
        track = [1 << i for i in range(len(rows))]
        pivots: list[tuple[int, int]] = []  # (row, col)
        r = 0
        for c in range(len(cols)):
            p = next((i for i in range(r, len(rows)) if mat[i] >> c & 1), None)
            if p is None:
                continue
            mat[r], mat[p] = mat[p], mat[r]
            track[r], track[p] = track[p], track[r]
            for i in range(len(rows)):
                if i != r and mat[i] >> c & 1:
                    mat[i] ^= mat[r]
                    track[i] ^= track[r]
            pivots.append((r, c))
            r += 1
        rank = r
        found: set[int] = set()
        for u in rows:
            e = rix[u]
            if any(track[i] >> e & 1 for i in range(rank, len(rows))):
                continue
            K = frozenset(cols[c] for (i, c) in pivots if track[i] >> e & 1)
            if g.planes[u] == "XY" and u in K:
                continue
            f[u] = K
            found.add(u)
        if not found:
            return None
        unsolved -= found
        solved |= found
        rounds.append(found)
    return PauliFlowData(f, tuple(frozenset(r) for r in reversed(rounds)))


def _exhaustive_flow(g: OpenGraph) -> PauliFlowData | None:
    """Dynamic programme over measurement prefixes; every subset K is tried."""
    non_out = g.non_outputs
    pool = sorted(g.vertices - g.inputs)
    subsets = [frozenset(c) for r in range(len(pool) + 1) for c in itertools.combinations(pool, r)]
    index = {v: i for i, v in enumerate(non_out)}

    def solve(u: int, prefix: int) -> frozenset[int] | None:
        earlier = {v for v in non_out if prefix >> index[v] & 1}

        def before(a: int, b: int) -> bool:
            return b not in earlier and b != a
        for K in subsets:
            if not _per_vertex(g, u, K, before):
                return K
        return None

    parent: dict[int, tuple[int, int, frozenset[int]] | None] = {0: None}
    frontier = [0]
    full = (1 << len(non_out)) - 1
    while frontier:
        nxt = []
        for m in frontier:
            for u in non_out:
                bit = 1 << index[u]
                if m & bit or (m | bit) in parent:
                    continue
                K = solve(u, m)
                if K is not None:
                    parent[m | bit] = (m, u, K)
                    nxt.append(m | bit)
        frontier = nxt
    if full not in parent:
        return None
    order, f = [], {}
    m = full
    while parent[m] is not None:
        prev, u, K = parent[m]
        order.append(u)
        f[u] = K
        m = prev
    order.reverse()
    layers = tuple(frozenset({u}) for u in order) + (frozenset(g.outputs),)
    return PauliFlowData(f, layers)


def find_flow(g: OpenGraph, method: str = "auto", limit: int = DEFAULT_LIMIT) -> PauliFlowData | None:
    if len(g.vertices) > limit:
        raise FlowError(f"graph has {len(g.vertices)} vertices, limit is {limit}")
    if method == "exhaustive":
        if len(g.vertices) > EXHAUSTIVE_LIMIT:
            raise FlowError(f"exhaustive search is limited to {EXHAUSTIVE_LIMIT} vertices")
        return _exhaustive_flow(g)
    if method in ("auto", "causal"):
        flow = _causal_flow(g)
        if flow is not None or method == "causal":
            return flow
    if method in ("auto", "gf2"):
        return _gf2_flow(g)
    raise FlowError(f"unknown flow search method {method!r}")
