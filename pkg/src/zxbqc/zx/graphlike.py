"""Graph-like and semi-graph-like normal forms."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..phase import Phase
from .diagram import HADAMARD, REGULAR, DiagramError, ZXDiagram
from .rewrite import color_change_in_place, fuse_in_place


@dataclass(frozen=True)
class Violation:
    clause: int
    detail: str

    def __str__(self) -> str:
        return f"clause {self.clause}: {self.detail}"


def _violations(d: ZXDiagram, semi: bool) -> list[Violation]:
    out: list[Violation] = []
    for sid in d.spider_ids():
        if d.spider(sid).color != "Z":
            out.append(Violation(1, f"spider {sid} is an X spider"))
    pairs: Counter = Counter()
    for wid in d.wire_ids():
        w = d.wire(wid)
        if w.is_loop:
            out.append(Violation(3, f"self-loop on spider {w.a}"))
            continue
        pairs[(min(w.a, w.b), max(w.a, w.b))] += 1
        if d.is_boundary(w.a) or d.is_boundary(w.b):
            continue
        if w.kind == REGULAR and not semi:
            out.append(Violation(2, f"regular wire {w.a}-{w.b} between spiders"))
    for (a, b), n in sorted(pairs.items()):
        if n > 1:
            out.append(Violation(3, f"{n} parallel wires between {a} and {b}"))
    for sid in sorted(set(d.inputs) | set(d.outputs)):
        nb = d.neighbors(sid)
        if d.degree(sid) != 1 or d.spider(sid).phase != Phase():
            out.append(Violation(4, f"boundary {sid} is not a plain degree-1 leg"))
        elif d.is_boundary(nb[0]) or d.spider(nb[0]).color != "Z":
            out.append(Violation(4, f"boundary {sid} is not attached to a Z spider"))
    for sid in sorted(set(d.inputs) & set(d.outputs)):
        out.append(Violation(5, f"spider {sid} is both an input and an output"))
    for sid in d.interior_ids():
        if len(d.boundary_neighbors(sid)) > 1:
            out.append(Violation(5, f"spider {sid} touches several inputs/outputs"))
    return out


def graph_like_violations(d: ZXDiagram) -> list[Violation]:
    return _violations(d, semi=False)


def is_graph_like(d: ZXDiagram) -> bool:
    return not _violations(d, semi=False)


def is_semi_graph_like(d: ZXDiagram) -> bool:
    """Graph-like except that spiders may also share regular wires."""
    return not _violations(d, semi=True)


def _insert_leg_spider(d: ZXDiagram, s: int, b: int, wid: int) -> None:
    """Give boundary ``b`` its own spider instead of sharing ``s``."""
    kind = d.wire(wid).kind
    d.remove_wire(wid)
    z = d.add_spider("Z")
    d.add_wire(s, z, HADAMARD)
    d.add_wire(z, b, REGULAR if kind == HADAMARD else HADAMARD)


def _normalise_boundaries(d: ZXDiagram) -> bool:
    changed = False
    for b in sorted(set(d.inputs) | set(d.outputs)):
        s = d.spider(b)
        if s.color == "X" and d.degree(b) == 1 and s.phase == Phase():
            d.set_color(b, "Z")
            changed = True
        if d.degree(b) != 1 or s.phase != Phase() or d.spider(b).color != "Z":
            inner = d.add_spider(s.color, s.phase)
            for w in d.incident(b):
                d.reattach(w, b, inner)
            d.set_phase(b, Phase())
            d.set_color(b, "Z")
            d.add_wire(b, inner, REGULAR)
            changed = True
        (w,) = d.incident(b)
        other = d.wire(w).other(b)
        if d.is_boundary(other):
            kind = d.wire(w).kind
            d.remove_wire(w)
            z = d.add_spider("Z")
            d.add_wire(b, z, REGULAR)
            d.add_wire(z, other, kind)
            changed = True
    return changed


def _pass(d: ZXDiagram) -> bool:
    changed = _normalise_boundaries(d)
    for sid in d.interior_ids():
        if d.spider(sid).color == "X":
            color_change_in_place(d, sid)
            changed = True
    for wid in d.wire_ids():
        if wid not in d.wires:
            continue
        w = d.wire(wid)
        if w.kind == REGULAR and not w.is_loop and not d.is_boundary(w.a) and not d.is_boundary(w.b):
            fuse_in_place(d, wid)
            changed = True
    for wid in d.wire_ids():
        w = d.wire(wid)
        if w.is_loop:
            d.remove_wire(wid)
            if w.kind == HADAMARD:
                d.add_phase(w.a, Phase.pi())
            changed = True
    for sid in d.interior_ids():
        for n in d.neighbors(sid):
            if n < sid or d.is_boundary(n):
                continue
            par = d.wires_between(sid, n)
            for i in range(0, len(par) - 1, 2):
                d.remove_wire(par[i])
                d.remove_wire(par[i + 1])
                changed = True
    for sid in d.interior_ids():
        legs = [w for w in d.incident(sid) if d.is_boundary(d.wire(w).other(sid))]
        for w in legs[1:]:
            _insert_leg_spider(d, sid, d.wire(w).other(sid), w)
            changed = True
    return _simplify(d) or changed


def _simplify(d: ZXDiagram) -> bool:
    changed = False
    for sid in d.interior_ids():
        if sid not in d.spiders:
            continue
        s = d.spider(sid)
        inc = d.incident(sid)
        if not inc and s.phase != Phase.pi():
            d.remove_spider(sid)
            changed = True
            continue
        if s.phase == Phase() and len(inc) == 2:
            w1, w2 = d.wire(inc[0]), d.wire(inc[1])
            n1, n2 = w1.other(sid), w2.other(sid)
            if w1.kind == w2.kind == HADAMARD and not d.is_boundary(n1) and not d.is_boundary(n2):
                nb = set(d.boundary_neighbors(n1)) | set(d.boundary_neighbors(n2))
                if len(nb) <= 1:
                    d.remove_spider(sid)
                    if n1 != n2:
                        d.add_wire(n1, n2, REGULAR)
                    changed = True
                    continue
        if s.phase.is_pauli() and len(inc) == 1 and d.wire(inc[0]).kind == HADAMARD:
            v = d.wire(inc[0]).other(sid)
            if v == sid or d.is_boundary(v) or d.boundary_neighbors(v):
                continue
            if any(d.wire(w).is_loop for w in d.incident(v)):
                continue
            ends = [(d.wire(w).other(v), d.wire(w).kind) for w in d.incident(v) if w != inc[0]]
            d.remove_spider(sid)
            d.remove_spider(v)
            for t, kind in ends:
                if kind == HADAMARD:
                    d.add_phase(t, s.phase)
                else:
                    q = d.add_spider("X", s.phase)
                    d.add_wire(q, t, REGULAR)
            changed = True
    return changed


def to_graph_like(d: ZXDiagram) -> ZXDiagram:
    """Rewrite into graph-like form; the tensor is preserved up to a nonzero scalar."""
    if is_graph_like(d):
        return d
    d = d.copy()
    for _ in range(10_000):
        if not _pass(d):
            break
    else:  # pragma: no cover
        raise DiagramError("graph-like normalisation did not converge")
    bad = graph_like_violations(d)
    if bad:  # pragma: no cover
        raise DiagramError(f"normalisation left violations: {bad[0]}")
    return d


def reduce_semi_graph_like(d: ZXDiagram) -> tuple[ZXDiagram, dict[int, int]]:
    """Fuse every regular spider-spider wire.

    Returns the graph-like result and a map from each original spider to the
    spider id representing its fused class (the smallest id in the class).
    """
    if not is_semi_graph_like(d):
        raise DiagramError("diagram is not semi-graph-like")
    d = d.copy()
    rep = {s: s for s in d.spider_ids()}

    def find(x: int) -> int:
        while rep[x] != x:
            rep[x] = rep[rep[x]]
            x = rep[x]
        return x

    for wid in d.wire_ids():
        if wid not in d.wires:
            continue
        w = d.wire(wid)
        if w.kind != REGULAR or d.is_boundary(w.a) or d.is_boundary(w.b):
            continue
        a, b = sorted((w.a, w.b))
        if a == b:
            raise DiagramError("regular wires form a cycle")
        if w.a != a:
            # keep the smaller id as the survivor
            d.remove_wire(wid)
            wid = d.add_wire(a, b, REGULAR)
        fuse_in_place(d, wid)
        rep[b] = a
    mapping = {s: find(s) for s in rep}
    bad = graph_like_violations(d)
    if bad:
        raise DiagramError(f"reduced diagram is not graph-like: {bad[0]}")
    return d, mapping
