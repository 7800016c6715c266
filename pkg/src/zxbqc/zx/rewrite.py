"""Local rewrite rules.  Each takes a diagram and a site and returns a new diagram."""
from __future__ import annotations

from typing import Callable

from ..phase import Phase
from .diagram import HADAMARD, REGULAR, DiagramError, ZXDiagram, compose_kinds, toggle


class RewriteError(DiagramError):
    """The rule's precondition does not hold at the given site."""


def _interior(d: ZXDiagram, *sids: int) -> None:
    for s in sids:
        d.spider(s)
        if d.is_boundary(s):
            raise RewriteError(f"spider {s} is a boundary")


def _no_loops(d: ZXDiagram, s: int) -> None:
    if any(d.wire(w).is_loop for w in d.incident(s)):
        raise RewriteError(f"spider {s} has a self-loop")


def fuse_in_place(d: ZXDiagram, wid: int) -> int:
    w = d.wire(wid)
    if w.kind != REGULAR or w.is_loop:
        raise RewriteError("fuse needs a regular wire between two spiders")
    a, b = w.a, w.b
    _interior(d, a, b)
    if d.spider(a).color != d.spider(b).color:
        raise RewriteError("fuse needs same-colored spiders")
    d.remove_wire(wid)
    d.add_phase(a, d.spider(b).phase)
    for x in d.incident(b):
        d.reattach(x, b, a)
    d.remove_spider(b)
    return a


def fuse(d: ZXDiagram, site: int) -> ZXDiagram:
    d = d.copy()
    fuse_in_place(d, site)
    return d


def color_change_in_place(d: ZXDiagram, sid: int) -> None:
    _interior(d, sid)
    s = d.spider(sid)
    d.set_color(sid, "X" if s.color == "Z" else "Z")
    for w in d.incident(sid):
        if not d.wire(w).is_loop:
            d.set_kind(w, toggle(d.wire(w).kind))


def color_change(d: ZXDiagram, site: int) -> ZXDiagram:
    d = d.copy()
    color_change_in_place(d, site)
    return d


def pi_copy(d: ZXDiagram, site: int | tuple[int, int]) -> ZXDiagram:
    """Push a degree-2 pi spider through an opposite-colored neighbor."""
    p, s = site if isinstance(site, tuple) else (site, None)
    _interior(d, p)
    sp = d.spider(p)
    if sp.phase != Phase.pi() or d.degree(p) != 2:
        raise RewriteError("pi_copy needs a degree-2 spider with phase pi")
    _no_loops(d, p)
    reg = [w for w in d.incident(p) if d.wire(w).kind == REGULAR
           and d.spider(d.wire(w).other(p)).color != sp.color]
    if s is not None:
        reg = [w for w in reg if d.wire(w).other(p) == s]
    if not reg:
        raise RewriteError("pi_copy needs a regular wire to an opposite-colored spider")
    link = reg[0]
    s = d.wire(link).other(p)
    _interior(d, s)
    _no_loops(d, s)
    if len(d.wires_between(p, s)) != 1:
        raise RewriteError("pi_copy site has parallel wires")
    d = d.copy()
    (rest,) = [w for w in d.incident(p) if w != link]
    others = [w for w in d.incident(s) if w != link]
    d.remove_wire(link)
    d.reattach(rest, p, s)
    d.remove_spider(p)
    d.set_phase(s, -d.spider(s).phase)
    for w in others:
        wire = d.wire(w)
        t = wire.other(s)
        d.remove_wire(w)
        q = d.add_spider(sp.color, Phase.pi())
        d.add_wire(s, q, REGULAR)
        d.add_wire(q, t, wire.kind)
    return d


def _remove_identity(d: ZXDiagram, sid: int, need_h: bool) -> ZXDiagram:
    _interior(d, sid)
    s = d.spider(sid)
    if s.phase != Phase() or d.degree(sid) != 2:
        raise RewriteError("identity needs a phase-0 spider of degree 2")
    _no_loops(d, sid)
    w1, w2 = (d.wire(w) for w in d.incident(sid))
    if need_h and not (w1.kind == HADAMARD and w2.kind == HADAMARD):
        raise RewriteError("hadamard_cancel needs two Hadamard wires")
    d = d.copy()
    n1, n2 = w1.other(sid), w2.other(sid)
    d.remove_spider(sid)
    d.add_wire(n1, n2, compose_kinds(w1.kind, w2.kind))
    return d


def identity_remove(d: ZXDiagram, site: int) -> ZXDiagram:
    return _remove_identity(d, site, need_h=False)


def hadamard_cancel(d: ZXDiagram, site: int) -> ZXDiagram:
    """Two Hadamards meeting at a plain identity spider cancel."""
    return _remove_identity(d, site, need_h=True)


def hopf(d: ZXDiagram, site: tuple[int, int]) -> ZXDiagram:
    a, b = site
    _interior(d, a, b)
    if a == b:
        raise RewriteError("hopf needs two distinct spiders")
    same = d.spider(a).color == d.spider(b).color
    kind = HADAMARD if same else REGULAR
    par = [w for w in d.wires_between(a, b) if d.wire(w).kind == kind]
    if len(par) < 2:
        raise RewriteError("hopf needs two parallel wires of the matching kind")
    d = d.copy()
    d.remove_wire(par[0])
    d.remove_wire(par[1])
    return d


def bialgebra(d: ZXDiagram, site: int) -> ZXDiagram:
    """Regular wire between phase-0 Z and X spiders becomes a complete bipartite graph."""
    w = d.wire(site)
    if w.kind != REGULAR or w.is_loop:
        raise RewriteError("bialgebra needs a regular wire")
    a, b = w.a, w.b
    _interior(d, a, b)
    if d.spider(a).color == d.spider(b).color:
        raise RewriteError("bialgebra needs opposite colors")
    for s in (a, b):
        _no_loops(d, s)
        if d.spider(s).phase != Phase():
            raise RewriteError("bialgebra needs phase-0 spiders")
    if len(d.wires_between(a, b)) != 1:
        raise RewriteError("bialgebra site has parallel wires")
    d = d.copy()
    d.remove_wire(site)
    ca, cb = d.spider(a).color, d.spider(b).color
    new_a, new_b = [], []
    for src, color, bucket in ((a, cb, new_a), (b, ca, new_b)):
        for x in d.incident(src):
            wire = d.wire(x)
            t = wire.other(src)
            d.remove_wire(x)
            q = d.add_spider(color)
            d.add_wire(q, t, wire.kind)
            bucket.append(q)
        d.remove_spider(src)
    for x in new_a:
        for y in new_b:
            d.add_wire(x, y, REGULAR)
    return d


RULES: dict[str, Callable] = {
    "fuse": fuse,
    "color_change": color_change,
    "pi_copy": pi_copy,
    "identity_remove": identity_remove,
    "hadamard_cancel": hadamard_cancel,
    "hopf": hopf,
    "bialgebra": bialgebra,
}


def apply_rewrite(d: ZXDiagram, rule: str, site) -> ZXDiagram:
    try:
        fn = RULES[rule]
    except KeyError:
        raise RewriteError(f"unknown rule {rule!r}") from None
    try:
        return fn(d, site)
    except RewriteError:
        raise
    except DiagramError as exc:
        raise RewriteError(f"{rule} does not apply at {site!r}: {exc}") from exc


def candidate_sites(d: ZXDiagram, rule: str) -> list:
    """All sites where ``rule`` applies (checked by attempting it)."""
    if rule in ("fuse", "bialgebra"):
        pool: list = d.wire_ids()
    elif rule == "hopf":
        pool = sorted({(min(w.a, w.b), max(w.a, w.b)) for w in d.wires.values() if not w.is_loop})
    else:
        pool = d.spider_ids()
    out = []
    for site in pool:
        try:
            apply_rewrite(d, rule, site)
        except RewriteError:
            continue
        out.append(site)
    return out
