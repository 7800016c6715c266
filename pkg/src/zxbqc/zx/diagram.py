"""Core ZX diagram data model.

Spiders carrying an ``io`` tag are boundary nodes: each contributes one open
leg per appearance in ``inputs``/``outputs``.  Wires are either regular
(``"N"``) or Hadamard (``"H"``).  Public operations return new diagrams; the
in-place mutators are used by builders and rewrite code working on a copy.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from ..phase import Phase, parse_phase

REGULAR = "N"
HADAMARD = "H"


class DiagramError(ValueError):
    """Malformed diagram or failed rewrite precondition."""


@dataclass(frozen=True)
class IO:
    role: str  # "in" | "out"
    rank: int

    def __str__(self) -> str:
        return f"{self.role}:{self.rank}"

    @classmethod
    def parse(cls, text: str | None) -> IO | None:
        if text is None:
            return None
        role, _, rank = str(text).partition(":")
        if role not in ("in", "out") or not rank.isdigit():
            raise DiagramError(f"bad io tag {text!r}")
        return cls(role, int(rank))


@dataclass(frozen=True)
class Spider:
    id: int
    color: str
    phase: Phase = Phase()
    io: IO | None = None

    def __post_init__(self) -> None:
        if self.color not in ("Z", "X"):
            raise DiagramError(f"spider {self.id}: color must be Z or X")


@dataclass(frozen=True)
class Wire:
    a: int
    b: int
    kind: str = REGULAR

    def __post_init__(self) -> None:
        if self.kind not in (REGULAR, HADAMARD):
            raise DiagramError(f"wire kind must be N or H, got {self.kind!r}")

    def other(self, s: int) -> int:
        return self.b if s == self.a else self.a

    @property
    def is_loop(self) -> bool:
        return self.a == self.b


def toggle(kind: str) -> str:
    return HADAMARD if kind == REGULAR else REGULAR


def compose_kinds(k1: str, k2: str) -> str:
    """Kind of the wire obtained by joining two wires through an identity."""
    return REGULAR if k1 == k2 else HADAMARD


class ZXDiagram:
    def __init__(
        self,
        spiders: Iterable[Spider] = (),
        wires: Iterable[Wire] = (),
        inputs: Iterable[int] | None = None,
        outputs: Iterable[int] | None = None,
    ) -> None:
        self._spiders: dict[int, Spider] = {}
        self._wires: dict[int, Wire] = {}
        self._adj: dict[int, set[int]] = {}
        self._next_wire = 0
        for s in spiders:
            if s.id in self._spiders:
                raise DiagramError(f"duplicate spider id {s.id}")
            self._spiders[s.id] = s
            self._adj[s.id] = set()
        for w in wires:
            self.add_wire(w.a, w.b, w.kind)
        if inputs is None:
            inputs = self._ranked("in")
        if outputs is None:
            outputs = self._ranked("out")
        self.inputs: tuple[int, ...] = tuple(inputs)
        self.outputs: tuple[int, ...] = tuple(outputs)
        self._validate()

    def _ranked(self, role: str) -> list[int]:
        tagged = [(s.io.rank, s.id) for s in self._spiders.values() if s.io and s.io.role == role]
        tagged.sort()
        ranks = [r for r, _ in tagged]
        if ranks != list(range(len(ranks))):
            raise DiagramError(f"{role} ranks must be 0..n-1, got {ranks}")
        return [sid for _, sid in tagged]

    def _validate(self) -> None:
        for role, ids in (("in", self.inputs), ("out", self.outputs)):
            other = self.outputs if role == "in" else self.inputs
            for rank, sid in enumerate(ids):
                if sid not in self._spiders:
                    raise DiagramError(f"{role}put {rank} references unknown spider {sid}")
                io = self._spiders[sid].io
                if io != IO(role, rank) and sid not in other:
                    raise DiagramError(f"spider {sid} is {role}put {rank} but tagged {io}")

    # -- read access -----------------------------------------------------
    @property
    def spiders(self) -> dict[int, Spider]:
        return dict(self._spiders)

    @property
    def wires(self) -> dict[int, Wire]:
        return dict(self._wires)

    def spider(self, sid: int) -> Spider:
        try:
            return self._spiders[sid]
        except KeyError:
            raise DiagramError(f"no spider {sid}") from None

    def wire(self, wid: int) -> Wire:
        try:
            return self._wires[wid]
        except KeyError:
            raise DiagramError(f"no wire {wid}") from None

    def spider_ids(self) -> list[int]:
        return sorted(self._spiders)

    def wire_ids(self) -> list[int]:
        return sorted(self._wires)

    def incident(self, sid: int) -> list[int]:
        return sorted(self._adj[sid])

    def degree(self, sid: int) -> int:
        """Number of wire ends at ``sid`` (a self-loop counts twice)."""
        return sum(2 if self._wires[w].is_loop else 1 for w in self._adj[sid])

    def neighbors(self, sid: int) -> list[int]:
        return sorted({self._wires[w].other(sid) for w in self._adj[sid]} - {sid})

    def wires_between(self, a: int, b: int) -> list[int]:
        return sorted(w for w in self._adj[a] if self._wires[w].other(a) == b)

    def is_boundary(self, sid: int) -> bool:
        return self._spiders[sid].io is not None or sid in self.inputs or sid in self.outputs

    def interior_ids(self) -> list[int]:
        return [s for s in self.spider_ids() if not self.is_boundary(s)]

    def boundary_neighbors(self, sid: int) -> list[int]:
        return [n for n in self.neighbors(sid) if self.is_boundary(n)]

    def __len__(self) -> int:
        return len(self._spiders)

    def __iter__(self) -> Iterator[Spider]:
        return (self._spiders[s] for s in self.spider_ids())

    def next_spider_id(self) -> int:
        return max(self._spiders, default=-1) + 1

    # -- mutation (copies only) ------------------------------------------
    def copy(self) -> ZXDiagram:
        d = ZXDiagram.__new__(ZXDiagram)
        d._spiders = dict(self._spiders)
        d._wires = dict(self._wires)
        d._adj = {k: set(v) for k, v in self._adj.items()}
        d._next_wire = self._next_wire
        d.inputs = self.inputs
        d.outputs = self.outputs
        return d

    def add_spider(self, color: str, phase: Phase | str = Phase(), io: IO | None = None,
                   sid: int | None = None) -> int:
        sid = self.next_spider_id() if sid is None else sid
        if sid in self._spiders:
            raise DiagramError(f"duplicate spider id {sid}")
        self._spiders[sid] = Spider(sid, color, parse_phase(phase), io)
        self._adj[sid] = set()
        if io is not None:
            tagged = sorted((t.io.rank, t.id) for t in self._spiders.values()
                            if t.io and t.io.role == io.role)
            ids = tuple(i for _, i in tagged)
            if io.role == "in":
                self.inputs = ids
            else:
                self.outputs = ids
        return sid

    def add_wire(self, a: int, b: int, kind: str = REGULAR) -> int:
        if a not in self._spiders or b not in self._spiders:
            raise DiagramError(f"wire endpoint missing: {a}-{b}")
        wid = self._next_wire
        self._next_wire += 1
        self._wires[wid] = Wire(a, b, kind)
        self._adj[a].add(wid)
        self._adj[b].add(wid)
        return wid

    def remove_wire(self, wid: int) -> Wire:
        w = self._wires.pop(wid)
        self._adj[w.a].discard(wid)
        self._adj[w.b].discard(wid)
        return w

    def remove_spider(self, sid: int) -> None:
        for wid in list(self._adj[sid]):
            self.remove_wire(wid)
        del self._adj[sid]
        del self._spiders[sid]

    def set_phase(self, sid: int, phase: Phase) -> None:
        self._spiders[sid] = replace(self._spiders[sid], phase=phase)

    def add_phase(self, sid: int, phase: Phase) -> None:
        self.set_phase(sid, self._spiders[sid].phase + phase)

    def set_color(self, sid: int, color: str) -> None:
        self._spiders[sid] = replace(self._spiders[sid], color=color)

    def set_kind(self, wid: int, kind: str) -> None:
        self._wires[wid] = replace(self._wires[wid], kind=kind)

    def reattach(self, wid: int, old: int, new: int) -> None:
        """Move the ``old`` end(s) of wire ``wid`` onto spider ``new``."""
        w = self._wires[wid]
        a = new if w.a == old else w.a
        b = new if w.b == old else w.b
        self._adj[old].discard(wid)
        self._wires[wid] = Wire(a, b, w.kind)
        self._adj[a].add(wid)
        self._adj[b].add(wid)

    def move_io(self, old: int, new: int) -> None:
        """Transfer boundary role(s) from ``old`` to ``new``."""
        io = self._spiders[old].io
        self._spiders[new] = replace(self._spiders[new], io=io)
        self._spiders[old] = replace(self._spiders[old], io=None)
        self.inputs = tuple(new if s == old else s for s in self.inputs)
        self.outputs = tuple(new if s == old else s for s in self.outputs)

    # -- comparison / serialization ----------------------------------------
    def structure_key(self) -> tuple:
        ws = sorted((min(w.a, w.b), max(w.a, w.b), w.kind) for w in self._wires.values())
        return (tuple(sorted(self._spiders.values(), key=lambda s: s.id)), tuple(ws),
                self.inputs, self.outputs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ZXDiagram) and self.structure_key() == other.structure_key()

    def __hash__(self) -> int:
        return hash(self.structure_key())

    def __repr__(self) -> str:
        return f"ZXDiagram({len(self._spiders)} spiders, {len(self._wires)} wires)"

    def to_dict(self) -> dict:
        return {
            "spiders": [
                {"id": s.id, "color": s.color, "phase": str(s.phase),
                 "io": str(s.io) if s.io else None}
                for s in self
            ],
            "wires": [
                {"a": w.a, "b": w.b, "kind": w.kind}
                for w in (self._wires[i] for i in self.wire_ids())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> ZXDiagram:
        try:
            spiders = [
                Spider(int(s["id"]), s["color"], parse_phase(s.get("phase", "0")),
                       IO.parse(s.get("io")))
                for s in data["spiders"]
            ]
            wires = [Wire(int(w["a"]), int(w["b"]), w.get("kind", REGULAR)) for w in data["wires"]]
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram: {exc}") from exc
        return cls(spiders, wires)

    @classmethod
    def from_json(cls, text: str) -> ZXDiagram:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)
