"""Resource accounting: closed-form costs and counts taken from prepared programs.

``d`` is circuit depth, ``w`` width (qubits) and ``t`` the number of
two-qubit gates.  Formulas are evaluated as stated, including the
degenerate ``d == 2`` case where the protocol qubit count is zero; such
reports carry ``degenerate=True`` instead of being patched.
"""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass

from .obfuscate import ObfuscatedProgram
from .zx.circuit import Circuit


class ResourceError(ValueError):
    pass


@dataclass(frozen=True)
class ResourceReport:
    scheme: str
    agents: str
    qubits: int
    external_entanglement: int
    internal_entanglement: int
    degenerate: bool = False


def _positive(**kw: int) -> None:
    for name, v in kw.items():
        if not isinstance(v, int) or v < 1:
            raise ResourceError(f"{name} must be a positive integer, got {v!r}")


def ubqc_cost(d: int, w: int, variant: str = "single") -> ResourceReport:
    _positive(d=d, w=w)
    external = (4 * d + 1) * w
    internal = 8 * d * w
    if variant == "single":
        return ResourceReport("ubqc-single", "1", 2 * w + 1, external, internal)
    if variant == "multi":
        return ResourceReport("ubqc-multi", "many", 2 * external, external, internal)
    raise ResourceError(f"unknown variant {variant!r}")


def protocol_cost(d: int, w: int, t: int) -> ResourceReport:
    _positive(w=w)
    if not isinstance(d, int) or d < 2:
        raise ResourceError(f"depth must be at least 2, got {d!r}")
    if not isinstance(t, int) or t < 0 or 2 * t > d * w:
        raise ResourceError(f"two-qubit count must satisfy 0 <= t <= dw/2, got t={t!r}")
    return ResourceReport(
        "protocol", "many",
        3 * (d - 2) * w + 2 * t, (d - 1) * w + t, 2 * (d - 2) * w + 2 * t,
        degenerate=(d == 2),
    )


def circuit_parameters(circ: Circuit) -> tuple[int, int, int]:
    """(depth, width, two-qubit count) of a circuit, depth by ASAP layering."""
    level = [0] * circ.qubits
    for g in circ.gates:
        top = max(level[q] for q in g.qubits) + 1
        for q in g.qubits:
            level[q] = top
    return max(level, default=0), circ.qubits, sum(1 for g in circ.gates if len(g.qubits) == 2)


def measured_cost(prog: ObfuscatedProgram) -> ResourceReport:
    d, part = prog.diagram, prog.partition
    external = internal = 0
    for w in d.wires.values():
        if d.is_boundary(w.a) or d.is_boundary(w.b):
            continue
        if part.block_of[w.a] == part.block_of[w.b]:
            internal += 1
        else:
            external += 1
    return ResourceReport("measured", str(part.block_count), len(prog.qubits()), external, internal)


def comparison_table(d: int, w: int, t: int) -> list[ResourceReport]:
    return [ubqc_cost(d, w, "single"), ubqc_cost(d, w, "multi"), protocol_cost(d, w, t)]


_COLUMNS = ("scheme", "agents", "qubits", "external_entanglement", "internal_entanglement", "degenerate")


def format_table(rows: list[ResourceReport], fmt: str = "table") -> str:
    records = [asdict(r) for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        return buf.getvalue()
    if fmt != "table":
        raise ResourceError(f"unknown format {fmt!r}")
    cells = [list(_COLUMNS)] + [[str(r[c]) for c in _COLUMNS] for r in records]
    widths = [max(len(row[i]) for row in cells) for i in range(len(_COLUMNS))]
    lines = ["  ".join(v.ljust(widths[i]) for i, v in enumerate(row)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"
