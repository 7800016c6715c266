"""Gate-list circuits: parsing, conversion to ZX, and a dense unitary oracle."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..phase import Phase, PhaseError
from .diagram import HADAMARD, IO, REGULAR, ZXDiagram, toggle

ONE_QUBIT = {"H", "X", "Z", "S", "T", "RZ", "RX"}
TWO_QUBIT = {"CZ", "CX"}
FIXED_PHASE = {"X": Phase(1, 0), "Z": Phase(1, 0), "S": Phase(1, 1), "T": Phase(1, 2)}


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    phase: Phase | None = None

    def __str__(self) -> str:
        args = " ".join(map(str, self.qubits))
        if self.phase is not None:
            f = self.phase.fraction()
            args += f" {f.numerator}/{f.denominator}" if f.denominator > 1 else f" {f.numerator}"
        return f"{self.name} {args}"


@dataclass(frozen=True)
class Circuit:
    qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def to_text(self) -> str:
        return "\n".join([f"qubits {self.qubits}"] + [str(g) for g in self.gates]) + "\n"

    def count(self, *names: str) -> int:
        return sum(1 for g in self.gates if g.name in names)


def parse_circuit(text: str) -> Circuit:
    n: int | None = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0].upper()
        if n is None:
            if head != "QUBITS" or len(tok) != 2 or not tok[1].isdigit() or int(tok[1]) < 1:
                raise CircuitError(f"line {lineno}: expected 'qubits N' header")
            n = int(tok[1])
            continue
        try:
            if head in ("RZ", "RX"):
                if len(tok) != 3:
                    raise CircuitError(f"line {lineno}: {head} takes a qubit and an angle")
                g = Gate(head, (int(tok[1]),), Phase.parse(tok[2]))
            elif head in ONE_QUBIT:
                if len(tok) != 2:
                    raise CircuitError(f"line {lineno}: {head} takes one qubit")
                g = Gate(head, (int(tok[1]),))
            elif head in TWO_QUBIT:
                if len(tok) != 3:
                    raise CircuitError(f"line {lineno}: {head} takes two qubits")
                g = Gate(head, (int(tok[1]), int(tok[2])))
                if g.qubits[0] == g.qubits[1]:
                    raise CircuitError(f"line {lineno}: {head} on a single qubit")
            else:
                raise CircuitError(f"line {lineno}: unknown gate {tok[0]!r}")
        except (ValueError, PhaseError) as exc:
            if isinstance(exc, CircuitError):
                raise
            raise CircuitError(f"line {lineno}: {exc}") from exc
        if any(q < 0 or q >= n for q in g.qubits):
            raise CircuitError(f"line {lineno}: qubit index out of range")
        gates.append(g)
    if n is None:
        raise CircuitError("empty circuit: missing 'qubits N' header")
    return Circuit(n, tuple(gates))


def from_circuit(circ: Circuit) -> ZXDiagram:
    """Translate a circuit into a ZX diagram with one boundary per qubit end."""
    d = ZXDiagram()
    frontier = []
    pending = []
    for q in range(circ.qubits):
        frontier.append(d.add_spider("Z", io=IO("in", q)))
        pending.append(REGULAR)
    d.inputs = tuple(frontier)

    def extend(q: int, color: str, phase: Phase) -> int:
        s = d.add_spider(color, phase)
        d.add_wire(frontier[q], s, pending[q])
        frontier[q], pending[q] = s, REGULAR
        return s

    for g in circ.gates:
        if g.name == "H":
            pending[g.qubits[0]] = toggle(pending[g.qubits[0]])
        elif g.name in ("Z", "S", "T", "RZ"):
            extend(g.qubits[0], "Z", g.phase if g.phase is not None else FIXED_PHASE[g.name])
        elif g.name in ("X", "RX"):
            extend(g.qubits[0], "X", g.phase if g.phase is not None else FIXED_PHASE[g.name])
        elif g.name == "CZ":
            a = extend(g.qubits[0], "Z", Phase())
            b = extend(g.qubits[1], "Z", Phase())
            d.add_wire(a, b, HADAMARD)
        elif g.name == "CX":
            a = extend(g.qubits[0], "Z", Phase())
            b = extend(g.qubits[1], "X", Phase())
            d.add_wire(a, b, REGULAR)
    outs = []
    for q in range(circ.qubits):
        o = d.add_spider("Z", io=IO("out", q))
        d.add_wire(frontier[q], o, pending[q])
        outs.append(o)
    d.outputs = tuple(outs)
    return d


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _one_qubit_matrix(g: Gate) -> np.ndarray:
    if g.name == "H":
        return _H
    ph = g.phase if g.phase is not None else FIXED_PHASE[g.name]
    rz = np.diag([1, np.exp(1j * ph.radians())])
    return _H @ rz @ _H if g.name in ("X", "RX") else rz


def circuit_unitary(circ: Circuit) -> np.ndarray:
    """Dense unitary with qubit 0 as the most significant bit.

    Gates are applied exactly (X is ``[[0,1],[1,0]]`` up to the global phase
    of ``H RZ(pi) H``, which is exact here).
    """
    n = circ.qubits
    u = np.eye(2**n, dtype=complex).reshape([2] * n + [2**n])
    for g in circ.gates:
        if g.name in TWO_QUBIT:
            c, t = g.qubits
            u = np.moveaxis(u, (c, t), (0, 1)).copy()
            if g.name == "CZ":
                u[1, 1] *= -1
            else:
                u[1] = u[1, ::-1].copy()
            u = np.moveaxis(u, (0, 1), (c, t))
        else:
            q = g.qubits[0]
            u = np.moveaxis(np.tensordot(_one_qubit_matrix(g), u, axes=([1], [q])), 0, q)
    return u.reshape(2**n, 2**n)


def output_distribution(circ: Circuit) -> np.ndarray:
    """Z-basis outcome probabilities of ``circ`` applied to ``|0...0>``."""
    amp = circuit_unitary(circ)[:, 0]
    return np.abs(amp) ** 2


CLIFFORD_T = ("H", "S", "T", "X", "Z", "CZ", "CX")


def random_circuit(rng: np.random.Generator, qubits: int, depth: int,
                   gateset: tuple[str, ...] = CLIFFORD_T) -> Circuit:
    """Layered random circuit: each layer acts on disjoint qubits."""
    gates: list[Gate] = []
    singles = [g for g in gateset if g in ONE_QUBIT]
    doubles = [g for g in gateset if g in TWO_QUBIT]
    for _ in range(depth):
        free = list(rng.permutation(qubits))
        while free:
            if len(free) >= 2 and doubles and rng.random() < 0.4:
                a, b = int(free.pop()), int(free.pop())
                gates.append(Gate(doubles[rng.integers(len(doubles))], (a, b)))
            else:
                q = int(free.pop())
                gates.append(Gate(singles[rng.integers(len(singles))], (q,)))
    return Circuit(qubits, tuple(gates))
