"""Dense tensor semantics of ZX diagrams (the correctness oracle)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .diagram import HADAMARD, ZXDiagram

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class IndeterminateComparison(ValueError):
    """Both tensors vanish, so proportionality is undefined."""


@dataclass
class TensorValue:
    """Amplitudes indexed by open legs: inputs by rank, then outputs by rank."""

    legs: tuple[str, ...]
    data: np.ndarray

    @property
    def n_inputs(self) -> int:
        return sum(1 for l in self.legs if l.startswith("in"))

    def as_matrix(self) -> np.ndarray:
        """Matrix ``M[out, in]`` with qubit 0 as the most significant bit."""
        ni = self.n_inputs
        no = len(self.legs) - ni
        flat = self.data.reshape(2**ni, 2**no)
        return flat.T

    def as_state(self) -> np.ndarray:
        return self.data.reshape(-1)


def _z_tensor(k: int, phase: complex) -> np.ndarray:
    if k == 0:
        return np.array(1 + phase, dtype=complex)
    t = np.zeros((2,) * k, dtype=complex)
    t[(0,) * k] = 1
    t[(1,) * k] = phase
    return t


def _factors(d: ZXDiagram):
    counter = itertools.count()
    legs_of: dict[int, list[int]] = {s: [] for s in d.spider_ids()}
    factors: list[tuple[np.ndarray, list[int]]] = []
    for wid in d.wire_ids():
        w = d.wire(wid)
        if w.kind == HADAMARD:
            la, lb = next(counter), next(counter)
            legs_of[w.a].append(la)
            legs_of[w.b].append(lb)
            factors.append((_H, [la, lb]))
        elif w.is_loop:
            if d.spider(w.a).color == "Z":
                continue  # a plain loop on a Z spider is the identity
            l = next(counter)
            legs_of[w.a] += [l, l]
        else:
            l = next(counter)
            legs_of[w.a].append(l)
            legs_of[w.b].append(l)
    open_labels: list[int] = []
    names: list[str] = []
    for role, ids in (("in", d.inputs), ("out", d.outputs)):
        for rank, sid in enumerate(ids):
            l = next(counter)
            legs_of[sid].append(l)
            open_labels.append(l)
            names.append(f"{role}:{rank}")
    for sid in d.spider_ids():
        s = d.spider(sid)
        legs = legs_of[sid]
        z = _z_tensor(len(legs), np.exp(1j * s.phase.radians()))
        if s.color == "Z":
            factors.append((z, legs))
            continue
        inner = [next(counter) for _ in legs]
        factors.append((z, inner))
        for i, l in zip(inner, legs):
            factors.append((_H, [i, l]))
    return factors, open_labels, tuple(names)


def _trace_repeats(t: np.ndarray, labels: list[int]) -> tuple[np.ndarray, list[int]]:
    while True:
        seen: dict[int, int] = {}
        for i, l in enumerate(labels):
            if l in seen:
                t = np.trace(t, axis1=seen[l], axis2=i)
                labels = [x for j, x in enumerate(labels) if j not in (seen[l], i)]
                break
            seen[l] = i
        else:
            return t, labels


def _contract_pair(a, la, b, lb):
    shared = [l for l in la if l in lb]
    ax_a = [la.index(l) for l in shared]
    ax_b = [lb.index(l) for l in shared]
    out = np.tensordot(a, b, axes=(ax_a, ax_b))
    labels = [l for l in la if l not in shared] + [l for l in lb if l not in shared]
    return out, labels


def tensor_of(d: ZXDiagram) -> TensorValue:
    factors, open_labels, names = _factors(d)
    items = [_trace_repeats(t, list(l)) for t, l in factors]
    while len(items) > 1:
        best = None
        for i in range(len(items)):
            li = set(items[i][1])
            for j in range(i + 1, len(items)):
                lj = set(items[j][1])
                if not li & lj:
                    continue
                size = len(li ^ lj)
                if best is None or size < best[0]:
                    best = (size, i, j)
        if best is None:
            order = sorted(range(len(items)), key=lambda k: items[k][0].ndim)
            i, j = sorted(order[:2])
        else:
            _, i, j = best
        (a, la), (b, lb) = items[i], items[j]
        merged = _contract_pair(a, la, b, lb)
        items = [it for k, it in enumerate(items) if k not in (i, j)] + [merged]
    if items:
        t, labels = items[0]
    else:
        t, labels = np.array(1, dtype=complex), []
    t = np.transpose(t, [labels.index(l) for l in open_labels]) if open_labels else t
    return TensorValue(names, np.asarray(t, dtype=complex))


def equal_up_to_scalar(a: ZXDiagram | TensorValue, b: ZXDiagram | TensorValue,
                       tol: float = 1e-9) -> bool:
    """True when the two tensors are proportional by a nonzero scalar."""
    ta = a if isinstance(a, TensorValue) else tensor_of(a)
    tb = b if isinstance(b, TensorValue) else tensor_of(b)
    if ta.legs != tb.legs:
        return False
    return proportional(ta.data, tb.data, tol)


def proportional(x: np.ndarray, y: np.ndarray, tol: float = 1e-9) -> bool:
    x, y = np.ravel(x), np.ravel(y)
    if x.shape != y.shape:
        return False
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx < 1e-12 and ny < 1e-12:
        raise IndeterminateComparison("both tensors are zero")
    if nx < 1e-12 or ny < 1e-12:
        return False
    return abs(np.vdot(x, y)) / (nx * ny) >= 1 - tol


def reduced_density_matrix(state: ZXDiagram | TensorValue, keep: list[int]) -> np.ndarray:
    """Trace-normalised density matrix of the kept output qubits of a state."""
    t = state if isinstance(state, TensorValue) else tensor_of(state)
    if t.n_inputs:
        raise ValueError("reduced_density_matrix expects a state (no inputs)")
    n = len(t.legs)
    traced = [q for q in range(n) if q not in keep]
    psi = np.transpose(t.data.reshape((2,) * n), list(keep) + traced)
    m = psi.reshape(2 ** len(keep), -1)
    rho = m @ m.conj().T
    tr = np.trace(rho).real
    if tr < 1e-15:
        raise IndeterminateComparison("state has zero norm")
    return rho / tr
