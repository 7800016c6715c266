import numpy as np
import pytest

from zxbqc.runtime import KERNELS
from zxbqc.zx.circuit import random_circuit


def seeded_circuits(n, qubits=(2, 4), depth=(2, 6), seed=0):
    """Deterministic Clifford+T circuits used across test modules."""
    out = []
    for i in range(n):
        rng = np.random.default_rng([seed, i])
        q = int(rng.integers(qubits[0], qubits[1] + 1))
        dpt = int(rng.integers(depth[0], depth[1] + 1))
        out.append(random_circuit(rng, q, dpt))
    return out


@pytest.fixture(params=sorted(KERNELS))
def backend(request):
    return request.param


CRITERIA: dict[str, tuple[bool, str]] = {}


def record(name: str, ok: bool, detail: str = "") -> None:
    """Store one acceptance verdict; printed in the terminal summary."""
    CRITERIA[name] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA, key=lambda n: (int(n.split()[1].rstrip("abc")), n)):
        ok, detail = CRITERIA[name]
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else ""))
