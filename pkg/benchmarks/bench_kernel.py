"""Shot-kernel throughput: compiled extension versus the pure-Python fallback.

    python3 benchmarks/bench_kernel.py [--shots N] [--repeat R]

Both backends receive identical pre-drawn secrets, so the outputs are also
checked for bit-for-bit agreement.
"""
import argparse
import time

import numpy as np

from zxbqc.obfuscate import prepare
from zxbqc.runtime.backend import KERNELS
from zxbqc.runtime.compile import compile_program
from zxbqc.runtime.execute import draw_secrets, run_compiled
from zxbqc.zx.circuit import from_circuit, random_circuit

CASES = [(2, 3), (3, 5), (4, 6)]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--shots", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args()
    print(f"backends: {', '.join(sorted(KERNELS))}")
    print(f"{'qubits':>6} {'depth':>5} {'slots':>5} " + " ".join(f"{b + ' shots/s':>18}" for b in sorted(KERNELS))
          + f" {'speedup':>8}")
    for i, (w, depth) in enumerate(CASES):
        prog = prepare(from_circuit(random_circuit(np.random.default_rng(i), w, depth)), rng=i)
        c = compile_program(prog)
        secrets = draw_secrets(c, a.shots, np.random.default_rng(100 + i))
        rates, outs = {}, {}
        for name in sorted(KERNELS):
            best = float("inf")
            for _ in range(a.repeat):
                t0 = time.perf_counter()
                outs[name] = run_compiled(c, *secrets, backend=name)
                best = min(best, time.perf_counter() - t0)
            rates[name] = a.shots / best
        if len(outs) == 2:
            x, y = outs.values()
            assert np.array_equal(x.outcomes, y.outcomes) and np.array_equal(x.angles, y.angles)
        speed = rates.get("cython", 0) / rates["python"]
        print(f"{w:>6} {depth:>5} {c.n_slots:>5} " + " ".join(f"{rates[b]:>18.0f}" for b in sorted(KERNELS))
              + (f" {speed:>7.1f}x" if speed else f" {'-':>8}"))


if __name__ == "__main__":
    main()
