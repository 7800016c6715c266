"""Drive the shot kernel: draw per-shot secrets, run chunks, collect results."""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..obfuscate import ObfuscatedProgram
from .backend import get_kernel
from .compile import Compiled, compile_program

CHUNK = 1024
ENUMERATE_LIMIT = 12


class RuntimeFailure(RuntimeError):
    pass


@dataclass
class ShotData:
    """Per-shot arrays (rows are shots, columns measurement slots)."""

    beta: np.ndarray
    bmask: np.ndarray
    coins: np.ndarray
    angles: np.ndarray
    outcomes: np.ndarray
    xz: np.ndarray
    out_bits: np.ndarray
    dist: np.ndarray
    weight: np.ndarray

    @classmethod
    def concat(cls, parts: list[ShotData]) -> ShotData:
        return cls(*(np.concatenate([getattr(p, f) for p in parts]) for f in cls.__dataclass_fields__))


def draw_secrets(c: Compiled, n: int, rng: np.random.Generator, masks: bool = True):
    """Fresh beta, mask bits, Bell-pair coins and Born uniforms for ``n`` shots."""
    mod = 2 ** (c.k + 1)
    beta = rng.integers(0, mod, size=(n, c.n_parents), dtype=np.int64)
    beta *= c.split_parent[None, :]
    bmask = rng.integers(0, 2, size=(n, c.n_slots), dtype=np.uint8)
    if not masks:
        bmask[:] = 0
    coins = rng.integers(0, 2, size=(n, max(len(c.pairs), 1)), dtype=np.uint8)
    urand = rng.random(size=(n, c.n_slots))
    return beta, bmask, coins, urand


def run_compiled(c: Compiled, beta, bmask, coins, urand, forced=None, backend: str | None = None
                 ) -> ShotData:
    n = beta.shape[0]
    kernel = get_kernel(backend)
    angles = np.zeros((n, c.n_slots), dtype=np.int32)
    outcomes = np.zeros((n, c.n_slots), dtype=np.uint8)
    xz = np.zeros((n, c.n_slots), dtype=np.uint8)
    out_bits = np.zeros((n, c.n_outputs), dtype=np.uint8)
    dist = np.zeros((n, 2 ** c.n_outputs if c.exact else 1), dtype=np.float64)
    weight = np.zeros(n, dtype=np.float64)
    if forced is None:
        forced = np.zeros((0, c.n_slots), dtype=np.int8)
    kernel(c.instr, c.k, c.alpha, c.slot_parent, c.slot_role, c.slot_fixed, c.out_rank,
           c.x_ptr, c.x_idx, c.z_ptr, c.z_idx, c.final_slots, c.n_outputs,
           np.ascontiguousarray(beta), np.ascontiguousarray(bmask), np.ascontiguousarray(coins),
           np.ascontiguousarray(urand), np.ascontiguousarray(forced, dtype=np.int8),
           angles, outcomes, xz, out_bits, dist, weight, c.max_live)
    return ShotData(beta, bmask, coins, angles, outcomes, xz, out_bits, dist, weight)


def _chunk_job(args) -> ShotData:
    c, seed_seq, n, masks, backend = args
    rng = np.random.default_rng(seed_seq)
    return run_compiled(c, *draw_secrets(c, n, rng, masks), backend=backend)


@dataclass
class RunResult:
    compiled: Compiled
    shots: ShotData
    agents: int
    exact_distribution: np.ndarray | None = None
    branch_spread: float = 0.0
    branches: int = 0

    def histogram(self) -> dict[str, int]:
        bits = self.shots.out_bits
        keys = ["".join(map(str, row)) for row in bits.tolist()]
        out: dict[str, int] = {}
        for k in keys:
            out[k] = out.get(k, 0) + 1
        return dict(sorted(out.items()))

    def frequencies(self) -> np.ndarray:
        """Empirical distribution over outputs, rank 0 as the most significant bit."""
        n = self.compiled.n_outputs
        weights = 1 << np.arange(n - 1, -1, -1)
        idx = (self.shots.out_bits.astype(np.int64) * weights).sum(axis=1)
        return np.bincount(idx, minlength=2**n) / max(len(idx), 1)


def run_program(prog: ObfuscatedProgram, agents: int, samples: int, seed: int = 0,
                masks: bool = True, jobs: int = 1, backend: str | None = None,
                compiled: Compiled | None = None) -> RunResult:
    """Sample ``samples`` shots; each shot draws fresh secrets and Bell-pair coins."""
    if agents < 1:
        raise RuntimeFailure("need at least one agent")
    if samples < 1:
        raise RuntimeFailure("need at least one sample")
    c = compiled if compiled is not None else compile_program(prog, exact=False)
    sizes = [min(CHUNK, samples - i) for i in range(0, samples, CHUNK)]
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs_args = [(c, s, n, masks, backend) for s, n in zip(seqs, sizes)]
    if jobs > 1 and len(sizes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_chunk_job, jobs_args))
    else:
        parts = [_chunk_job(a) for a in jobs_args]
    return RunResult(c, ShotData.concat(parts), agents)


def exact_distribution(prog: ObfuscatedProgram, agents: int, seed: int = 0, branches: int = 8,
                       masks: bool = True, backend: str | None = None) -> RunResult:
    """Exact output distribution.

    With few intermediate measurements every outcome branch is enumerated
    and weighted by its probability.  Otherwise ``branches`` Born-sampled
    branches are run, each yielding the exact conditional output distribution;
    these agree when the flow corrections are right, and their spread is
    reported as ``branch_spread``.
    """
    c = compile_program(prog, exact=True)
    rng = np.random.default_rng(seed)
    n_meas = c.n_slots - len(c.final_slots)
    if n_meas <= ENUMERATE_LIMIT:
        combos = np.array(list(itertools.product((0, 1), repeat=n_meas)), dtype=np.int8)
        combos = combos.reshape(-1, n_meas)
        forced = np.full((len(combos), c.n_slots), -1, dtype=np.int8)
        forced[:, :n_meas] = combos
        beta, bmask, coins, urand = draw_secrets(c, 1, rng, masks)
        rep = lambda a: np.repeat(a, len(combos), axis=0)  # noqa: E731
        data = run_compiled(c, rep(beta), rep(bmask), rep(coins), rep(urand), forced, backend)
        w = data.weight
        if w.sum() <= 0:
            raise RuntimeFailure("all branches have zero probability")
        dist = (w[:, None] * data.dist).sum(axis=0) / w.sum()
        live = data.dist[w > 1e-12]
    else:
        data = run_compiled(c, *draw_secrets(c, branches, rng, masks), backend=backend)
        dist = data.dist.mean(axis=0)
        live = data.dist
    spread = float(np.abs(live - dist[None, :]).max()) if len(live) else 0.0
    return RunResult(c, data, agents, dist, spread, len(data.weight))
