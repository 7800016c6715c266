"""Pure-Python/numpy shot kernel.  Same contract as the compiled ``_kernel``."""
from __future__ import annotations

import math

import numpy as np

OP_ALLOC, OP_CZ, OP_DECOR, OP_MEAS, OP_PDONE, OP_FINAL = range(6)
ROLE_EVEN, ROLE_ODD = 0, 1
_S = 1 / math.sqrt(2)


def _index(L: int, p: int, v: int) -> tuple:
    idx = [slice(None)] * L
    idx[L - 1 - p] = v
    return tuple(idx)


def _hadamard(st: np.ndarray, L: int, p: int) -> None:
    i0, i1 = _index(L, p, 0), _index(L, p, 1)
    a0 = st[i0].copy()
    a1 = st[i1].copy()
    st[i0] = (a0 + a1) * _S
    st[i1] = (a0 - a1) * _S


def run_shots(instr, k, alpha, slot_parent, slot_role, slot_fixed, out_rank,
              x_ptr, x_idx, z_ptr, z_idx, final_slots, n_outputs,
              beta, bmask, coins, urand, forced,
              angles, outcomes, xz, out_bits, dist, weight, max_live=0) -> None:
    n_shots = beta.shape[0]
    n_par = alpha.shape[0]
    half = 1 << k
    mod = 1 << (k + 1)
    use_forced = forced.shape[0] > 0
    unit = math.pi / half
    for shot in range(n_shots):
        st = np.ones(1, dtype=complex)
        L = 0
        x = np.zeros(n_par, dtype=np.uint8)
        z = np.zeros(n_par, dtype=np.uint8)
        par = np.zeros(n_par, dtype=np.uint8)
        w = 1.0

        def angle_of(slot: int) -> int:
            pi_ = slot_parent[slot]
            role = slot_role[slot]
            if role == ROLE_EVEN:
                base = alpha[pi_] - beta[shot, pi_]
            elif role == ROLE_ODD:
                base = beta[shot, pi_]
            else:
                base = slot_fixed[slot]
            base += half * bmask[shot, slot]
            if x[pi_]:
                base = -base
            if z[pi_] and role != ROLE_ODD:
                base += half
            xz[shot, slot] = x[pi_] | (z[pi_] << 1)
            a = int(base) % mod
            angles[shot, slot] = a
            return a

        for op, a, b, c, d in instr:
            if op == OP_ALLOC:
                st = np.concatenate([st, st]) * _S
                L += 1
            elif op == OP_CZ:
                t = st.reshape((2,) * L)
                idx = [slice(None)] * L
                idx[L - 1 - a] = 1
                idx[L - 1 - b] = 1
                t[tuple(idx)] *= -1
            elif op == OP_DECOR:
                coin = coins[shot, d]
                t = st.reshape((2,) * L)
                if c == 0:
                    _hadamard(t, L, a if coin == 0 else b)
                elif coin:
                    _hadamard(t, L, a)
                    _hadamard(t, L, b)
            elif op == OP_MEAS:
                slot = b
                ang = angle_of(slot)
                e = complex(math.cos(ang * unit), math.sin(ang * unit))
                t = st.reshape((2,) * L)
                a0 = t[_index(L, a, 0)]
                a1 = t[_index(L, a, 1)]
                amp0 = (a0 + e * a1) * _S
                amp1 = (a0 - e * a1) * _S
                p0 = float(np.vdot(amp0, amp0).real)
                p1 = float(np.vdot(amp1, amp1).real)
                tot = p0 + p1
                if use_forced and forced[shot, slot] >= 0:
                    r = int(forced[shot, slot])
                else:
                    r = 1 if urand[shot, slot] * tot >= p0 else 0
                pr = p1 if r else p0
                w *= pr / tot
                outcomes[shot, slot] = r
                if pr <= 0.0:
                    w = 0.0
                    break
                st = (amp1 if r else amp0).reshape(-1) / math.sqrt(pr)
                L -= 1
                pi_ = slot_parent[slot]
                par[pi_] ^= r ^ bmask[shot, slot]
            elif op == OP_PDONE:
                pi_ = a
                if out_rank[pi_] >= 0:
                    out_bits[shot, out_rank[pi_]] = par[pi_]
                elif par[pi_]:
                    for j in range(x_ptr[pi_], x_ptr[pi_ + 1]):
                        x[x_idx[j]] ^= 1
                    for j in range(z_ptr[pi_], z_ptr[pi_ + 1]):
                        z[z_idx[j]] ^= 1
            elif op == OP_FINAL:
                t = st.reshape((2,) * L)
                ar = np.arange(1 << L)
                out_idx = np.zeros(1 << L, dtype=np.int64)
                for p in range(L):
                    slot = final_slots[p]
                    ang = angle_of(slot)
                    e = complex(math.cos(ang * unit), math.sin(ang * unit))
                    i0, i1 = _index(L, p, 0), _index(L, p, 1)
                    a0 = t[i0].copy()
                    a1 = t[i1].copy()
                    t[i0] = (a0 + e * a1) * _S
                    t[i1] = (a0 - e * a1) * _S
                    bit = ((ar >> p) & 1) ^ bmask[shot, slot]
                    rank = out_rank[slot_parent[slot]]
                    out_idx ^= bit << (n_outputs - 1 - rank)
                probs = np.abs(t.reshape(-1)) ** 2
                tot = probs.sum()
                np.add.at(dist[shot], out_idx, probs / tot if tot > 0 else probs)
        weight[shot] = w
