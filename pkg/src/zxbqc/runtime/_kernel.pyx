# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled shot kernel; semantics mirror ``_pykernel.run_shots`` exactly."""
import numpy as np

from libc.math cimport cos, sin, sqrt, M_PI
from libc.stdlib cimport malloc, free, calloc

cdef enum:
    OP_ALLOC = 0
    OP_CZ = 1
    OP_DECOR = 2
    OP_MEAS = 3
    OP_PDONE = 4
    OP_FINAL = 5

cdef double S = 0.70710678118654752440


cdef inline void _hadamard(double* re, double* im, int L, int p) noexcept nogil:
    cdef Py_ssize_t n = (<Py_ssize_t>1) << L
    cdef Py_ssize_t step = (<Py_ssize_t>1) << p
    cdef Py_ssize_t base, j, i1
    cdef double r0, i0, r1, q1
    base = 0
    while base < n:
        for j in range(base, base + step):
            i1 = j + step
            r0 = re[j]; i0 = im[j]; r1 = re[i1]; q1 = im[i1]
            re[j] = (r0 + r1) * S; im[j] = (i0 + q1) * S
            re[i1] = (r0 - r1) * S; im[i1] = (i0 - q1) * S
        base += 2 * step


cdef inline int _angle(int slot, int shot, int k, long long[::1] alpha, int[::1] slot_parent,
                       int[::1] slot_role, long long[::1] slot_fixed, long long[:, ::1] beta,
                       unsigned char[:, ::1] bmask, unsigned char* x, unsigned char* z,
                       unsigned char[:, ::1] xz, int[:, ::1] angles) noexcept nogil:
    cdef int pi_ = slot_parent[slot]
    cdef int role = slot_role[slot]
    cdef long long half = (<long long>1) << k
    cdef long long mod = half * 2
    cdef long long base
    if role == 0:
        base = alpha[pi_] - beta[shot, pi_]
    elif role == 1:
        base = beta[shot, pi_]
    else:
        base = slot_fixed[slot]
    base += half * bmask[shot, slot]
    if x[pi_]:
        base = -base
    if z[pi_] and role != 1:
        base += half
    xz[shot, slot] = x[pi_] | (z[pi_] << 1)
    base = base % mod
    if base < 0:
        base += mod
    angles[shot, slot] = <int>base
    return <int>base


def run_shots(int[:, ::1] instr, int k, long long[::1] alpha, int[::1] slot_parent,
              int[::1] slot_role, long long[::1] slot_fixed, int[::1] out_rank,
              int[::1] x_ptr, int[::1] x_idx, int[::1] z_ptr, int[::1] z_idx,
              int[::1] final_slots, int n_outputs,
              long long[:, ::1] beta, unsigned char[:, ::1] bmask, unsigned char[:, ::1] coins,
              double[:, ::1] urand, signed char[:, ::1] forced,
              int[:, ::1] angles, unsigned char[:, ::1] outcomes, unsigned char[:, ::1] xz,
              unsigned char[:, ::1] out_bits, double[:, ::1] dist, double[::1] weight,
              int max_live):
    cdef Py_ssize_t n_shots = beta.shape[0]
    cdef Py_ssize_t n_par = alpha.shape[0]
    cdef Py_ssize_t n_instr = instr.shape[0]
    cdef bint use_forced = forced.shape[0] > 0
    cdef Py_ssize_t cap = (<Py_ssize_t>1) << max_live
    cdef double unit = M_PI / ((<long long>1) << k)
    cdef double* re = <double*>malloc(cap * sizeof(double))
    cdef double* im = <double*>malloc(cap * sizeof(double))
    cdef unsigned char* x = <unsigned char*>calloc(n_par + 1, 1)
    cdef unsigned char* z = <unsigned char*>calloc(n_par + 1, 1)
    cdef unsigned char* par = <unsigned char*>calloc(n_par + 1, 1)
    cdef Py_ssize_t shot, t, i, j, n, step, lo, hi, i0, i1
    cdef int op, a, b, c, d, L, r, ang, pi_, p, slot, bit
    cdef double w, cr, ci, ar0, ai0, ar1, ai1, tr, ti, p0, p1, tot, pr, norm, m0r, m0i, m1r, m1i
    cdef long long mask, idx
    if re == NULL or im == NULL or x == NULL or z == NULL or par == NULL:
        free(re); free(im); free(x); free(z); free(par)
        raise MemoryError()
    try:
        with nogil:
            for shot in range(n_shots):
                re[0] = 1.0
                im[0] = 0.0
                L = 0
                w = 1.0
                for i in range(n_par):
                    x[i] = 0; z[i] = 0; par[i] = 0
                for t in range(n_instr):
                    op = instr[t, 0]; a = instr[t, 1]; b = instr[t, 2]
                    c = instr[t, 3]; d = instr[t, 4]
                    if op == OP_ALLOC:
                        n = (<Py_ssize_t>1) << L
                        for i in range(n):
                            re[i] *= S; im[i] *= S
                            re[i + n] = re[i]; im[i + n] = im[i]
                        L += 1
                    elif op == OP_CZ:
                        n = (<Py_ssize_t>1) << L
                        mask = ((<long long>1) << a) | ((<long long>1) << b)
                        for i in range(n):
                            if (i & mask) == mask:
                                re[i] = -re[i]; im[i] = -im[i]
                    elif op == OP_DECOR:
                        if c == 0:
                            _hadamard(re, im, L, a if coins[shot, d] == 0 else b)
                        elif coins[shot, d]:
                            _hadamard(re, im, L, a)
                            _hadamard(re, im, L, b)
                    elif op == OP_MEAS:
                        slot = b
                        ang = _angle(slot, shot, k, alpha, slot_parent, slot_role, slot_fixed,
                                     beta, bmask, x, z, xz, angles)
                        cr = cos(ang * unit); ci = sin(ang * unit)
                        n = (<Py_ssize_t>1) << (L - 1)
                        step = (<Py_ssize_t>1) << a
                        p0 = 0.0; p1 = 0.0
                        for j in range(n):
                            lo = j & (step - 1)
                            hi = j >> a
                            i0 = (hi << (a + 1)) | lo
                            i1 = i0 | step
                            tr = cr * re[i1] - ci * im[i1]
                            ti = cr * im[i1] + ci * re[i1]
                            m0r = re[i0] + tr; m0i = im[i0] + ti
                            m1r = re[i0] - tr; m1i = im[i0] - ti
                            p0 += m0r * m0r + m0i * m0i
                            p1 += m1r * m1r + m1i * m1i
                        p0 *= 0.5; p1 *= 0.5
                        tot = p0 + p1
                        if use_forced and forced[shot, slot] >= 0:
                            r = forced[shot, slot]
                        else:
                            r = 1 if urand[shot, slot] * tot >= p0 else 0
                        pr = p1 if r else p0
                        outcomes[shot, slot] = r
                        w *= pr / tot
                        if pr <= 0.0:
                            w = 0.0
                            break
                        norm = S / sqrt(pr)
                        for j in range(n):
                            lo = j & (step - 1)
                            hi = j >> a
                            i0 = (hi << (a + 1)) | lo
                            i1 = i0 | step
                            tr = cr * re[i1] - ci * im[i1]
                            ti = cr * im[i1] + ci * re[i1]
                            if r:
                                re[j] = (re[i0] - tr) * norm; im[j] = (im[i0] - ti) * norm
                            else:
                                re[j] = (re[i0] + tr) * norm; im[j] = (im[i0] + ti) * norm
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
                        n = (<Py_ssize_t>1) << L
                        for p in range(L):
                            slot = final_slots[p]
                            ang = _angle(slot, shot, k, alpha, slot_parent, slot_role, slot_fixed,
                                         beta, bmask, x, z, xz, angles)
                            cr = cos(ang * unit); ci = sin(ang * unit)
                            step = (<Py_ssize_t>1) << p
                            for i in range(n):
                                if i & step:
                                    continue
                                i1 = i | step
                                tr = cr * re[i1] - ci * im[i1]
                                ti = cr * im[i1] + ci * re[i1]
                                ar0 = re[i]; ai0 = im[i]
                                re[i] = (ar0 + tr) * S; im[i] = (ai0 + ti) * S
                                re[i1] = (ar0 - tr) * S; im[i1] = (ai0 - ti) * S
                        tot = 0.0
                        for i in range(n):
                            tot += re[i] * re[i] + im[i] * im[i]
                        if tot <= 0.0:
                            tot = 1.0
                        for i in range(n):
                            idx = 0
                            for p in range(L):
                                slot = final_slots[p]
                                bit = ((i >> p) & 1) ^ bmask[shot, slot]
                                idx ^= (<long long>bit) << (n_outputs - 1 - out_rank[slot_parent[slot]])
                            dist[shot, idx] += (re[i] * re[i] + im[i] * im[i]) / tot
                weight[shot] = w
    finally:
        free(re); free(im); free(x); free(z); free(par)
