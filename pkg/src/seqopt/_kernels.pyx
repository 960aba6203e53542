# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: same contracts as seqopt._kernels_py."""

import numpy as np

cimport numpy as cnp


def quartic_value_grad(double[:, ::1] a_emb, double[:, ::1] b_emb,
                       double[:, ::1] z, double[::1] w_int, double[::1] w_half):
    """Objective and block gradients of the weighted quartic form."""
    cdef Py_ssize_t K = a_emb.shape[0]
    cdef Py_ssize_t N = w_int.shape[0]
    cdef Py_ssize_t i, k, m
    cdef double value = 0.0
    cdef double fa, fb

    x_np = np.empty((K, N)); y_np = np.empty((K, N))
    cdef double[:, ::1] x_pow = x_np
    cdef double[:, ::1] y_pow = y_np
    for i in range(K):
        for m in range(N):
            x_pow[i, m] = a_emb[i, m] * a_emb[i, m] + a_emb[i, N + m] * a_emb[i, N + m]
            y_pow[i, m] = b_emb[i, m] * b_emb[i, m] + b_emb[i, N + m] * b_emb[i, N + m]

    ga_np = np.empty((K, 2 * N)); gb_np = np.empty((K, 2 * N))
    cdef double[:, ::1] grad_a = ga_np
    cdef double[:, ::1] grad_b = gb_np
    for i in range(K):
        for m in range(N):
            fa = 0.0
            fb = 0.0
            for k in range(K):
                value += z[i, k] * (x_pow[i, m] * x_pow[k, m] * w_int[m]
                                    + y_pow[i, m] * y_pow[k, m] * w_half[m])
                fa += (z[i, k] + z[k, i]) * x_pow[k, m]
                fb += (z[i, k] + z[k, i]) * y_pow[k, m]
            fa *= w_int[m]
            fb *= w_half[m]
            grad_a[i, m] = 2.0 * a_emb[i, m] * fa
            grad_a[i, N + m] = 2.0 * a_emb[i, N + m] * fa
            grad_b[i, m] = 2.0 * b_emb[i, m] * fb
            grad_b[i, N + m] = 2.0 * b_emb[i, N + m] * fb
    return value, ga_np, gb_np


def mc_batch(cnp.complex128_t[:, ::1] q_wrap, cnp.complex128_t[:, ::1] q_main,
             double[:, :, ::1] bits, long long[:, ::1] delay_idx,
             cnp.complex128_t[:, ::1] phase, cnp.complex128_t[:, :, ::1] taps,
             long long[::1] n_taps, double[::1] gamma, Py_ssize_t ref,
             Py_ssize_t nu, Py_ssize_t n_chips, double t_c, double sqrt_p_half):
    """Per-trial fading and interference correlator outputs for a batch."""
    cdef Py_ssize_t B = bits.shape[0]
    cdef Py_ssize_t K = q_wrap.shape[0]
    cdef Py_ssize_t cells_per_symbol = nu * n_chips
    cdef double delta = t_c / nu
    cdef Py_ssize_t b, k, j, nt, grid, sym, chip, cell
    cdef double elapsed, prev, cur
    cdef double complex corr, acc, direct

    f_np = np.zeros(B); i_np = np.zeros(B)
    cdef double[::1] f_out = f_np
    cdef double[::1] i_out = i_np

    for b in range(B):
        for k in range(K):
            nt = <Py_ssize_t> n_taps[k]
            if k == ref:
                if gamma[k] > 0.0 and nt > 0:
                    acc = 0.0
                    for j in range(nt):
                        sym = j // cells_per_symbol
                        chip = (j // nu) % n_chips
                        cell = j % nu
                        elapsed = cell * delta
                        prev = bits[b, k, sym + 1]
                        cur = bits[b, k, sym]
                        corr = (prev * (elapsed * q_wrap[k, chip + 1]
                                        + (t_c - elapsed) * q_wrap[k, chip])
                                + cur * (elapsed * q_main[k, chip + 1]
                                         + (t_c - elapsed) * q_main[k, chip]))
                        acc = acc + taps[b, k, j] * corr
                    f_out[b] += sqrt_p_half * gamma[k] * acc.real
                continue
            grid = <Py_ssize_t> delay_idx[b, k]
            chip = (grid // nu) % n_chips
            elapsed = (grid % nu) * delta
            corr = (bits[b, k, 1] * (elapsed * q_wrap[k, chip + 1]
                                     + (t_c - elapsed) * q_wrap[k, chip])
                    + bits[b, k, 0] * (elapsed * q_main[k, chip + 1]
                                       + (t_c - elapsed) * q_main[k, chip]))
            direct = phase[b, k] * corr
            i_out[b] += sqrt_p_half * direct.real
            if gamma[k] > 0.0 and nt > 0:
                acc = 0.0
                for j in range(nt):
                    grid = <Py_ssize_t> delay_idx[b, k] + j
                    sym = grid // cells_per_symbol
                    chip = (grid // nu) % n_chips
                    cell = grid % nu
                    elapsed = cell * delta
                    prev = bits[b, k, sym + 1]
                    cur = bits[b, k, sym]
                    corr = (prev * (elapsed * q_wrap[k, chip + 1]
                                    + (t_c - elapsed) * q_wrap[k, chip])
                            + cur * (elapsed * q_main[k, chip + 1]
                                     + (t_c - elapsed) * q_main[k, chip]))
                    acc = acc + taps[b, k, j] * corr
                i_out[b] += sqrt_p_half * gamma[k] * (phase[b, k] * acc).real
    return f_np, i_np
