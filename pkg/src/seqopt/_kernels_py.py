"""Pure-numpy implementations of the hot kernels.

Same contracts as the compiled module seqopt._kernels; the backend module
picks whichever is importable.  Kept dependency-free beyond numpy so the
package works without a C compiler.
"""

import numpy as np


def quartic_value_grad(a_emb, b_emb, z, w_int, w_half):
    """Objective and block gradients of the weighted quartic form.

    a_emb, b_emb: (K, 2N) real embeddings of the two coefficient vectors.
    z: (K, K) nonnegative weights.  w_int, w_half: (N,) cosine weights.
    Returns (value, grad_a, grad_b) where the gradients have the shape of
    the inputs.
    """
    K, twoN = a_emb.shape
    N = twoN // 2
    x_pow = a_emb[:, :N] ** 2 + a_emb[:, N:] ** 2
    y_pow = b_emb[:, :N] ** 2 + b_emb[:, N:] ** 2
    value = float(np.einsum("ik,im,km,m->", z, x_pow, x_pow, w_int)
                  + np.einsum("ik,im,km,m->", z, y_pow, y_pow, w_half))
    zs = z + z.T
    force_a = (zs @ x_pow) * w_int
    force_b = (zs @ y_pow) * w_half
    grad_a = 2.0 * a_emb * np.concatenate([force_a, force_a], axis=1)
    grad_b = 2.0 * b_emb * np.concatenate([force_b, force_b], axis=1)
    return value, grad_a, grad_b


def _interp_tables(table, grid_idx, nu, n_chips, t_c):
    """Elapsed/remaining-weighted table lookup at absolute grid indices.

    table: (N+1,) complex quadratic-form parts; grid_idx: integer array of
    delay cells (cell = t_c / nu).  Returns (vals, sym) where vals holds
    elapsed * table[l+1] + remaining * table[l] and sym the symbol index of
    each delay.
    """
    delta = t_c / nu
    cells_per_symbol = nu * n_chips
    sym = grid_idx // cells_per_symbol
    chip = (grid_idx // nu) % n_chips
    elapsed = (grid_idx % nu) * delta
    vals = elapsed * table[chip + 1] + (t_c - elapsed) * table[chip]
    return vals, sym


def mc_batch(q_wrap, q_main, bits, delay_idx, phase, taps, n_taps,
             gamma, ref, nu, n_chips, t_c, sqrt_p_half):
    """Per-trial fading and interference correlator outputs for a batch.

    q_wrap, q_main: (K, N+1) quadratic-form tables of (ref, k) pairs.
    bits: (B, K, n_bits) with bits[b, k, n] the bit of index -n.
    delay_idx: (B, K) delay grid cells (ref column must be 0).
    phase: (B, K) complex unit phasors exp(j psi_k).
    taps: (B, K, n_taps_max) channel taps, already scaled to cell mass.
    Returns (fading_out, interference_out), each (B,) float64.
    """
    B = bits.shape[0]
    K = q_wrap.shape[0]
    f_out = np.zeros(B)
    i_out = np.zeros(B)
    for k in range(K):
        nt = int(n_taps[k])
        has_fading = gamma[k] > 0.0 and nt > 0
        if k == ref:
            if has_fading:
                grid = np.arange(nt)
                wv, sym = _interp_tables(q_wrap[k], grid, nu, n_chips, t_c)
                mv, _ = _interp_tables(q_main[k], grid, nu, n_chips, t_c)
                prev = bits[:, k, :].take(sym + 1, axis=1)
                cur = bits[:, k, :].take(sym, axis=1)
                corr = prev * wv[None, :] + cur * mv[None, :]
                acc = np.sum(taps[:, k, :nt] * corr, axis=1)
                f_out += sqrt_p_half * gamma[k] * acc.real
            continue
        d_idx = delay_idx[:, k]
        wv0, _ = _interp_tables(q_wrap[k], d_idx, nu, n_chips, t_c)
        mv0, _ = _interp_tables(q_main[k], d_idx, nu, n_chips, t_c)
        direct = phase[:, k] * (bits[:, k, 1] * wv0 + bits[:, k, 0] * mv0)
        contrib = direct.real
        if has_fading:
            grid = d_idx[:, None] + np.arange(nt)[None, :]
            wv, sym = _interp_tables(q_wrap[k], grid, nu, n_chips, t_c)
            mv, _ = _interp_tables(q_main[k], grid, nu, n_chips, t_c)
            rows = np.arange(B)[:, None]
            prev = bits[rows, k, sym + 1]
            cur = bits[rows, k, sym]
            corr = prev * wv + cur * mv
            acc = np.sum(taps[:, k, :nt] * corr, axis=1)
            contrib = contrib + gamma[k] * (phase[:, k] * acc).real
        i_out += sqrt_p_half * contrib
    return f_out, i_out
