"""Independent brute-force evaluation routes.

These functions deliberately avoid the quadratic-form tables: correlations
are integrated from the chip waveforms themselves and chip integrals are
done by quadrature, so the algebraic identities in the correlation and snr
modules can be checked against a second, structurally different path.
"""

import numpy as np

from .correlation import ALL_BIT_PAIRS, partial_corr
from .model import SpreadingSequence, SystemModel


def waveform_overlap(s_i: SpreadingSequence, s_k: SpreadingSequence,
                     bits_k, tau: float, model: SystemModel) -> complex:
    """Exact integral over one symbol of b_k(t-tau) s_k(t-tau) conj(s_i(t)).

    bits_k[n] holds the bit with index -n, so bits_k[0] is the current bit
    and bits_k[1] the previous one.  The integrand is piecewise constant;
    the integral is taken exactly by merging the chip breakpoints of both
    waveforms.
    """
    N = len(s_i)
    T = model.symbol_duration
    t_c = model.chip_duration
    points = set()
    for j in range(N + 1):
        points.add(j * t_c)
    j0 = int(np.ceil(-tau / t_c))
    for j in range(j0, N + 1):
        t = tau + j * t_c
        if 0.0 <= t <= T:
            points.add(t)
    points = sorted(points)
    total = 0.0 + 0.0j
    for a, b in zip(points[:-1], points[1:]):
        if b - a < 1e-15:
            continue
        t_mid = 0.5 * (a + b)
        chip_i = int(np.floor(t_mid / t_c)) % N
        shifted = t_mid - tau
        chip_k = int(np.floor(shifted / t_c)) % N
        bit_idx = -int(np.floor(shifted / T))
        bit = bits_k[bit_idx]
        total += (b - a) * bit * s_k.chips[chip_k] * np.conj(s_i.chips[chip_i])
    return total


def gamma_by_waveform(s_i, s_k, bits, tau, model) -> float:
    """|overlap|^2 with the two adjacent bits (previous, current)."""
    val = waveform_overlap(s_i, s_k, (bits.current, bits.previous), tau, model)
    return abs(val) ** 2


def chip_integral_trapezoid(q_l: complex, q_l1: complex, t_c: float,
                            nodes: int = 10001) -> float:
    """Composite-trapezoid chip integral of the squared linear interpolation."""
    tau = np.linspace(0.0, t_c, nodes)
    vals = np.abs(tau * q_l1 + (t_c - tau) * q_l) ** 2
    return float(np.trapezoid(vals, tau))


def bit_enumerated_symbol_integral(s_i, s_k, model, simpson_nodes_check=True) -> float:
    """Sum over chips of the bit-averaged chip integral of the correlation power.

    Each chip integral is taken by 3-point Simpson on |r + r_hat|^2 evaluated
    through partial_corr; Simpson is exact for the piecewise-quadratic
    integrand, so this is the chip-level route for the master identity.
    """
    N = len(s_i)
    t_c = model.chip_duration
    total = 0.0
    for l in range(N):
        lo = l * t_c
        for bits in ALL_BIT_PAIRS:
            def g(tau):
                return partial_corr(s_i, s_k, tau, 0, l, bits, model).gamma
            total += 0.25 * (t_c / 6.0) * (
                g(lo) + 4.0 * g(lo + 0.5 * t_c) + g(lo + t_c - 1e-13 * t_c))
    return total


def finite_difference_gradient(func, x: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar function of a flat vector."""
    x = np.asarray(x, float)
    grad = np.empty_like(x)
    for j in range(x.size):
        xp = x.copy(); xp[j] += step
        xm = x.copy(); xm[j] -= step
        grad[j] = (func(xp) - func(xm)) / (2.0 * step)
    return grad
