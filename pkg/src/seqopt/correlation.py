"""Chip-synchronous correlation algebra.

Everything here reduces to the quadratic forms Q_l = s_i* B(l) s_k, where
B(l) is the bit-signed shift matrix.  Q_l splits into a wrapped part G_l
(scaled by the previous bit) and a main part H_l (scaled by the current
bit); the tables of G_l, H_l for l = 0..N are precomputed once per sequence
pair and drive the asynchronous correlation, its chip integrals, the
bit-averaged power and the per-frequency interference spectrum.

Known erratum handled here: the printed form of the asynchronous partial
correlations attaches the in-chip elapsed weight to the shift-l form and
the remaining weight to the shift-(l+1) form, which is discontinuous at
chip boundaries and disagrees with the direct waveform overlap.  The
default implementation uses the physical assignment (elapsed weight on the
shift-(l+1) form); pass printed_form=True to partial_corr to reproduce the
printed formula, including its stray self-sequence subscript in the wrapped
sum of the second correlation.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, TauOutsideChip
from .model import SpreadingSequence, SystemModel
from .spectral import SpectralCoefficients


@dataclass(frozen=True)
class BitPair:
    """Adjacent data bits (previous, current), each in {-1, +1}."""

    previous: int
    current: int

    def __post_init__(self):
        if self.previous not in (-1, 1) or self.current not in (-1, 1):
            raise ValueError("bits must be -1 or +1")


ALL_BIT_PAIRS = tuple(BitPair(p, c) for p in (-1, 1) for c in (-1, 1))


def shift_matrix(l: int, bits: BitPair, n_chips: int) -> np.ndarray:
    """Bit-signed shift matrix: [[0, prev*E_l], [cur*E_{N-l}, 0]].

    l = 0 gives cur * I, l = N gives prev * I.
    """
    N = n_chips
    if not 0 <= l <= N:
        raise IndexOutOfRange(f"shift {l} outside 0..{N}")
    mat = np.zeros((N, N))
    for r in range(l):
        mat[r, N - l + r] = bits.previous
    for r in range(N - l):
        mat[l + r, r] = bits.current
    return mat


def quad_form_parts(s_i: SpreadingSequence, s_k: SpreadingSequence, l: int):
    """Wrapped and main partial sums (G_l, H_l) of the shift-l quadratic form."""
    if len(s_i) != len(s_k):
        raise DimensionMismatch("sequences must have equal length")
    N = len(s_i)
    if not 0 <= l <= N:
        raise IndexOutOfRange(f"shift {l} outside 0..{N}")
    a, b = s_i.chips, s_k.chips
    wrapped = np.vdot(a[:l], b[N - l:])
    main = np.vdot(a[l:], b[:N - l])
    return wrapped, main


def quad_form_tables(s_i: SpreadingSequence, s_k: SpreadingSequence):
    """(G, H) arrays over all shifts l = 0..N, as length-(N+1) vectors."""
    N = len(s_i)
    if len(s_k) != N:
        raise DimensionMismatch("sequences must have equal length")
    a, b = s_i.chips, s_k.chips
    wrapped = np.empty(N + 1, np.complex128)
    main = np.empty(N + 1, np.complex128)
    for l in range(N + 1):
        wrapped[l] = np.vdot(a[:l], b[N - l:])
        main[l] = np.vdot(a[l:], b[:N - l])
    return wrapped, main


def quad_form(s_i: SpreadingSequence, s_k: SpreadingSequence, l: int,
              bits: BitPair) -> complex:
    """Q_l = s_i* B(l) s_k = prev * G_l + cur * H_l."""
    wrapped, main = quad_form_parts(s_i, s_k, l)
    return bits.previous * wrapped + bits.current * main


@dataclass(frozen=True)
class PartialCorrPair:
    """The two linear-in-tau pieces of the asynchronous correlation."""

    r: complex
    r_hat: complex

    @property
    def gamma(self) -> float:
        """Squared magnitude of the total correlation, |r + r_hat|^2."""
        return abs(self.r + self.r_hat) ** 2


def _literal_r_hat_sums(s_i, s_k, l):
    """Wrapped/main sums of the printed second correlation (verbatim).

    The wrapped sum pairs the reference sequence with itself, reproducing
    the stray subscript in the printed formula.
    """
    N = len(s_i)
    a, b = s_i.chips, s_k.chips
    wrapped = sum(np.conj(a[m - 1]) * a[(N - l + m - 2) % N] for m in range(1, l + 2))
    main = sum(np.conj(a[l + m]) * b[m - 1] for m in range(1, N - l))
    return wrapped, main


def partial_corr(s_i: SpreadingSequence, s_k: SpreadingSequence, tau: float,
                 n: int, l: int, bits: BitPair, model: SystemModel,
                 printed_form: bool = False) -> PartialCorrPair:
    """Split the asynchronous correlation at delay tau into its two pieces.

    Requires n*T + l*T_c <= tau < n*T + (l+1)*T_c.  The returned pieces are
    r, weighted by the elapsed time within the chip, and r_hat, weighted by
    the remaining time; r + r_hat equals the full waveform overlap integral
    and |r + r_hat|^2 is continuous across chip boundaries.
    """
    T = model.symbol_duration
    t_c = model.chip_duration
    lo = n * T + l * t_c
    if not lo <= tau < lo + t_c:
        raise TauOutsideChip(f"tau = {tau} outside [{lo}, {lo + t_c})")
    elapsed = tau - lo
    remaining = lo + t_c - tau
    if printed_form:
        wrapped_l, main_l = quad_form_parts(s_i, s_k, l)
        q_low = bits.previous * wrapped_l + bits.current * main_l
        wrapped_h, main_h = _literal_r_hat_sums(s_i, s_k, l)
        q_high = bits.previous * wrapped_h + bits.current * main_h
        return PartialCorrPair(elapsed * q_low, remaining * q_high)
    q_next = quad_form(s_i, s_k, l + 1, bits)
    q_this = quad_form(s_i, s_k, l, bits)
    return PartialCorrPair(elapsed * q_next, remaining * q_this)


def gamma_value(s_i, s_k, tau, n, l, bits, model) -> float:
    """|r + r_hat|^2 at delay tau (the asynchronous correlation power)."""
    return partial_corr(s_i, s_k, tau, n, l, bits, model).gamma


def gamma_chip_integral(q_l: complex, q_l1: complex, t_c: float) -> float:
    """Exact chip integral of the squared linear interpolation.

    Integral over one chip of |(tau - l T_c) Q_{l+1} + ((l+1) T_c - tau) Q_l|^2,
    which is (T_c^3 / 3)(|Q_l|^2 + |Q_{l+1}|^2 + Re[Q_l conj(Q_{l+1})]); the
    expression is symmetric in the two quadratic forms.
    """
    return (t_c ** 3 / 3.0) * (
        abs(q_l) ** 2 + abs(q_l1) ** 2 + (q_l * np.conj(q_l1)).real)


def shift_phases(l: int, n_chips: int):
    """Per-frequency phases of the shift-l correlation in the two bases.

    Returns (lam, lam_hat) with lam_m = exp(-2 pi j l m / N) and
    lam_hat_m = exp(-2 pi j l (m/N + 1/(2N))), m = 1..N.
    """
    N = n_chips
    m = np.arange(1, N + 1)
    lam = np.exp(-2j * np.pi * l * m / N)
    lam_hat = np.exp(-2j * np.pi * l * (m / N + 1.0 / (2 * N)))
    return lam, lam_hat


def bit_averaged_sq(s_i: SpreadingSequence, s_k: SpreadingSequence, l: int) -> float:
    """Average of |Q_l|^2 over the four equiprobable bit pairs.

    Equals |G_l|^2 + |H_l|^2 exactly (cross terms cancel); computed here by
    full enumeration so the spectral identity can be tested against it.
    """
    total = 0.0
    for bits in ALL_BIT_PAIRS:
        total += abs(quad_form(s_i, s_k, l, bits)) ** 2
    return total / 4.0


def bit_averaged_sq_spectral(c_i: SpectralCoefficients, c_k: SpectralCoefficients,
                             l: int) -> float:
    """Spectral route for the bit-averaged power of the shift-l form.

    (|sum_m lam_m conj(alpha_i) alpha_k|^2 + |sum_m lam_hat_m conj(beta_i)
    beta_k|^2) / 2.
    """
    if c_i.n_chips != c_k.n_chips:
        raise DimensionMismatch("coefficient lengths differ")
    lam, lam_hat = shift_phases(l, c_i.n_chips)
    u = np.conj(c_i.alpha) * c_k.alpha
    v = np.conj(c_i.beta) * c_k.beta
    return 0.5 * (abs(np.sum(lam * u)) ** 2 + abs(np.sum(lam_hat * v)) ** 2)


def cosine_weights(n_chips: int):
    """The two per-frequency cosine weights, each in [1/2, 3/2]."""
    m = np.arange(1, n_chips + 1)
    w_int = 1.0 + 0.5 * np.cos(2 * np.pi * m / n_chips)
    w_half = 1.0 + 0.5 * np.cos(2 * np.pi * (m / n_chips + 1.0 / (2 * n_chips)))
    return w_int, w_half


@dataclass(frozen=True)
class InterferenceSpectrum:
    """Per-frequency interference weights of a sequence pair.

    spectrum is computed from the complex coefficients, spectrum_real from
    the real embedding; they agree to rounding.
    """

    spectrum: np.ndarray
    spectrum_real: np.ndarray

    def total(self) -> float:
        return float(np.sum(self.spectrum))


def interference_spectrum(c_i: SpectralCoefficients,
                          c_k: SpectralCoefficients) -> InterferenceSpectrum:
    """Spectrum S_m combining coefficient powers with the cosine weights."""
    if c_i.n_chips != c_k.n_chips:
        raise DimensionMismatch("coefficient lengths differ")
    w_int, w_half = cosine_weights(c_i.n_chips)
    s = (np.abs(c_i.alpha) ** 2 * np.abs(c_k.alpha) ** 2 * w_int
         + np.abs(c_i.beta) ** 2 * np.abs(c_k.beta) ** 2 * w_half)
    # same quantity through the real embedding
    a_i = c_i.alpha.real ** 2 + c_i.alpha.imag ** 2
    a_k = c_k.alpha.real ** 2 + c_k.alpha.imag ** 2
    b_i = c_i.beta.real ** 2 + c_i.beta.imag ** 2
    b_k = c_k.beta.real ** 2 + c_k.beta.imag ** 2
    s_real = a_i * a_k * w_int + b_i * b_k * w_half
    return InterferenceSpectrum(s, s_real)


def spectrum_total(c_i: SpectralCoefficients, c_k: SpectralCoefficients) -> float:
    return interference_spectrum(c_i, c_k).total()
