"""Fourier-type bases, coefficient decompositions and the change-of-basis
machinery used by the interference spectrum and the optimization problem.

Two bases are used throughout: the integer-frequency basis (offset 0) and
the half-offset basis (offset 1/(2N)).  A sequence s with ||s||^2 = N has
coefficient vectors alpha (integer basis) and beta (half-offset basis);
alpha = T beta and beta = T* alpha for the unitary change-of-basis matrix
built here.  Inner products are conjugate-linear in the first argument.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, NormViolation
from .model import NORM_TOL, SpreadingSequence

# Denominators 1 - exp(2 pi j theta) below never vanish: theta is always an
# odd multiple of 1/(2N) away from any integer.  Guard anyway.
_DENOM_FLOOR = 1e-12


def basis_vector(m: int, offset: float, n_chips: int) -> np.ndarray:
    """Basis vector with n-th component exp(2 pi j (n-1)(m/N + offset)).

    m is 1-based in {1..N}; the first component is always 1.
    """
    if not 1 <= m <= n_chips:
        raise IndexOutOfRange(f"m = {m} outside 1..{n_chips}")
    n = np.arange(n_chips)
    return np.exp(2j * np.pi * n * (m / n_chips + offset))


def basis_matrix(offset: float, n_chips: int) -> np.ndarray:
    """N x N matrix whose m-th column is basis_vector(m, offset, N)."""
    n = np.arange(n_chips)[:, None]
    m = np.arange(1, n_chips + 1)[None, :]
    return np.exp(2j * np.pi * n * (m / n_chips + offset))


@dataclass(frozen=True)
class SpectralCoefficients:
    """Coefficients of one sequence in the two bases."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = np.ascontiguousarray(np.asarray(getattr(self, name), np.complex128))
            v.flags.writeable = False
            object.__setattr__(self, name, v)
        if self.alpha.shape != self.beta.shape or self.alpha.ndim != 1:
            raise DimensionMismatch("alpha and beta must be 1-d and equal length")

    @property
    def n_chips(self):
        return self.alpha.shape[0]


@dataclass(frozen=True)
class TransformPair:
    """Unitary change-of-basis matrices between the two coefficient vectors.

    alpha_from_beta maps beta -> alpha; beta_from_alpha maps alpha -> beta
    and equals the conjugate transpose of alpha_from_beta.  Real parts of
    beta_from_alpha are exactly 1/N by construction; imag_kernel holds
    N * Im[beta_from_alpha], i.e. sin(t)/(1 - cos(t)) evaluated at
    t = 2 pi ((n - m)/N - 1/(2N)).
    """

    alpha_from_beta: np.ndarray
    beta_from_alpha: np.ndarray
    imag_kernel: np.ndarray

    @property
    def n_chips(self):
        return self.imag_kernel.shape[0]


def build_transforms(n_chips: int) -> TransformPair:
    """Construct the transform pair and cross-check it two independent ways.

    beta_from_alpha is assembled from the exact closed form
    (1 + j sin(t)/(1-cos(t))) / N, which pins its real part to exactly 1/N;
    it is then verified against the geometric-sum closed form
    2 / (N (1 - exp(j t'))) and against the explicit change-of-basis product
    between the two basis matrices.  Discrepancy beyond 1e-8 aborts.
    """
    N = n_chips
    m = np.arange(1, N + 1)
    # theta[m-1, n-1] for entry (m, n)
    theta_hat = 2 * np.pi * ((m[None, :] - m[:, None]) / N - 1.0 / (2 * N))
    kernel = np.sin(theta_hat) / (1.0 - np.cos(theta_hat))
    beta_from_alpha = (1.0 + 1j * kernel) / N
    alpha_from_beta = beta_from_alpha.conj().T.copy()

    # route 1: geometric-sum closed form
    denom = 1.0 - np.exp(1j * theta_hat)
    assert np.abs(denom).min() > _DENOM_FLOOR
    closed = 2.0 / (N * denom)
    err = np.abs(beta_from_alpha - closed).max()
    if err > 1e-8:
        raise AssertionError(f"transform construction drifted from closed form: {err}")

    # route 2: explicit change-of-basis product (1/N) W(0)* W(1/(2N))
    w0 = basis_matrix(0.0, N)
    wh = basis_matrix(1.0 / (2 * N), N)
    product = w0.conj().T @ wh / N
    err = np.abs(alpha_from_beta - product).max()
    if err > 1e-8:
        raise AssertionError(f"transform disagrees with basis product: {err}")

    for a in (alpha_from_beta, beta_from_alpha, kernel):
        a.flags.writeable = False
    return TransformPair(alpha_from_beta, beta_from_alpha, kernel)


def decompose(seq: SpreadingSequence) -> SpectralCoefficients:
    """Project a sequence onto both bases: coeff_m = <w_m, s> / sqrt(N)."""
    seq.check_norm(NORM_TOL)
    N = len(seq)
    alpha = basis_matrix(0.0, N).conj().T @ seq.chips / np.sqrt(N)
    beta = basis_matrix(1.0 / (2 * N), N).conj().T @ seq.chips / np.sqrt(N)
    return SpectralCoefficients(alpha, beta)


def reconstruct(alpha: np.ndarray, offset: float = 0.0) -> np.ndarray:
    """Chips from coefficients: s = W(offset) alpha / sqrt(N)."""
    alpha = np.asarray(alpha, np.complex128)
    N = alpha.shape[0]
    return basis_matrix(offset, N) @ alpha / np.sqrt(N)


@dataclass(frozen=True)
class RealEmbedding:
    """Real embedding (Re; Im) of the coefficient vectors and transform."""

    alpha_r: np.ndarray
    beta_r: np.ndarray
    beta_from_alpha_r: np.ndarray


def embed_vector(v: np.ndarray) -> np.ndarray:
    """Complex length-N vector -> real length-2N vector (Re; Im)."""
    v = np.asarray(v, np.complex128)
    return np.concatenate([v.real, v.imag])


def unembed_vector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, float)
    N = v.shape[0] // 2
    return v[:N] + 1j * v[N:]


def embed_matrix(mat: np.ndarray) -> np.ndarray:
    """Complex N x N matrix -> real orthogonal 2N x 2N block matrix."""
    return np.block([[mat.real, -mat.imag], [mat.imag, mat.real]])


def real_embed(coeffs: SpectralCoefficients, transforms: TransformPair) -> RealEmbedding:
    """Embed alpha, beta and the beta-from-alpha map over the reals."""
    if coeffs.n_chips != transforms.n_chips:
        raise DimensionMismatch("coefficients and transforms disagree on N")
    emb = embed_matrix(transforms.beta_from_alpha)
    emb.flags.writeable = False
    return RealEmbedding(embed_vector(coeffs.alpha), embed_vector(coeffs.beta), emb)
