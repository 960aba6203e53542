"""System parameters, per-user channel descriptions and chip sequences.

Index convention, fixed project-wide: the math uses 1-based chip/frequency
indices m, n in {1..N}; storage is 0-based numpy, so array slot j holds the
quantity with math index j+1.  Chip sequences extend periodically,
chips[n mod N].
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionMismatch, NonPositiveParameter, NormViolation,
                     PreconditionError)

NORM_TOL = 1e-9

RECTANGULAR = "rectangular"
TRUNCATED_EXPONENTIAL = "truncated-exponential"


@dataclass(frozen=True)
class SystemModel:
    """Global link parameters.

    n_chips is the sequence length N, n_users the number of users K,
    power the common signal power, symbol_duration the symbol period in
    seconds and noise_density the one-sided AWGN density (two-sided
    density is noise_density / 2).  The chip duration is always
    symbol_duration / n_chips and is never stored.
    """

    n_chips: int
    n_users: int
    power: float
    symbol_duration: float
    noise_density: float

    def __post_init__(self):
        if self.n_chips < 1 or self.n_users < 1:
            raise NonPositiveParameter("n_chips and n_users must be >= 1")
        if self.power <= 0 or self.symbol_duration <= 0:
            raise NonPositiveParameter("power and symbol_duration must be > 0")
        if self.noise_density < 0:
            raise NonPositiveParameter("noise_density must be >= 0")

    @property
    def chip_duration(self):
        return self.symbol_duration / self.n_chips


@dataclass(frozen=True)
class UserChannel:
    """Rician channel parameters of one user.

    rician_gain scales the scattered component, profile_height is the
    supremum of the delay power profile, delay_span the profile support in
    whole symbols and profile_mass the integral of the profile.  For the
    worst-case rectangular profile the mass equals
    delay_span * profile_height * symbol_duration.
    """

    rician_gain: float
    profile_height: float
    delay_span: int
    profile_mass: float

    def __post_init__(self):
        if self.rician_gain < 0 or self.profile_height < 0 or self.profile_mass < 0:
            raise NonPositiveParameter("channel parameters must be >= 0")
        if self.delay_span < 1:
            raise NonPositiveParameter("delay_span must be >= 1")

    @classmethod
    def worst_case(cls, rician_gain, profile_height, delay_span, symbol_duration):
        """Channel with the rectangular-profile (maximal) mass."""
        mass = delay_span * profile_height * symbol_duration
        return cls(rician_gain, profile_height, delay_span, mass)


def worst_case_mass(channel: UserChannel, model: SystemModel) -> float:
    """Profile mass of the rectangular worst case, M * C * T."""
    return channel.delay_span * channel.profile_height * model.symbol_duration


@dataclass(frozen=True)
class SpreadingSequence:
    """Length-N complex chip vector with squared norm N."""

    chips: np.ndarray
    user_id: int = 0

    def __post_init__(self):
        chips = np.ascontiguousarray(np.asarray(self.chips, dtype=np.complex128))
        if chips.ndim != 1:
            raise DimensionMismatch("chips must be a 1-d vector")
        chips.flags.writeable = False
        object.__setattr__(self, "chips", chips)

    def __len__(self):
        return self.chips.shape[0]

    def chip(self, n):
        """Chip at 0-based index n under the periodic extension."""
        return self.chips[n % len(self)]

    def norm_error(self):
        return abs(np.vdot(self.chips, self.chips).real - len(self))

    def check_norm(self, tol=NORM_TOL):
        err = self.norm_error()
        if err > tol:
            raise NormViolation(
                f"user {self.user_id}: ||chips||^2 = {len(self) - err} or "
                f"{len(self) + err}, expected {len(self)} within {tol}")


@dataclass(frozen=True)
class DelayPowerProfile:
    """Delay power profile g(tau) on [0, span], zero outside.

    shape is RECTANGULAR or TRUNCATED_EXPONENTIAL; height is the supremum
    (attained at tau = 0), span the support length in seconds, rate the
    exponential decay constant (ignored for the rectangular shape).
    """

    shape: str
    height: float
    span: float
    rate: float = 0.0

    def __post_init__(self):
        if self.shape not in (RECTANGULAR, TRUNCATED_EXPONENTIAL):
            raise PreconditionError(f"unknown profile shape {self.shape!r}")
        if self.height < 0 or self.span <= 0:
            raise NonPositiveParameter("height must be >= 0 and span > 0")
        if self.shape == TRUNCATED_EXPONENTIAL and self.rate <= 0:
            raise NonPositiveParameter("exponential profile needs rate > 0")

    @classmethod
    def rectangular(cls, height, span):
        return cls(RECTANGULAR, height, span)

    @classmethod
    def truncated_exponential(cls, height, span, rate):
        return cls(TRUNCATED_EXPONENTIAL, height, span, rate)

    def density(self, tau):
        """g(tau), vectorized over tau."""
        tau = np.asarray(tau, dtype=float)
        inside = (tau >= 0) & (tau <= self.span)
        if self.shape == RECTANGULAR:
            vals = np.full_like(tau, self.height, dtype=float)
        else:
            vals = self.height * np.exp(-self.rate * np.clip(tau, 0.0, None))
        return np.where(inside, vals, 0.0)

    @property
    def mass(self):
        """Exact integral of g over its support."""
        if self.shape == RECTANGULAR:
            return self.height * self.span
        return self.height * (1.0 - np.exp(-self.rate * self.span)) / self.rate

    def cell_mass(self, edges):
        """Exact integral of g over each [edges[j], edges[j+1]] cell."""
        edges = np.clip(np.asarray(edges, dtype=float), 0.0, self.span)
        if self.shape == RECTANGULAR:
            return self.height * np.diff(edges)
        cdf = -self.height / self.rate * np.exp(-self.rate * edges)
        return np.diff(cdf)


@dataclass(frozen=True)
class ModelBundle:
    """A validated (model, channels, sequences) triple."""

    model: SystemModel
    channels: tuple
    sequences: tuple
    chip_matrix: np.ndarray = field(repr=False, default=None)

    @property
    def n_chips(self):
        return self.model.n_chips

    @property
    def n_users(self):
        return self.model.n_users


def validate_model(model, channels, sequences) -> ModelBundle:
    """Check every container invariant and return an immutable bundle.

    Raises DimensionMismatch when list lengths or sequence lengths do not
    match the model, NormViolation when a chip vector's squared norm is off
    by more than 1e-9, NonPositiveParameter for bad scalars (raised by the
    value types themselves at construction).
    """
    if len(channels) != model.n_users or len(sequences) != model.n_users:
        raise DimensionMismatch(
            f"expected {model.n_users} channels and sequences, got "
            f"{len(channels)} and {len(sequences)}")
    for seq in sequences:
        if len(seq) != model.n_chips:
            raise DimensionMismatch(
                f"user {seq.user_id}: sequence length {len(seq)} != N = {model.n_chips}")
        seq.check_norm()
    chip_matrix = np.array([s.chips for s in sequences])
    chip_matrix.flags.writeable = False
    return ModelBundle(model, tuple(channels), tuple(sequences), chip_matrix)
