"""Baseline spreading-sequence families: Gold codes, Chebyshev chaotic
sequences and random binary / unit-modulus families."""

from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateOrbit, InvalidSpec, NonPositiveParameter,
                     NotPreferredPair)
from .model import SpreadingSequence

# Verified preferred pairs (tap masks, LSB = x^0): three-valued
# crosscorrelation {-1, -t, t-2} with t = 2^floor((n+2)/2) + 1.
PREFERRED_PAIRS = {
    5: (0o45, 0o75),     # x^5+x^2+1, x^5+x^4+x^3+x^2+1
    6: (0o103, 0o147),   # x^6+x+1,   x^6+x^5+x^2+x+1
    7: (0o211, 0o217),   # x^7+x^3+1, x^7+x^3+x^2+x+1
}


@dataclass(frozen=True)
class LfsrSpec:
    """Fibonacci LFSR: taps as a bit mask including the x^n term."""

    degree: int
    taps: int
    seed_state: int = None

    def __post_init__(self):
        if self.degree < 2:
            raise NonPositiveParameter("degree must be >= 2")
        state = self.seed_state
        if state is None:
            state = (1 << self.degree) - 1
        state &= (1 << self.degree) - 1
        if state == 0:
            raise InvalidSpec("LFSR seed state must be nonzero")
        object.__setattr__(self, "seed_state", state)

    @property
    def period(self):
        return (1 << self.degree) - 1


def m_sequence(spec: LfsrSpec) -> np.ndarray:
    """One period of the +-1 m-sequence; checks the period is 2^n - 1."""
    n = spec.period
    state = spec.seed_state
    out = np.empty(n, dtype=np.int8)
    for i in range(n):
        out[i] = 1 - 2 * (state & 1)
        feedback = bin(state & spec.taps).count("1") & 1
        state = (state >> 1) | (feedback << (spec.degree - 1))
        if state == 0:
            raise InvalidSpec(f"taps {spec.taps:#o} drove the LFSR to zero")
    if state != spec.seed_state:
        raise InvalidSpec(f"taps {spec.taps:#o} are not primitive "
                          f"(period != {n})")
    return out


def periodic_crosscorrelation(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All N circular correlation values sum_n a_n b_{n+shift}."""
    return np.array([int(np.sum(a * np.roll(b, -s))) for s in range(len(a))])


def gold_three_values(degree: int):
    t = 2 ** ((degree + 2) // 2) + 1
    return {-1, -t, t - 2}


@dataclass(frozen=True)
class SequenceFamily:
    kind: str
    length: int
    members: tuple
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.members)

    def chips(self):
        return np.array([m.chips for m in self.members])


def gold_family(spec_a: LfsrSpec, spec_b: LfsrSpec) -> SequenceFamily:
    """Full Gold family: both m-sequences plus every relative shift.

    Verifies the preferred-pair property by brute force: the periodic
    crosscorrelation of the two m-sequences must take exactly the Gold
    three values; raises NotPreferredPair otherwise.
    """
    if spec_a.degree != spec_b.degree:
        raise InvalidSpec("preferred pair must have equal degree")
    seq_a = m_sequence(spec_a)
    seq_b = m_sequence(spec_b)
    n = spec_a.period
    values = set(periodic_crosscorrelation(seq_a, seq_b).tolist())
    expected = gold_three_values(spec_a.degree)
    if not values <= expected:
        raise NotPreferredPair(
            f"crosscorrelation values {sorted(values)} not within "
            f"{sorted(expected)}")
    members = [SpreadingSequence(seq_a.astype(np.complex128), 0),
               SpreadingSequence(seq_b.astype(np.complex128), 1)]
    for shift in range(n):
        combined = seq_a * np.roll(seq_b, shift)
        members.append(SpreadingSequence(combined.astype(np.complex128), 2 + shift))
    return SequenceFamily("gold", n, tuple(members),
                          {"degree": spec_a.degree,
                           "taps": (spec_a.taps, spec_b.taps)})


def gold_preset(degree: int) -> SequenceFamily:
    if degree not in PREFERRED_PAIRS:
        raise InvalidSpec(
            f"no preset preferred pair for degree {degree}; "
            f"available: {sorted(PREFERRED_PAIRS)}")
    taps_a, taps_b = PREFERRED_PAIRS[degree]
    return gold_family(LfsrSpec(degree, taps_a), LfsrSpec(degree, taps_b))


def chebyshev_orbit(degree: int, x0: float, length: int) -> np.ndarray:
    """Iterate x -> cos(degree * arccos(x)) from x0."""
    if degree < 2:
        raise NonPositiveParameter("degree must be >= 2")
    if abs(x0) >= 1.0:
        raise DegenerateOrbit(f"|x0| = {abs(x0)} is a fixed point of the map")
    orbit = np.empty(length)
    x = float(x0)
    for t in range(length):
        orbit[t] = x
        x = np.cos(degree * np.arccos(np.clip(x, -1.0, 1.0)))
    if np.abs(np.abs(orbit) - 1.0).min() < 1e-15 or np.abs(orbit).max() == 0.0:
        raise DegenerateOrbit("orbit collapsed onto a fixed point")
    return orbit


def chebyshev_sequence(degree, x0, n_chips, user_id=0, variant="binary"):
    orbit = chebyshev_orbit(degree, x0, n_chips)
    if variant == "binary":
        chips = np.where(orbit >= 0, 1.0, -1.0).astype(np.complex128)
    elif variant == "phase":
        chips = np.exp(1j * np.pi * orbit)
    else:
        raise InvalidSpec(f"unknown chebyshev variant {variant!r}")
    return SpreadingSequence(chips, user_id)


def chebyshev_family(degree, count, n_chips, seed, variant="binary") -> SequenceFamily:
    """Seeded family of Chebyshev-map sequences with random start points."""
    rng = np.random.default_rng(seed)
    members = []
    for u in range(count):
        while True:
            x0 = rng.uniform(-1.0, 1.0)
            try:
                members.append(chebyshev_sequence(degree, x0, n_chips, u, variant))
                break
            except DegenerateOrbit:
                continue
    return SequenceFamily(f"chebyshev-{variant}", n_chips, tuple(members),
                          {"degree": degree, "seed": seed})


def random_family(kind, count, n_chips, seed) -> SequenceFamily:
    """Random binary (+-1) or random unit-modulus complex sequences."""
    rng = np.random.default_rng(seed)
    members = []
    for u in range(count):
        if kind == "binary":
            chips = rng.choice([-1.0, 1.0], size=n_chips).astype(np.complex128)
        elif kind == "phase":
            chips = np.exp(2j * np.pi * rng.uniform(size=n_chips))
        else:
            raise InvalidSpec(f"unknown random family kind {kind!r}")
        members.append(SpreadingSequence(chips, u))
    return SequenceFamily(f"random-{kind}", n_chips, tuple(members), {"seed": seed})
