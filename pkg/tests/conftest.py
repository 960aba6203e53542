import numpy as np
import pytest

from seqopt.model import SpreadingSequence, SystemModel, UserChannel, validate_model


def random_sequence(n_chips, rng, user_id=0):
    """Random complex chips normalized to squared norm N."""
    chips = rng.normal(size=n_chips) + 1j * rng.normal(size=n_chips)
    chips *= np.sqrt(n_chips) / np.linalg.norm(chips)
    return SpreadingSequence(chips, user_id)


def unit_modulus_sequence(n_chips, rng, user_id=0):
    return SpreadingSequence(np.exp(2j * np.pi * rng.uniform(size=n_chips)), user_id)


def make_bundle(n_chips, n_users, rng, power=2.0, symbol_duration=1.0,
                noise_density=0.1, gamma=0.5, height=1.0, span=1):
    model = SystemModel(n_chips, n_users, power, symbol_duration, noise_density)
    channels = [UserChannel.worst_case(gamma, height, span, symbol_duration)
                for _ in range(n_users)]
    sequences = [random_sequence(n_chips, rng, u) for u in range(n_users)]
    return validate_model(model, channels, sequences)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
