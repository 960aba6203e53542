import numpy as np
import pytest

from seqopt.model import (SpreadingSequence, SystemModel, UserChannel,
                          validate_model)
from seqopt.oracles import bit_enumerated_symbol_integral
from seqopt.snr import (fading_variance_bound, interference_variance,
                        noise_variance, snr_lower_bound, weight_matrix)

from conftest import make_bundle, random_sequence


@pytest.mark.parametrize("n0,t,expected", [
    (0.0, 1.0, 0.0),
    (4.0, 1.0, 1.0),
    (2.0, 0.5, 0.25),
])
def test_noise_variance(n0, t, expected):
    model = SystemModel(4, 1, 1.0, t, n0)
    assert noise_variance(model) == expected


def test_weight_matrix_values():
    model = SystemModel(4, 2, 1.0, 2.0, 0.0)
    ch1 = UserChannel.worst_case(0.5, 1.0, 1, 2.0)   # L = 2.0
    ch2 = UserChannel.worst_case(0.3, 2.0, 2, 2.0)   # L = 8.0
    z = weight_matrix(model, [ch1, ch2])
    assert z[0, 0] == pytest.approx(0.25 * 1.0 * 1 * 2.0)
    assert z[1, 1] == pytest.approx(0.09 * 2.0 * 2 * 2.0)
    assert z[0, 1] == pytest.approx(1 + 0.09 * 8.0)
    assert z[1, 0] == pytest.approx(1 + 0.25 * 2.0)
    assert np.all(z >= 0)
    # diagonal zero iff gamma zero
    z0 = weight_matrix(model, [UserChannel.worst_case(0.0, 1.0, 1, 2.0), ch2])
    assert z0[0, 0] == 0.0


def test_interference_variance_single_user(rng):
    bundle = make_bundle(8, 1, rng)
    assert interference_variance(0, bundle) == 0.0


def test_interference_variance_gamma_zero_reduces(rng):
    from seqopt.correlation import spectrum_total
    from seqopt.spectral import decompose
    bundle = make_bundle(8, 2, rng, gamma=0.0, power=3.0, symbol_duration=2.0)
    model = bundle.model
    expected = (model.power * model.symbol_duration ** 2 / (12 * 64)
                * spectrum_total(decompose(bundle.sequences[0]),
                                 decompose(bundle.sequences[1])))
    assert interference_variance(0, bundle) == pytest.approx(expected, rel=1e-12)


def test_interference_variance_oracle_equivalence(rng):
    bundle = make_bundle(8, 2, rng, gamma=0.5)
    model = bundle.model
    ch = bundle.channels[1]
    oracle = (model.power / (4 * model.symbol_duration)
              * (1 + ch.rician_gain ** 2 * ch.profile_mass)
              * bit_enumerated_symbol_integral(bundle.sequences[0],
                                               bundle.sequences[1], model))
    value = interference_variance(0, bundle)
    assert abs(value - oracle) <= 1e-8 * oracle


def test_fading_bound_zero_gamma(rng):
    bundle = make_bundle(4, 1, rng, gamma=0.0)
    assert fading_variance_bound(0, bundle) == 0.0


def test_fading_bound_all_ones_chain():
    from seqopt.correlation import spectrum_total
    from seqopt.spectral import decompose
    model = SystemModel(4, 1, 2.0, 1.0, 0.0)
    ch = UserChannel.worst_case(0.7, 1.3, 2, 1.0)
    seq = SpreadingSequence(np.ones(4), 0)
    bundle = validate_model(model, [ch], [seq])
    total = spectrum_total(decompose(seq), decompose(seq))
    expected = (model.power * 1.0 / (12 * 16)) * 0.49 * 1.3 * 2 * total
    assert fading_variance_bound(0, bundle) == pytest.approx(expected, rel=1e-12)


def test_fading_bound_oracle_equivalence(rng):
    bundle = make_bundle(8, 1, rng, gamma=0.8, height=1.5, span=2)
    model = bundle.model
    ch = bundle.channels[0]
    oracle = (model.power / 4 * ch.rician_gain ** 2 * ch.profile_height
              * ch.delay_span
              * bit_enumerated_symbol_integral(bundle.sequences[0],
                                               bundle.sequences[0], model))
    value = fading_variance_bound(0, bundle)
    assert abs(value - oracle) <= 1e-8 * oracle


def test_snr_bound_matched_filter_limit():
    model = SystemModel(4, 1, 2.0, 1.0, 4.0)
    ch = UserChannel.worst_case(0.0, 1.0, 1, 1.0)
    seq = SpreadingSequence(np.ones(4), 0)
    report = snr_lower_bound(validate_model(model, [ch], [seq]))
    assert report.per_user_bound[0] == pytest.approx(1.0, rel=1e-12)


def test_snr_bound_infinite_sentinel():
    model = SystemModel(4, 1, 1.0, 1.0, 0.0)
    ch = UserChannel.worst_case(0.0, 1.0, 1, 1.0)
    seq = SpreadingSequence(np.ones(4), 0)
    report = snr_lower_bound(validate_model(model, [ch], [seq]))
    assert np.isinf(report.per_user_bound[0])


def test_compact_form_equals_component_ratio(rng):
    for trial in range(5):
        bundle = make_bundle(8, 3, rng, gamma=0.4, noise_density=0.3)
        report = snr_lower_bound(bundle)
        for i in range(3):
            denom = (report.var_fading_bound[i] + report.var_interference[i]
                     + report.var_noise)
            ratio = np.sqrt(report.signal_ms / denom)
            assert abs(report.per_user_bound[i] - ratio) <= 1e-10 * ratio


def test_bound_monotone_in_noise_and_channel(rng):
    bundle = make_bundle(8, 2, rng, gamma=0.5, noise_density=0.1)
    base = snr_lower_bound(bundle).per_user_bound
    noisier = make_bundle(8, 2, np.random.default_rng(20240817),
                          gamma=0.5, noise_density=0.5)
    # same sequences, more noise
    from seqopt.model import validate_model
    noisier = validate_model(
        SystemModel(8, 2, bundle.model.power, bundle.model.symbol_duration, 0.5),
        bundle.channels, bundle.sequences)
    assert np.all(snr_lower_bound(noisier).per_user_bound <= base + 1e-12)
    for worse in ([UserChannel.worst_case(0.9, 1.0, 1, 1.0)] * 2,   # gamma up
                  [UserChannel.worst_case(0.5, 2.0, 1, 1.0)] * 2,   # C up
                  [UserChannel.worst_case(0.5, 1.0, 3, 1.0)] * 2):  # M up
        harder = validate_model(bundle.model, worse, bundle.sequences)
        assert np.all(snr_lower_bound(harder).per_user_bound <= base + 1e-12)


def test_symmetric_users_equal_bounds(rng):
    seq = random_sequence(8, rng)
    model = SystemModel(8, 2, 1.0, 1.0, 0.2)
    chans = [UserChannel.worst_case(0.5, 1.0, 1, 1.0)] * 2
    seqs = [SpreadingSequence(seq.chips, 0), SpreadingSequence(seq.chips, 1)]
    report = snr_lower_bound(validate_model(model, chans, seqs))
    assert report.per_user_bound[0] == pytest.approx(report.per_user_bound[1],
                                                     rel=1e-12)
