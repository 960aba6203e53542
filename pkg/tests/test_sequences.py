import numpy as np
import pytest

from seqopt.errors import DegenerateOrbit, InvalidSpec, NotPreferredPair
from seqopt.model import SystemModel, UserChannel, validate_model
from seqopt.sequences import (PREFERRED_PAIRS, LfsrSpec, chebyshev_family,
                              chebyshev_sequence, gold_family, gold_preset,
                              gold_three_values, m_sequence,
                              periodic_crosscorrelation, random_family)


class TestMSequence:
    def test_balanced(self):
        for taps in PREFERRED_PAIRS[5]:
            seq = m_sequence(LfsrSpec(5, taps))
            assert len(seq) == 31
            assert np.sum(seq) == -1

    def test_two_valued_autocorrelation(self):
        seq = m_sequence(LfsrSpec(5, PREFERRED_PAIRS[5][0]))
        ac = periodic_crosscorrelation(seq, seq)
        assert ac[0] == 31
        assert set(ac[1:].tolist()) == {-1}

    def test_non_primitive_taps_rejected(self):
        # x^4 + x^2 + 1 is not primitive
        with pytest.raises(InvalidSpec):
            m_sequence(LfsrSpec(4, 0b10101))

    def test_zero_seed_rejected(self):
        with pytest.raises(InvalidSpec):
            LfsrSpec(5, 0o45, seed_state=0)


class TestGoldFamily:
    def test_preset_family_size(self):
        fam = gold_preset(5)
        assert len(fam) == 33
        assert fam.length == 31

    def test_three_valued_crosscorrelation(self):
        fam = gold_preset(5)
        expected = gold_three_values(5)
        assert expected == {-1, -9, 7}
        chips = fam.chips().real.astype(int)
        observed = set()
        for i in range(6):          # subset here; full sweep in acceptance
            for j in range(i + 1, 6):
                observed |= set(
                    periodic_crosscorrelation(chips[i], chips[j]).tolist())
        assert observed <= expected

    def test_members_validate(self):
        fam = gold_preset(5)
        model = SystemModel(31, 33, 1.0, 1.0, 0.0)
        channels = [UserChannel.worst_case(0.0, 1.0, 1, 1.0)] * 33
        validate_model(model, channels, fam.members)

    def test_not_preferred_pair_rejected(self):
        # both primitive of degree 6 but not a preferred pair
        with pytest.raises(NotPreferredPair):
            gold_family(LfsrSpec(6, 0o103), LfsrSpec(6, 0o155))

    def test_degree_presets_exist(self):
        for degree in (5, 6, 7):
            fam = gold_preset(degree)
            assert len(fam) == 2 ** degree + 1

    def test_degree6_spectrum_three_valued(self):
        fam = gold_preset(6)
        chips = fam.chips().real.astype(int)
        n = fam.length
        shifted = np.stack([np.array([np.roll(c, -s) for s in range(n)])
                            for c in chips])
        observed = set()
        for i in range(len(fam)):
            for j in range(i + 1, len(fam)):
                observed |= set((shifted[j] @ chips[i]).tolist())
        assert observed == gold_three_values(6) == {-1, -17, 15}

    def test_unknown_preset(self):
        with pytest.raises(InvalidSpec):
            gold_preset(9)


class TestChebyshev:
    def test_fixed_point_start_rejected(self):
        with pytest.raises(DegenerateOrbit):
            chebyshev_sequence(2, 1.0, 8)
        with pytest.raises(DegenerateOrbit):
            chebyshev_sequence(3, -1.0, 8)

    def test_golden_orbit_degree2(self):
        # orbit of x -> cos(2 arccos x) from 0.3, checked against the
        # algebraic recurrence 2 x^2 - 1 and a frozen sign pattern
        seq = chebyshev_sequence(2, 0.3, 8)
        signs = np.array([1, -1, 1, -1, 1, -1, 1, 1], float)
        np.testing.assert_array_equal(seq.chips.real, signs)
        x, orbit = 0.3, []
        for _ in range(8):
            orbit.append(x)
            x = 2 * x * x - 1
        np.testing.assert_allclose(np.sign(orbit), signs, atol=0)

    def test_phase_variant_unit_modulus(self):
        seq = chebyshev_sequence(3, 0.41, 16, variant="phase")
        np.testing.assert_allclose(np.abs(seq.chips), 1.0, atol=1e-12)
        assert seq.norm_error() < 1e-9

    def test_reproducible_family(self):
        a = chebyshev_family(2, 4, 32, seed=9)
        b = chebyshev_family(2, 4, 32, seed=9)
        for s, t in zip(a.members, b.members):
            np.testing.assert_array_equal(s.chips, t.chips)

    def test_empirical_mean_near_zero(self):
        fam = chebyshev_family(2, 1, 1024, seed=3)
        assert abs(np.mean(fam.members[0].chips.real)) < 0.1


class TestRandomFamilies:
    def test_exact_norm(self):
        for kind in ("binary", "phase"):
            fam = random_family(kind, 3, 16, seed=1)
            for seq in fam.members:
                assert abs(np.vdot(seq.chips, seq.chips).real - 16) < 1e-12

    def test_determinism_and_seed_sensitivity(self):
        a = random_family("binary", 2, 32, seed=5)
        b = random_family("binary", 2, 32, seed=5)
        c = random_family("binary", 2, 32, seed=6)
        np.testing.assert_array_equal(a.chips(), b.chips())
        assert not np.array_equal(a.chips(), c.chips())

    def test_unknown_kind(self):
        with pytest.raises(InvalidSpec):
            random_family("ternary", 1, 8, seed=0)

    def test_members_validate(self):
        fam = random_family("phase", 2, 8, seed=2)
        model = SystemModel(8, 2, 1.0, 1.0, 0.0)
        channels = [UserChannel.worst_case(0.0, 1.0, 1, 1.0)] * 2
        validate_model(model, channels, fam.members)
