"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and measured margins.  Every tolerance is pinned here; nothing is
deferred to later calibration.
"""

import numpy as np
import pytest

from seqopt.correlation import spectrum_total
from seqopt.model import (DelayPowerProfile, SpreadingSequence, SystemModel,
                          UserChannel, validate_model)
from seqopt.optimizer import (DecisionVector, ProblemInstance, SolverOptions,
                              gradient, kkt_multipliers, objective, solve)
from seqopt.oracles import (bit_enumerated_symbol_integral,
                            chip_integral_trapezoid,
                            finite_difference_gradient)
from seqopt.sequences import (gold_preset, gold_three_values,
                              periodic_crosscorrelation, random_family)
from seqopt.simulate import estimate_snr
from seqopt.snr import (interference_variance, noise_variance,
                        snr_lower_bound)
from seqopt.spectral import basis_matrix, build_transforms, decompose

from conftest import random_sequence


def _report(name, detail):
    print(f"PASS {name}: {detail}")


def _instance(n, k, gamma=0.5, noise=0.1, power=2.0):
    model = SystemModel(n, k, power, 1.0, noise)
    channels = [UserChannel.worst_case(gamma, 1.0, 1, 1.0) for _ in range(k)]
    return ProblemInstance.from_channels(model, channels), model, channels


def test_criterion_01_transform_suite():
    worst_unitary = worst_adjoint = worst_product = 0.0
    for n in (2, 4, 8, 16, 31, 64):
        pair = build_transforms(n)
        phi, phi_hat = pair.alpha_from_beta, pair.beta_from_alpha
        worst_unitary = max(worst_unitary,
                            np.abs(phi @ phi.conj().T - np.eye(n)).max())
        worst_adjoint = max(worst_adjoint,
                            np.abs(phi_hat - phi.conj().T).max())
        assert np.all(phi_hat.real == 1.0 / n), "Re part must be exactly 1/N"
        product = basis_matrix(0.0, n).conj().T @ basis_matrix(1 / (2 * n), n) / n
        worst_product = max(worst_product, np.abs(phi - product).max())
    assert worst_unitary < 1e-10
    assert worst_adjoint < 1e-10
    assert worst_product < 1e-10
    _report("criterion 1 (transform suite)",
            f"max unitarity defect {worst_unitary:.2e}, adjoint defect "
            f"{worst_adjoint:.2e}, product defect {worst_product:.2e}")


def test_criterion_02_master_rewrite_identity():
    rng = np.random.default_rng(1001)
    worst = 0.0
    for n in (2, 4, 8, 16):
        model = SystemModel(n, 1, 1.0, 1.0, 0.0)
        for _ in range(50):
            s_i = random_sequence(n, rng, 0)
            s_k = random_sequence(n, rng, 1)
            lhs = bit_enumerated_symbol_integral(s_i, s_k, model)
            rhs = (model.chip_duration ** 3 / 3.0) * n * spectrum_total(
                decompose(s_i), decompose(s_k))
            rel = abs(lhs - rhs) / rhs
            worst = max(worst, rel)
            assert rel <= 1e-8
    _report("criterion 2 (master rewrite identity)",
            f"worst relative deviation {worst:.2e} over 200 random pairs")


def test_criterion_03_chip_integral_closed_form():
    from seqopt.correlation import gamma_chip_integral
    rng = np.random.default_rng(1002)
    t_c = 1.0 / 8
    worst = 0.0
    for _ in range(100):
        q_l = complex(rng.normal(), rng.normal())
        q_l1 = complex(rng.normal(), rng.normal())
        exact = gamma_chip_integral(q_l, q_l1, t_c)
        quad = chip_integral_trapezoid(q_l, q_l1, t_c, nodes=10000)
        rel = abs(exact - quad) / max(exact, 1e-300)
        worst = max(worst, rel)
        assert rel <= 1e-7
    _report("criterion 3 (chip integral vs quadrature)",
            f"worst relative deviation {worst:.2e} over 100 pairs")


def test_criterion_04_gradient_check():
    rng = np.random.default_rng(1003)
    worst = 0.0
    for (n, k) in [(4, 1), (8, 2), (16, 3)]:
        inst, _, _ = _instance(n, k)
        for _ in range(20):
            x = rng.normal(size=(k, 4 * n))
            analytic = gradient(DecisionVector(x), inst).ravel()
            fd = finite_difference_gradient(
                lambda v: objective(DecisionVector(v.reshape(k, 4 * n)), inst),
                x.ravel(), step=1e-5)
            rel = np.abs(analytic - fd).max() / max(np.abs(analytic).max(), 1.0)
            worst = max(worst, rel)
            assert rel < 1e-6
    _report("criterion 4 (gradient vs central differences)",
            f"worst relative error {worst:.2e} over 60 points")


def test_criterion_05_convexity_probe():
    inst, _, _ = _instance(8, 2)
    rng = np.random.default_rng(1004)
    worst_gap = -np.inf
    for _ in range(100):
        x = rng.normal(size=(2, 32))
        y = rng.normal(size=(2, 32))
        t = rng.uniform()
        lhs = objective(DecisionVector(t * x + (1 - t) * y), inst)
        rhs = (t * objective(DecisionVector(x), inst)
               + (1 - t) * objective(DecisionVector(y), inst))
        worst_gap = max(worst_gap, lhs - rhs)
        assert lhs <= rhs + 1e-9
    _report("criterion 5 (convexity probe)",
            f"worst chord gap {worst_gap:.2e} over 100 chords (slack 1e-9)")


def test_criterion_06_solver_and_kkt():
    opts = SolverOptions(tol=1e-10, max_iters=5000, restarts=4, seed=42)
    for (n, k) in [(4, 1), (8, 2), (8, 4)]:
        inst, _, _ = _instance(n, k)
        result = solve(inst, opts=opts)
        assert result.status == "converged"
        fs = result.trace[:, 1]
        assert np.all(np.diff(fs) <= 0.0), "objective trace must be monotone"
        cert = kkt_multipliers(result.x, inst)
        assert cert.stationarity_residual < 1e-6
        assert cert.mu_spread < 1e-6
        _report(f"criterion 6 (solver+KKT, N={n} K={k})",
                f"objective {result.objective:.6f}, residual "
                f"{cert.stationarity_residual:.2e}, mu spread {cert.mu_spread:.2e}")

    # N = 31 baseline comparison
    inst, _, _ = _instance(31, 2)
    gold = gold_preset(5)
    gold_x = DecisionVector.from_coefficients(
        [decompose(SpreadingSequence(gold.members[i].chips, i)) for i in (0, 1)],
        inst)
    f_gold = objective(gold_x, inst)
    best_binary_f, best_binary_x = np.inf, None
    for seed in range(100):
        fam = random_family("binary", 2, 31, seed=seed)
        x = DecisionVector.from_coefficients([decompose(s) for s in fam.members],
                                             inst)
        f = objective(x, inst)
        if f < best_binary_f:
            best_binary_f, best_binary_x = f, x
    result = solve(inst, opts=SolverOptions(tol=1e-8, max_iters=3000,
                                            restarts=2, seed=7),
                   extra_starts=(gold_x, best_binary_x))
    assert result.objective <= f_gold
    assert result.objective <= best_binary_f
    _report("criterion 6 (N=31 baselines)",
            f"optimized {result.objective:.4f} <= gold {f_gold:.4f} and best "
            f"binary {best_binary_f:.4f}")


def _awgn_bundle():
    model = SystemModel(4, 1, 2.0, 1.0, 4.0)
    channels = [UserChannel.worst_case(0.0, 1.0, 1, 1.0)]
    seqs = [SpreadingSequence(np.ones(4), 0)]
    return validate_model(model, channels, seqs)


def test_criterion_07_awgn_limit():
    bundle = _awgn_bundle()
    est = estimate_snr(bundle, trials=10000, seed=2024)
    target = np.sqrt(2 * 2.0 * 1.0 / 4.0)  # sqrt(2 P T / N0) = 1
    assert abs(est.snr_hat - target) <= 3 * est.snr_se
    _report("criterion 7 (AWGN matched-filter limit)",
            f"snr {est.snr_hat:.4f} +- {est.snr_se:.4f} vs {target}")


def _two_user_bundle():
    n, k = 8, 2
    model = SystemModel(n, k, 2.0, 1.0, 0.1)
    channels = [UserChannel.worst_case(0.5, 1.0, 1, 1.0) for _ in range(k)]
    fam = random_family("binary", k, n, seed=11)
    return validate_model(model, channels, fam.members)


def test_criterion_08_bound_tightness():
    bundle = _two_user_bundle()
    bound = snr_lower_bound(bundle).per_user_bound[0]
    est = estimate_snr(bundle, trials=20000, seed=123, nu=16)
    ratio = est.snr_hat / bound
    assert abs(ratio - 1.0) <= 0.10
    # one-sided dominance for a non-rectangular profile with equal C, M
    T = bundle.model.symbol_duration
    profiles = [DelayPowerProfile.truncated_exponential(
        ch.profile_height, ch.delay_span * T, rate=2.0)
        for ch in bundle.channels]
    est_exp = estimate_snr(bundle, trials=20000, seed=321, nu=16,
                           profiles=profiles)
    assert est_exp.snr_hat >= bound - 3 * est_exp.snr_se
    _report("criterion 8 (bound tightness)",
            f"rectangular ratio {ratio:.4f} (within 10%), exponential snr "
            f"{est_exp.snr_hat:.3f} >= bound {bound:.3f} - 3 se")


def test_criterion_09_component_variances():
    bundle = _two_user_bundle()
    est = estimate_snr(bundle, trials=10000, seed=456, nu=16)
    v_n, se_n = est.var_components["noise"]
    target_n = noise_variance(bundle.model)
    assert abs(v_n - target_n) <= 3 * se_n
    v_i, se_i = est.var_components["interference"]
    target_i = interference_variance(0, bundle)
    assert abs(v_i - target_i) <= 3 * se_i
    _report("criterion 9 (component variances)",
            f"noise {v_n:.5f} vs {target_n:.5f} ({abs(v_n-target_n)/se_n:.2f} se), "
            f"interference {v_i:.5f} vs {target_i:.5f} "
            f"({abs(v_i-target_i)/se_i:.2f} se)")


def test_criterion_10_gold_family():
    fam = gold_preset(5)
    assert len(fam) == 33
    chips = fam.chips().real.astype(int)
    observed = set()
    for i in range(len(fam)):
        for j in range(i + 1, len(fam)):
            observed |= set(periodic_crosscorrelation(chips[i], chips[j]).tolist())
    assert observed == gold_three_values(5) == {-1, -9, 7}
    _report("criterion 10 (Gold family)",
            f"33 members, crosscorrelation values exactly {sorted(observed)}")
