"""Complex-baseband Monte Carlo simulator of the asynchronous CDMA link.

The correlator output decomposes as Z = D + F + I + N: the desired term,
the reference user's own scattered (faded) signal, multi-user interference
(direct plus faded copies of the other users) and AWGN.  All chip waveform
integrals are evaluated exactly through the shift quadratic-form tables;
the only approximations are the quantization of user delays to the
nu-per-chip sample grid and the tapped-delay-line discretization of the
scattering process (taps on the same grid, each with the exact profile
mass of its cell).  The AWGN term is drawn directly as a Gaussian with the
matched-filter variance N0 T / 4, the standard baseband substitution.

Reproducibility: every trial draws from its own generator spawned from
(seed, trial index), so results are bit-identical for a fixed seed and
trial count regardless of batching.
"""

from dataclasses import dataclass, field

import numpy as np

from .backend import mc_batch
from .correlation import quad_form_tables
from .errors import PreconditionError, ResolutionTooCoarse
from .model import DelayPowerProfile, ModelBundle
from .snr import snr_lower_bound

MIN_SAMPLES_PER_CHIP = 8
MIN_TRIALS = 100


@dataclass(frozen=True)
class SimContext:
    """Precomputed tables and grids for one (bundle, ref user) setup."""

    bundle: ModelBundle
    ref_user: int
    nu: int
    profiles: tuple
    q_wrap: np.ndarray = field(repr=False, default=None)
    q_main: np.ndarray = field(repr=False, default=None)
    tap_sigma: np.ndarray = field(repr=False, default=None)
    n_taps: np.ndarray = field(repr=False, default=None)
    n_bits: int = 0

    @property
    def model(self):
        return self.bundle.model


def make_context(bundle: ModelBundle, nu: int = 16, ref_user: int = 0,
                 profiles=None) -> SimContext:
    """Build the quadratic-form tables and tapped-delay-line grids.

    profiles, when given, is one DelayPowerProfile per user; the default is
    the worst-case rectangular profile of each channel (height C_k over
    [0, M_k T]).  Two-sided spans shorter than M_k T are allowed; cells
    beyond the span get zero mass.
    """
    if nu < MIN_SAMPLES_PER_CHIP:
        raise ResolutionTooCoarse(
            f"nu = {nu} below the minimum of {MIN_SAMPLES_PER_CHIP}")
    model = bundle.model
    K, N, T = model.n_users, model.n_chips, model.symbol_duration
    if profiles is None:
        profiles = tuple(
            DelayPowerProfile.rectangular(ch.profile_height, ch.delay_span * T)
            for ch in bundle.channels)
    else:
        profiles = tuple(profiles)
        if len(profiles) != K:
            raise PreconditionError("need one profile per user")
        for k, (prof, ch) in enumerate(zip(profiles, bundle.channels)):
            if prof.span > ch.delay_span * T * (1 + 1e-12):
                raise PreconditionError(
                    f"user {k}: profile span {prof.span} exceeds the "
                    f"channel delay window {ch.delay_span * T}")

    ref = bundle.sequences[ref_user]
    q_wrap = np.empty((K, N + 1), np.complex128)
    q_main = np.empty((K, N + 1), np.complex128)
    for k in range(K):
        q_wrap[k], q_main[k] = quad_form_tables(ref, bundle.sequences[k])

    delta = model.chip_duration / nu
    n_taps = np.array([ch.delay_span * N * nu for ch in bundle.channels],
                      dtype=np.int64)
    tap_sigma = np.zeros((K, int(n_taps.max())))
    for k in range(K):
        edges = np.arange(int(n_taps[k]) + 1) * delta
        tap_sigma[k, :int(n_taps[k])] = np.sqrt(
            np.clip(profiles[k].cell_mass(edges), 0.0, None))
    n_bits = int(max(ch.delay_span for ch in bundle.channels)) + 2
    return SimContext(bundle, ref_user, nu, profiles, q_wrap, q_main,
                      tap_sigma, n_taps, n_bits)


@dataclass(frozen=True)
class TrialDraw:
    """All randomness of one trial.

    bits[k, n] is the bit of user k with index -n (so column 0 is the
    current bit, column 1 the previous).  delay_cells are the quantized
    delays in grid cells of t_c / nu; phases are unit phasors exp(j psi).
    """

    bits: np.ndarray
    delay_cells: np.ndarray
    phases: np.ndarray
    taps: np.ndarray
    noise: float


def draw_trial(ctx: SimContext, rng) -> TrialDraw:
    """Draw one trial in the documented fixed order.

    Per user, in index order: bits, then delay cell, then phase (both
    skipped for the reference user: its delay and phase are zero by
    convention), then taps for users with a scattered component.  One
    standard normal for the AWGN term closes the trial.
    """
    model = ctx.model
    K = model.n_users
    bits = np.empty((K, ctx.n_bits))
    delay_cells = np.zeros(K, np.int64)
    phases = np.ones(K, np.complex128)
    taps = np.zeros_like(ctx.tap_sigma, dtype=np.complex128)
    cells = ctx.nu * model.n_chips
    for k in range(K):
        bits[k] = rng.integers(0, 2, size=ctx.n_bits) * 2.0 - 1.0
        if k == ctx.ref_user:
            bits[k, 0] = 1.0  # reference current bit fixed to +1
        else:
            delay_cells[k] = rng.integers(0, cells)
            phases[k] = np.exp(2j * np.pi * rng.uniform())
        if ctx.bundle.channels[k].rician_gain > 0.0:
            nt = int(ctx.n_taps[k])
            raw = rng.standard_normal(2 * nt)
            taps[k, :nt] = ((raw[:nt] + 1j * raw[nt:]) / np.sqrt(2.0)
                            * ctx.tap_sigma[k, :nt])
    return TrialDraw(bits, delay_cells, phases, taps, float(rng.standard_normal()))


@dataclass(frozen=True)
class CorrelatorBreakdown:
    """One trial's correlator output and its four components."""

    z: float
    d: float
    f: float
    ii: float
    nn: float


def _gamma_vec(ctx):
    return np.array([ch.rician_gain for ch in ctx.bundle.channels])


def evaluate_trial(ctx: SimContext, draw: TrialDraw) -> CorrelatorBreakdown:
    """Integrate each component of the correlator output for one draw."""
    model = ctx.model
    sqrt_p_half = np.sqrt(model.power / 2.0)
    f_arr, i_arr = mc_batch(
        ctx.q_wrap, ctx.q_main, draw.bits[None], draw.delay_cells[None],
        draw.phases[None], draw.taps[None], ctx.n_taps, _gamma_vec(ctx),
        ctx.ref_user, ctx.nu, model.n_chips, model.chip_duration, sqrt_p_half)
    d = sqrt_p_half * model.symbol_duration
    nn = np.sqrt(model.noise_density * model.symbol_duration / 4.0) * draw.noise
    f, ii = float(f_arr[0]), float(i_arr[0])
    return CorrelatorBreakdown(d + f + ii + nn, d, f, ii, nn)


def simulate_trial(bundle: ModelBundle, rng, nu: int = 16, ref_user: int = 0,
                   profiles=None) -> CorrelatorBreakdown:
    """One full trial from a caller-supplied generator."""
    ctx = make_context(bundle, nu, ref_user, profiles)
    return evaluate_trial(ctx, draw_trial(ctx, rng))


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Empirical SNR and variance components with standard errors."""

    snr_hat: float
    snr_se: float
    mean_desired: float
    var_components: dict
    trials: int
    samples_per_chip: int
    seed: int
    trial_components: np.ndarray = field(repr=False, default=None)

    def as_dict(self):
        return {
            "snr_hat": self.snr_hat,
            "se": self.snr_se,
            "var_components": {name: {"estimate": est, "se": se}
                               for name, (est, se) in self.var_components.items()},
            "trials": self.trials,
            "seed": self.seed,
            "nu": self.samples_per_chip,
        }


def _var_with_se(samples):
    """Sample variance and the moment-based standard error of it."""
    n = samples.shape[0]
    centered = samples - samples.mean()
    var = np.sum(centered ** 2) / (n - 1)
    m4 = np.mean(centered ** 4)
    return float(var), float(np.sqrt(max(m4 - var ** 2, 0.0) / n))


def estimate_snr(bundle: ModelBundle, trials: int, seed: int, nu: int = 16,
                 ref_user: int = 0, profiles=None, chunk: int = 512,
                 keep_trials: bool = False) -> MonteCarloEstimate:
    """Monte Carlo SNR of the reference user.

    snr_hat = mean(D) / sqrt(var(F) + var(I) + var(N)) with a delta-method
    standard error propagated from the moment-based errors of the three
    component variances (the components are drawn independently).
    """
    if trials < MIN_TRIALS:
        raise PreconditionError(f"trials = {trials} below minimum {MIN_TRIALS}")
    ctx = make_context(bundle, nu, ref_user, profiles)
    model = ctx.model
    sqrt_p_half = np.sqrt(model.power / 2.0)
    sigma_noise = np.sqrt(model.noise_density * model.symbol_duration / 4.0)
    gamma = _gamma_vec(ctx)

    f_all = np.empty(trials)
    i_all = np.empty(trials)
    n_all = np.empty(trials)
    streams = np.random.SeedSequence(seed).spawn(trials)
    for lo in range(0, trials, chunk):
        hi = min(lo + chunk, trials)
        B = hi - lo
        bits = np.empty((B, model.n_users, ctx.n_bits))
        delays = np.zeros((B, model.n_users), np.int64)
        phases = np.ones((B, model.n_users), np.complex128)
        taps = np.zeros((B,) + ctx.tap_sigma.shape, np.complex128)
        for b in range(B):
            draw = draw_trial(ctx, np.random.default_rng(streams[lo + b]))
            bits[b] = draw.bits
            delays[b] = draw.delay_cells
            phases[b] = draw.phases
            taps[b] = draw.taps
            n_all[lo + b] = sigma_noise * draw.noise
        f_all[lo:hi], i_all[lo:hi] = mc_batch(
            ctx.q_wrap, ctx.q_main, bits, delays, phases, taps, ctx.n_taps,
            gamma, ctx.ref_user, ctx.nu, model.n_chips, model.chip_duration,
            sqrt_p_half)

    mean_d = sqrt_p_half * model.symbol_duration
    comps = {"fading": _var_with_se(f_all),
             "interference": _var_with_se(i_all),
             "noise": _var_with_se(n_all)}
    var_sum = sum(v for v, _ in comps.values())
    se_sum = np.sqrt(sum(se ** 2 for _, se in comps.values()))
    if var_sum > 0:
        snr = mean_d / np.sqrt(var_sum)
        snr_se = 0.5 * mean_d * var_sum ** -1.5 * se_sum
    else:
        snr, snr_se = np.inf, 0.0
    trial_components = None
    if keep_trials:
        d_all = np.full(trials, mean_d)
        trial_components = np.column_stack([d_all, f_all, i_all, n_all])
    return MonteCarloEstimate(float(snr), float(snr_se), mean_d, comps,
                              trials, nu, seed, trial_components)


def compare_with_bound(bundle: ModelBundle, estimate: MonteCarloEstimate,
                       ref_user: int = 0) -> dict:
    """Append the analytic worst-case bound and the simulated/bound ratio."""
    report = snr_lower_bound(bundle)
    bound = float(report.per_user_bound[ref_user])
    out = estimate.as_dict()
    out["bound"] = bound
    out["ratio"] = estimate.snr_hat / bound if bound > 0 else np.inf
    return out
