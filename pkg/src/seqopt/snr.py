"""Variance components and the closed-form worst-case SNR lower bound."""

from dataclasses import dataclass

import numpy as np

from .correlation import spectrum_total
from .model import ModelBundle, SystemModel
from .spectral import decompose


@dataclass(frozen=True)
class SnrReport:
    """Per-user bound and the variance components behind it.

    per_user_bound[i] = sqrt(signal_ms) / sqrt(var_fading_bound[i] +
    var_interference[i] + var_noise), with signal_ms = P T^2 / 2 the
    mean-square of the desired-signal term.  An infinite bound (all
    variance terms zero) is reported as inf, never an error.
    """

    per_user_bound: np.ndarray
    var_noise: float
    var_interference: np.ndarray
    var_fading_bound: np.ndarray
    signal_ms: float
    objective: float

    def as_dict(self):
        return {
            "per_user_bound": list(self.per_user_bound),
            "variance_components": {
                "noise": self.var_noise,
                "interference": list(self.var_interference),
                "fading_bound": list(self.var_fading_bound),
                "signal_ms": self.signal_ms,
            },
            "objective": self.objective,
        }


def noise_variance(model: SystemModel) -> float:
    """Correlator output noise variance, N0 T / 4."""
    return model.noise_density * model.symbol_duration / 4.0


def weight_matrix(model: SystemModel, channels) -> np.ndarray:
    """K x K channel weights: gamma_i^2 C_i M_i T on the diagonal,
    1 + gamma_k^2 L_k off it."""
    K = model.n_users
    z = np.empty((K, K))
    for i in range(K):
        for k in range(K):
            if i == k:
                ch = channels[i]
                z[i, k] = (ch.rician_gain ** 2 * ch.profile_height
                           * ch.delay_span * model.symbol_duration)
            else:
                ch = channels[k]
                z[i, k] = 1.0 + ch.rician_gain ** 2 * ch.profile_mass
    return z


def _spectrum_totals(bundle: ModelBundle):
    coeffs = [decompose(s) for s in bundle.sequences]
    K = bundle.n_users
    totals = np.empty((K, K))
    for i in range(K):
        for k in range(K):
            totals[i, k] = spectrum_total(coeffs[i], coeffs[k])
    return totals


def interference_variance(i: int, bundle: ModelBundle) -> float:
    """Multi-user interference variance of user i via the spectral form."""
    model = bundle.model
    P, T, N = model.power, model.symbol_duration, model.n_chips
    coeffs = [decompose(s) for s in bundle.sequences]
    total = 0.0
    for k in range(bundle.n_users):
        if k == i:
            continue
        ch = bundle.channels[k]
        total += ((1.0 + ch.rician_gain ** 2 * ch.profile_mass)
                  * spectrum_total(coeffs[i], coeffs[k]))
    return P * T ** 2 / (12.0 * N ** 2) * total


def fading_variance_bound(i: int, bundle: ModelBundle) -> float:
    """Upper bound on the self-fading variance; exact for the rectangular
    profile."""
    model = bundle.model
    P, T, N = model.power, model.symbol_duration, model.n_chips
    ch = bundle.channels[i]
    c_i = decompose(bundle.sequences[i])
    return (P * T ** 3 / (12.0 * N ** 2) * ch.rician_gain ** 2
            * ch.profile_height * ch.delay_span * spectrum_total(c_i, c_i))


def snr_lower_bound(bundle: ModelBundle) -> SnrReport:
    """Worst-case per-user SNR lower bound.

    Computed from the compact form
    (sum_k Z_{i,k} sum_m S_m^{i,k} / (6 N^2) + N0 / (2 P T))^(-1/2),
    which coincides with the component ratio sqrt(P T^2 / 2) /
    sqrt(var_fading + var_interference + var_noise).
    """
    model = bundle.model
    P, T, N = model.power, model.symbol_duration, model.n_chips
    K = bundle.n_users
    z = weight_matrix(model, bundle.channels)
    totals = _spectrum_totals(bundle)
    objective = float(np.sum(z * totals))

    bounds = np.empty(K)
    for i in range(K):
        denom = np.sum(z[i] * totals[i]) / (6.0 * N ** 2)
        if model.noise_density > 0:
            denom += model.noise_density / (2.0 * P * T)
        bounds[i] = denom ** -0.5 if denom > 0 else np.inf

    var_i = np.array([interference_variance(i, bundle) for i in range(K)])
    var_f = np.array([fading_variance_bound(i, bundle) for i in range(K)])
    return SnrReport(
        per_user_bound=bounds,
        var_noise=noise_variance(model),
        var_interference=var_i,
        var_fading_bound=var_f,
        signal_ms=P * T ** 2 / 2.0,
        objective=objective,
    )
