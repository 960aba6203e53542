"""seqopt: worst-case SNR bounds and spreading-sequence optimization for
asynchronous CDMA over frequency-selective Rician fading.

The package evaluates a closed-form per-user SNR lower bound from the
per-frequency interference spectrum of the spreading sequences, minimizes
the weighted interference objective over the feasible coefficient set,
certifies solutions through their first-order (KKT) conditions, and
validates the closed form against a complex-baseband Monte Carlo link
simulator.
"""

from .backend import BACKEND, HAVE_COMPILED
from .correlation import (BitPair, InterferenceSpectrum, PartialCorrPair,
                          bit_averaged_sq, gamma_chip_integral,
                          interference_spectrum, partial_corr, quad_form,
                          shift_matrix)
from .model import (DelayPowerProfile, ModelBundle, SpreadingSequence,
                    SystemModel, UserChannel, validate_model, worst_case_mass)
from .optimizer import (DecisionVector, KktCertificate, ProblemInstance,
                        SolverOptions, SolveResult, gradient, kkt_multipliers,
                        objective, solve)
from .sequences import (LfsrSpec, SequenceFamily, chebyshev_family,
                        gold_family, gold_preset, random_family)
from .simulate import (CorrelatorBreakdown, MonteCarloEstimate, estimate_snr,
                       simulate_trial)
from .snr import (SnrReport, fading_variance_bound, interference_variance,
                  noise_variance, snr_lower_bound, weight_matrix)
from .spectral import (RealEmbedding, SpectralCoefficients, TransformPair,
                       basis_vector, build_transforms, decompose, real_embed,
                       reconstruct)

__version__ = "0.1.0"
