"""Equivalence of the compiled kernels and the numpy fallback."""

import numpy as np
import pytest

import seqopt._kernels_py as kernels_py
from seqopt import backend
from seqopt.simulate import draw_trial, make_context

from conftest import make_bundle

compiled = pytest.importorskip("seqopt._kernels") if backend.HAVE_COMPILED else None
pytestmark = pytest.mark.skipif(not backend.HAVE_COMPILED,
                                reason="compiled kernels not built")


def test_quartic_value_grad_agreement(rng):
    for (n, k) in [(4, 1), (8, 3)]:
        a = np.ascontiguousarray(rng.normal(size=(k, 2 * n)))
        b = np.ascontiguousarray(rng.normal(size=(k, 2 * n)))
        z = np.ascontiguousarray(rng.uniform(0, 2, size=(k, k)))
        m = np.arange(1, n + 1)
        w_int = 1 + 0.5 * np.cos(2 * np.pi * m / n)
        w_half = 1 + 0.5 * np.cos(2 * np.pi * (m / n + 1 / (2 * n)))
        f_c, ga_c, gb_c = compiled.quartic_value_grad(a, b, z, w_int, w_half)
        f_p, ga_p, gb_p = kernels_py.quartic_value_grad(a, b, z, w_int, w_half)
        assert f_c == pytest.approx(f_p, rel=1e-12)
        np.testing.assert_allclose(ga_c, ga_p, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(gb_c, gb_p, rtol=1e-12, atol=1e-12)


def test_mc_batch_agreement(rng):
    bundle = make_bundle(8, 3, rng, gamma=0.6, noise_density=0.1, span=2)
    ctx = make_context(bundle, nu=8)
    model = bundle.model
    B = 32
    bits = np.empty((B, 3, ctx.n_bits))
    delays = np.zeros((B, 3), np.int64)
    phases = np.ones((B, 3), np.complex128)
    taps = np.zeros((B,) + ctx.tap_sigma.shape, np.complex128)
    gen = np.random.default_rng(123)
    for b in range(B):
        d = draw_trial(ctx, gen)
        bits[b], delays[b], phases[b], taps[b] = (d.bits, d.delay_cells,
                                                  d.phases, d.taps)
    args = (ctx.q_wrap, ctx.q_main, bits, delays, phases, taps, ctx.n_taps,
            np.array([c.rician_gain for c in bundle.channels]), 0, 8,
            model.n_chips, model.chip_duration, 1.0)
    f_c, i_c = compiled.mc_batch(*args)
    f_p, i_p = kernels_py.mc_batch(*args)
    np.testing.assert_allclose(f_c, f_p, rtol=1e-11, atol=1e-13)
    np.testing.assert_allclose(i_c, i_p, rtol=1e-11, atol=1e-13)
