"""Benchmark the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py

Times the two hot kernels on representative workloads: the Monte Carlo
trial correlator (dominates simulation runtime) and the quartic
objective/gradient evaluation (dominates solver runtime).
"""

import time

import numpy as np

import seqopt._kernels_py as kernels_py
from seqopt.model import SystemModel, UserChannel, validate_model
from seqopt.sequences import random_family
from seqopt.simulate import draw_trial, make_context

try:
    import seqopt._kernels as kernels_c
except ImportError:
    kernels_c = None


def time_call(fn, *args, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_mc(n=8, k=2, nu=16, batch=2048, span=1):
    model = SystemModel(n, k, 2.0, 1.0, 0.1)
    channels = [UserChannel.worst_case(0.5, 1.0, span, 1.0) for _ in range(k)]
    fam = random_family("binary", k, n, seed=0)
    bundle = validate_model(model, channels, fam.members)
    ctx = make_context(bundle, nu=nu)
    gen = np.random.default_rng(0)
    bits = np.empty((batch, k, ctx.n_bits))
    delays = np.zeros((batch, k), np.int64)
    phases = np.ones((batch, k), np.complex128)
    taps = np.zeros((batch,) + ctx.tap_sigma.shape, np.complex128)
    for b in range(batch):
        d = draw_trial(ctx, gen)
        bits[b], delays[b], phases[b], taps[b] = (d.bits, d.delay_cells,
                                                  d.phases, d.taps)
    args = (ctx.q_wrap, ctx.q_main, bits, delays, phases, taps, ctx.n_taps,
            np.array([c.rician_gain for c in channels]), 0, nu, n,
            model.chip_duration, 1.0)
    return args, batch


def bench_quartic(n=16, k=4):
    rng = np.random.default_rng(1)
    a = np.ascontiguousarray(rng.normal(size=(k, 2 * n)))
    b = np.ascontiguousarray(rng.normal(size=(k, 2 * n)))
    z = np.ascontiguousarray(rng.uniform(0, 2, size=(k, k)))
    m = np.arange(1, n + 1)
    w_int = 1 + 0.5 * np.cos(2 * np.pi * m / n)
    w_half = 1 + 0.5 * np.cos(2 * np.pi * (m / n + 1 / (2 * n)))
    return (a, b, z, w_int, w_half)


def main():
    print(f"{'kernel':<38}{'python':>12}{'compiled':>12}{'speedup':>10}")
    for label, (args, batch) in [
        ("mc_batch N=8 K=2 nu=16 B=2048", bench_mc()),
        ("mc_batch N=31 K=4 nu=16 B=512", bench_mc(n=31, k=4, batch=512)),
        ("mc_batch N=8 K=2 nu=16 M=4 B=512", bench_mc(span=4, batch=512)),
    ]:
        t_py = time_call(kernels_py.mc_batch, *args)
        if kernels_c is not None:
            t_c = time_call(kernels_c.mc_batch, *args)
            print(f"{label:<38}{t_py * 1e3:>10.2f}ms{t_c * 1e3:>10.2f}ms"
                  f"{t_py / t_c:>9.1f}x")
            f_a, i_a = kernels_py.mc_batch(*args)
            f_b, i_b = kernels_c.mc_batch(*args)
            assert np.allclose(f_a, f_b, rtol=1e-10)
            assert np.allclose(i_a, i_b, rtol=1e-10)
        else:
            print(f"{label:<38}{t_py * 1e3:>10.2f}ms{'n/a':>12}{'':>10}")

    for label, args in [
        ("quartic_value_grad N=16 K=4", bench_quartic()),
        ("quartic_value_grad N=64 K=8", bench_quartic(n=64, k=8)),
    ]:
        reps = 200
        t_py = time_call(lambda: [kernels_py.quartic_value_grad(*args)
                                  for _ in range(reps)])
        if kernels_c is not None:
            t_c = time_call(lambda: [kernels_c.quartic_value_grad(*args)
                                     for _ in range(reps)])
            print(f"{label:<38}{t_py / reps * 1e6:>10.2f}us"
                  f"{t_c / reps * 1e6:>10.2f}us{t_py / t_c:>9.1f}x")
        else:
            print(f"{label:<38}{t_py / reps * 1e6:>10.2f}us{'n/a':>12}")

    if kernels_c is None:
        print("\ncompiled kernels not built; python backend only")


if __name__ == "__main__":
    main()
