"""Command-line front end: gen, eval, optimize, simulate, kkt-check.

Every stochastic command requires --seed; re-running a command with the
same inputs reproduces its outputs byte-for-byte (timestamps live only in
sidecar metadata).  Exit codes: 0 success, 2 validation error, 3 numerical
failure.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import io
from .errors import NumericalError, SeqoptError, ValidationError
from .model import DelayPowerProfile, SpreadingSequence, validate_model
from .optimizer import (DecisionVector, ProblemInstance, SolverOptions,
                        kkt_multipliers, solve)
from .sequences import (PREFERRED_PAIRS, chebyshev_family, gold_preset,
                        random_family)
from .simulate import compare_with_bound, estimate_snr
from .snr import snr_lower_bound
from .spectral import decompose, reconstruct

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _load_bundle(model_path, sequences_path):
    model, channels = io.read_model_json(model_path)
    sequences = io.read_sequences_csv(sequences_path)
    return validate_model(model, channels, sequences)


def cmd_gen(args):
    if args.family == "gold":
        if args.degree is None:
            raise SeqoptError("--degree required for gold")
        family = gold_preset(args.degree)
    elif args.family == "random-binary":
        _require_seed(args)
        family = random_family("binary", args.count, args.n, args.seed)
    elif args.family == "random-phase":
        _require_seed(args)
        family = random_family("phase", args.count, args.n, args.seed)
    elif args.family == "chebyshev":
        _require_seed(args)
        family = chebyshev_family(args.degree or 2, args.count, args.n,
                                  args.seed, args.variant)
    else:
        raise SeqoptError(f"unknown family {args.family!r}")
    io.write_sequences_csv(args.out, family.members)
    sidecar = {
        "family": family.kind,
        "length": family.length,
        "count": len(family),
        "seed": args.seed,
        "params": {k: v for k, v in family.metadata.items() if k != "seed"},
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    io.write_json(args.out + ".json", sidecar)
    print(f"wrote {len(family)} sequences of length {family.length} to {args.out}")
    return EXIT_OK


def _require_seed(args):
    if args.seed is None:
        raise SeqoptError("--seed is required for stochastic generation")


def cmd_eval(args):
    bundle = _load_bundle(args.model, args.sequences)
    report = snr_lower_bound(bundle)
    payload = report.as_dict()
    print(json.dumps(payload, indent=2))
    if args.out:
        io.write_json(args.out + ".json", payload)
        io.write_report_csv(args.out + ".csv", report)
    return EXIT_OK


def cmd_optimize(args):
    model, channels = io.read_model_json(args.model)
    inst = ProblemInstance.from_channels(model, channels)
    opts = SolverOptions(tol=args.tol, max_iters=args.max_iters,
                         restarts=args.restarts, seed=args.seed,
                         step_init=args.step_init)
    start = None
    if args.start:
        sequences = io.read_sequences_csv(args.start)
        bundle = validate_model(model, channels, sequences)
        start = DecisionVector.from_coefficients(
            [decompose(s) for s in bundle.sequences], inst)
    try:
        result = solve(inst, start=start, opts=opts)
    except NumericalError as exc:
        if getattr(exc, "last_point", None) is not None and args.out:
            _write_solution(args.out, exc.last_point, inst, model, trace=None)
        raise
    cert = kkt_multipliers(result.x, inst)
    _write_solution(args.out, result.x, inst, model, result.trace)
    cert_payload = cert.as_dict()
    cert_payload.update({
        "objective": result.objective,
        "grad_norm": result.grad_norm,
        "status": result.status,
        "iterations": result.iterations,
        "polish_iterations": result.polish_iterations,
        "restart": result.restart,
        "config": {"seed": args.seed, "tol": args.tol,
                   "max_iters": args.max_iters, "restarts": args.restarts,
                   "step_init": args.step_init, "kkt_tol": args.kkt_tol,
                   "start": args.start},
    })
    io.write_json(args.out + ".kkt.json", cert_payload)
    print(f"objective {result.objective:.12g}  grad_norm {result.grad_norm:.3g}  "
          f"mu_spread {cert.mu_spread:.3g}  residual {cert.stationarity_residual:.3g}")
    if cert.mu_spread > args.kkt_tol or cert.stationarity_residual > args.kkt_tol:
        print("KKT consistency above tolerance", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _write_solution(out, x, inst, model, trace=None):
    coeff_list = [x.coefficients(u) for u in range(inst.n_users)]
    sequences = [
        SpreadingSequence(reconstruct(c.alpha), user_id=u)
        for u, c in enumerate(coeff_list)
    ]
    io.write_sequences_csv(out + ".chips.csv", sequences)
    io.write_coefficients_csv(out + ".coeffs.csv", coeff_list)
    if trace is not None:
        io.write_trace_csv(out + ".trace.csv", trace)


def cmd_simulate(args):
    bundle = _load_bundle(args.model, args.sequences)
    profiles = None
    if args.profile != "rectangular":
        if not args.profile.startswith("exp:"):
            raise SeqoptError(
                f"--profile must be 'rectangular' or 'exp:RATE', got {args.profile!r}")
        rate = float(args.profile.split(":", 1)[1])
        T = bundle.model.symbol_duration
        profiles = [
            DelayPowerProfile.truncated_exponential(
                ch.profile_height, ch.delay_span * T, rate)
            for ch in bundle.channels
        ]
    estimate = estimate_snr(bundle, args.trials, args.seed, nu=args.nu,
                            ref_user=args.user, profiles=profiles,
                            keep_trials=bool(args.dump_trials))
    if args.compare_bound:
        payload = compare_with_bound(bundle, estimate, args.user)
    else:
        payload = estimate.as_dict()
    print(json.dumps(payload, indent=2))
    if args.out:
        io.write_json(args.out, payload)
    if args.dump_trials:
        io.write_trials_csv(args.dump_trials, estimate.trial_components)
    return EXIT_OK


def cmd_kkt_check(args):
    model, channels = io.read_model_json(args.model)
    sequences = io.read_sequences_csv(args.sequences)
    bundle = validate_model(model, channels, sequences)
    inst = ProblemInstance.from_channels(model, channels)
    x = DecisionVector.from_coefficients(
        [decompose(s) for s in bundle.sequences], inst)
    cert = kkt_multipliers(x, inst)
    payload = cert.as_dict()
    print(json.dumps({"mu": payload["mu"],
                      "mu_spread": cert.mu_spread,
                      "stationarity_residual": cert.stationarity_residual},
                     indent=2))
    if args.out:
        io.write_json(args.out, payload)
    if cert.mu_spread > args.kkt_tol or cert.stationarity_residual > args.kkt_tol:
        return EXIT_NUMERICAL
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="seqopt",
        description="Spreading-sequence SNR bounds, optimization and simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a sequence family")
    p.add_argument("--family", required=True,
                   choices=["gold", "random-binary", "random-phase", "chebyshev"])
    p.add_argument("--degree", type=int,
                   help="LFSR or Chebyshev degree; gold presets: "
                        + ", ".join(str(d) for d in sorted(PREFERRED_PAIRS)))
    p.add_argument("--n", type=int, help="sequence length (random families)")
    p.add_argument("--count", "--k", type=int, default=1, dest="count",
                   help="number of sequences (random/chebyshev families)")
    p.add_argument("--variant", default="binary", choices=["binary", "phase"])
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="closed-form SNR lower bounds")
    p.add_argument("--model", required=True)
    p.add_argument("--sequences", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("optimize", help="minimize the weighted interference objective")
    p.add_argument("--model", required=True)
    p.add_argument("--start", help="sequence CSV used as warm start")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--step-init", type=float)
    p.add_argument("--kkt-tol", type=float, default=1e-6)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="Monte Carlo SNR estimate")
    p.add_argument("--model", required=True)
    p.add_argument("--sequences", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--nu", type=int, default=16)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--user", type=int, default=0)
    p.add_argument("--profile", default="rectangular",
                   help="'rectangular' or 'exp:RATE'")
    p.add_argument("--compare-bound", action="store_true")
    p.add_argument("--dump-trials", help="per-trial CSV path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("kkt-check", help="KKT multipliers at a given point")
    p.add_argument("--model", required=True)
    p.add_argument("--sequences", required=True)
    p.add_argument("--kkt-tol", type=float, default=1e-6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kkt_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SeqoptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
