"""File formats: sequence CSV, model JSON, reports, traces, estimates.

All floating-point output uses 17 significant digits so files round-trip
losslessly through text.
"""

import csv
import json

import numpy as np

from .errors import ParseError
from .model import SpreadingSequence, SystemModel, UserChannel

SEQUENCE_HEADER = ["user", "index", "re", "im"]


def fmt(x) -> str:
    return format(float(x), ".17g")


def write_sequences_csv(path, sequences):
    """One chip per row: user, index, re, im (0-based chip index)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SEQUENCE_HEADER)
        for seq in sequences:
            for idx, chip in enumerate(seq.chips):
                writer.writerow([seq.user_id, idx, fmt(chip.real), fmt(chip.imag)])


def read_sequences_csv(path):
    """Parse the sequence CSV; raises ParseError naming the bad line."""
    per_user = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != SEQUENCE_HEADER:
            raise ParseError(f"{path}:1: expected header {','.join(SEQUENCE_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                user = int(row[0])
                idx = int(row[1])
                chip = complex(float(row[2]), float(row[3]))
            except (ValueError, IndexError) as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            per_user.setdefault(user, {})[idx] = chip
    sequences = []
    for user in sorted(per_user):
        chips_map = per_user[user]
        n = len(chips_map)
        if sorted(chips_map) != list(range(n)):
            raise ParseError(f"{path}: user {user} has missing or duplicate chip indices")
        chips = np.array([chips_map[i] for i in range(n)], np.complex128)
        sequences.append(SpreadingSequence(chips, user))
    if not sequences:
        raise ParseError(f"{path}: no chip rows found")
    return sequences


def write_model_json(path, model, channels):
    payload = {
        "n_chips": model.n_chips,
        "n_users": model.n_users,
        "power": model.power,
        "symbol_duration": model.symbol_duration,
        "noise_density": model.noise_density,
        "users": [{"gamma": ch.rician_gain, "c": ch.profile_height,
                   "m": ch.delay_span} for ch in channels],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_model_json(path):
    """Model + channels from JSON; profile mass defaults to the worst case."""
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    try:
        model = SystemModel(
            n_chips=int(payload["n_chips"]),
            n_users=int(payload["n_users"]),
            power=float(payload["power"]),
            symbol_duration=float(payload["symbol_duration"]),
            noise_density=float(payload["noise_density"]),
        )
        channels = [
            UserChannel.worst_case(float(u["gamma"]), float(u["c"]),
                                   int(u["m"]), model.symbol_duration)
            for u in payload["users"]
        ]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: missing or malformed field {exc}") from None
    return model, channels


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def write_report_csv(path, report):
    """Per-user bound rows for sweep post-processing."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "bound", "var_fading_bound",
                         "var_interference", "var_noise"])
        for i, bound in enumerate(report.per_user_bound):
            writer.writerow([i, fmt(bound), fmt(report.var_fading_bound[i]),
                             fmt(report.var_interference[i]), fmt(report.var_noise)])


def write_trace_csv(path, trace):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iter", "f", "grad_norm", "step"])
        for row in trace:
            writer.writerow([int(row[0]), fmt(row[1]), fmt(row[2]), fmt(row[3])])


def write_trials_csv(path, trial_components):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "d", "f", "i", "n"])
        for t, row in enumerate(trial_components):
            writer.writerow([t] + [fmt(v) for v in row])


def write_coefficients_csv(path, coeff_list):
    """Alpha/beta coefficient rows per user and frequency index (0-based)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "index", "alpha_re", "alpha_im",
                         "beta_re", "beta_im"])
        for user, coeffs in enumerate(coeff_list):
            for idx in range(coeffs.n_chips):
                a, b = coeffs.alpha[idx], coeffs.beta[idx]
                writer.writerow([user, idx, fmt(a.real), fmt(a.imag),
                                 fmt(b.real), fmt(b.imag)])
