"""JSON scenario documents for the experiment driver.

A scenario names one experiment, a channel and the simulation settings::

    {
      "experiment": "bound_vs_mc",
      "nt": 5, "nr": 5,
      "kronecker": {"alpha_t": 0.4, "alpha_r": 0.6},
      "snr_db_grid": [2, 4, 6, 8],
      "mc_samples": 20000,
      "seed": 42
    }

The channel is given by exactly one of ``omega`` (row-major nested list),
``stats`` (``{"d": ..., "m": ...}``) or ``kronecker`` (either
``{"alpha_t", "alpha_r"}`` or ``{"lambda_t", "lambda_r"}``). Every
validation failure raises :class:`ScenarioError` carrying the JSON path of
the offending field.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .channel import ChannelStats, EigenmodeCoupling, KroneckerSpec
from .errors import PermcapError, ScenarioError

EXPERIMENTS = ("complexity", "bound_vs_mc", "iwfa_vs_policies", "iwfa_trace", "lemma4_check")
MC_EXPERIMENTS = ("bound_vs_mc", "iwfa_vs_policies", "lemma4_check")
CHANNEL_KEYS = ("omega", "stats", "kronecker")
DEFAULT_GRID = tuple(float(x) for x in range(2, 17, 2))
DEFAULT_N_GRID = tuple(range(2, 9))
MIN_SAMPLES = 100
_KNOWN = {
    "experiment", "nt", "nr", *CHANNEL_KEYS, "renormalize", "snr_db_grid",
    "mc_samples", "seed", "n_grid", "lemma4",
}


@dataclass(frozen=True)
class Channel:
    """Validated channel: coupling for the bound, stats for sampling."""

    coupling: EigenmodeCoupling
    stats: ChannelStats
    kronecker: KroneckerSpec | None = None


@dataclass(frozen=True)
class Scenario:
    experiment: str
    channel: Channel | None = None
    snr_db_grid: tuple = DEFAULT_GRID
    mc_samples: int = 20000
    seed: int = 42
    n_grid: tuple = DEFAULT_N_GRID
    lemma4_profiles: int = 5
    lemma4_dim: int = 3

    def with_overrides(self, seed=None, samples=None) -> "Scenario":
        out = self
        if seed is not None:
            out = replace(out, seed=_seed(seed, "seed"))
        if samples is not None:
            out = replace(out, mc_samples=_samples(samples, "mc_samples", out.experiment))
        return out


def _int(value, path, low=None):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(path, f"expected an integer, got {value!r}")
    if isinstance(value, float) and not value.is_integer():
        raise ScenarioError(path, f"expected an integer, got {value!r}")
    value = int(value)
    if low is not None and value < low:
        raise ScenarioError(path, f"must be >= {low}, got {value}")
    return value


def _real(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ScenarioError(path, f"expected a finite number, got {value!r}")
    return float(value)


def _vector(value, path, length=None):
    if not isinstance(value, list) or not value:
        raise ScenarioError(path, "expected a non-empty array of numbers")
    out = np.array([_real(v, f"{path}[{i}]") for i, v in enumerate(value)])
    if length is not None and out.size != length:
        raise ScenarioError(path, f"expected {length} entries, got {out.size}")
    return out


def _matrix(value, path, nr, nt):
    if not isinstance(value, list) or len(value) != nr:
        raise ScenarioError(path, f"expected {nr} rows")
    rows = [_vector(row, f"{path}[{i}]", nt) for i, row in enumerate(value)]
    return np.vstack(rows)


def _seed(value, path):
    seed = _int(value, path, 0)
    if seed >= 2**64:
        raise ScenarioError(path, "seed must fit in 64 bits")
    return seed


def _samples(value, path, experiment):
    low = MIN_SAMPLES if experiment in MC_EXPERIMENTS else 1
    return _int(value, path, low)


def _grid(value, path):
    grid = _vector(value, path)
    if np.any(np.diff(grid) <= 0):
        raise ScenarioError(path, "must be strictly increasing")
    return tuple(float(x) for x in grid)


def _wrap(path, build):
    try:
        return build()
    except ScenarioError:
        raise
    except PermcapError as exc:
        raise ScenarioError(path, str(exc)) from exc


def _kronecker(doc, nr, nt):
    if not isinstance(doc, dict):
        raise ScenarioError("kronecker", "expected an object")
    keys = set(doc)
    if keys == {"alpha_t", "alpha_r"}:
        at = _real(doc["alpha_t"], "kronecker.alpha_t")
        ar = _real(doc["alpha_r"], "kronecker.alpha_r")
        for name, a in (("alpha_t", at), ("alpha_r", ar)):
            if not 0.0 <= a <= 1.0:
                raise ScenarioError(f"kronecker.{name}", f"must lie in [0, 1], got {a}")
        return KroneckerSpec.constant_correlation(nr, nt, ar, at)
    if keys == {"lambda_t", "lambda_r"}:
        lt = _vector(doc["lambda_t"], "kronecker.lambda_t", nt)
        lr = _vector(doc["lambda_r"], "kronecker.lambda_r", nr)
        return _wrap("kronecker", lambda: KroneckerSpec(lr, lt))
    raise ScenarioError(
        "kronecker", "expected keys {alpha_t, alpha_r} or {lambda_t, lambda_r}, "
        f"got {sorted(keys)}"
    )


def _channel(doc) -> Channel:
    present = [k for k in CHANNEL_KEYS if k in doc]
    if len(present) != 1:
        raise ScenarioError(
            "channel", f"exactly one of {', '.join(CHANNEL_KEYS)} is required, got {present or 'none'}"
        )
    for key in ("nr", "nt"):
        if key not in doc:
            raise ScenarioError(key, "required field is missing")
    nr = _int(doc["nr"], "nr", 1)
    nt = _int(doc["nt"], "nt", 1)
    renorm = doc.get("renormalize", False)
    if not isinstance(renorm, bool):
        raise ScenarioError("renormalize", "expected true or false")
    kind = present[0]

    if kind == "omega":
        om = _matrix(doc["omega"], "omega", nr, nt)
        build = EigenmodeCoupling.renormalize if renorm else EigenmodeCoupling
        coupling = _wrap("omega", lambda: build(om))
        return Channel(coupling, ChannelStats.from_coupling(coupling))

    if kind == "stats":
        st = doc["stats"]
        if not isinstance(st, dict) or set(st) != {"d", "m"}:
            raise ScenarioError("stats", "expected an object with keys d and m")
        d = _matrix(st["d"], "stats.d", nr, nt)
        m = _matrix(st["m"], "stats.m", nr, nt)
        if renorm:
            total = float((d * d + m * m).sum())
            if total <= 0:
                raise ScenarioError("stats", "d*d + m*m is all zeros")
            scale = math.sqrt(nr * nt / total)
            d, m = d * scale, m * scale
        stats = _wrap("stats", lambda: ChannelStats(d, m))
        return Channel(EigenmodeCoupling(stats.d**2 + stats.m**2), stats)

    spec = _kronecker(doc["kronecker"], nr, nt)
    stats = spec.stats()
    return Channel(EigenmodeCoupling(np.outer(spec.lambda_r, spec.lambda_t)), stats, spec)


def parse_scenario(doc) -> Scenario:
    """Validate a decoded JSON document."""
    if not isinstance(doc, dict):
        raise ScenarioError("$", "scenario must be a JSON object")
    unknown = sorted(set(doc) - _KNOWN)
    if unknown:
        raise ScenarioError(unknown[0], "unknown field")
    experiment = doc.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ScenarioError("experiment", f"expected one of {', '.join(EXPERIMENTS)}, got {experiment!r}")

    kw = {"experiment": experiment}
    needs_channel = experiment in ("bound_vs_mc", "iwfa_vs_policies", "iwfa_trace")
    if needs_channel or any(k in doc for k in CHANNEL_KEYS):
        kw["channel"] = _channel(doc)
    if "snr_db_grid" in doc:
        kw["snr_db_grid"] = _grid(doc["snr_db_grid"], "snr_db_grid")
    if "mc_samples" in doc:
        kw["mc_samples"] = _samples(doc["mc_samples"], "mc_samples", experiment)
    if "seed" in doc:
        kw["seed"] = _seed(doc["seed"], "seed")
    if "n_grid" in doc:
        raw = doc["n_grid"]
        if not isinstance(raw, list) or not raw:
            raise ScenarioError("n_grid", "expected a non-empty array of sizes")
        kw["n_grid"] = parse_n_grid([_int(v, f"n_grid[{i}]") for i, v in enumerate(raw)], "n_grid")
    if "lemma4" in doc:
        l4 = doc["lemma4"]
        if not isinstance(l4, dict) or not set(l4) <= {"profiles", "dim"}:
            raise ScenarioError("lemma4", "expected an object with keys profiles and/or dim")
        if "profiles" in l4:
            kw["lemma4_profiles"] = _int(l4["profiles"], "lemma4.profiles", 1)
        if "dim" in l4:
            kw["lemma4_dim"] = _int(l4["dim"], "lemma4.dim", 1)
    return Scenario(**kw)


def parse_n_grid(values, path="n") -> tuple:
    """Check a complexity grid: distinct sizes within 2..8, kept in order."""
    out = []
    for v in values:
        if not 2 <= v <= 8:
            raise ScenarioError(path, f"sizes must lie in 2..8, got {v}")
        if v in out:
            raise ScenarioError(path, f"duplicate size {v}")
        out.append(v)
    return tuple(out)


def load_scenario(path) -> Scenario:
    """Read and validate a scenario file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError("$", f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"invalid JSON: {exc}") from exc
    return parse_scenario(doc)
