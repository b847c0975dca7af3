"""Experiment runners producing CSV tables.

Each runner returns a header and a list of rows; :func:`write_csv` prints
them with a fixed 12-significant-digit float format so identical inputs
give byte-identical files.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .capacity import SnrConfig, bound, lemma4_check, mc_mutual_info
from .permanents import ALGORITHMS, counted_multiplications, predicted_multiplications
from .power_alloc import iwfa, low_snr_policy, mc_reference_optimize
from .scenario import Scenario

COUNTED_MAX_N = 6

HEADERS = {
    "complexity": ["n", *ALGORITHMS, *(f"counted_{a}" for a in ALGORITHMS)],
    "bound_vs_mc": ["snr_db", "bound", "mc_mean", "mc_stderr"],
    "iwfa_vs_policies": [
        "snr_db",
        "bound_equal", "bound_iwfa", "bound_beam",
        "mc_equal_mean", "mc_equal_stderr",
        "mc_iwfa_mean", "mc_iwfa_stderr",
        "mc_beam_mean", "mc_beam_stderr",
        "mc_ref_mean", "mc_ref_stderr",
        "iwfa_iterations", "iwfa_converged",
    ],
    "iwfa_trace": ["snr_db", "iteration", "bound", "delta_bound", "damped", "eigenmode", "lam"],
    "lemma4_check": ["profile", "dim", "mc_estimate", "mc_stderr", "per_value", "z_score"],
}


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def write_csv(header, rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    write_csv(header, rows, buf)
    return buf.getvalue()


def run_complexity(n_grid=range(2, 9)):
    """Predicted multiplication counts for square ``N x N`` inputs.

    For ``N <= 6`` the counts are also measured with an instrumented run on
    a random matrix and checked against the prediction.
    """
    rng = np.random.default_rng(0)
    rows = []
    for n in n_grid:
        predicted = [predicted_multiplications(n, n, a) for a in ALGORITHMS]
        counted = [None] * len(ALGORITHMS)
        if n <= COUNTED_MAX_N:
            a = rng.uniform(0.0, 1.0, (n, n))
            counted = [counted_multiplications(a, alg) for alg in ALGORITHMS]
            for alg, p, c in zip(ALGORITHMS, predicted, counted):
                if p != c:
                    raise AssertionError(f"{alg} at N={n}: counted {c}, predicted {p}")
        rows.append([n, *predicted, *counted])
    return HEADERS["complexity"], rows


def _snr(db, nt):
    return SnrConfig.from_db(db, nt)


def _bound_vs_mc(sc: Scenario, db: float):
    ch = sc.channel
    snr = _snr(db, ch.coupling.nt)
    lam = np.ones(ch.coupling.nt)
    est = mc_mutual_info(ch.stats, lam, snr, sc.mc_samples, sc.seed)
    return [[db, bound(ch.coupling, lam, snr), est.mean, est.stderr]]


def _iwfa_vs_policies(sc: Scenario, db: float):
    ch = sc.channel
    nt = ch.coupling.nt
    snr = _snr(db, nt)
    equal = np.ones(nt)
    trace = iwfa(ch.coupling, snr)
    beam = low_snr_policy(ch.coupling)
    ref = mc_reference_optimize(ch.stats, snr, sc.mc_samples, sc.seed)
    row = [db] + [bound(ch.coupling, lam, snr) for lam in (equal, trace.lam, beam)]
    # shared draws: every allocation sees samples 0..K-1 of the same seed
    for lam in (equal, trace.lam, beam, ref.lam):
        row.extend(mc_mutual_info(ch.stats, lam, snr, sc.mc_samples, sc.seed))
    row += [len(trace.iterations) - 1, trace.converged]
    return [row]


def _iwfa_trace(sc: Scenario, db: float):
    ch = sc.channel
    trace = iwfa(ch.coupling, _snr(db, ch.coupling.nt))
    rows = []
    prev = None
    for k, step in enumerate(trace.iterations):
        delta = None if prev is None else step.bound - prev
        prev = step.bound
        for i, lam in enumerate(step.lam, start=1):
            rows.append([db, k, step.bound, delta, step.damped, i, lam])
    return rows


_PER_SNR = {
    "bound_vs_mc": _bound_vs_mc,
    "iwfa_vs_policies": _iwfa_vs_policies,
    "iwfa_trace": _iwfa_trace,
}


def lemma4_profiles(count: int, dim: int, seed: int):
    """Random variance profiles with one real mean per row on the diagonal."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        means = np.diag(rng.uniform(0.0, 1.5, dim))
        xi = means**2 + rng.uniform(0.1, 2.0, (dim, dim))
        out.append((xi, means))
    return out


def _lemma4(sc: Scenario, workers: int):
    rows = []
    dim = sc.lemma4_dim
    for k, (xi, means) in enumerate(lemma4_profiles(sc.lemma4_profiles, dim, sc.seed)):
        res = lemma4_check(xi, means, sc.mc_samples, sc.seed + k, workers=workers)
        z = (res.mc_estimate - res.per_value) / res.stderr
        rows.append([k, dim, res.mc_estimate, res.stderr, res.per_value, z])
    return rows


def run_experiment(sc: Scenario, workers: int = 1):
    """Run ``sc`` and return ``(header, rows)``.

    Grid points may be evaluated on ``workers`` threads; rows always come
    back in grid order and are independent of ``workers``.
    """
    header = HEADERS[sc.experiment]
    if sc.experiment == "complexity":
        return run_complexity(sc.n_grid)
    if sc.experiment == "lemma4_check":
        return header, _lemma4(sc, workers)
    fn = _PER_SNR[sc.experiment]
    grid = sc.snr_db_grid
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda db: fn(sc, db), grid))
    else:
        parts = [fn(sc, db) for db in grid]
    return header, [row for part in parts for row in part]
