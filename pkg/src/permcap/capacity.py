"""Ergodic mutual information: closed-form upper bound and Monte-Carlo.

All rates are in bits. With per-eigenmode scale ``gamma = rho / N_t`` the
bound is ``log2 ExtPer(gamma * Omega * diag(lam))``; gamma is always folded
into the matrix argument.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import ChannelStats, EigenmodeCoupling, KroneckerSpec, sample_channels
from .errors import DimensionError, DomainError
from .permanents import extended_per_poly, per_ryser
from .rng import LEMMA4_STREAM, SampleStream

BLOCK = 4096


@dataclass(frozen=True)
class SnrConfig:
    """Transmit SNR ``rho`` (linear) for ``nt`` transmit eigenmodes."""

    rho: float
    nt: int

    def __post_init__(self):
        if not self.rho > 0:
            raise DomainError(f"rho must be > 0, got {self.rho!r}")
        if self.nt < 1:
            raise DomainError("nt must be >= 1")

    @property
    def gamma(self) -> float:
        return self.rho / self.nt

    @classmethod
    def from_db(cls, snr_db: float, nt: int) -> "SnrConfig":
        return cls(10.0 ** (snr_db / 10.0), nt)


class MCEstimate(NamedTuple):
    mean: float
    stderr: float


class Lemma4Result(NamedTuple):
    mc_estimate: float
    stderr: float
    per_value: float


def gamma_of(snr) -> float:
    """Accept an :class:`SnrConfig` or a bare positive gamma."""
    g = snr.gamma if isinstance(snr, SnrConfig) else float(snr)
    if not g > 0:
        raise DomainError(f"gamma must be > 0, got {g!r}")
    return g


def omega_of(omega) -> np.ndarray:
    if isinstance(omega, EigenmodeCoupling):
        return omega.omega
    arr = np.asarray(omega, dtype=np.float64)
    if arr.ndim != 2 or 0 in arr.shape:
        raise DimensionError(f"omega must be a non-empty 2-D matrix, got {arr.shape}")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise DomainError("omega must be finite and nonnegative")
    return arr


def allocation_of(lam, nt: int) -> np.ndarray:
    arr = np.asarray(lam, dtype=np.float64)
    if arr.shape != (nt,):
        raise DimensionError(f"power allocation must have length {nt}, got shape {arr.shape}")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise DomainError("power allocation must be finite and nonnegative")
    return arr


def check_allocation(lam, nt: int, tol: float = 1e-9) -> np.ndarray:
    """Validate a point of the power simplex ``lam >= 0, sum(lam) = nt``."""
    arr = allocation_of(lam, nt)
    if abs(arr.sum() - nt) > tol:
        raise DomainError(f"power allocation sums to {arr.sum()!r}, expected {nt}")
    return arr


def _ext_per(omega, lam, gamma):
    return extended_per_poly(gamma * omega * lam[None, :], "ryser")


def expected_det(omega, lam, snr) -> float:
    """``E det(I + gamma H diag(lam) H^H)`` in closed form."""
    om = omega_of(omega)
    return _ext_per(om, allocation_of(lam, om.shape[1]), gamma_of(snr))


def bound(omega, lam, snr) -> float:
    """Upper bound on the ergodic mutual information, in bits.

    Parameters
    ----------
    omega : EigenmodeCoupling or array_like
        ``N_r x N_t`` nonnegative coupling.
    lam : array_like
        Nonnegative per-eigenmode powers, length ``N_t``.
    snr : SnrConfig or float
        SNR config or the per-eigenmode scale gamma itself.
    """
    return math.log2(expected_det(omega, lam, snr))


def pq_components(omega, lam, snr, i: int) -> tuple[float, float]:
    """Split ``E(lam) = p + lam[i] * q`` for eigenmode ``i`` (0-based).

    ``p`` is the extended permanent with column ``i`` removed and ``q`` the
    increment when ``lam[i]`` is replaced by one.
    """
    om = omega_of(omega)
    nt = om.shape[1]
    if not 0 <= i < nt:
        raise DimensionError(f"eigenmode index {i} out of range for N_t = {nt}")
    lam = allocation_of(lam, nt)
    g = gamma_of(snr)
    keep = np.arange(nt) != i
    p = _ext_per(om[:, keep], lam[keep], g)
    unit = lam.copy()
    unit[i] = 1.0
    return p, _ext_per(om, unit, g) - p


def all_pq(omega, lam, snr) -> tuple[np.ndarray, np.ndarray]:
    """:func:`pq_components` for every eigenmode."""
    om = omega_of(omega)
    pairs = [pq_components(om, lam, snr, i) for i in range(om.shape[1])]
    p, q = zip(*pairs)
    return np.array(p), np.array(q)


def elementary_symmetric(x) -> np.ndarray:
    """``e_0 .. e_n`` of the entries of ``x``."""
    e = np.zeros(len(x) + 1)
    e[0] = 1.0
    for v in x:
        e[1:] = e[1:] + v * e[:-1]
    return e


def kronecker_bound(spec: KroneckerSpec, lam, snr) -> float:
    """Bound for a separable channel via elementary symmetric functions."""
    lam = allocation_of(lam, spec.lambda_t.size)
    g = gamma_of(snr)
    er = elementary_symmetric(spec.lambda_r)
    et = elementary_symmetric(lam * spec.lambda_t)
    kmax = min(spec.lambda_r.size, spec.lambda_t.size)
    total = sum(g**k * math.factorial(k) * er[k] * et[k] for k in range(kmax + 1))
    return math.log2(total)


# ---------------------------------------------------------------------------
# Monte-Carlo


def log2det_draws(channels: np.ndarray, lam, snr) -> np.ndarray:
    """``log2 det(I + gamma H diag(lam) H^H)`` for each channel in a batch."""
    g = gamma_of(snr)
    lam = np.asarray(lam, dtype=np.float64)
    nr = channels.shape[-2]
    k = np.eye(nr) + g * (channels * lam) @ channels.conj().transpose(0, 2, 1)
    chol = np.linalg.cholesky(k)
    diag = np.abs(np.diagonal(chol, axis1=-2, axis2=-1))
    return 2.0 * np.log2(diag).sum(axis=-1)


def _blocks(samples, block):
    return [(s, min(block, samples - s)) for s in range(0, samples, block)]


def _map_blocks(fn, samples, block, workers):
    spans = _blocks(samples, block)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda span: fn(*span), spans))
    return [fn(*span) for span in spans]


def summarize(values: np.ndarray, block: int = BLOCK) -> MCEstimate:
    """Mean and standard error with a fixed blockwise summation order."""
    n = values.size
    if n == 0:
        raise DomainError("no samples")
    if n == 1:
        return MCEstimate(float(values[0]), math.nan)
    if values.min() == values.max():
        # deterministic channel: exact mean, zero spread
        return MCEstimate(float(values[0]), 0.0)
    mean = sum(float(values[s : s + block].sum()) for s in range(0, n, block)) / n
    sq = sum(float(((values[s : s + block] - mean) ** 2).sum()) for s in range(0, n, block))
    return MCEstimate(mean, math.sqrt(sq / (n - 1) / n))


def mc_draws(stats: ChannelStats, lam, snr, samples: int, seed: int,
             workers: int = 1, block: int = BLOCK) -> np.ndarray:
    """Per-draw mutual information (bits) for draws ``0 .. samples-1``."""
    if samples < 1:
        raise DomainError("samples must be >= 1")
    lam = allocation_of(lam, stats.shape[1])

    def run(start, count):
        return log2det_draws(sample_channels(stats, seed, start, count), lam, snr)

    return np.concatenate(_map_blocks(run, samples, block, workers))


def mc_mutual_info(stats: ChannelStats, lam, snr, samples: int, seed: int,
                   workers: int = 1) -> MCEstimate:
    """Monte-Carlo ergodic mutual information (mean, standard error) in bits.

    Deterministic in ``(seed, samples)`` and independent of ``workers``.
    """
    return summarize(mc_draws(stats, lam, snr, samples, seed, workers))


def lemma4_check(xi, means, samples: int, seed: int, workers: int = 1,
                 block: int = 65536) -> Lemma4Result:
    """Compare a Monte-Carlo estimate of ``E{|det X|^2}`` with ``Per(xi)``.

    ``X`` has independent complex Gaussian entries with (real) means
    ``means`` and second moments ``xi = E|x|^2``; ``means`` may hold at most
    one nonzero per row.
    """
    xi = np.asarray(xi, dtype=np.float64)
    means = np.asarray(means, dtype=np.float64)
    if xi.ndim != 2 or xi.shape[0] != xi.shape[1] or means.shape != xi.shape:
        raise DimensionError("xi and means must be equal square matrices")
    if np.any(np.count_nonzero(means, axis=1) > 1):
        raise DomainError("means may have at most one nonzero entry per row")
    var = xi - means**2
    if np.any(var < -1e-12):
        raise DomainError("xi must dominate means**2 entrywise")
    std = np.sqrt(np.clip(var, 0.0, None))
    stream = SampleStream(seed, LEMMA4_STREAM)

    def run(start, count):
        x = means + std * stream.complex_normal(start, count, xi.shape)
        return np.abs(np.linalg.det(x)) ** 2

    values = np.concatenate(_map_blocks(run, samples, block, workers))
    est = summarize(values, block)
    return Lemma4Result(est.mean, est.stderr, per_ryser(xi))
