"""Jointly-correlated channel statistics and channel sampling.

The channel in the eigenmode domain is ``H = D + M * G`` (entrywise), with
``D`` the line-of-sight amplitudes, ``M`` the scattering standard
deviations and ``G`` i.i.d. unit-variance complex Gaussian. Its average
power coupling ``Omega = D*D + M*M`` is all the capacity bound needs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NormalizationError
from .rng import CHANNEL_STREAM, SampleStream

NORM_TOL = 1e-9


def _nonneg_matrix(x, name):
    arr = np.array(x, dtype=np.float64)
    if arr.ndim != 2 or 0 in arr.shape:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    if np.any(arr < 0):
        raise DomainError(f"{name} must be entrywise nonnegative")
    return arr


def _check_power(omega, what="coupling"):
    nr, nt = omega.shape
    total = float(omega.sum())
    if abs(total - nt * nr) > NORM_TOL:
        raise NormalizationError(
            f"{what} sums to {total!r}, expected N_t*N_r = {nt * nr} (use renormalize)"
        )


@dataclass(frozen=True)
class EigenmodeCoupling:
    """Nonnegative ``N_r x N_t`` eigenmode power-coupling matrix whose
    entries sum to ``N_t * N_r``."""

    omega: np.ndarray

    def __post_init__(self):
        arr = _nonneg_matrix(self.omega, "omega")
        _check_power(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "omega", arr)

    @property
    def nr(self) -> int:
        return self.omega.shape[0]

    @property
    def nt(self) -> int:
        return self.omega.shape[1]

    @classmethod
    def renormalize(cls, omega) -> "EigenmodeCoupling":
        """Scale ``omega`` so that it meets the power constraint exactly."""
        arr = _nonneg_matrix(omega, "omega")
        total = arr.sum()
        if total <= 0:
            raise NormalizationError("omega is all zeros and cannot be normalized")
        return cls(arr * (arr.size / total))


@dataclass(frozen=True)
class ChannelStats:
    """Line-of-sight matrix ``d`` and scattering matrix ``m``.

    ``d`` may hold nonzeros only on leading-diagonal positions (i, i).
    """

    d: np.ndarray
    m: np.ndarray

    def __post_init__(self):
        d = _nonneg_matrix(self.d, "d")
        m = _nonneg_matrix(self.m, "m")
        if d.shape != m.shape:
            raise DimensionError(f"d {d.shape} and m {m.shape} differ in shape")
        off = d.copy()
        k = min(d.shape)
        off[np.arange(k), np.arange(k)] = 0.0
        if np.any(off != 0):
            raise DomainError("d may only have nonzero entries at positions (i, i)")
        _check_power(d * d + m * m, "d*d + m*m")
        d.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "m", m)

    @property
    def shape(self):
        return self.d.shape

    @classmethod
    def from_coupling(cls, omega) -> "ChannelStats":
        """Pure-scattering statistics (``d = 0``) with the given coupling."""
        om = omega.omega if isinstance(omega, EigenmodeCoupling) else np.asarray(omega, float)
        return cls(np.zeros_like(om), np.sqrt(om))


@dataclass(frozen=True)
class KroneckerSpec:
    """Receive / transmit correlation eigenvalues of a separable channel."""

    lambda_r: np.ndarray
    lambda_t: np.ndarray

    def __post_init__(self):
        lr = np.array(self.lambda_r, dtype=np.float64)
        lt = np.array(self.lambda_t, dtype=np.float64)
        for name, v in (("lambda_r", lr), ("lambda_t", lt)):
            if v.ndim != 1 or v.size == 0:
                raise DimensionError(f"{name} must be a non-empty vector")
            if not np.all(np.isfinite(v)) or np.any(v < 0):
                raise DomainError(f"{name} must be finite and nonnegative")
        if abs(lr.sum() * lt.sum() - lr.size * lt.size) > NORM_TOL:
            raise NormalizationError(
                f"sum(lambda_r) * sum(lambda_t) = {lr.sum() * lt.sum()!r}, "
                f"expected {lr.size * lt.size}"
            )
        object.__setattr__(self, "lambda_r", lr)
        object.__setattr__(self, "lambda_t", lt)

    @classmethod
    def constant_correlation(cls, nr: int, nt: int, alpha_r: float, alpha_t: float) -> "KroneckerSpec":
        return cls(
            constant_correlation_eigenvalues(nr, alpha_r),
            constant_correlation_eigenvalues(nt, alpha_t),
        )

    def stats(self) -> ChannelStats:
        """Rank-one scattering statistics ``m = sqrt(lambda_r) sqrt(lambda_t)^T``."""
        m = np.outer(np.sqrt(self.lambda_r), np.sqrt(self.lambda_t))
        return ChannelStats(np.zeros_like(m), m)


def coupling_from_stats(stats: ChannelStats) -> EigenmodeCoupling:
    """``Omega = d*d + m*m``."""
    return EigenmodeCoupling(stats.d * stats.d + stats.m * stats.m)


def kronecker_coupling(spec: KroneckerSpec) -> EigenmodeCoupling:
    """Rank-one coupling ``lambda_r lambda_t^T``."""
    return EigenmodeCoupling(np.outer(spec.lambda_r, spec.lambda_t))


def constant_correlation_eigenvalues(n: int, alpha: float) -> np.ndarray:
    """Eigenvalues of ``alpha * ones(n, n) + (1 - alpha) * I``, descending.

    >>> constant_correlation_eigenvalues(5, 0.4)
    array([2.6, 0.6, 0.6, 0.6, 0.6])
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    out = np.full(n, 1.0 - alpha)
    out[0] = 1.0 + (n - 1) * alpha
    return out


def eigenmode_marginals(omega) -> tuple[np.ndarray, np.ndarray]:
    """Transmit (column sums) and receive (row sums) correlation eigenvalues."""
    om = omega.omega if isinstance(omega, EigenmodeCoupling) else np.asarray(omega, float)
    return om.sum(axis=0), om.sum(axis=1)


def sample_channels(stats: ChannelStats, seed: int, start: int, count: int,
                    stream: int = CHANNEL_STREAM) -> np.ndarray:
    """Channel draws ``start .. start+count-1`` as a ``(count, N_r, N_t)`` array."""
    g = SampleStream(seed, stream).complex_normal(start, count, stats.shape)
    return stats.d + stats.m * g


def sample_channel(stats: ChannelStats, stream: SampleStream, index: int = 0) -> np.ndarray:
    """Single channel draw number ``index`` from ``stream``."""
    return stats.d + stats.m * stream.complex_normal(index, 1, stats.shape)[0]


JOINT_OMEGA_5X5 = (25 / 5.7) * np.array(
    [
        [0.1, 0.0, 1.0, 0.0, 0.0],
        [0.0, 0.1, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.25, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.25],
    ]
)
"""5 x 5 jointly-correlated example coupling (pure scattering)."""
