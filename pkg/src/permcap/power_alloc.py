"""Power allocation over transmit eigenmodes.

The main entry point is :func:`iwfa`, an iterative water-filling scheme on
the permanent-based capacity bound: each sweep freezes the per-eigenmode
decomposition ``E = p_i + lam_i q_i``, water-fills with inverse gains
``p_i / q_i`` and falls back to a damped step whenever the bound fails to
increase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .capacity import (
    all_pq,
    allocation_of,
    check_allocation,
    gamma_of,
    log2det_draws,
    omega_of,
    bound,
)
from .channel import ChannelStats, sample_channels
from .errors import DomainError, InfeasibleError

MAX_DAMPING = 50
ACTIVE_TOL = 1e-12
KKT_TOL = 1e-6


def water_fill(inverse_gains, budget: float) -> np.ndarray:
    """Classic water-filling ``lam_i = (level - g_i)^+`` with ``sum = budget``.

    The level is found exactly by scanning the sorted inverse gains.
    Infinite gains never receive power.

    Examples
    --------
    >>> water_fill([0.5, 1.0], 2.0)
    array([1.25, 0.75])
    """
    g = np.asarray(inverse_gains, dtype=np.float64)
    if g.ndim != 1 or g.size == 0:
        raise DomainError("inverse gains must be a non-empty vector")
    if np.any(np.isnan(g)) or np.any(g < 0):
        raise DomainError("inverse gains must be nonnegative")
    if not budget > 0:
        raise DomainError(f"budget must be > 0, got {budget!r}")
    finite = np.flatnonzero(np.isfinite(g))
    if finite.size == 0:
        raise InfeasibleError("every eigenmode has infinite inverse gain")
    order = finite[np.argsort(g[finite], kind="stable")]
    gs = g[order]
    csum = 0.0
    level = 0.0
    for k in range(1, gs.size + 1):
        csum += gs[k - 1]
        level = (budget + csum) / k
        if k == gs.size or level <= gs[k]:
            break
    lam = np.zeros_like(g)
    lam[order] = np.maximum(level - gs, 0.0)
    return lam


def _inverse_gains(p, q):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(q > 0, p / np.where(q > 0, q, 1.0), np.inf)


@dataclass
class IwfaStep:
    lam: np.ndarray
    bound: float
    damped: bool = False
    damping_steps: int = 0


@dataclass
class IwfaTrace:
    """Iterates of :func:`iwfa`; ``iterations[0]`` is the starting point."""

    iterations: list = field(default_factory=list)
    converged: bool = False
    kkt_residual: float = math.nan

    @property
    def lam(self) -> np.ndarray:
        return self.iterations[-1].lam

    @property
    def bound(self) -> float:
        return self.iterations[-1].bound

    @property
    def bounds(self) -> np.ndarray:
        return np.array([s.bound for s in self.iterations])


def kkt_residual(omega, lam, snr) -> float:
    """Violation of the water-filling optimality conditions at ``lam``.

    Active eigenmodes must share one water level ``lam_i + p_i/q_i``;
    inactive ones must have ``p_i/q_i`` at or above it. Returns the spread
    of active levels plus the worst inactive shortfall, 0 at the optimum.
    """
    om = omega_of(omega)
    lam = allocation_of(lam, om.shape[1])
    p, q = all_pq(om, lam, snr)
    g = _inverse_gains(p, q)
    active = (lam > ACTIVE_TOL) & np.isfinite(g)
    if not active.any():
        return 0.0
    levels = lam[active] + g[active]
    top = levels.max()
    spread = top - levels.min()
    inactive = ~active & np.isfinite(g)
    shortfall = float(np.max(top - g[inactive], initial=0.0))
    return float(max(spread, shortfall, 0.0))


def iwfa(omega, snr, initial=None, tol: float = 1e-10, max_iter: int = 100,
         lam_tol: float = 1e-9) -> IwfaTrace:
    """Maximize the capacity bound over the power simplex.

    Parameters
    ----------
    omega : EigenmodeCoupling or array_like
        Eigenmode coupling matrix.
    snr : SnrConfig or float
        SNR config or per-eigenmode scale gamma.
    initial : array_like, optional
        Starting allocation on the simplex; equal power by default.
    tol : float
        Bound increment (bits) below which a sweep counts as converged.
    max_iter : int
        Maximum number of water-filling sweeps.
    lam_tol : float
        Largest allocation change allowed alongside ``tol``.

    Returns
    -------
    IwfaTrace
        Every accepted iterate with its bound value. Bound values never
        decrease. A sweep that cannot raise the bound even after
        ``MAX_DAMPING`` damped retries ends the run; it then counts as
        converged only if the KKT residual is below ``KKT_TOL``.
    """
    om = omega_of(omega)
    nt = om.shape[1]
    gamma = gamma_of(snr)
    if not tol > 0 or not lam_tol > 0:
        raise DomainError("tol and lam_tol must be > 0")
    lam = np.ones(nt) if initial is None else check_allocation(initial, nt).copy()
    current = bound(om, lam, gamma)
    trace = IwfaTrace([IwfaStep(lam.copy(), current)])
    stalled = False

    for _ in range(max_iter):
        p, q = all_pq(om, lam, gamma)
        cand = water_fill(_inverse_gains(p, q), float(nt))
        value = bound(om, cand, gamma)
        steps = 0
        while value <= current and steps < MAX_DAMPING and np.max(np.abs(cand - lam)) >= lam_tol:
            cand = cand / nt + (nt - 1) / nt * lam
            value = bound(om, cand, gamma)
            steps += 1
        if value <= current:
            stalled = True
            break
        trace.iterations.append(IwfaStep(cand.copy(), value, steps > 0, steps))
        gain = value - current
        moved = np.max(np.abs(cand - lam))
        lam, current = cand, value
        if gain < tol and moved < lam_tol:
            trace.converged = True
            break

    trace.kkt_residual = kkt_residual(om, lam, gamma)
    if stalled:
        trace.converged = trace.kkt_residual < KKT_TOL
    return trace


def low_snr_policy(omega, rel_tol: float = 1e-9) -> np.ndarray:
    """Equal split of the budget over the eigenmodes with the largest column sum."""
    om = omega_of(omega)
    tau = om.sum(axis=0)
    top = tau.max()
    best = tau >= top - rel_tol * abs(top)
    lam = np.zeros(om.shape[1])
    lam[best] = om.shape[1] / best.sum()
    return lam


def high_snr_policy(nt: int) -> np.ndarray:
    """Equal power on every eigenmode."""
    if nt < 1:
        raise DomainError("nt must be >= 1")
    return np.ones(nt)


def project_simplex(v, total: float) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum(x) = total}``."""
    v = np.asarray(v, dtype=np.float64)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - total
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


def _outer_products(channels):
    # row (s, i, k) holds h_j h_j^H entries for every j, so K is one gemv with lam
    s, nr, nt = channels.shape
    return np.einsum("sij,skj->sikj", channels, channels.conj()).reshape(-1, nt)


def _mi_grad(channels, channels_conj, outer, lam, gamma):
    s, nr, _ = channels.shape
    k = np.eye(nr) + gamma * (outer @ lam).reshape(s, nr, nr)
    kinv_h = np.linalg.solve(k, channels)
    # d/d lam_j log det K = gamma h_j^H K^{-1} h_j
    quad = np.einsum("sij,sij->sj", channels_conj, kinv_h).real
    return gamma * quad.mean(axis=0) / math.log(2.0)


@dataclass
class ReferenceResult:
    lam: np.ndarray
    value: float
    converged: bool
    iterations: int


def mc_reference_optimize(stats: ChannelStats, snr, samples: int, seed: int,
                          iters: int = 200, step: float | None = None,
                          initial=None, tol: float = 1e-9) -> ReferenceResult:
    """Maximize the sample-average mutual information on a fixed draw set.

    Projected gradient ascent on the power simplex with common random
    numbers (draws ``0 .. samples-1`` of ``seed``). The default step is
    ``0.1 / gamma``.
    """
    gamma = gamma_of(snr)
    nt = stats.shape[1]
    if samples < 1:
        raise DomainError("samples must be >= 1")
    channels = sample_channels(stats, seed, 0, samples)
    channels_conj = channels.conj()
    outer = _outer_products(channels)
    step = 0.1 / gamma if step is None else step
    lam = np.ones(nt) if initial is None else check_allocation(initial, nt).copy()
    converged = False
    n = 0
    for n in range(1, iters + 1):
        grad = _mi_grad(channels, channels_conj, outer, lam, gamma)
        nxt = project_simplex(lam + step * grad, float(nt))
        moved = np.max(np.abs(nxt - lam))
        lam = nxt
        if moved < tol:
            converged = True
            break
    value = float(log2det_draws(channels, lam, gamma).mean())
    return ReferenceResult(lam, value, converged, n)
