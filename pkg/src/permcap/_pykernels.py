"""Pure Python / numpy fallback for the enumeration kernels.

Every function expects a C-contiguous float64 matrix with ``rows <= cols``
and returns raw float sums. Orientation, overflow checks and the exact
integer z^0 coefficient are handled by :mod:`permcap.permanents`.
"""

from math import comb

import numpy as np

NAME = "python"

# Subset tables grow as 2**n; above this we stream subsets in chunks.
_CHUNK_BITS = 16


def _ryser_weights(m, n):
    w = np.zeros(n + 1)
    for k in range(1, m + 1):
        w[k] = (-1) ** (m - k) * comb(n - k, m - k)
    return w


def _subset_chunks(n):
    total = 1 << n
    step = 1 << min(n, _CHUNK_BITS)
    bits = np.arange(n, dtype=np.int64)
    for start in range(1, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        yield ((idx[:, None] >> bits) & 1).astype(np.float64)


def permanent_ryser(a):
    m, n = a.shape
    acc = np.zeros(n + 1)
    for masks in _subset_chunks(n):
        k = masks.sum(axis=1).astype(np.int64)
        keep = k <= m
        rows = masks[keep] @ a.T
        acc += np.bincount(k[keep], weights=rows.prod(axis=1), minlength=n + 1)
    return float(_ryser_weights(m, n) @ acc)


def poly_ryser(a):
    """Coefficients mu_0..mu_m of Per(1 + z a) via Ryser's formula."""
    m, n = a.shape
    acc = np.zeros((n + 1, m + 1))
    for masks in _subset_chunks(n):
        k = masks.sum(axis=1).astype(np.int64)
        keep = k <= m
        k = k[keep]
        rows = masks[keep] @ a.T
        coef = np.zeros((rows.shape[0], m + 1))
        coef[:, 0] = 1.0
        for i in range(m):
            r = rows[:, i : i + 1]
            coef[:, 1 : i + 2] = coef[:, 1 : i + 2] + r * coef[:, : i + 1]
        np.add.at(acc, k, coef)
    mu = np.zeros(m + 1)
    for k in range(1, m + 1):
        base = (-1) ** (m - k) * comb(n - k, m - k)
        for i in range(m + 1):
            mu[i] += base * k ** (m - i) * acc[k, i]
    return mu


def permanent_definition(a):
    m, n = a.shape
    rows = a.tolist()

    def walk(i, used, prefix):
        row = rows[i]
        total = 0.0
        if i == m - 1:
            for j in range(n):
                if not used >> j & 1:
                    total += prefix * row[j]
            return total
        for j in range(n):
            if not used >> j & 1:
                total += walk(i + 1, used | (1 << j), prefix * row[j])
        return total

    return walk(0, 0, 1.0)


def poly_definition(a):
    m, n = a.shape
    rows = a.tolist()
    mu = [0.0] * (m + 1)

    def walk(i, used, poly):
        row = rows[i]
        for j in range(n):
            if used >> j & 1:
                continue
            w = row[j]
            nxt = [1.0] * (i + 2)
            for t in range(1, i + 1):
                nxt[t] = poly[t] + w * poly[t - 1]
            nxt[i + 1] = w * poly[i]
            if i == m - 1:
                for t in range(m + 1):
                    mu[t] += nxt[t]
            else:
                walk(i + 1, used | (1 << j), nxt)

    walk(0, 0, [1.0])
    return np.array(mu)
