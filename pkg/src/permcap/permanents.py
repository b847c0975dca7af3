"""Permanents and extended permanents of real rectangular matrices.

For an M x N matrix the permanent sums, over every injective assignment of
the shorter dimension into the longer one, the product of the selected
entries (a determinant with all signs positive). The extended permanent of
``A`` is ``Per([I_M A])``, equivalently the sum of permanents of every
row-subset of ``A``.

Three algorithms are provided for each quantity: direct enumeration,
cofactor (Laplace) expansion along the first row, and Ryser's
inclusion-exclusion formula. Passing an :class:`OpCounter` selects a
formula-faithful evaluation whose multiplication tally matches
:func:`predicted_multiplications`; without a counter a fast path is used
(compiled kernels where available, see :mod:`permcap.kernels`).

Counting conventions
--------------------
* one scalar float multiply counts as one; additions are free;
* in the polynomial methods the z^0 coefficient of every all-ones block is
  the exact integer ``Per(1)``; products with it and the integer
  combinatorial constants of the definition and Laplace recursions are not
  tallied, whereas the Ryser method tallies the ``m**2`` products of its
  accumulated subset sums by their integer weights;
* the final dot product with the ``c_k`` weights is common to all three
  polynomial methods and is not tallied.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionError, PermanentOverflowError

METHODS = ("definition", "laplace", "ryser")
ALGORITHMS = (
    "definition",
    "laplace",
    "ryser",
    "poly_definition",
    "poly_laplace",
    "poly_ryser",
)


@dataclass
class OpCounter:
    """Running tally of scalar multiplications."""

    multiplications: int = 0

    def add(self, n: int = 1) -> None:
        self.multiplications += n


@dataclass(frozen=True)
class PermanentPolynomial:
    """Coefficients of ``Per(1_{MxN} + z A)`` in ascending powers of ``z``."""

    coefficients: np.ndarray
    shape: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coefficients)


def as_matrix(a) -> np.ndarray:
    """Validate and convert to a float64 2-D array with both dims >= 1."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"matrix must have M, N >= 1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise PermanentOverflowError("matrix has non-finite entries")
    return arr


def _wide(a: np.ndarray) -> np.ndarray:
    # Per(A) = Per(A^T); every algorithm runs on the rows <= cols orientation
    return a if a.shape[0] <= a.shape[1] else a.T


def _checked(value, what):
    if not math.isfinite(value):
        raise PermanentOverflowError(f"{what} overflowed the float64 range")
    return float(value)


def _checked_array(values, what):
    values = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise PermanentOverflowError(f"{what} overflowed the float64 range")
    return values


def _falling(n: int, k: int) -> int:
    return math.perm(n, k)


# ---------------------------------------------------------------------------
# Permanents


def per_definition(a, counter: OpCounter | None = None) -> float:
    """Permanent by summing over all injective row-to-column assignments.

    Examples
    --------
    >>> per_definition([[1, 2], [3, 4]])
    10.0
    """
    w = _wide(as_matrix(a))
    m, n = w.shape
    if counter is None:
        return _checked(kernels.permanent_definition(w), "permanent")
    rows = w.tolist()
    total = 0.0
    for cols in itertools.permutations(range(n), m):
        prod = rows[0][cols[0]]
        for i in range(1, m):
            prod *= rows[i][cols[i]]
        counter.add(m - 1)
        total += prod
    return _checked(total, "permanent")


def per_laplace(a, counter: OpCounter | None = None) -> float:
    """Permanent by recursive cofactor expansion along the first row.

    For M > N the expansion runs along the first column instead. Without a
    counter the sub-permanents are memoised on their column set.
    """
    w = _wide(as_matrix(a))
    m, n = w.shape
    rows = w.tolist()

    if counter is None:
        memo = {}

        def sub(r, cols):
            key = (r, cols)
            if key in memo:
                return memo[key]
            row = rows[r]
            if r == m - 1:
                out = sum(row[j] for j in cols)
            else:
                out = 0.0
                for idx, j in enumerate(cols):
                    out += row[j] * sub(r + 1, cols[:idx] + cols[idx + 1 :])
            memo[key] = out
            return out

        return _checked(sub(0, tuple(range(n))), "permanent")

    def expand(r, cols):
        row = rows[r]
        if r == m - 1:
            return sum(row[j] for j in cols)
        out = 0.0
        for idx, j in enumerate(cols):
            child = expand(r + 1, cols[:idx] + cols[idx + 1 :])
            counter.add()
            out += row[j] * child
        return out

    return _checked(expand(0, tuple(range(n))), "permanent")


def _ryser_weight(m, n, k):
    return (-1) ** (m - k) * math.comb(n - k, m - k)


def per_ryser(a, counter: OpCounter | None = None) -> float:
    """Permanent by Ryser's inclusion-exclusion over column subsets.

    The fast path walks subsets in Gray-code order with incremental row
    sums; the counted path recomputes each product from scratch.
    """
    w = _wide(as_matrix(a))
    m, n = w.shape
    if counter is None:
        return _checked(kernels.permanent_ryser(w), "permanent")
    rows = w.tolist()
    total = 0.0
    for k in range(1, m + 1):
        class_sum = 0.0
        for cols in itertools.combinations(range(n), k):
            prod = sum(rows[0][j] for j in cols)
            for i in range(1, m):
                prod *= sum(rows[i][j] for j in cols)
            counter.add(m - 1)
            class_sum += prod
        counter.add()
        total += _ryser_weight(m, n, k) * class_sum
    return _checked(total, "permanent")


_PERMANENT = {
    "definition": per_definition,
    "laplace": per_laplace,
    "ryser": per_ryser,
}


def permanent(a, method: str = "ryser", counter: OpCounter | None = None) -> float:
    """Dispatch to one of :data:`METHODS`."""
    try:
        fn = _PERMANENT[method]
    except KeyError:
        raise ValueError(f"unknown permanent method {method!r}") from None
    return fn(a, counter)


def laplace_block_expansion(a, rows) -> float:
    """Expand ``Per(A)`` over a fixed set of rows (block Laplace expansion).

    Sums ``Per(A[rows, S]) * Per(A[rest, ~S])`` over all column subsets ``S``
    of size ``len(rows)``. Requires M <= N; the permanent of a matrix with no
    rows is 1.
    """
    arr = as_matrix(a)
    m, n = arr.shape
    if m > n:
        raise DimensionError("block expansion needs M <= N; transpose first")
    rows = tuple(sorted(rows))
    if not rows or len(rows) > m or len(set(rows)) != len(rows):
        raise DimensionError(f"bad row selection {rows!r}")
    rest = [i for i in range(m) if i not in rows]
    total = 0.0
    for cols in itertools.combinations(range(n), len(rows)):
        other = [j for j in range(n) if j not in cols]
        head = per_ryser(arr[np.ix_(rows, cols)])
        tail = per_ryser(arr[np.ix_(rest, other)]) if rest else 1.0
        total += head * tail
    return _checked(total, "permanent")


# ---------------------------------------------------------------------------
# Extended permanents


def extended_per_direct(a, counter: OpCounter | None = None, method: str = "ryser") -> float:
    """Extended permanent as the sum of permanents of all subsets of the
    shorter dimension (the empty subset contributes 1).

    Examples
    --------
    >>> extended_per_direct([[3.0]])
    4.0
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 2 and 0 in arr.shape:
        return 1.0
    w = _wide(as_matrix(arr))
    m = w.shape[0]
    total = 1.0
    for k in range(1, m + 1):
        for sel in itertools.combinations(range(m), k):
            total += permanent(w[list(sel), :], method, counter)
    return _checked(total, "extended permanent")


def augmented(a) -> np.ndarray:
    """``[I A]`` oriented so its row count is ``min(M, N)``."""
    w = _wide(as_matrix(a))
    m = w.shape[0]
    return np.hstack([np.eye(m), w])


def _poly_definition_counted(rows, m, n, counter):
    mu = [0.0] * (m + 1)
    for cols in itertools.permutations(range(n), m):
        b = [1.0, rows[0][cols[0]]]
        for k in range(1, m):
            w = rows[k][cols[k]]
            nxt = [1.0] * (k + 2)
            nxt[1] = w + b[1]
            for t in range(2, k + 1):
                nxt[t] = w * b[t - 1] + b[t]
            nxt[k + 1] = w * b[k]
            counter.add(k)
            b = nxt
        for t in range(1, m + 1):
            mu[t] += b[t]
    return mu


def _poly_laplace(rows, m, n, counter):
    memo = {} if counter is None else None

    def expand(r, cols):
        if memo is not None and (r, cols) in memo:
            return memo[(r, cols)]
        row = rows[r]
        if r == m - 1:
            out = [len(cols), sum(row[j] for j in cols)]
        else:
            deg = m - r - 1
            out = [0] + [0.0] * (deg + 1)
            for idx, j in enumerate(cols):
                child = expand(r + 1, cols[:idx] + cols[idx + 1 :])
                w = row[j]
                out[0] += child[0]
                # child[0] is the exact integer count Per(1) of the block
                out[1] += child[1] + w * child[0]
                for t in range(2, deg + 1):
                    out[t] += child[t] + w * child[t - 1]
                out[deg + 1] += w * child[deg]
                if counter is not None:
                    counter.add(deg)
        if memo is not None:
            memo[(r, cols)] = out
        return out

    return expand(0, tuple(range(n)))


def _poly_ryser_counted(rows, m, n, counter):
    mu = [0.0] * (m + 1)
    for k in range(1, m + 1):
        acc = [0.0] * (m + 1)
        for cols in itertools.combinations(range(n), k):
            r = [sum(row[j] for j in cols) for row in rows]
            b = [1.0, r[0]]
            for i in range(1, m):
                nxt = [1.0] * (i + 2)
                nxt[1] = r[i] + b[1]
                for t in range(2, i + 1):
                    nxt[t] = r[i] * b[t - 1] + b[t]
                nxt[i + 1] = r[i] * b[i]
                counter.add(i)
                b = nxt
            for t in range(1, m + 1):
                acc[t] += b[t]
        base = _ryser_weight(m, n, k)
        for t in range(1, m + 1):
            mu[t] += (base * k ** (m - t)) * acc[t]
            counter.add()
    return mu


def per_polynomial(a, method: str = "ryser", counter: OpCounter | None = None) -> PermanentPolynomial:
    """Coefficients of ``Per(1_{MxN} + z a)`` as a polynomial in ``z``.

    The constant coefficient is the exact count ``Per(1_{MxN})``.

    Examples
    --------
    >>> per_polynomial(np.ones((2, 2))).coefficients
    array([2., 4., 2.])
    """
    if method not in METHODS:
        raise ValueError(f"unknown polynomial method {method!r}")
    arr = as_matrix(a)
    w = _wide(arr)
    m, n = w.shape
    rows = w.tolist()
    if method == "definition":
        if counter is None:
            mu = kernels.poly_definition(w)
        else:
            mu = _poly_definition_counted(rows, m, n, counter)
    elif method == "laplace":
        mu = _poly_laplace(rows, m, n, counter)
    else:
        mu = kernels.poly_ryser(w) if counter is None else _poly_ryser_counted(rows, m, n, counter)
    coeffs = np.array(mu, dtype=np.float64)
    coeffs[0] = _falling(n, m)
    return PermanentPolynomial(_checked_array(coeffs, "permanent polynomial"), arr.shape)


def extended_weights(shape) -> np.ndarray:
    """Weights ``c_k = |M-N|! / (max(M,N) - k)!`` for k = 0..min(M,N)."""
    mm, nn = shape
    lo, hi = min(mm, nn), max(mm, nn)
    num = math.factorial(hi - lo)
    return np.array([num / math.factorial(hi - k) for k in range(lo + 1)])


def extended_per_poly(a, method: str = "ryser", counter: OpCounter | None = None) -> float:
    """Extended permanent from the coefficients of ``Per(1 + z a)``.

    ``sum_k mu_k c_k``; the k = 0 term is exactly 1.
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 2 and 0 in arr.shape:
        return 1.0
    poly = per_polynomial(arr, method, counter)
    c = extended_weights(poly.shape)
    total = 1.0 + float(poly.coefficients[1:] @ c[1:])
    return _checked(total, "extended permanent")


# ---------------------------------------------------------------------------
# Operation counts


def permanent_multiplications(m: int, n: int, method: str) -> int:
    """Multiplications to evaluate the permanent of an m x n matrix."""
    lo, hi = min(m, n), max(m, n)
    if method == "definition":
        return (lo - 1) * _falling(hi, lo)
    if method == "laplace":
        return sum(_falling(hi, k) for k in range(1, lo))
    if method == "ryser":
        return lo + (lo - 1) * sum(math.comb(hi, k) for k in range(1, lo + 1))
    raise ValueError(f"unknown permanent method {method!r}")


def predicted_multiplications(m: int, n: int, algorithm: str) -> int:
    """Closed-form multiplication count for the extended permanent of an
    m x n matrix by one of :data:`ALGORITHMS`.

    Direct algorithms evaluate the plain permanent of the
    ``min x (min + max)`` augmented matrix ``[I A]``.

    Examples
    --------
    >>> predicted_multiplications(2, 2, "poly_ryser")
    7
    """
    if m < 1 or n < 1:
        raise DimensionError("dimensions must be >= 1")
    lo, hi = min(m, n), max(m, n)
    if algorithm in METHODS:
        return permanent_multiplications(lo, lo + hi, algorithm)
    if algorithm == "poly_definition":
        return lo * (lo - 1) * math.factorial(hi) // (2 * math.factorial(hi - lo))
    if algorithm == "poly_laplace":
        return sum((lo - k) * _falling(hi, k) for k in range(1, lo))
    if algorithm == "poly_ryser":
        return lo * lo + lo * (lo - 1) // 2 * sum(math.comb(hi, k) for k in range(1, lo + 1))
    raise ValueError(f"unknown algorithm {algorithm!r}")


def counted_multiplications(a, algorithm: str) -> int:
    """Run ``algorithm`` on the extended permanent of ``a`` with a counter
    attached and return the tally."""
    counter = OpCounter()
    if algorithm in METHODS:
        permanent(augmented(a), algorithm, counter)
    elif algorithm.startswith("poly_"):
        extended_per_poly(a, algorithm[len("poly_") :], counter)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return counter.multiplications
