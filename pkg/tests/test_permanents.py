import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from permcap.errors import DimensionError, PermanentOverflowError
from permcap.permanents import (
    ALGORITHMS,
    METHODS,
    OpCounter,
    augmented,
    counted_multiplications,
    extended_per_direct,
    extended_per_poly,
    extended_weights,
    laplace_block_expansion,
    per_definition,
    per_laplace,
    per_polynomial,
    per_ryser,
    permanent,
    predicted_multiplications,
)


def brute_permanent(a):
    """Independent oracle: literal sum over injections, no shared code."""
    a = np.asarray(a, dtype=float)
    if a.shape[0] > a.shape[1]:
        a = a.T
    m, n = a.shape
    return sum(
        math.prod(a[i, cols[i]] for i in range(m))
        for cols in itertools.permutations(range(n), m)
    )


def brute_extended(a):
    a = np.asarray(a, dtype=float)
    m = a.shape[0]
    return brute_permanent(np.hstack([np.eye(m), a]))


def rel_close(x, y, tol=1e-9):
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


small_matrices = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: arrays(np.float64, s, elements=st.floats(0, 10, allow_subnormal=False))
)


@pytest.mark.parametrize("fn", [per_definition, per_laplace, per_ryser])
class TestPermanentExamples:
    def test_two_by_two(self, fn):
        assert fn([[1, 2], [3, 4]]) == 10

    def test_wide_rectangle(self, fn):
        assert fn([[1, 2, 3], [4, 5, 6]]) == 58

    def test_tall_equals_wide(self, fn):
        assert fn([[1, 4], [2, 5], [3, 6]]) == 58

    def test_all_ones_five(self, fn):
        assert fn(np.ones((5, 5))) == 120

    def test_ones_three_by_five(self, fn):
        assert fn(np.ones((3, 5))) == 60

    def test_row_vector_sums(self, fn):
        assert fn([[1.5, 2.0, -0.5]]) == pytest.approx(3.0)

    def test_diagonal(self, fn):
        assert fn(np.diag([2.0, 3.0, 4.0])) == 24


def test_dispatch_and_unknown_method():
    assert permanent([[1, 2], [3, 4]], "laplace") == 10
    with pytest.raises(ValueError):
        permanent([[1.0]], "gauss")


@pytest.mark.parametrize("bad", [np.ones(3), np.ones((0, 2)), np.ones((2, 2, 2))])
def test_bad_shapes(bad):
    with pytest.raises(DimensionError):
        per_ryser(bad)


@pytest.mark.parametrize("fn", [per_definition, per_laplace, per_ryser, extended_per_poly])
def test_overflow_is_reported(fn):
    a = np.full((4, 4), 1e100)
    with pytest.raises(PermanentOverflowError):
        fn(a)


def test_nonfinite_input_rejected():
    with pytest.raises(PermanentOverflowError):
        per_ryser([[1.0, np.inf]])


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_methods_match_brute_force(a):
    ref = brute_permanent(a)
    for m in METHODS:
        assert rel_close(permanent(a, m), ref)


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_transpose_invariance(a):
    assert rel_close(per_ryser(a), per_ryser(a.T))


@settings(max_examples=40, deadline=None)
@given(small_matrices, st.floats(0.1, 3.0))
def test_scalar_scaling(a, mu):
    k = min(a.shape)
    assert rel_close(per_ryser(mu * a), mu**k * per_ryser(a))


def test_row_and_column_scaling(rng):
    for _ in range(20):
        m, n = sorted(rng.integers(1, 6, 2))
        a = rng.uniform(0, 2, (m, n))
        d = rng.uniform(0.5, 2, m)
        assert rel_close(per_ryser(np.diag(d) @ a), np.prod(d) * per_ryser(a))
        b = a.T  # tall: scale columns
        assert rel_close(per_ryser(b @ np.diag(d)), np.prod(d) * per_ryser(b))


def test_block_laplace_expansion(rng):
    for _ in range(15):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(m, 7))
        a = rng.uniform(0, 3, (m, n))
        ref = per_ryser(a)
        assert rel_close(laplace_block_expansion(a, [0]), ref)
        assert rel_close(laplace_block_expansion(a, range(m)), ref)
        if m > 1:
            assert rel_close(laplace_block_expansion(a, [0, m - 1]), ref)


def test_block_laplace_rejects_tall():
    with pytest.raises(DimensionError):
        laplace_block_expansion(np.ones((3, 2)), [0])


class TestExtended:
    def test_scalar(self):
        assert extended_per_direct([[3.0]]) == 4
        assert extended_per_poly([[3.0]]) == 4

    def test_all_ones(self):
        assert extended_per_direct(np.ones((2, 2))) == 7
        for m in METHODS:
            assert extended_per_poly(np.ones((2, 2)), m) == pytest.approx(7)

    @pytest.mark.parametrize("shape", [(1, 1), (2, 3), (4, 2)])
    def test_zero_matrix(self, shape):
        assert extended_per_direct(np.zeros(shape)) == 1
        for m in METHODS:
            assert extended_per_poly(np.zeros(shape), m) == 1

    def test_empty_is_one(self):
        assert extended_per_direct(np.zeros((3, 0))) == 1
        assert extended_per_poly(np.zeros((3, 0))) == 1

    def test_weights(self):
        np.testing.assert_allclose(extended_weights((2, 2)), [0.5, 1, 1])
        np.testing.assert_allclose(extended_weights((2, 4)), [2 / 24, 2 / 6, 1])

    def test_augmented_layout(self):
        a = np.arange(6.0).reshape(3, 2)
        aug = augmented(a)
        assert aug.shape == (2, 5)
        np.testing.assert_array_equal(aug[:, :2], np.eye(2))
        np.testing.assert_array_equal(aug[:, 2:], a.T)


@settings(max_examples=50, deadline=None)
@given(small_matrices)
def test_extended_identities(a):
    ref = brute_extended(a)
    assert rel_close(extended_per_direct(a), ref)
    # both augmentations give the same value
    assert rel_close(per_ryser(np.hstack([np.eye(a.shape[0]), a])), ref)
    assert rel_close(per_ryser(np.hstack([np.eye(a.shape[1]), a.T])), ref)
    for m in METHODS:
        assert rel_close(extended_per_direct(a, method=m), ref)
        assert rel_close(extended_per_poly(a, m), ref)


class TestPolynomial:
    def test_all_ones(self):
        for m in METHODS:
            np.testing.assert_allclose(per_polynomial(np.ones((2, 2)), m).coefficients, [2, 4, 2])

    def test_zero(self):
        for m in METHODS:
            np.testing.assert_array_equal(per_polynomial(np.zeros((2, 3)), m).coefficients, [6, 0, 0])

    def test_top_coefficient_is_permanent(self, rng):
        a = rng.uniform(0, 1, (3, 4))
        for m in METHODS:
            assert rel_close(per_polynomial(a, m).coefficients[-1], per_ryser(a))
        assert per_polynomial(np.eye(2)).coefficients[-1] == pytest.approx(1)

    def test_evaluates_permanent_of_shifted(self, rng):
        a = rng.uniform(0, 1, (3, 5))
        poly = per_polynomial(a)
        assert poly.degree == 3
        for z in (0.0, 0.7, -1.3):
            assert rel_close(poly(z), per_ryser(1 + z * a))

    @settings(max_examples=40, deadline=None)
    @given(small_matrices)
    def test_methods_agree(self, a):
        ref = per_polynomial(a, "ryser").coefficients
        scale = max(1.0, np.abs(ref).max())
        for m in ("definition", "laplace"):
            np.testing.assert_allclose(per_polynomial(a, m).coefficients, ref, rtol=1e-9, atol=1e-9 * scale)


class TestCounts:
    def test_formula_examples(self):
        assert predicted_multiplications(2, 2, "poly_ryser") == 7
        assert predicted_multiplications(2, 2, "poly_definition") == 2

    @pytest.mark.parametrize("alg", ALGORITHMS)
    def test_increasing_in_n(self, alg):
        counts = [predicted_multiplications(n, n, alg) for n in range(2, 9)]
        assert all(b > a for a, b in zip(counts, counts[1:]))

    @pytest.mark.parametrize("alg", ALGORITHMS)
    @pytest.mark.parametrize("shape", [(2, 3), (3, 2), (1, 4), (3, 5)])
    def test_rectangular_counts(self, alg, shape, rng):
        a = rng.uniform(0, 1, shape)
        assert counted_multiplications(a, alg) == predicted_multiplications(*shape, alg)

    @pytest.mark.parametrize("n", range(3, 9))
    def test_poly_cheaper_than_direct(self, n):
        for m in METHODS:
            assert predicted_multiplications(n, n, "poly_" + m) <= predicted_multiplications(n, n, m)

    def test_counter_accumulates(self):
        c = OpCounter()
        per_ryser(np.ones((3, 3)), c)
        first = c.multiplications
        per_ryser(np.ones((3, 3)), c)
        assert c.multiplications == 2 * first > 0

    def test_counted_values_match_fast_path(self, rng):
        a = rng.uniform(0, 2, (4, 5))
        for m in METHODS:
            assert rel_close(permanent(a, m, OpCounter()), permanent(a, m))
            assert rel_close(extended_per_poly(a, m, OpCounter()), extended_per_poly(a, m))

    def test_bad_inputs(self):
        with pytest.raises(DimensionError):
            predicted_multiplications(0, 3, "ryser")
        with pytest.raises(ValueError):
            predicted_multiplications(2, 3, "gauss")
