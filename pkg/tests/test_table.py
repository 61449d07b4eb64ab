"""Tests for table validation, distributions, sampling, and subsampling."""

import numpy as np
import pytest

from usptest.errors import (
    DomainError,
    EmptySample,
    EmptyTable,
    NegativeCount,
    SubsampleTooLarge,
)
from usptest.numerics import RandomStream
from usptest.table import (
    ContingencyTable,
    JointDistribution,
    expected_counts,
    sample_table,
    subsample,
    validate_table,
)

MARITAL_COUNTS = [
    [18, 36, 21, 9, 6],
    [12, 36, 45, 36, 21],
    [6, 9, 9, 3, 3],
    [3, 9, 9, 6, 3],
]


class TestValidation:
    def test_marital_margins(self):
        t = validate_table(MARITAL_COUNTS)
        assert t.n == 300
        assert t.shape == (4, 5)
        np.testing.assert_array_equal(t.row_margins, [90, 150, 30, 30])
        np.testing.assert_array_equal(t.col_margins, [39, 90, 84, 54, 33])

    def test_zero_table_is_valid(self):
        t = validate_table([[0]])
        assert t.n == 0
        assert t.shape == (1, 1)

    def test_integral_floats_accepted(self):
        t = validate_table(np.array([[1.0, 2.0], [3.0, 4.0]]))
        assert t.counts.dtype == np.int64
        assert t.n == 10

    def test_negative_count_names_cell(self):
        with pytest.raises(NegativeCount, match=r"\(0,1\)"):
            validate_table([[1, -1]])

    def test_non_integral_rejected(self):
        with pytest.raises(DomainError, match=r"\(1,0\)"):
            validate_table([[1, 2], [3.5, 4]])

    def test_ragged_rejected(self):
        with pytest.raises(DomainError):
            validate_table([[1, 2], [3]])

    def test_empty_rejected(self):
        with pytest.raises(EmptyTable):
            validate_table([])
        with pytest.raises(EmptyTable):
            validate_table([[], []])

    def test_immutable(self):
        t = validate_table([[1, 2], [3, 4]])
        with pytest.raises(ValueError):
            t.counts[0, 0] = 5
        with pytest.raises(AttributeError):
            t.n = 7

    def test_input_not_aliased(self):
        arr = np.array([[1, 2], [3, 4]], dtype=np.int64)
        t = validate_table(arr)
        arr[0, 0] = 99
        assert t.counts[0, 0] == 1
        assert arr.flags.writeable

    def test_equality_and_hash(self):
        a = validate_table([[1, 2], [3, 4]])
        b = validate_table([[1, 2], [3, 4]])
        c = validate_table([[1, 2], [3, 5]])
        assert a == b and hash(a) == hash(b)
        assert a != c


class TestJointDistribution:
    def test_product_detection(self):
        q = np.array([0.3, 0.7])
        r = np.array([0.25, 0.25, 0.5])
        d = JointDistribution(np.outer(q, r))
        assert d.is_product(tol=1e-12)

    def test_non_product(self):
        d = JointDistribution([[0.5, 0.0], [0.0, 0.5]])
        assert not d.is_product(tol=1e-12)

    def test_sum_must_be_one(self):
        with pytest.raises(DomainError):
            JointDistribution([[0.5, 0.4]])

    def test_negative_entry(self):
        with pytest.raises(DomainError):
            JointDistribution([[1.2, -0.2]])


class TestExpectedCounts:
    def test_marital_reference_cells(self):
        # Classic row-margin * col-margin / n expectations.
        t = validate_table(MARITAL_COUNTS)
        e = expected_counts(t)
        assert e[0, 0] == pytest.approx(90 * 39 / 300)  # 11.7
        assert e[1, 1] == pytest.approx(150 * 90 / 300)  # 45.0
        assert e[3, 4] == pytest.approx(30 * 33 / 300)  # 3.3

    def test_margins_preserved(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            counts = rng.integers(0, 9, size=(3, 4))
            if counts.sum() == 0:
                counts[0, 0] = 1
            t = validate_table(counts)
            e = expected_counts(t)
            np.testing.assert_allclose(e.sum(axis=1), t.row_margins, atol=1e-9)
            np.testing.assert_allclose(e.sum(axis=0), t.col_margins, atol=1e-9)

    def test_zero_margin_row(self):
        t = validate_table([[5, 5], [0, 0]])
        e = expected_counts(t)
        np.testing.assert_allclose(e, [[5.0, 5.0], [0.0, 0.0]])

    def test_empty_sample(self):
        with pytest.raises(EmptySample):
            expected_counts(validate_table([[0, 0], [0, 0]]))


class TestSampleTable:
    def test_point_mass(self):
        d = JointDistribution([[0.0, 1.0], [0.0, 0.0]])
        t = sample_table(d, 50, RandomStream(0))
        np.testing.assert_array_equal(t.counts, [[0, 50], [0, 0]])

    def test_total_and_shape(self):
        d = JointDistribution(np.full((3, 3), 1 / 9))
        t = sample_table(d, 77, RandomStream(1))
        assert t.n == 77
        assert t.shape == (3, 3)

    def test_cell_frequencies_uniform(self):
        d = JointDistribution(np.full((2, 2), 0.25))
        t = sample_table(d, 100_000, RandomStream(2))
        np.testing.assert_allclose(t.counts / t.n, 0.25, atol=0.01)

    def test_mean_matches_probabilities(self):
        # Multinomial cell means are n * p; check with 3 sigma slack.
        probs = np.array([[0.05, 0.15], [0.4, 0.4]])
        d = JointDistribution(probs)
        n, reps = 50, 4000
        total = np.zeros((2, 2))
        for i in range(reps):
            total += sample_table(d, n, RandomStream(5, (i,))).counts
        mean = total / reps
        se = np.sqrt(probs * (1 - probs) * n / reps)
        assert np.all(np.abs(mean - n * probs) <= 3 * se + 1e-9)

    def test_reproducible(self):
        d = JointDistribution(np.full((2, 3), 1 / 6))
        a = sample_table(d, 40, RandomStream(9, (4,)))
        b = sample_table(d, 40, RandomStream(9, (4,)))
        assert a == b

    def test_zero_n(self):
        d = JointDistribution([[1.0]])
        assert sample_table(d, 0, RandomStream(0)).n == 0


class TestSubsample:
    def test_full_subsample_is_identity(self):
        t = validate_table(MARITAL_COUNTS)
        s = subsample(t, t.n, RandomStream(0))
        assert s == t

    def test_zero_subsample(self):
        t = validate_table([[3, 4], [5, 6]])
        s = subsample(t, 0, RandomStream(0))
        assert s.n == 0
        assert s.shape == t.shape

    def test_too_large(self):
        t = validate_table([[3, 4], [5, 6]])
        with pytest.raises(SubsampleTooLarge):
            subsample(t, 19, RandomStream(0))

    def test_cellwise_bounds(self):
        t = validate_table(MARITAL_COUNTS)
        for i in range(30):
            s = subsample(t, 100, RandomStream(1, (i,)))
            assert s.n == 100
            assert np.all(s.counts <= t.counts)
            assert np.all(s.counts >= 0)

    def test_hypergeometric_frequency(self):
        # Subsampling 2 of the 4 observations in diag([2, 2]): the draw keeps
        # the diagonal pattern with probability 1 - 4/C(4,2) = ... both cells
        # one each has probability C(2,1)C(2,1)/C(4,2) = 4/6, all other splits
        # 2/6, so P(some diagonal cell reaches 2) = 1/3.
        t = validate_table([[2, 0], [0, 2]])
        reps = 100_000
        hits = 0
        base = RandomStream(7)
        for i in range(reps):
            s = subsample(t, 2, base.child(i))
            if s.counts[0, 0] == 1 and s.counts[1, 1] == 1:
                hits += 1
        p_hat = hits / reps
        se = np.sqrt((2 / 3) * (1 / 3) / reps)
        assert abs(p_hat - 2 / 3) <= 3 * se

    def test_reproducible(self):
        t = validate_table(MARITAL_COUNTS)
        a = subsample(t, 84, RandomStream(3, (2,)))
        b = subsample(t, 84, RandomStream(3, (2,)))
        assert a == b


class TestSparseSamplingMean:
    def test_sparse_corner_cell_mean(self):
        # For the 5x8 sparse null, p_11 = (2^-1 / (1 - 2^-5)) * (2^-1 / (1 - 2^-8))
        # which reduces to 2048/7905; the top-left cell of a sampled table has
        # that mean frequency.
        from usptest.simulate import sparse_family

        d = sparse_family(5, 8, 0.0)
        p11 = d.probs[0, 0]
        assert p11 == pytest.approx(2048 / 7905, abs=1e-15)
        reps, n = 10_000, 20
        total = 0
        for i in range(reps):
            total += sample_table(d, n, RandomStream(21, (i,))).counts[0, 0]
        mean = total / (reps * n)
        se = np.sqrt(p11 * (1 - p11) / (reps * n))
        assert abs(mean - p11) <= 3 * se
