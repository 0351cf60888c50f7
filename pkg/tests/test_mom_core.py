"""Tests for block partitioning, median conventions, and the 1-d estimator."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from momest import (
    BlockPartition,
    Dataset,
    block_means,
    median,
    mom_mean_1d,
    partition_blocks,
    quantile_q14,
)

# ---------------------------------------------------------------------------
# partition_blocks
# ---------------------------------------------------------------------------


def test_partition_10_into_3_blocks_of_3():
    part = partition_blocks(10, 3, seed=0)
    assert part.k == 3 and part.m == 3
    assert part.blocks.shape == (3, 3)
    used = part.blocks.ravel()
    assert len(set(used.tolist())) == 9  # one index unused
    assert set(used.tolist()) <= set(range(10))


def test_partition_singletons_when_k_equals_n():
    part = partition_blocks(8, 8, seed=7)
    assert part.m == 1
    assert sorted(part.blocks.ravel().tolist()) == list(range(8))


def test_partition_seeds_change_shuffle_not_shape():
    a = partition_blocks(6, 2, seed=1)
    b = partition_blocks(6, 2, seed=2)
    assert a.blocks.shape == b.blocks.shape == (2, 3)
    assert not np.array_equal(a.blocks, b.blocks)
    # identical multiset of used indices (here: all of them)
    assert sorted(a.blocks.ravel().tolist()) == sorted(b.blocks.ravel().tolist())


def test_partition_deterministic_in_seed():
    a = partition_blocks(1000, 37, seed=42)
    b = partition_blocks(1000, 37, seed=42)
    assert np.array_equal(a.blocks, b.blocks)


@given(
    n=st.integers(min_value=1, max_value=400),
    k=st.integers(min_value=1, max_value=400),
    seed=st.integers(min_value=0, max_value=2**31),
)
def test_partition_invariants(n, k, seed):
    if k > n:
        with pytest.raises(ValueError):
            partition_blocks(n, k, seed)
        return
    part = partition_blocks(n, k, seed)
    m = n // k
    assert part.m == m
    assert part.blocks.shape == (k, m)
    used = part.blocks.ravel()
    assert len(set(used.tolist())) == k * m  # all distinct
    assert used.min() >= 0 and used.max() < n
    assert n - k * m == n % k  # leftover count


def test_partition_rejects_bad_k():
    with pytest.raises(ValueError):
        partition_blocks(10, 0, seed=0)
    with pytest.raises(ValueError):
        partition_blocks(10, 11, seed=0)


# ---------------------------------------------------------------------------
# block_means
# ---------------------------------------------------------------------------


def test_block_means_constant_data():
    part = partition_blocks(12, 4, seed=3)
    vals = np.full(12, 2.5)
    assert np.all(block_means(vals, part) == 2.5)


def test_block_means_hand_case_identity_layout():
    # two blocks of two over {0,2,4,6} laid out in order -> means {1, 5}
    part = BlockPartition(n_total=4, k=2, m=2, blocks=np.array([[0, 1], [2, 3]]), seed=0)
    means = block_means(np.array([0.0, 2.0, 4.0, 6.0]), part)
    assert np.array_equal(means, np.array([1.0, 5.0]))


def test_block_means_only_touched_block_moves():
    rng = np.random.default_rng(5)
    vals = rng.standard_normal(20)
    part = partition_blocks(20, 4, seed=9)
    before = block_means(vals, part)
    vals2 = vals.copy()
    vals2[part.blocks[2]] = 1e6
    after = block_means(vals2, part)
    assert np.array_equal(np.delete(before, 2), np.delete(after, 2))
    assert after[2] == 1e6


def test_block_means_2d_shape():
    part = partition_blocks(9, 3, seed=1)
    pts = np.arange(18, dtype=float).reshape(9, 2)
    bm = block_means(pts, part)
    assert bm.shape == (3, 2)
    assert np.allclose(bm, pts[part.blocks].mean(axis=1))


def test_block_means_rejects_mismatched_partition():
    part = partition_blocks(10, 2, seed=0)
    with pytest.raises(ValueError):
        block_means(np.zeros(11), part)


# ---------------------------------------------------------------------------
# median and lower quartile
# ---------------------------------------------------------------------------


def test_median_odd():
    assert median([1, 5, 3]) == 3.0


def test_median_even_midpoint():
    assert median([1, 2, 3, 4]) == 2.5


def test_median_is_odd_function():
    assert median([-1, -2, -3, -4]) == -median([1, 2, 3, 4])


@given(st.lists(st.floats(-1e9, 1e9), min_size=1, max_size=60))
def test_median_sign_symmetry(xs):
    assert median([-x for x in xs]) == -median(xs)


@given(st.lists(st.floats(-1e9, 1e9), min_size=1, max_size=60))
def test_median_between_order_stats(xs):
    v = sorted(xs)
    m = median(xs)
    assert v[0] <= m <= v[-1]


def test_median_rejects_empty():
    with pytest.raises(ValueError):
        median([])


def test_quartile_of_one_to_eight():
    assert quantile_q14(list(range(1, 9))) == 2.0


def test_quartile_constant_list():
    assert quantile_q14([7.0, 7.0, 7.0, 7.0]) == 7.0


def test_quartile_unsorted_hand_case():
    assert quantile_q14([10, 1, 7, 3, 5, 9, 2, 8]) == 2.0


def test_quartile_needs_four_values():
    with pytest.raises(ValueError):
        quantile_q14([1.0, 2.0, 3.0])


@given(st.lists(st.floats(-1e6, 1e6), min_size=4, max_size=64))
def test_quartile_matches_sorted_index(xs):
    assert quantile_q14(xs) == sorted(xs)[len(xs) // 4 - 1]


# ---------------------------------------------------------------------------
# mom_mean_1d
# ---------------------------------------------------------------------------


def test_mom_1d_singleton_blocks_is_sample_median():
    vals = np.array([9.0, 1.0, 5.0, 3.0, 7.0])
    assert mom_mean_1d(vals, k=5, seed=0) == 5.0


def test_mom_1d_single_block_is_mean_of_retained():
    vals = np.arange(10, dtype=float)
    part = partition_blocks(10, 1, seed=4)
    expected = vals[part.blocks[0]].mean()
    assert mom_mean_1d(vals, k=1, seed=4) == expected


def test_mom_1d_resists_single_contaminated_block():
    # values 1,1,1,2,2,2 plus three huge entries confined to one block: the
    # remaining block means stay inside [1, 2], so the median does too.
    for seed in (0, 1, 2, 17, 99):
        part = partition_blocks(9, 3, seed=seed)
        vals = np.empty(9)
        clean = np.array([1.0, 1.0, 1.0, 2.0, 2.0, 2.0])
        vals[part.blocks[0]] = 1e6
        vals[np.concatenate([part.blocks[1], part.blocks[2]])] = clean
        est = mom_mean_1d(vals, k=3, seed=seed)
        assert 1.0 <= est <= 2.0


def test_mom_1d_deterministic():
    rng = np.random.default_rng(11)
    vals = rng.standard_normal(100)
    assert mom_mean_1d(vals, k=7, seed=3) == mom_mean_1d(vals, k=7, seed=3)


@given(
    k=st.integers(min_value=1, max_value=30),
    seed=st.integers(min_value=0, max_value=10**6),
)
def test_mom_1d_is_median_of_block_means(k, seed):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(90)
    part = partition_blocks(90, k, seed=seed)
    assert mom_mean_1d(vals, k=k, seed=seed) == median(block_means(vals, part))


# ---------------------------------------------------------------------------
# Dataset container
# ---------------------------------------------------------------------------


def test_dataset_shapes_and_accessors():
    pts = np.zeros((5, 3))
    ds = Dataset(points=pts)
    assert ds.n == 5 and ds.dim == 3
    ds2 = Dataset(points=pts, responses=np.zeros(5))
    assert ds2.responses.shape == (5,)


def test_dataset_validate_rejects_mismatched_responses():
    ds = Dataset(points=np.zeros((5, 3)), responses=np.zeros(4))
    with pytest.raises(ValueError):
        ds.validate()


def test_dataset_validate_rejects_nonfinite_points():
    pts = np.zeros((4, 2))
    pts[1, 1] = np.inf
    with pytest.raises(ValueError):
        Dataset(points=pts).validate()


def test_dataset_validate_enforces_outlier_budget():
    from momest import Truth

    pts = np.zeros((10, 2))
    truth = Truth(
        mean=np.zeros(2),
        covariance=np.eye(2),
        outliers=np.arange(3, dtype=np.int64),
        epsilon=0.2,
    )
    with pytest.raises(ValueError):
        Dataset(points=pts, truth=truth).validate()
    truth_ok = Truth(
        mean=np.zeros(2),
        covariance=np.eye(2),
        outliers=np.arange(2, dtype=np.int64),
        epsilon=0.2,
    )
    Dataset(points=pts, truth=truth_ok).validate()
