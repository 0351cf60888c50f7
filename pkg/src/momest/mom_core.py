"""Block machinery shared by every median-of-means estimator.

Blocks are produced by a seeded shuffle followed by contiguous chunking, so a
partition is a pure function of ``(n, k, seed)``.  Samples that do not fit into
``k`` equal blocks are discarded from the tail of the shuffle.  All functions
here are pure and never mutate their inputs, which keeps them safe to call
concurrently on shared arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BlockPartition",
    "Truth",
    "Dataset",
    "partition_blocks",
    "block_means",
    "median",
    "quantile_q14",
    "mom_mean_1d",
]


@dataclass(eq=False)
class BlockPartition:
    """Seeded split of ``n_total`` sample indices into ``k`` blocks of size ``m``.

    ``blocks`` is a ``(k, m)`` integer array whose row ``j`` holds the indices
    of block ``j``.  The ``n_total - k*m`` leftover indices are unused.
    """

    n_total: int
    k: int
    m: int
    blocks: np.ndarray
    seed: int

    def used_indices(self) -> np.ndarray:
        """All indices that belong to some block, in block order."""
        return self.blocks.reshape(-1)


@dataclass(eq=False)
class Truth:
    """Ground-truth record carried by synthetic datasets."""

    mean: np.ndarray
    covariance: np.ndarray
    outliers: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    epsilon: float = 0.0
    beta: np.ndarray | None = None
    noise_variance: float | None = None


@dataclass(eq=False)
class Dataset:
    """A sample matrix with optional responses and ground-truth metadata.

    ``points`` is ``(n, d)``.  ``responses``, when present, is ``(n,)``.
    Estimators treat datasets as read-only.
    """

    points: np.ndarray
    responses: np.ndarray | None = None
    truth: Truth | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def validate(self) -> None:
        """Check structural invariants; raises ValueError on violation."""
        if self.points.ndim != 2:
            raise ValueError("points must be a 2-d array")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("points must be finite")
        if self.responses is not None and self.responses.shape[0] != self.n:
            raise ValueError("responses length must match points")
        if self.truth is not None and self.truth.outliers.size:
            budget = int(np.floor(self.truth.epsilon * self.n + 1e-9))
            if self.truth.outliers.size > budget:
                raise ValueError(
                    f"outlier set of size {self.truth.outliers.size} exceeds "
                    f"budget floor(eps*n) = {budget}"
                )


def _as_points(data) -> np.ndarray:
    """Accept a Dataset or a raw array; return the sample array as float64."""
    if isinstance(data, Dataset):
        return np.asarray(data.points, dtype=float)
    return np.asarray(data, dtype=float)


def partition_blocks(n: int, k: int, seed: int) -> BlockPartition:
    """Split ``range(n)`` into ``k`` disjoint blocks of size ``m = n // k``.

    Uses a seeded uniform shuffle of all indices; blocks are its contiguous
    chunks and the remainder (tail of the shuffle) is discarded.

    Parameters
    ----------
    n : total number of samples, >= 1
    k : number of blocks, 1 <= k <= n
    seed : nonnegative integer seed; same inputs always give the same blocks
    """
    n = int(n)
    k = int(k)
    if n < 1:
        raise ValueError(f"need at least one sample, got n={n}")
    if k < 1 or k > n:
        raise ValueError(f"block count k={k} must satisfy 1 <= k <= n={n}")
    m = n // k
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    blocks = perm[: k * m].reshape(k, m)
    return BlockPartition(n_total=n, k=k, m=m, blocks=blocks, seed=int(seed))


def block_means(data, part: BlockPartition) -> np.ndarray:
    """Per-block sample means.

    Returns a ``(k, d)`` array for ``(n, d)`` input, or ``(k,)`` for 1-d input;
    row ``j`` is the average of the samples indexed by block ``j``.
    """
    pts = _as_points(data)
    if pts.shape[0] != part.n_total:
        raise ValueError(
            f"partition was built for n={part.n_total} samples, data has {pts.shape[0]}"
        )
    return pts[part.blocks].mean(axis=1)


def _median_axis0(a: np.ndarray) -> np.ndarray:
    """Median along axis 0: middle order statistic, or the midpoint of the two
    central ones for even length.  The midpoint convention keeps the median an
    odd function of its input.

    Uses a partial sort: the selected order statistics are identical to the
    fully sorted ones, at linear instead of n-log-n cost per column.  For 2-d
    C-contiguous input the selection runs along contiguous rows of the
    transpose; selection involves no arithmetic, so the result is unchanged."""
    n = a.shape[0]
    h = n // 2
    if a.ndim == 2 and a.flags.c_contiguous and a.shape[1] > 1:
        at = np.ascontiguousarray(a.T)  # private copy: partition it in place
        if n % 2 == 1:
            at.partition(h, axis=1)
            return at[:, h].copy()
        at.partition((h - 1, h), axis=1)
        return 0.5 * (at[:, h - 1] + at[:, h])
    if n % 2 == 1:
        return np.partition(a, h, axis=0)[h].copy()
    s = np.partition(a, (h - 1, h), axis=0)
    return 0.5 * (s[h - 1] + s[h])


def median(values) -> float:
    """Median of a list of reals under the midpoint convention.

    Odd length: the middle order statistic.  Even length: the midpoint of the
    two central order statistics.  Raises ValueError on empty input.
    """
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.size == 0:
        raise ValueError("median of empty list is undefined")
    return float(_median_axis0(v))


def quantile_q14(values) -> float:
    """Lower-quartile order statistic: the floor(n/4)-th smallest value (1-based).

    Needs n >= 4 so that the order statistic exists; raises ValueError below that.
    """
    v = np.asarray(values, dtype=float).reshape(-1)
    n = v.size
    if n < 4:
        raise ValueError(f"lower quartile needs at least 4 values, got {n}")
    return float(np.partition(v, n // 4 - 1)[n // 4 - 1])


def mom_mean_1d(values, k: int, seed: int) -> float:
    """Median-of-means estimate of a scalar mean.

    Splits the values into ``k`` seeded blocks, averages each block, and
    returns the median of the block means.
    """
    v = np.asarray(values, dtype=float).reshape(-1)
    part = partition_blocks(v.size, k, seed)
    return float(_median_axis0(block_means(v, part)))
