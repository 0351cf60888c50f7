"""Median-of-means covariance estimators (spectral and low-rank flavors).

Both estimators assume the mean is known and already subtracted (pass
``center=True`` to remove a robust mean estimate first, at the cost of leaving
the stated guarantee regime).  Given per-block second-moment matrices
``C_k = (1/m) sum_{i in block} x_i x_i^T``, they search a symmetric matrix M
minimizing the worst probe's median residual:

* spectral:  probes are unit vectors u, value = median_k <u, (C_k - M) u>;
* low-rank:  probes are unit-Frobenius symmetric matrices of rank <= 2r,
  value = median_k <C_k - M, P>_F, and every iterate is projected back to its
  best rank-r approximation.

Both pick the probe with the largest |value| (the quadratic form is even in
u, so signed values cover both sides) and step ``M <- M + theta * value * P``.
"""

from __future__ import annotations

import numpy as np

from ._solver import SolverOptions, minimax_descent, normalize_rows
from .mean_est import EstimatorReport, mom_mean_euclidean
from .mom_core import _as_points, _median_axis0, partition_blocks

__all__ = [
    "block_second_moments",
    "mom_cov_spectral",
    "mom_cov_lowrank",
    "save_matrix_csv",
]

# rng salt for the probe stream (distinct from the other estimators').
_PROBE_SALT = 15485863

_TINY = 1e-300


def block_second_moments(data, part) -> np.ndarray:
    """Per-block second-moment matrices ``C_k = (1/m) sum x_i x_i^T``.

    Returns a ``(k, d, d)`` array of exactly symmetric matrices.  The mean is
    assumed to be zero (or already subtracted).
    """
    pts = np.atleast_2d(_as_points(data).T).T
    if pts.shape[0] != part.n_total:
        raise ValueError(
            f"partition was built for n={part.n_total}, data has n={pts.shape[0]}"
        )
    xb = pts[part.blocks]  # (k, m, d)
    return np.einsum("kmi,kmj->kij", xb, xb) / part.m


def _truncate_rank(a: np.ndarray, r: int) -> np.ndarray:
    """Best rank-r approximation of a symmetric matrix, keeping the r largest
    eigenvalues in absolute value (Frobenius-optimal for symmetric input).

    A no-op when r >= d, so full-rank calls keep the input bit for bit.
    """
    d = a.shape[0]
    if r >= d:
        return a
    w, v = np.linalg.eigh(a)
    keep = np.argsort(-np.abs(w), kind="stable")[:r]
    b = (v[:, keep] * w[keep]) @ v[:, keep].T
    return (b + b.T) * 0.5


class _SpectralCovProblem:
    """Engine callbacks for the spectral-norm covariance solver."""

    def __init__(self, c_blocks: np.ndarray, n_random: int):
        self.c = c_blocks
        self.n_random = n_random

    def draw(self, rng):
        return normalize_rows(rng.standard_normal((self.n_random, self.c.shape[1])))

    def candidates(self, m, randoms, prev):
        resid_mean = self.c.mean(axis=0) - m
        _, vecs = np.linalg.eigh(resid_mean)
        probes = np.vstack([vecs.T, randoms])
        if prev is not None:
            probes = np.vstack([probes, prev[None, :]])
        return probes

    def evaluate(self, m, probes):
        vals = np.einsum("kij,pi,pj->kp", self.c - m, probes, probes)
        return _median_axis0(vals)

    def select(self, probes, meds):
        i = int(np.argmax(np.abs(meds)))
        value = float(meds[i])
        return probes[i], value, abs(value)

    def apply(self, m, u, scaled):
        # outer(u, u) is exactly symmetric, so M stays exactly symmetric.
        return m + scaled * np.outer(u, u)


class _LowRankCovProblem:
    """Engine callbacks for the low-rank Frobenius covariance solver."""

    def __init__(self, c_blocks: np.ndarray, r: int, n_random: int):
        self.c = c_blocks
        self.r = r
        self.n_random = n_random

    def draw(self, rng):
        return normalize_rows(rng.standard_normal((self.n_random, self.c.shape[1])))

    def candidates(self, m, randoms, prev):
        resid = self.c - m
        probes = []
        for res_k in resid:
            p = _truncate_rank(res_k, 2 * self.r)
            nrm = np.linalg.norm(p)
            if nrm > 0:
                probes.append(p / nrm)
        for u in randoms:
            probes.append(np.outer(u, u))  # unit Frobenius: ||u u^T||_F = 1
        if prev is not None:
            probes.append(prev)
        return np.array(probes)

    def evaluate(self, m, probes):
        if probes.shape[0] == 0:
            return np.empty(0)
        return _median_axis0(np.einsum("kij,pij->kp", self.c - m, probes))

    def select(self, probes, meds):
        i = int(np.argmax(np.abs(meds)))
        value = float(meds[i])
        return probes[i], value, abs(value)

    def apply(self, m, p, scaled):
        return _truncate_rank(m + scaled * p, self.r)


def _residual_scale(c_blocks: np.ndarray, m0: np.ndarray) -> float:
    """Median Frobenius norm of the block residuals around the warm start."""
    norms = np.linalg.norm(c_blocks - m0, axis=(1, 2))
    return float(_median_axis0(norms[:, None])[0])


def _prepare(data, k: int, seed: int, center: bool):
    pts = np.atleast_2d(_as_points(data).T).T
    details = {}
    if center:
        mean_rep = mom_mean_euclidean(pts, k, seed)
        pts = pts - mean_rep.estimate
        details["centered"] = True
    part = partition_blocks(pts.shape[0], k, seed)
    return block_second_moments(pts, part), part, details


def mom_cov_spectral(
    data, k: int, seed: int, solver_opts: SolverOptions | None = None, center: bool = False
) -> EstimatorReport:
    """Covariance estimate targeting the spectral norm.

    Starts from the entrywise median of the block second moments (already the
    fixed point when K=1 or when all blocks agree) and descends the worst
    quadratic-form residual over a probe pool of residual eigenvectors plus
    random unit vectors.
    """
    opts = solver_opts or SolverOptions()
    c_blocks, part, extra = _prepare(data, k, seed, center)
    m0 = _median_axis0(c_blocks)
    problem = _SpectralCovProblem(c_blocks, opts.n_random)
    rng = np.random.default_rng([seed, _PROBE_SALT])
    tol = opts.rtol * max(_residual_scale(c_blocks, m0), _TINY)
    result = minimax_descent(problem, m0, rng, opts, tol)
    details = {"k": part.k, "m": part.m, "solver": "cov_spectral", **extra}
    return EstimatorReport(
        estimate=result.x,
        objective_final=result.objective,
        iterations=result.iterations,
        converged=result.converged,
        trace=result.trace,
        details=details,
    )


def mom_cov_lowrank(
    data,
    k: int,
    r: int,
    seed: int,
    solver_opts: SolverOptions | None = None,
    center: bool = False,
) -> EstimatorReport:
    """Covariance estimate for (at most) rank-r targets, in Frobenius norm.

    Probes are the Frobenius-normalized rank-2r truncations of the block
    residuals plus random rank-1 probes; each accepted iterate is projected to
    its best rank-r approximation.  With r = d the projection is a no-op and
    K = 1 reproduces the single block second moment exactly.
    """
    pts = np.atleast_2d(_as_points(data).T).T
    d = pts.shape[1]
    if not 1 <= r <= d:
        raise ValueError(f"rank must satisfy 1 <= r <= d={d}, got {r}")
    opts = solver_opts or SolverOptions()
    c_blocks, part, extra = _prepare(data, k, seed, center)
    m0 = _truncate_rank(_median_axis0(c_blocks), r)
    problem = _LowRankCovProblem(c_blocks, r, opts.n_random)
    rng = np.random.default_rng([seed, _PROBE_SALT])
    tol = opts.rtol * max(_residual_scale(c_blocks, m0), _TINY)
    result = minimax_descent(problem, m0, rng, opts, tol)
    details = {"k": part.k, "m": part.m, "solver": "cov_lowrank", "r": r, **extra}
    return EstimatorReport(
        estimate=result.x,
        objective_final=result.objective,
        iterations=result.iterations,
        converged=result.converged,
        trace=result.trace,
        details=details,
    )


def save_matrix_csv(matrix: np.ndarray, path) -> None:
    """Write a matrix as dense row-major CSV (one row per line, repr floats)."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w", newline="") as fh:
        for row in m:
            fh.write(",".join(repr(float(x)) for x in row))
            fh.write("\n")
