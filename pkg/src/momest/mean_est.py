"""Median-of-means min-max mean estimators.

The estimand solves ``min over a of max over dual directions u of
median across blocks of <block_mean - a, u>``.  For the sup norm the dual
extreme points are the signed canonical directions and the solution is the
coordinatewise median of the block means, computed in closed form.  For the
Euclidean ball (dense, sparse, or dictionary-sparse direction sets) the
minimizer is searched with the shared damped fixed-point engine: the candidate
direction pool is the normalized block residuals plus fresh random unit
vectors plus the previously selected direction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._solver import (
    SolverOptions,
    hard_threshold,
    hard_threshold_rows,
    minimax_descent,
    normalize_rows,
)
from .mom_core import _as_points, _median_axis0, block_means, partition_blocks

__all__ = [
    "EstimatorReport",
    "SolverOptions",
    "minimax_objective",
    "mom_mean_supnorm",
    "mom_mean_euclidean",
    "mom_mean_sparse",
]

# Salt for the direction-sampling stream so it is decoupled from the
# partition shuffle while remaining a pure function of the caller's seed.
_DIRECTION_SALT = 104729

_TINY = 1e-300


@dataclass(eq=False)
class EstimatorReport:
    """Uniform output record for every estimator in the package.

    ``estimate`` is a vector or a matrix.  ``converged`` means the final
    objective fell below tolerance or no backtracking step could reduce it
    further; hitting the iteration cap leaves it False.
    """

    estimate: np.ndarray
    objective_final: float
    iterations: int
    converged: bool
    trace: list | None = None
    warnings: int = 0
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        def _clean(v):
            if isinstance(v, np.ndarray):
                return v.tolist()
            if isinstance(v, (np.floating, np.integer)):
                return v.item()
            if isinstance(v, dict):
                return {k: _clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [_clean(x) for x in v]
            return v

        return json.dumps(
            {
                "estimate": _clean(self.estimate),
                "objective_final": self.objective_final,
                "iterations": self.iterations,
                "converged": self.converged,
                "trace": _clean(self.trace),
                "warnings": self.warnings,
                "details": _clean(self.details),
            }
        )


def minimax_objective(a, directions, blk_means) -> float:
    """Worst direction's median block residual: ``max_u med_k <bm_k - a, u>``.

    Directions are used exactly as supplied (no sign augmentation), so adding
    a direction can only increase the value.
    """
    u = np.atleast_2d(np.asarray(directions, dtype=float))
    if u.size == 0:
        raise ValueError("directions must be a nonempty collection")
    bm = np.atleast_2d(np.asarray(blk_means, dtype=float))
    a = np.asarray(a, dtype=float).reshape(-1)
    if u.shape[1] != bm.shape[1] or a.shape[0] != bm.shape[1]:
        raise ValueError("dimension mismatch between a, directions, and block means")
    return float(_median_axis0((bm - a) @ u.T).max())


class _MeanProblem:
    """Engine callbacks for the dense and coordinate-sparse mean solvers."""

    def __init__(self, bm: np.ndarray, n_random: int, s_dir: int | None, s_point: int | None):
        self.bm = bm
        self.n_random = n_random
        self.s_dir = s_dir  # directions thresholded to this many coordinates
        self.s_point = s_point  # iterates thresholded to this many coordinates

    def draw(self, rng):
        return rng.standard_normal((self.n_random, self.bm.shape[1]))

    def candidates(self, a, randoms, prev):
        raw = np.vstack([self.bm - a, randoms])
        if self.s_dir is not None:
            raw = hard_threshold_rows(raw, self.s_dir)
        dirs = normalize_rows(raw)
        if prev is not None:
            dirs = np.vstack([dirs, prev[None, :]])
        return dirs

    def evaluate(self, a, dirs):
        return _median_axis0((self.bm - a) @ dirs.T)

    def select(self, dirs, meds):
        i_max = int(np.argmax(meds))
        i_min = int(np.argmin(meds))
        # The dual ball is symmetric, so -u is always admissible; flipping the
        # sign of the worst negative median covers it without extra medians.
        if -meds[i_min] > meds[i_max]:
            return -dirs[i_min], float(-meds[i_min]), float(-meds[i_min])
        return dirs[i_max], float(meds[i_max]), float(meds[i_max])

    def apply(self, a, u, scaled):
        a_new = a + scaled * u
        if self.s_point is not None:
            a_new = hard_threshold(a_new, self.s_point)
        return a_new


class _DictionaryMeanProblem:
    """Dictionary-sparse variant: iterates are s-sparse combinations of the
    atom rows, and directions are matching-pursuit approximations using at
    most 2s atoms.  State is ``(ambient_vector, coefficient_vector)``."""

    def __init__(self, bm: np.ndarray, atoms: np.ndarray, n_random: int, s: int):
        self.bm = bm
        self.atoms = atoms
        self.s = s
        self.n_random = n_random
        norms = np.linalg.norm(atoms, axis=1)
        self.atom_norms = norms
        self.atom_norms_sq = norms**2

    def _pursuit_rows(self, w: np.ndarray, n_picks: int):
        """Greedy largest-correlation atom selection, row-vectorized.

        For every row of ``w`` independently: pick the atom with the highest
        normalized correlation to the current residual (lowest index on
        ties), accumulate its least-squares coefficient, subtract, repeat.
        Rows whose residual becomes orthogonal to every atom stop early.
        Returns (span approximations, coefficient matrix).
        """
        resid = w.copy()
        coefs = np.zeros((w.shape[0], self.atoms.shape[0]))
        safe = np.where(self.atom_norms > 0, self.atom_norms, 1.0)
        rows = np.arange(w.shape[0])
        for _ in range(n_picks):
            corr = resid @ self.atoms.T  # (p, n_atoms)
            scores = np.abs(corr) / safe
            scores[:, self.atom_norms == 0] = 0.0
            picks = np.argmax(scores, axis=1)
            best = scores[rows, picks]
            active = best > 0.0
            if not np.any(active):
                break
            c = np.where(active, corr[rows, picks] / self.atom_norms_sq[picks], 0.0)
            coefs[rows, picks] += c
            resid = resid - c[:, None] * self.atoms[picks]
        return w - resid, coefs

    def _pursuit(self, w: np.ndarray, n_picks: int):
        """Single-vector convenience wrapper around ``_pursuit_rows``."""
        approx, coefs = self._pursuit_rows(w[None, :], n_picks)
        return approx[0], coefs[0]

    def draw(self, rng):
        return rng.standard_normal((self.n_random, self.bm.shape[1]))

    def candidates(self, state, randoms, prev):
        a, _ = state
        raw = np.vstack([self.bm - a, randoms])
        approx, coefs = self._pursuit_rows(raw, 2 * self.s)
        # Normalize through the very same norm/division path as
        # normalize_rows so canonical atoms reproduce the ambient solver
        # bit for bit.
        nrm = np.linalg.norm(approx, axis=1, keepdims=True)
        dirs = np.zeros_like(approx)
        np.divide(approx, nrm, out=dirs, where=nrm > 0)
        unit_coefs = np.zeros_like(coefs)
        np.divide(coefs, nrm, out=unit_coefs, where=nrm > 0)
        if prev is not None:
            dirs = np.vstack([dirs, prev[0][None, :]])
            unit_coefs = np.vstack([unit_coefs, prev[1][None, :]])
        return dirs, unit_coefs

    def evaluate(self, state, pool):
        a, _ = state
        dirs, _ = pool
        return _median_axis0((self.bm - a) @ dirs.T)

    def select(self, pool, meds):
        dirs, coefs = pool
        i_max = int(np.argmax(meds))
        i_min = int(np.argmin(meds))
        if -meds[i_min] > meds[i_max]:
            return (-dirs[i_min], -coefs[i_min]), float(-meds[i_min]), float(-meds[i_min])
        return (dirs[i_max], coefs[i_max]), float(meds[i_max]), float(meds[i_max])

    def apply(self, state, handle, scaled):
        _, lam = state
        _, coef = handle
        lam_new = hard_threshold(lam + scaled * coef, self.s)
        return self.atoms.T @ lam_new, lam_new


def _robust_scale(bm: np.ndarray, a0: np.ndarray) -> float:
    """Median block-residual norm around the warm start; used to make the
    stopping tolerance scale-free."""
    return float(_median_axis0(np.linalg.norm(bm - a0, axis=1)[:, None])[0])


def _finish(result, part, extra=None) -> EstimatorReport:
    details = {"k": part.k, "m": part.m}
    if extra:
        details.update(extra)
    return EstimatorReport(
        estimate=result.x if isinstance(result.x, np.ndarray) else result.x[0],
        objective_final=result.objective,
        iterations=result.iterations,
        converged=result.converged,
        trace=result.trace,
        details=details,
    )


def mom_mean_supnorm(data, k: int, seed: int) -> EstimatorReport:
    """Exact min-max mean estimate against the sup norm.

    The dual extreme points are +-e_j, so the solution is the coordinatewise
    median of the block means and the attained objective is 0 by construction.
    """
    pts = np.atleast_2d(_as_points(data).T).T  # (n,) -> (n, 1)
    part = partition_blocks(pts.shape[0], k, seed)
    bm = block_means(pts, part)
    est = _median_axis0(bm)
    return EstimatorReport(
        estimate=est,
        objective_final=0.0,
        iterations=0,
        converged=True,
        trace=[0.0],
        details={"k": part.k, "m": part.m, "solver": "closed_form"},
    )


def mom_mean_euclidean(
    data, k: int, seed: int, solver_opts: SolverOptions | None = None
) -> EstimatorReport:
    """Min-max mean estimate against the Euclidean norm.

    Starts from the coordinatewise median of the block means (already exact in
    dimension one) and descends the pool objective with damped fixed-point
    steps ``a <- a + theta * value * direction``.
    """
    opts = solver_opts or SolverOptions()
    pts = np.atleast_2d(_as_points(data).T).T
    part = partition_blocks(pts.shape[0], k, seed)
    bm = block_means(pts, part)
    a0 = _median_axis0(bm)
    problem = _MeanProblem(bm, opts.n_random, None, None)
    rng = np.random.default_rng([seed, _DIRECTION_SALT])
    tol = opts.rtol * max(_robust_scale(bm, a0), _TINY)
    result = minimax_descent(problem, a0, rng, opts, tol)
    return _finish(result, part, {"solver": "euclidean"})


def mom_mean_sparse(
    data, k: int, s: int, seed: int, solver_opts: SolverOptions | None = None
) -> EstimatorReport:
    """Min-max mean estimate over s-sparse directions; the output has at most
    s nonzero coordinates.

    Candidate directions are hard-thresholded to their 2s largest-magnitude
    coordinates and renormalized; each iterate is re-thresholded to s
    coordinates.  With s = d no thresholding is active and the trajectory
    matches the dense Euclidean solver.
    """
    opts = solver_opts or SolverOptions()
    pts = np.atleast_2d(_as_points(data).T).T
    d = pts.shape[1]
    if not 1 <= s <= d:
        raise ValueError(f"sparsity must satisfy 1 <= s <= d={d}, got {s}")
    part = partition_blocks(pts.shape[0], k, seed)
    bm = block_means(pts, part)
    a0 = hard_threshold(_median_axis0(bm), s)
    problem = _MeanProblem(bm, opts.n_random, 2 * s, s)
    rng = np.random.default_rng([seed, _DIRECTION_SALT])
    tol = opts.rtol * max(_robust_scale(bm, a0), _TINY)
    result = minimax_descent(problem, a0, rng, opts, tol)
    return _finish(result, part, {"solver": "sparse", "s": s})


def _mom_mean_dictionary(
    pts: np.ndarray,
    atoms: np.ndarray,
    k: int,
    s: int,
    seed: int,
    solver_opts: SolverOptions | None = None,
) -> EstimatorReport:
    """Sparse min-max mean estimation against an explicit dictionary.

    The estimate is an s-sparse coefficient combination of the atom rows.  For
    the canonical (identity) dictionary this reproduces mom_mean_sparse
    exactly; it exists for projected dictionaries whose atoms are neither
    orthogonal nor normalized.
    """
    opts = solver_opts or SolverOptions()
    part = partition_blocks(pts.shape[0], k, seed)
    bm = block_means(pts, part)
    problem = _DictionaryMeanProblem(bm, atoms, opts.n_random, s)
    m0 = _median_axis0(bm)
    a0_vec, lam0 = problem._pursuit(m0, s)
    lam0 = hard_threshold(lam0, s)
    a0 = atoms.T @ lam0
    del a0_vec
    rng = np.random.default_rng([seed, _DIRECTION_SALT])
    tol = opts.rtol * max(_robust_scale(bm, a0), _TINY)
    result = minimax_descent(problem, (a0, lam0), rng, opts, tol)
    report = _finish(result, part, {"solver": "dictionary", "s": s, "n_atoms": atoms.shape[0]})
    report.details["coefficients"] = result.x[1]
    return report
