"""Shared damped fixed-point engine for the min-max estimators.

Every iterative estimator in this package minimizes, over a point ``x``
(a vector or a matrix), the maximum over a finite direction pool of a
median-across-blocks statistic.  The loop below is common to all of them:

* build a candidate pool at the current point (problem-specific),
* pick the direction with the largest objective (lowest index on ties),
* take a step of size ``theta * value`` along it, halving the step until the
  objective evaluated at the candidate (with the next iteration's random
  directions) does not increase,
* stop when the objective falls below an absolute tolerance, when no step
  makes progress (stall), or at the iteration cap.

Because the acceptance test re-evaluates the objective with exactly the pool
used at the next iterate, the recorded trace is nonincreasing by construction.

A problem object supplies five callbacks (duck-typed):

``draw(rng)``
    fresh random material for one iteration (consumed once per iteration)
``candidates(x, randoms, prev)``
    pool handle at ``x``; ``prev`` is the previously selected direction handle
``evaluate(x, pool)``
    signed per-direction median statistics, one per pool entry
``select(pool, meds)``
    ``(direction_handle, signed_value, score)`` with ``score >= 0`` and a
    deterministic lowest-index tie-break
``apply(x, direction_handle, scaled_value)``
    the candidate point after a step (including any projection)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_TINY = 1e-300


@dataclass
class SolverOptions:
    """Knobs shared by all min-max solvers.

    max_iter      iteration cap (accepted steps)
    n_random      fresh random directions added to the pool each iteration
    theta         step damping factor, step = theta * objective_value
    rtol          relative tolerance; absolute tol = rtol * problem scale
    min_step_rel  backtracking floor as a fraction of theta
    keep_trace    record per-iteration objective values
    """

    max_iter: int = 200
    n_random: int = 32
    theta: float = 1.0
    rtol: float = 1e-8
    min_step_rel: float = 1e-9
    keep_trace: bool = True


@dataclass
class DescentResult:
    x: object
    objective: float
    iterations: int
    converged: bool
    trace: list | None


def minimax_descent(problem, x0, rng, opts: SolverOptions, tol: float | None) -> DescentResult:
    """Run the damped min-max descent from ``x0``.

    ``tol`` is the absolute objective tolerance; pass None to derive it as
    ``opts.rtol * max(initial objective, tiny)``.
    """
    pool = problem.candidates(x0, problem.draw(rng), None)
    meds = problem.evaluate(x0, pool)
    if meds.size == 0:
        # Nothing to optimize against (e.g. every direction was degenerate).
        return DescentResult(x0, 0.0, 0, True, [0.0] if opts.keep_trace else None)
    handle, value, score = problem.select(pool, meds)
    if tol is None:
        tol = opts.rtol * max(score, _TINY)

    x = x0
    iterations = 0
    trace = [score] if opts.keep_trace else None
    converged = score <= tol
    while not converged and iterations < opts.max_iter:
        randoms = problem.draw(rng)
        step = opts.theta
        accepted = None
        while step >= opts.theta * opts.min_step_rel:
            x_new = problem.apply(x, handle, step * value)
            pool_new = problem.candidates(x_new, randoms, handle)
            meds_new = problem.evaluate(x_new, pool_new)
            if meds_new.size == 0:
                accepted = (x_new, handle, 0.0, 0.0)
                break
            h_new, v_new, s_new = problem.select(pool_new, meds_new)
            if s_new <= score:
                accepted = (x_new, h_new, v_new, s_new)
                break
            step *= 0.5
        if accepted is None:
            # No step at or above the floor makes progress: treat as converged
            # to the attainable floor of the pool objective.
            converged = True
            break
        x, handle, value, score = accepted
        iterations += 1
        if opts.keep_trace:
            trace.append(score)
        if score <= tol:
            converged = True
    return DescentResult(x, float(score), iterations, converged, trace)


def normalize_rows(w: np.ndarray) -> np.ndarray:
    """Scale each row to unit Euclidean norm; zero rows stay zero."""
    nrm = np.linalg.norm(w, axis=1, keepdims=True)
    out = np.zeros_like(w)
    np.divide(w, nrm, out=out, where=nrm > 0)
    return out


def hard_threshold_rows(w: np.ndarray, s: int) -> np.ndarray:
    """Keep the ``s`` largest-magnitude entries of each row, zero the rest.

    Ties are broken toward the lowest column index (stable sort), so the
    result is deterministic.
    """
    if s >= w.shape[1]:
        return w.copy()
    order = np.argsort(-np.abs(w), axis=1, kind="stable")
    keep = order[:, :s]
    out = np.zeros_like(w)
    np.put_along_axis(out, keep, np.take_along_axis(w, keep, axis=1), axis=1)
    return out


def hard_threshold(v: np.ndarray, s: int) -> np.ndarray:
    """Row-wise hard threshold for a single vector."""
    return hard_threshold_rows(v[None, :], s)[0]
