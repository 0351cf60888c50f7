"""Synthetic data generators and corruption models for the benchmark harness.

Families are centered and scaled so the recorded ground-truth covariance is
exact, which keeps theoretical radii computable without estimation error.
Corruption models replace samples but never touch the recorded ground truth
(mean, covariance, regression coefficients); they only fill in the corrupted
index set and the realized contamination level.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .mom_core import Dataset, Truth

__all__ = [
    "CovarianceSpec",
    "GeneratorSpec",
    "NoiseSpec",
    "AdversarySpec",
    "generate",
    "corrupt",
    "regression_generate",
    "dataset_to_csv",
    "dataset_from_csv",
    "cov_weak_sigma",
]

FAMILIES = ("gaussian", "student_t", "pareto", "two_point")
ADVERSARIES = ("none", "huber", "adversarial_shift", "keep_largest")

# Salt for the sub-stream that draws regression noise, so design and noise
# draws are decoupled while staying a pure function of the dataset seed.
_NOISE_SALT = 7919


@dataclass(eq=False)
class CovarianceSpec:
    """Covariance factory.

    kind: "identity" | "diagonal" | "spiked" | "explicit"
      identity   the d-dimensional identity
      diagonal   diag(values); values must have length d
      spiked     diag(lambda1, decay, ..., decay) with decay <= lambda1
      explicit   a full symmetric positive semidefinite matrix
    """

    kind: str = "identity"
    values: tuple = ()
    lambda1: float = 1.0
    decay: float = 1.0
    matrix: np.ndarray | None = None

    def matrix_for(self, d: int) -> np.ndarray:
        if self.kind == "identity":
            return np.eye(d)
        if self.kind == "diagonal":
            vals = np.asarray(self.values, dtype=float)
            if vals.shape != (d,):
                raise ValueError(f"diagonal needs {d} entries, got shape {vals.shape}")
            if np.any(vals < 0):
                raise ValueError("diagonal covariance entries must be nonnegative")
            return np.diag(vals)
        if self.kind == "spiked":
            if not self.lambda1 > 0 or self.decay < 0 or self.decay > self.lambda1:
                raise ValueError(
                    f"spiked needs lambda1 > 0 and 0 <= decay <= lambda1, "
                    f"got lambda1={self.lambda1}, decay={self.decay}"
                )
            diag = np.full(d, float(self.decay))
            diag[0] = float(self.lambda1)
            return np.diag(diag)
        if self.kind == "explicit":
            m = np.asarray(self.matrix, dtype=float)
            if m.shape != (d, d):
                raise ValueError(f"explicit covariance must be ({d}, {d}), got {m.shape}")
            if not np.allclose(m, m.T, atol=1e-10 * max(1.0, np.abs(m).max())):
                raise ValueError("explicit covariance must be symmetric")
            if np.linalg.eigvalsh(m).min() < -1e-10 * max(1.0, np.abs(m).max()):
                raise ValueError("explicit covariance must be positive semidefinite")
            return m
        raise ValueError(f"unknown covariance kind {self.kind!r}")

    def _scales_for(self, d: int) -> np.ndarray | None:
        """Per-coordinate scale vector for diagonal-type kinds, else None."""
        if self.kind == "identity":
            return np.ones(d)
        if self.kind == "diagonal":
            return np.sqrt(np.asarray(self.values, dtype=float))
        if self.kind == "spiked":
            return np.sqrt(np.diag(self.matrix_for(d)))
        return None

    def lambda_max(self, d: int) -> float:
        if self.kind == "identity":
            return 1.0
        if self.kind in ("diagonal", "spiked"):
            return float(np.diag(self.matrix_for(d)).max())
        return float(np.linalg.eigvalsh(self.matrix_for(d)).max())


@dataclass(eq=False)
class GeneratorSpec:
    """Recipe for an i.i.d. sample.

    family: "gaussian" | "student_t" (dof > 2) | "pareto" (shape > 2) |
            "two_point" (each coordinate equals sqrt(d*n) with probability
            1/(d*n) and 0 otherwise; mean and covariance fields are ignored
            and the analytic truth is recorded instead)
    mean:   scalar (broadcast) or length-d vector
    sparsity: optional bookkeeping: the mean is s-sparse in the canonical basis
    """

    dim: int
    family: str = "gaussian"
    mean: object = 0.0
    covariance: CovarianceSpec = field(default_factory=CovarianceSpec)
    dof: float | None = None
    shape: float | None = None
    sparsity: int | None = None

    def mean_vector(self) -> np.ndarray:
        mu = np.asarray(self.mean, dtype=float)
        if mu.ndim == 0:
            return np.full(self.dim, float(mu))
        if mu.shape != (self.dim,):
            raise ValueError(f"mean must be scalar or length {self.dim}, got {mu.shape}")
        return mu.copy()

    def validate(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "student_t" and not (self.dof is not None and self.dof > 2):
            raise ValueError(f"student_t needs dof > 2, got {self.dof}")
        if self.family == "pareto" and not (self.shape is not None and self.shape > 2):
            raise ValueError(f"pareto needs shape > 2, got {self.shape}")
        if self.sparsity is not None and not 1 <= self.sparsity <= self.dim:
            raise ValueError(f"sparsity must be in [1, dim], got {self.sparsity}")
        self.mean_vector()


@dataclass(eq=False)
class NoiseSpec:
    """Scalar noise for regression responses.  Families are centered by
    construction, so the mean field exists only to make the zero-mean
    requirement checkable."""

    family: str = "gaussian"
    scale: float = 1.0
    dof: float | None = None
    shape: float | None = None
    mean: float = 0.0

    def validate(self) -> None:
        if self.family not in ("gaussian", "student_t", "pareto"):
            raise ValueError(f"unsupported noise family {self.family!r}")
        if self.mean != 0.0:
            raise ValueError("regression noise must have zero mean")
        if self.scale <= 0:
            raise ValueError(f"noise scale must be positive, got {self.scale}")
        if self.family == "student_t" and not (self.dof is not None and self.dof > 2):
            raise ValueError(f"student_t noise needs dof > 2, got {self.dof}")
        if self.family == "pareto" and not (self.shape is not None and self.shape > 2):
            raise ValueError(f"pareto noise needs shape > 2, got {self.shape}")


@dataclass(eq=False)
class AdversarySpec:
    """Corruption model applied after generation.

    model: "none" | "huber" | "adversarial_shift" | "keep_largest"
      huber             each sample independently resampled from outlier_law
                        with probability epsilon; the realized fraction is
                        recorded post hoc
      adversarial_shift exactly floor(epsilon*n) samples replaced by
                        mean + magnitude * direction (target="points"), or
                        floor(epsilon*n) responses replaced by +-magnitude
                        (target="responses")
      keep_largest      the floor(epsilon*n) samples lowest in the chosen
                        direction are replaced by resamples from the retained
                        (largest) ones, emulating an adversary that keeps only
                        the top of the sample
    """

    model: str = "none"
    epsilon: float = 0.0
    seed: int = 0
    outlier_law: GeneratorSpec | None = None
    direction: np.ndarray | None = None
    magnitude: float = 0.0
    target: str = "points"

    def validate(self) -> None:
        if self.model not in ADVERSARIES:
            raise ValueError(f"unknown adversary {self.model!r}; expected one of {ADVERSARIES}")
        if not 0.0 <= self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in [0, 1/2), got {self.epsilon}")
        if self.model == "huber" and self.outlier_law is None:
            raise ValueError("huber corruption needs an outlier_law")
        if self.target not in ("points", "responses"):
            raise ValueError(f"target must be 'points' or 'responses', got {self.target!r}")


def _standardized_draws(family: str, n: int, d: int, rng, dof=None, shape=None) -> np.ndarray:
    """(n, d) i.i.d. draws with mean 0 and variance 1 per coordinate."""
    if family == "gaussian":
        return rng.standard_normal((n, d))
    if family == "student_t":
        return rng.standard_t(dof, size=(n, d)) / math.sqrt(dof / (dof - 2.0))
    if family == "pareto":
        # numpy's pareto() is the Lomax form; +1 recovers the classical law
        # on [1, inf) whose mean and variance are known in closed form.
        mean = shape / (shape - 1.0)
        var = shape / ((shape - 1.0) ** 2 * (shape - 2.0))
        return (1.0 + rng.pareto(shape, size=(n, d)) - mean) / math.sqrt(var)
    raise ValueError(f"family {family!r} has no standardized form")


def generate(spec: GeneratorSpec, n: int, seed: int) -> Dataset:
    """Draw ``n`` i.i.d. samples.  The returned dataset's truth record holds
    the exact mean and covariance of the sampling law."""
    spec.validate()
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    d = spec.dim

    if spec.family == "two_point":
        val = math.sqrt(d * n)
        pts = np.where(rng.random((n, d)) < 1.0 / (d * n), val, 0.0)
        mu = np.full(d, 1.0 / math.sqrt(d * n))
        sigma = (1.0 - 1.0 / (d * n)) * np.eye(d)
        truth = Truth(mean=mu, covariance=sigma)
        return Dataset(points=pts, truth=truth, meta={"family": spec.family, "seed": int(seed)})

    z = _standardized_draws(spec.family, n, d, rng, dof=spec.dof, shape=spec.shape)
    scales = spec.covariance._scales_for(d)
    if scales is not None:
        pts = z * scales
    else:
        sigma_m = spec.covariance.matrix_for(d)
        w, v = np.linalg.eigh(sigma_m)
        root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
        pts = z @ root.T
    mu = spec.mean_vector()
    pts = pts + mu

    meta = {"family": spec.family, "seed": int(seed)}
    if spec.family == "gaussian" and not np.any(mu):
        # Small-ball constant of a centered Gaussian linear form.
        meta["gamma"] = math.sqrt(2.0 / math.pi)
    truth = Truth(mean=mu, covariance=spec.covariance.matrix_for(d))
    return Dataset(points=pts, truth=truth, meta=meta)


def _draw_outliers(law: GeneratorSpec, count: int, rng) -> np.ndarray:
    law.validate()
    if law.family == "two_point":
        raise ValueError("two_point is not supported as an outlier law")
    z = _standardized_draws(law.family, count, law.dim, rng, dof=law.dof, shape=law.shape)
    scales = law.covariance._scales_for(law.dim)
    if scales is not None:
        pts = z * scales
    else:
        sigma_m = law.covariance.matrix_for(law.dim)
        w, v = np.linalg.eigh(sigma_m)
        pts = z @ ((v * np.sqrt(np.clip(w, 0.0, None))) @ v.T).T
    return pts + law.mean_vector()


def corrupt(data: Dataset, adv: AdversarySpec) -> Dataset:
    """Apply a corruption model; returns a new dataset, the input is untouched.

    The output truth keeps the clean-law mean/covariance/beta and gains the
    corrupted index set plus the recorded contamination level.  The invariant
    ``|O| <= floor(eps * n)`` always holds for the recorded eps.
    """
    adv.validate()
    if data.truth is None:
        raise ValueError("corrupt() needs a dataset with ground-truth metadata")
    if data.truth.outliers.size:
        raise ValueError("dataset is already corrupted; stacking adversaries is not supported")
    n = data.n
    pts = data.points.copy()
    resp = None if data.responses is None else data.responses.copy()
    rng = np.random.default_rng(adv.seed)

    if adv.model == "none" or adv.epsilon == 0.0:
        outliers = np.empty(0, dtype=np.int64)
        recorded_eps = adv.epsilon
    elif adv.model == "huber":
        mask = rng.random(n) < adv.epsilon
        outliers = np.flatnonzero(mask).astype(np.int64)
        if outliers.size:
            pts[outliers] = _draw_outliers(adv.outlier_law, outliers.size, rng)
        # Huber corruption is binomial; record the realized fraction so the
        # budget invariant is meaningful.
        recorded_eps = outliers.size / n
    elif adv.model == "adversarial_shift":
        n_bad = int(math.floor(adv.epsilon * n))
        outliers = np.sort(rng.choice(n, size=n_bad, replace=False)).astype(np.int64)
        if adv.target == "points":
            if adv.direction is None:
                raise ValueError("adversarial_shift on points needs a direction")
            v = np.asarray(adv.direction, dtype=float)
            if v.shape != (data.dim,):
                raise ValueError(f"direction must have length {data.dim}, got {v.shape}")
            pts[outliers] = data.truth.mean + adv.magnitude * v
        else:
            if resp is None:
                raise ValueError("response corruption needs a dataset with responses")
            signs = np.where(rng.random(n_bad) < 0.5, -1.0, 1.0)
            resp[outliers] = adv.magnitude * signs
        recorded_eps = adv.epsilon
    elif adv.model == "keep_largest":
        if adv.direction is None:
            raise ValueError("keep_largest needs a direction")
        v = np.asarray(adv.direction, dtype=float)
        proj = pts @ v
        n_bad = int(math.floor(adv.epsilon * n))
        order = np.argsort(proj, kind="stable")
        outliers = np.sort(order[:n_bad]).astype(np.int64)
        retained = order[n_bad:]
        if n_bad:
            donors = rng.choice(retained, size=n_bad, replace=True)
            pts[outliers] = pts[donors]
        recorded_eps = adv.epsilon
    else:  # pragma: no cover - validate() already rejects unknown models
        raise ValueError(adv.model)

    assert outliers.size <= math.floor(recorded_eps * n + 1e-9)
    truth = replace(data.truth, outliers=outliers, epsilon=float(recorded_eps))
    meta = dict(data.meta, adversary=adv.model, adversary_seed=int(adv.seed))
    return Dataset(points=pts, responses=resp, truth=truth, meta=meta)


def regression_generate(
    spec: GeneratorSpec, beta_star: np.ndarray, noise: NoiseSpec, n: int, seed: int
) -> Dataset:
    """Sample a linear model: responses are <beta_star, X_i> plus independent
    zero-mean noise.  Noise variance (scale squared) lands in the truth record,
    which is also the weak noise scale for independent noise."""
    noise.validate()
    beta = np.asarray(beta_star, dtype=float)
    if beta.shape != (spec.dim,):
        raise ValueError(f"beta_star must have length {spec.dim}, got {beta.shape}")
    ds = generate(spec, n, seed)
    noise_rng = np.random.default_rng([seed, _NOISE_SALT])
    xi = noise.scale * _standardized_draws(
        noise.family, n, 1, noise_rng, dof=noise.dof, shape=noise.shape
    ).ravel()
    responses = ds.points @ beta + xi
    truth = replace(ds.truth, beta=beta.copy(), noise_variance=float(noise.scale**2))
    return Dataset(points=ds.points, responses=responses, truth=truth, meta=dict(ds.meta))


def cov_weak_sigma(spec: GeneratorSpec) -> float:
    """Weak variance scale of the covariance quadratic process, when known in
    closed form.  Implemented for the Gaussian family (sqrt(2) * lambda_max);
    raises for other families, whose fourth-moment suprema are not tabulated.
    """
    if spec.family != "gaussian":
        raise ValueError(
            f"analytic weak variance is only available for the gaussian family, "
            f"got {spec.family!r}"
        )
    return math.sqrt(2.0) * spec.covariance.lambda_max(spec.dim)


def _format_float(x: float) -> str:
    return repr(float(x))


def dataset_to_csv(data: Dataset, path) -> None:
    """Write one row per sample: columns x0..x{d-1} and, when present, y.
    Floats are written with round-trip precision, so writing is deterministic
    and reading recovers the exact values."""
    d = data.dim
    header = [f"x{j}" for j in range(d)]
    if data.responses is not None:
        header.append("y")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(data.n):
            row = [_format_float(v) for v in data.points[i]]
            if data.responses is not None:
                row.append(_format_float(data.responses[i]))
            writer.writerow(row)


def dataset_from_csv(path) -> Dataset:
    """Inverse of dataset_to_csv.  Ground-truth metadata is not serialized."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        has_y = header[-1] == "y"
        d = len(header) - (1 if has_y else 0)
        pts, ys = [], []
        for row in reader:
            pts.append([float(v) for v in row[:d]])
            if has_y:
                ys.append(float(row[d]))
    points = np.asarray(pts, dtype=float).reshape(-1, d)
    responses = np.asarray(ys, dtype=float) if has_y else None
    return Dataset(points=points, responses=responses)
