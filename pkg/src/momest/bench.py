"""Config-driven Monte Carlo benchmark harness.

An experiment is described by a versioned JSON config: a data generator, an
optional corruption model, one or more estimators, a parameter grid over
``(n, d, s, k, epsilon)``, a replicate count, and quantile levels.  Running it
produces per-cell loss samples, upper quantiles, the matching theoretical
deviation radius, and the empirical coverage of that radius; results are
written to a CSV with a fixed schema and an SVG deviation plot.

Determinism contract: replicate ``j`` of cell ``i`` (cells in grid order)
uses seed ``seed_base + i * replicates + j``, every estimator in the run sees
the same seed (paired comparisons), and CSV bytes depend only on the config.
"""

from __future__ import annotations

import itertools
import json
import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import data_lab
from ._solver import SolverOptions
from .cov_est import mom_cov_lowrank, mom_cov_spectral
from .eigensplit import spectral_grouping, split_estimate
from .mean_est import mom_mean_euclidean, mom_mean_sparse, mom_mean_supnorm
from .mom_core import mom_mean_1d
from .reg_est import RegressionProblem, mom_regression
from .vc_bounds import BoundSheet, risk_radius

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "CellResult",
    "ExperimentResult",
    "ESTIMATORS",
    "CSV_COLUMNS",
    "run_experiment",
    "emit_outputs",
    "demo_config",
    "demo_names",
]


class ConfigError(Exception):
    """A malformed or inconsistent experiment configuration."""


# Adversary streams are decoupled from generation streams by this offset.
_ADVERSARY_SALT = 32452843

CSV_COLUMNS = (
    "estimator",
    "family",
    "n",
    "d",
    "s",
    "k",
    "epsilon",
    "replicates",
    "seed_base",
    "delta",
    "empirical_quantile",
    "theoretical_radius",
    "coverage",
)

_MEAN_ESTIMATORS = (
    "mom_mean_supnorm",
    "mom_mean_euclidean",
    "mom_mean_sparse",
    "mom_mean_1d",
    "empirical_mean",
    "eigensplit",
)
_REGRESSION_ESTIMATORS = ("mom_regression", "ols")
_COV_ESTIMATORS = ("mom_cov_spectral", "mom_cov_lowrank", "sample_cov")
ESTIMATORS = _MEAN_ESTIMATORS + _REGRESSION_ESTIMATORS + _COV_ESTIMATORS

_CONFIG_KEYS = {
    "version",
    "name",
    "estimator",
    "estimators",
    "estimator_options",
    "family",
    "dof",
    "shape",
    "mean",
    "covariance",
    "adversary",
    "noise",
    "beta",
    "gamma",
    "grid",
    "replicates",
    "seed_base",
    "deltas",
    "outputs",
}

_GRID_KEYS = ("n", "d", "s", "k", "epsilon")


@dataclass(eq=False)
class ExperimentConfig:
    """Validated experiment description (see ``from_dict`` for the schema)."""

    estimators: tuple
    grid: dict
    name: str = "experiment"
    estimator_options: dict = field(default_factory=dict)
    family: str = "gaussian"
    dof: float | None = None
    shape: float | None = None
    mean: dict = field(default_factory=lambda: {"kind": "zero"})
    covariance: dict = field(default_factory=lambda: {"kind": "identity"})
    adversary: dict = field(default_factory=lambda: {"model": "none"})
    noise: dict = field(default_factory=lambda: {"family": "gaussian", "scale": 1.0})
    beta: dict = field(default_factory=lambda: {"kind": "zero"})
    gamma: float | None = None
    replicates: int = 1
    seed_base: int = 0
    deltas: tuple = (0.05,)
    outputs: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}")
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if raw.get("version") != 1:
            raise ConfigError(
                f"config version must be 1, got {raw.get('version')!r}"
            )

        names = raw.get("estimators", raw.get("estimator"))
        if names is None:
            raise ConfigError("config needs an 'estimator' (or 'estimators') entry")
        if isinstance(names, str):
            names = [names]
        bad = [e for e in names if e not in ESTIMATORS]
        if bad or not names:
            raise ConfigError(
                f"unknown estimators {bad}; available: {list(ESTIMATORS)}"
            )

        grid_raw = raw.get("grid")
        if not isinstance(grid_raw, dict):
            raise ConfigError("config needs a 'grid' object")
        unknown_axes = set(grid_raw) - set(_GRID_KEYS)
        if unknown_axes:
            raise ConfigError(f"unknown grid axes: {sorted(unknown_axes)}")
        grid = {
            "n": [int(x) for x in grid_raw.get("n", [])],
            "d": [int(x) for x in grid_raw.get("d", [1])],
            "s": [int(x) for x in grid_raw.get("s", [0])],
            "k": [int(x) for x in grid_raw.get("k", [])],
            "epsilon": [float(x) for x in grid_raw.get("epsilon", [0.0])],
        }
        for axis in ("n", "k"):
            if not grid[axis]:
                raise ConfigError(f"grid axis '{axis}' must be a nonempty list")
        for axis in _GRID_KEYS:
            if not grid[axis]:
                raise ConfigError(f"grid axis '{axis}' must not be empty")
        if any(v < 1 for v in grid["n"] + grid["k"] + grid["d"]):
            raise ConfigError("grid values for n, d, k must be >= 1")
        if any(v < 0 for v in grid["s"]):
            raise ConfigError("grid values for s must be >= 0 (0 = not sparse)")
        if any(not 0.0 <= e < 0.5 for e in grid["epsilon"]):
            raise ConfigError("grid epsilon values must lie in [0, 0.5)")

        replicates = int(raw.get("replicates", 1))
        if replicates < 1:
            raise ConfigError(f"replicates must be >= 1, got {replicates}")
        deltas = tuple(float(x) for x in raw.get("deltas", (0.05,)))
        if any(not 0.0 < dl < 1.0 for dl in deltas):
            raise ConfigError("deltas must lie strictly between 0 and 1")

        options = raw.get("estimator_options", {})
        if "mom_cov_lowrank" in names and "r" not in options:
            raise ConfigError("mom_cov_lowrank needs estimator_options.r")

        gamma = raw.get("gamma")
        if gamma is not None:
            gamma = float(gamma)
            if not 0.0 < gamma <= 1.0:
                raise ConfigError(f"gamma must lie in (0, 1], got {gamma}")

        return cls(
            estimators=tuple(names),
            grid=grid,
            name=str(raw.get("name", "experiment")),
            estimator_options=dict(options),
            family=str(raw.get("family", "gaussian")),
            dof=None if raw.get("dof") is None else float(raw["dof"]),
            shape=None if raw.get("shape") is None else float(raw["shape"]),
            mean=dict(raw.get("mean", {"kind": "zero"})),
            covariance=dict(raw.get("covariance", {"kind": "identity"})),
            adversary=dict(raw.get("adversary", {"model": "none"})),
            noise=dict(raw.get("noise", {"family": "gaussian", "scale": 1.0})),
            beta=dict(raw.get("beta", {"kind": "zero"})),
            gamma=gamma,
            replicates=replicates,
            seed_base=int(raw.get("seed_base", 0)),
            deltas=deltas,
            outputs=dict(raw.get("outputs", {})),
        )

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        return cls.from_dict(raw)

    def cells(self) -> list:
        g = self.grid
        return [
            _Cell(n, d, s, k, eps)
            for n, d, s, k, eps in itertools.product(
                g["n"], g["d"], g["s"], g["k"], g["epsilon"]
            )
        ]


@dataclass(frozen=True)
class _Cell:
    n: int
    d: int
    s: int
    k: int
    epsilon: float


def _vector_from_spec(spec: dict, d: int, s: int, what: str) -> np.ndarray:
    """Materialize a parametric vector spec at grid dimensions (d, s)."""
    kind = spec.get("kind", "zero")
    if kind == "zero":
        return np.zeros(d)
    if kind == "constant":
        return np.full(d, float(spec["value"]))
    if kind == "sparse":
        support = int(spec.get("support", s))
        if not 1 <= support <= d:
            raise ValueError(
                f"{what}: sparse spec needs 1 <= support <= d={d}, got {support} "
                "(set grid s or an explicit 'support')"
            )
        v = np.zeros(d)
        v[:support] = float(spec["value"])
        return v
    if kind == "explicit":
        v = np.asarray(spec["values"], dtype=float).reshape(-1)
        if v.shape != (d,):
            raise ValueError(f"{what}: explicit vector must have length {d}")
        return v
    raise ValueError(f"{what}: unknown vector kind {kind!r}")


def _covariance_from_spec(spec: dict) -> data_lab.CovarianceSpec:
    kind = spec.get("kind", "identity")
    if kind == "identity":
        return data_lab.CovarianceSpec()
    if kind == "scaled_identity":
        v = float(spec["value"])
        return data_lab.CovarianceSpec(kind="spiked", lambda1=v, decay=v)
    if kind == "diagonal":
        return data_lab.CovarianceSpec(kind="diagonal", values=tuple(spec["values"]))
    if kind == "spiked":
        return data_lab.CovarianceSpec(
            kind="spiked",
            lambda1=float(spec.get("lambda1", 1.0)),
            decay=float(spec.get("decay", 1.0)),
        )
    if kind == "explicit":
        return data_lab.CovarianceSpec(
            kind="explicit", matrix=np.asarray(spec["matrix"], dtype=float)
        )
    raise ValueError(f"unknown covariance kind {kind!r}")


def _generator_for_cell(config: ExperimentConfig, cell: _Cell) -> data_lab.GeneratorSpec:
    return data_lab.GeneratorSpec(
        dim=cell.d,
        family=config.family,
        mean=_vector_from_spec(config.mean, cell.d, cell.s, "mean"),
        covariance=_covariance_from_spec(config.covariance),
        dof=config.dof,
        shape=config.shape,
        sparsity=cell.s or None,
    )


def _direction_from_spec(spec: dict | None, d: int) -> np.ndarray:
    kind = "spike" if spec is None else spec.get("kind", "spike")
    if kind == "spike":
        v = np.zeros(d)
        v[0] = 1.0
        return v
    if kind == "uniform":
        return np.full(d, 1.0 / math.sqrt(d))
    if kind == "explicit":
        v = np.asarray(spec["values"], dtype=float).reshape(-1)
        if v.shape != (d,):
            raise ValueError(f"adversary direction must have length {d}")
        return v
    raise ValueError(f"unknown direction kind {kind!r}")


def _adversary_for_cell(
    config: ExperimentConfig, cell: _Cell, seed: int
) -> data_lab.AdversarySpec | None:
    adv = config.adversary
    model = adv.get("model", "none")
    if model == "none" or cell.epsilon == 0.0:
        return None
    law = None
    if adv.get("outlier_law") is not None:
        law_raw = adv["outlier_law"]
        law = data_lab.GeneratorSpec(
            dim=cell.d,
            family=law_raw.get("family", "gaussian"),
            mean=_vector_from_spec(law_raw.get("mean", {"kind": "zero"}), cell.d, cell.s, "outlier mean"),
            covariance=_covariance_from_spec(law_raw.get("covariance", {"kind": "identity"})),
            dof=law_raw.get("dof"),
            shape=law_raw.get("shape"),
        )
    needs_direction = model == "keep_largest" or (
        model == "adversarial_shift" and adv.get("target", "points") == "points"
    )
    direction = _direction_from_spec(adv.get("direction"), cell.d) if needs_direction else None
    return data_lab.AdversarySpec(
        model=model,
        epsilon=cell.epsilon,
        seed=seed + _ADVERSARY_SALT,
        outlier_law=law,
        direction=direction,
        magnitude=float(adv.get("magnitude", 0.0)),
        target=str(adv.get("target", "points")),
    )


def _gamma_for(config: ExperimentConfig, data: data_lab.Dataset | None) -> float | None:
    if config.gamma is not None:
        return config.gamma
    if data is not None and "gamma" in data.meta:
        return float(data.meta["gamma"])
    return None


def _spectral_norm(a: np.ndarray) -> float:
    sym = (a + a.T) * 0.5
    return float(np.max(np.abs(np.linalg.eigvalsh(sym))))


def _solver_options_from(options: dict) -> SolverOptions | None:
    keys = ("max_iter", "n_random", "theta", "rtol", "min_step_rel")
    picked = {key: options[key] for key in keys if key in options}
    return SolverOptions(**picked) if picked else None


def _run_replicate(config: ExperimentConfig, estimator: str, cell: _Cell, seed: int) -> dict:
    """Generate, corrupt, estimate, and score one replicate.

    Never raises: estimator/config failures are recorded in the returned
    record so a sweep cannot abort.
    """
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            loss = _dispatch(config, estimator, cell, seed)
        return {"seed": seed, "loss": float(loss), "error": None, "warnings": len(caught)}
    except Exception as exc:  # noqa: BLE001 - the sweep must never abort
        return {
            "seed": seed,
            "loss": math.nan,
            "error": f"{type(exc).__name__}: {exc}",
            "warnings": 0,
        }


def _dispatch(config: ExperimentConfig, estimator: str, cell: _Cell, seed: int) -> float:
    opts = _solver_options_from(config.estimator_options)
    options = config.estimator_options
    gen = _generator_for_cell(config, cell)

    if estimator in _REGRESSION_ESTIMATORS:
        beta = _vector_from_spec(config.beta, cell.d, cell.s, "beta")
        noise = data_lab.NoiseSpec(
            family=config.noise.get("family", "gaussian"),
            scale=float(config.noise.get("scale", 1.0)),
            dof=config.noise.get("dof"),
            shape=config.noise.get("shape"),
        )
        data = data_lab.regression_generate(gen, beta, noise, cell.n, seed)
        adv = _adversary_for_cell(config, cell, seed)
        if adv is not None:
            data = data_lab.corrupt(data, adv)
        sigma_mat = gen.covariance.matrix_for(cell.d)
        if estimator == "mom_regression":
            problem = RegressionProblem(
                data,
                s=cell.s or None,
                gamma=_gamma_for(config, data),
                weak_variance=noise.scale**2,
            )
            rep = mom_regression(problem, cell.k, seed, opts)
            delta = rep.estimate - beta
        else:  # ols
            coef, *_ = np.linalg.lstsq(data.points, data.responses, rcond=None)
            delta = coef - beta
        # Sigma-weighted error norm; its square is the excess quadratic risk.
        return math.sqrt(float(delta @ sigma_mat @ delta))

    data = data_lab.generate(gen, cell.n, seed)
    adv = _adversary_for_cell(config, cell, seed)
    if adv is not None:
        data = data_lab.corrupt(data, adv)

    if estimator in _MEAN_ESTIMATORS:
        mean_true = data.truth.mean
        if estimator == "mom_mean_supnorm":
            rep = mom_mean_supnorm(data, cell.k, seed)
            return float(np.max(np.abs(rep.estimate - mean_true)))
        if estimator == "mom_mean_euclidean":
            rep = mom_mean_euclidean(data, cell.k, seed, opts)
            return float(np.linalg.norm(rep.estimate - mean_true))
        if estimator == "mom_mean_sparse":
            if cell.s < 1:
                raise ValueError("mom_mean_sparse needs grid s >= 1")
            rep = mom_mean_sparse(data, cell.k, cell.s, seed, opts)
            return float(np.linalg.norm(rep.estimate - mean_true))
        if estimator == "mom_mean_1d":
            if cell.d != 1:
                raise ValueError("mom_mean_1d needs d = 1")
            est = mom_mean_1d(data.points[:, 0], cell.k, seed)
            return abs(est - float(mean_true[0]))
        if estimator == "empirical_mean":
            return float(np.linalg.norm(data.points.mean(axis=0) - mean_true))
        # eigensplit
        if cell.s < 1:
            raise ValueError("eigensplit needs grid s >= 1")
        sigma_mat = gen.covariance.matrix_for(cell.d)
        rep = split_estimate(data, sigma_mat, cell.k, cell.s, seed, opts)
        return float(np.linalg.norm(rep.estimate - mean_true))

    # covariance group
    sigma_mat = gen.covariance.matrix_for(cell.d)
    if estimator == "mom_cov_spectral":
        rep = mom_cov_spectral(data, cell.k, seed, opts, center=bool(options.get("center", False)))
        return _spectral_norm(rep.estimate - sigma_mat)
    if estimator == "mom_cov_lowrank":
        rep = mom_cov_lowrank(
            data, cell.k, int(options["r"]), seed, opts, center=bool(options.get("center", False))
        )
        return float(np.linalg.norm(rep.estimate - sigma_mat))
    # sample_cov (uncentered: the mean is treated as known and zero)
    pts = data.points
    return _spectral_norm(pts.T @ pts / cell.n - sigma_mat)


def _bound_sheet(config: ExperimentConfig, estimator: str, cell: _Cell) -> BoundSheet | None:
    """Theoretical deviation radius for one cell, or None when the required
    scale constants are unknown for the configured family."""
    cov = _covariance_from_spec(config.covariance)
    lam = cov.lambda_max(cell.d)
    n_out = int(math.floor(cell.epsilon * cell.n + 1e-9))
    common = {"k": cell.k, "n": cell.n, "n_outliers": n_out}
    try:
        if estimator in ("mom_mean_supnorm", "mom_mean_euclidean", "empirical_mean", "mom_mean_1d"):
            return risk_radius(
                "mean_any_norm", sigma_half_norm=math.sqrt(lam), d=cell.d, **common
            )
        if estimator == "mom_mean_sparse":
            return risk_radius("sparse_mean", lambda1=lam, s=max(cell.s, 1), d=cell.d, **common)
        if estimator == "eigensplit":
            grouping = spectral_grouping(cov.matrix_for(cell.d))
            return risk_radius(
                "eigensplit",
                lambda1=lam,
                d=cell.d,
                s=max(cell.s, 1),
                band_dims=[b.dim for b in grouping.bands],
                **common,
            )
        if estimator in _REGRESSION_ESTIMATORS:
            gamma = _gamma_for(config, None)
            if gamma is None and config.family == "gaussian" and config.mean.get("kind", "zero") == "zero":
                gamma = math.sqrt(2.0 / math.pi)
            if gamma is None:
                return None
            extra = {"s": cell.s} if cell.s else {}
            return risk_radius(
                "regression",
                sigma=float(config.noise.get("scale", 1.0)),
                gamma=gamma,
                d=cell.d,
                **extra,
                **common,
            )
        # covariance group: the weak variance has a closed form only for
        # Gaussian data.
        sigma = data_lab.cov_weak_sigma(_generator_for_cell(config, cell))
        if estimator == "mom_cov_lowrank":
            return risk_radius(
                "cov_lowrank",
                sigma=sigma,
                d=cell.d,
                r=int(config.estimator_options["r"]),
                **common,
            )
        return risk_radius("cov_spectral", sigma=sigma, d=cell.d, **common)
    except ValueError:
        return None


def _upper_quantile(sorted_losses: list, delta: float) -> float:
    """The ceil((1-delta)*R)-th smallest loss (1e-12 guard against float
    fuzz), clipped to the observed range; nan when no loss is available."""
    r = len(sorted_losses)
    if r == 0:
        return math.nan
    idx = int(math.ceil((1.0 - delta) * r - 1e-12)) - 1
    return float(sorted_losses[min(r - 1, max(0, idx))])


@dataclass(eq=False)
class CellResult:
    """All replicate outcomes of one estimator on one grid cell."""

    estimator: str
    n: int
    d: int
    s: int
    k: int
    epsilon: float
    seeds: list
    losses: list
    errors: list
    warning_count: int
    sheet: BoundSheet | None
    wall_time: float

    @property
    def valid_losses(self) -> list:
        return sorted(x for x in self.losses if not math.isnan(x))

    def quantile(self, delta: float) -> float:
        return _upper_quantile(self.valid_losses, delta)

    def coverage(self) -> float:
        """Fraction of successful replicates whose loss is within the radius."""
        valid = self.valid_losses
        if self.sheet is None or not valid:
            return math.nan
        radius = self.sheet.risk_radius
        return sum(1 for x in valid if x <= radius) / len(valid)


@dataclass(eq=False)
class ExperimentResult:
    config: ExperimentConfig
    cells: list

    def failed_replicates(self) -> int:
        return sum(sum(1 for e in c.errors if e is not None) for c in self.cells)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the full sweep: every grid cell, every estimator, every replicate.

    Replicate seeds are ``seed_base + counter`` with the counter advancing in
    (cell, replicate) order; all estimators share the replicate's seed so
    cross-estimator comparisons are paired.  Estimator errors are recorded
    per-replicate and never abort the sweep.
    """
    cell_results: list[CellResult] = []
    counter = 0
    for cell in config.cells():
        records = {name: [] for name in config.estimators}
        timers = dict.fromkeys(config.estimators, 0.0)
        for _ in range(config.replicates):
            seed = config.seed_base + counter
            counter += 1
            for name in config.estimators:
                t0 = time.perf_counter()
                records[name].append(_run_replicate(config, name, cell, seed))
                timers[name] += time.perf_counter() - t0
        for name in config.estimators:
            recs = records[name]
            cell_results.append(
                CellResult(
                    estimator=name,
                    n=cell.n,
                    d=cell.d,
                    s=cell.s,
                    k=cell.k,
                    epsilon=cell.epsilon,
                    seeds=[r["seed"] for r in recs],
                    losses=[r["loss"] for r in recs],
                    errors=[r["error"] for r in recs],
                    warning_count=sum(r["warnings"] for r in recs),
                    sheet=_bound_sheet(config, name, cell),
                    wall_time=timers[name],
                )
            )
    return ExperimentResult(config, cell_results)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(result: ExperimentResult, path) -> None:
    lines = [",".join(CSV_COLUMNS)]
    cfg = result.config
    for cell in result.cells:
        radius = math.nan if cell.sheet is None else cell.sheet.risk_radius
        cov = cell.coverage()
        for delta in cfg.deltas:
            lines.append(
                ",".join(
                    _fmt(v)
                    for v in (
                        cell.estimator,
                        cfg.family,
                        cell.n,
                        cell.d,
                        cell.s,
                        cell.k,
                        float(cell.epsilon),
                        cfg.replicates,
                        cfg.seed_base,
                        float(delta),
                        cell.quantile(delta),
                        radius,
                        cov,
                    )
                )
            )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def _write_svg(result: ExperimentResult, path) -> None:
    import matplotlib

    matplotlib.use("Agg", force=True)
    from matplotlib import pyplot as plt

    cfg = result.config
    # Without a fixed salt matplotlib derives SVG element ids from a random
    # UUID, which would break artifact reproducibility.
    matplotlib.rcParams["svg.hashsalt"] = cfg.name
    deltas = sorted(cfg.deltas, reverse=True)
    xs = [math.log(1.0 / dl) for dl in deltas]
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for cell in result.cells:
        label = (
            f"{cell.estimator} n={cell.n} d={cell.d} k={cell.k} eps={cell.epsilon:g}"
        )
        ys = [cell.quantile(dl) for dl in deltas]
        if xs:
            (line,) = ax.plot(xs, ys, marker="o", label=label)
            if cell.sheet is not None:
                # Radius rescaled to the delta-equivalent block count
                # (delta = exp(-k/128)  <=>  k = 128 log(1/delta)).
                theo = [
                    cell.sheet.risk_radius * math.sqrt(128.0 * x / cell.k) for x in xs
                ]
                ax.plot(xs, theo, linestyle="--", color=line.get_color(), alpha=0.6)
    ax.set_xlabel("log(1/delta)")
    ax.set_ylabel("empirical loss quantile")
    ax.set_title(cfg.name)
    if result.cells and xs:
        ax.legend(fontsize=7)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit_outputs(result: ExperimentResult, formats=None) -> list:
    """Write the configured artifacts; returns the paths written.

    ``formats`` restricts the output kinds ("csv", "svg"); by default every
    kind with a configured path is written.  Unwritable paths raise OSError
    with the path in the message.
    """
    cfg = result.config
    if formats is None:
        formats = [f for f in ("csv", "svg") if cfg.outputs.get(f)]
    written = []
    for fmt in formats:
        if fmt not in ("csv", "svg"):
            raise ConfigError(f"unknown output format {fmt!r}; expected csv or svg")
        path = cfg.outputs.get(fmt) or f"{cfg.name}.{fmt}"
        writer = _write_csv if fmt == "csv" else _write_svg
        try:
            writer(result, path)
        except OSError as exc:
            raise OSError(f"cannot write {fmt} output to {path!r}: {exc}") from exc
        written.append(path)
    return written


# --------------------------------------------------------------------------
# Pinned desk-scale demo scenarios
# --------------------------------------------------------------------------

_DEMOS = {
    "mean-outliers": {
        "description": "Euclidean MOM mean vs empirical mean under a placed-outlier attack",
        "config": {
            "version": 1,
            "name": "mean-outliers",
            "estimators": ["mom_mean_euclidean", "empirical_mean"],
            "family": "gaussian",
            "adversary": {"model": "adversarial_shift", "magnitude": 1e6,
                          "direction": {"kind": "spike"}},
            "grid": {"n": [2000], "d": [5], "k": [400], "epsilon": [0.05]},
            "replicates": 20,
            "seed_base": 20260814,
            "deltas": [0.1, 0.05],
        },
    },
    "heavy-tail-1d": {
        "description": "Scalar MOM vs empirical mean on t(2.5) data (no corruption)",
        "config": {
            "version": 1,
            "name": "heavy-tail-1d",
            "estimators": ["mom_mean_1d", "empirical_mean"],
            "family": "student_t",
            "dof": 2.5,
            "grid": {"n": [1000], "d": [1], "k": [56]},
            "replicates": 200,
            "seed_base": 7,
            "deltas": [0.05, 0.01],
        },
    },
    "sparse-mean": {
        "description": "Sparse MOM mean vs dense solver on a 5-sparse mean in d=100",
        "config": {
            "version": 1,
            "name": "sparse-mean",
            "estimators": ["mom_mean_sparse", "mom_mean_euclidean"],
            "family": "gaussian",
            "mean": {"kind": "sparse", "value": 3.0},
            "grid": {"n": [2000], "d": [100], "s": [5], "k": [32]},
            "replicates": 20,
            "seed_base": 11,
            "deltas": [0.1, 0.05],
        },
    },
    "regression-poison": {
        "description": "MOM regression vs OLS with 5% response poisoning at magnitude 1e6",
        "config": {
            "version": 1,
            "name": "regression-poison",
            "estimators": ["mom_regression", "ols"],
            "family": "gaussian",
            "beta": {"kind": "constant", "value": 2.0},
            "noise": {"family": "student_t", "dof": 2.5, "scale": 1.0},
            "adversary": {"model": "adversarial_shift", "magnitude": 1e6,
                          "target": "responses"},
            "grid": {"n": [2000], "d": [1], "k": [400], "epsilon": [0.05]},
            "replicates": 20,
            "seed_base": 23,
            "deltas": [0.1, 0.05],
        },
    },
    "cov-outliers": {
        "description": "Spectral MOM covariance vs sample covariance with placed outliers",
        "config": {
            "version": 1,
            "name": "cov-outliers",
            "estimators": ["mom_cov_spectral", "sample_cov"],
            "family": "gaussian",
            "adversary": {"model": "adversarial_shift", "magnitude": 1e3,
                          "direction": {"kind": "spike"}},
            "grid": {"n": [2000], "d": [5], "k": [400], "epsilon": [0.05]},
            "replicates": 10,
            "seed_base": 31,
            "deltas": [0.1, 0.05],
        },
    },
    "cov-lowrank": {
        "description": "Rank-1 MOM covariance on a pure spike (rank-1 truth)",
        "config": {
            "version": 1,
            "name": "cov-lowrank",
            "estimators": ["mom_cov_lowrank"],
            "estimator_options": {"r": 1},
            "family": "gaussian",
            "covariance": {"kind": "spiked", "lambda1": 1.0, "decay": 0.0},
            "grid": {"n": [2000], "d": [10], "k": [64]},
            "replicates": 10,
            "seed_base": 41,
            "deltas": [0.1, 0.05],
        },
    },
    "eigensplit": {
        "description": "Band-split mean vs flat sparse MOM on a spiked covariance",
        "config": {
            "version": 1,
            "name": "eigensplit",
            "estimators": ["eigensplit", "mom_mean_sparse"],
            "family": "gaussian",
            "mean": {"kind": "sparse", "value": 3.0},
            "covariance": {"kind": "spiked", "lambda1": 1.0, "decay": 0.0009765625},
            "grid": {"n": [4096], "d": [16], "s": [1], "k": [16]},
            "replicates": 10,
            "seed_base": 53,
            "deltas": [0.1, 0.05],
        },
    },
    "coverage": {
        "description": "Coverage of the mean deviation radius across block counts",
        "config": {
            "version": 1,
            "name": "coverage",
            "estimators": ["mom_mean_euclidean"],
            "family": "gaussian",
            "grid": {"n": [4096], "d": [5], "k": [16, 64, 256]},
            "replicates": 100,
            "seed_base": 61,
            "deltas": [0.2, 0.05],
        },
    },
}


def demo_names() -> list:
    return sorted(_DEMOS)


def demo_description(name: str) -> str:
    return _DEMOS[name]["description"]


def demo_config(name: str) -> ExperimentConfig:
    """Pinned configuration for a named demo scenario."""
    if name not in _DEMOS:
        raise ConfigError(
            f"unknown demo {name!r}; available: {', '.join(demo_names())}"
        )
    raw = json.loads(json.dumps(_DEMOS[name]["config"]))  # deep copy
    raw.setdefault("outputs", {})
    raw["outputs"].setdefault("csv", f"demo_{name}.csv")
    raw["outputs"].setdefault("svg", f"demo_{name}.svg")
    return ExperimentConfig.from_dict(raw)
