"""momest: robust estimation with median-of-means min-max solvers.

Estimators for the mean (sup-norm, Euclidean, sparse), linear regression,
and the covariance (spectral and low-rank) that keep sub-Gaussian-style
deviation guarantees under heavy tails and adversarial sample corruption,
plus a deviation-bound calculus, an eigenvalue-band splitting scheme for
known covariances, and a config-driven Monte Carlo benchmark CLI.
"""

from ._solver import SolverOptions
from .bench import (
    CSV_COLUMNS,
    ESTIMATORS,
    ConfigError,
    ExperimentConfig,
    ExperimentResult,
    demo_config,
    demo_description,
    demo_names,
    emit_outputs,
    run_experiment,
)
from .cov_est import block_second_moments, mom_cov_lowrank, mom_cov_spectral, save_matrix_csv
from .data_lab import (
    AdversarySpec,
    CovarianceSpec,
    GeneratorSpec,
    NoiseSpec,
    corrupt,
    cov_weak_sigma,
    dataset_from_csv,
    dataset_to_csv,
    generate,
    regression_generate,
)
from .eigensplit import SpectralGrouping, spectral_grouping, split_estimate
from .mean_est import (
    EstimatorReport,
    minimax_objective,
    mom_mean_euclidean,
    mom_mean_sparse,
    mom_mean_supnorm,
)
from .mom_core import (
    BlockPartition,
    Dataset,
    Truth,
    block_means,
    median,
    mom_mean_1d,
    partition_blocks,
    quantile_q14,
)
from .reg_est import (
    DegenerateDirectionError,
    RegressionProblem,
    mom_regression,
    qnorm_direction,
)
from .vc_bounds import (
    CONTEXTS,
    BoundSheet,
    risk_radius,
    vc_lowrank_bound,
    vc_poly_bound,
    vc_sparse_bound,
    vc_sparse_rank1_bound,
    vc_union_bound,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "BlockPartition",
    "Dataset",
    "Truth",
    "partition_blocks",
    "block_means",
    "median",
    "quantile_q14",
    "mom_mean_1d",
    # bounds
    "CONTEXTS",
    "BoundSheet",
    "vc_union_bound",
    "vc_sparse_bound",
    "vc_poly_bound",
    "vc_lowrank_bound",
    "vc_sparse_rank1_bound",
    "risk_radius",
    # data
    "CovarianceSpec",
    "GeneratorSpec",
    "NoiseSpec",
    "AdversarySpec",
    "generate",
    "corrupt",
    "regression_generate",
    "cov_weak_sigma",
    "dataset_to_csv",
    "dataset_from_csv",
    # estimators
    "SolverOptions",
    "EstimatorReport",
    "minimax_objective",
    "mom_mean_supnorm",
    "mom_mean_euclidean",
    "mom_mean_sparse",
    "DegenerateDirectionError",
    "RegressionProblem",
    "qnorm_direction",
    "mom_regression",
    "block_second_moments",
    "mom_cov_spectral",
    "mom_cov_lowrank",
    "save_matrix_csv",
    "SpectralGrouping",
    "spectral_grouping",
    "split_estimate",
    # bench
    "ConfigError",
    "ExperimentConfig",
    "ExperimentResult",
    "ESTIMATORS",
    "CSV_COLUMNS",
    "run_experiment",
    "emit_outputs",
    "demo_names",
    "demo_description",
    "demo_config",
]
