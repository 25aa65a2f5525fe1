"""Nested nonnegative cone analysis.

A backward sequence of rank-decreasing, entrywise-nonnegative, span-nested
approximations of a nonnegative data matrix, plus the SVD/PCA/NMF
baselines it is compared against and seeded simulation studies.
"""

__version__ = "0.1.0"

from ._kernels import NUMBA_ENABLED
from .baselines import (
    NmfFactorization,
    PcaApproximation,
    nmf,
    nmf_als,
    nmf_best_of,
    pca_approx,
    svd_approx,
)
from .coneqp import (
    ConeProjectionError,
    ConeProjectionResult,
    project_column,
    project_matrix,
)
from .linalg import (
    EPS_NONNEG,
    OrthonormalBasis,
    RankDeficiencyError,
    SvdConvergenceError,
    SvdFactorization,
    as_matrix,
    as_nonneg_matrix,
    frobenius_norm,
    orthonormal_range,
    qr_basis,
    singular_values,
    svd,
    truncate,
)
from .metrics import (
    count_out_of_cone,
    count_sparse_columns,
    principal_angle,
    residual_fro,
)
from .sequence import NncaSequence, NncaStep, nnca_sequence, reduce_rank
from .simulate import (
    ScenarioAConfig,
    ScenarioCConfig,
    StudyReport,
    evaluate_angle_pair,
    gen_scenario_a,
    gen_unit_columns,
    run_angle_study,
    run_scenario_a_study,
    run_single_realization,
)

__all__ = [
    "NUMBA_ENABLED",
    "EPS_NONNEG",
    "ConeProjectionError",
    "ConeProjectionResult",
    "NmfFactorization",
    "NncaSequence",
    "NncaStep",
    "OrthonormalBasis",
    "PcaApproximation",
    "RankDeficiencyError",
    "ScenarioAConfig",
    "ScenarioCConfig",
    "StudyReport",
    "SvdConvergenceError",
    "SvdFactorization",
    "as_matrix",
    "as_nonneg_matrix",
    "count_out_of_cone",
    "count_sparse_columns",
    "evaluate_angle_pair",
    "frobenius_norm",
    "gen_scenario_a",
    "gen_unit_columns",
    "nmf",
    "nmf_als",
    "nmf_best_of",
    "nnca_sequence",
    "orthonormal_range",
    "pca_approx",
    "principal_angle",
    "project_column",
    "project_matrix",
    "qr_basis",
    "reduce_rank",
    "residual_fro",
    "run_angle_study",
    "run_scenario_a_study",
    "run_single_realization",
    "singular_values",
    "svd",
    "svd_approx",
    "truncate",
]
