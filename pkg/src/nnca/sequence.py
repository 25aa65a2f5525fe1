"""Backward sequence of rank-decreasing nonnegative approximations.

Starting from a nonnegative matrix of rank r0, each step finds a rank-k
nonnegative approximation of the rank-(k+1) matrix from the previous step
(never of the original data, which keeps the column spans nested):
truncate the SVD at rank k, and if that leaves the nonnegative cone,
project the parent matrix onto span of the top-k left singular vectors
intersected with the cone.
"""

from dataclasses import dataclass, field

import numpy as np

from .coneqp import TOL_KKT, project_matrix
from .linalg import EPS_NONNEG, as_nonneg_matrix, frobenius_norm, svd, truncate

#: Relative gap (times s_1) under which consecutive singular values are
#: considered tied, making the chosen subspace potentially non-unique.
DEGENERATE_GAP_REL = 1e-10


@dataclass
class NncaStep:
    """One rank reduction with its diagnostics.

    ``svd_was_feasible`` marks the early exit where the plain rank-k SVD
    truncation was already nonnegative; ``degenerate_gap`` marks
    s_k ~ s_{k+1} in the parent's spectrum, where the reduced subspace is
    no longer guaranteed unique.
    """

    rank_target: int
    approx: np.ndarray
    residual_from_parent: float
    residual_from_data: float
    effective_rank: int
    degenerate_gap: bool
    svd_was_feasible: bool
    projection: object = field(default=None, repr=False)


@dataclass
class NncaSequence:
    """Approximations ordered from rank r0-1 down to rank 1."""

    source: np.ndarray
    steps: list

    def by_rank(self, k):
        for step in self.steps:
            if step.rank_target == k:
                return step
        raise KeyError(f"no step with rank {k}")

    @property
    def ranks(self):
        return [step.rank_target for step in self.steps]


def reduce_rank(b, k, *, data=None, tol_nonneg=EPS_NONNEG, tol_kkt=TOL_KKT):
    """Rank-k nonnegative approximation of the rank-(k+1) matrix ``b``.

    ``data`` (default ``b``) is the original matrix used for the
    residual_from_data diagnostic.
    """
    b = as_nonneg_matrix(b, tol=tol_nonneg)
    f = svd(b)
    if not 1 <= k < f.rank:
        raise ValueError(
            f"target rank {k} must lie in [1, rank(b) - 1] = [1, {f.rank - 1}]"
        )
    degenerate = (f.s[k - 1] - f.s[k]) <= DEGENERATE_GAP_REL * f.s[0]
    trunc = truncate(f, k)
    if trunc.min() >= -tol_nonneg:
        approx = trunc
        feasible = True
        diagnostics = None
    else:
        approx, diagnostics = project_matrix(
            b, f.u[:, :k], tol_kkt=tol_kkt, tol_nonneg=tol_nonneg
        )
        feasible = False
    reference = b if data is None else data
    return NncaStep(
        rank_target=k,
        approx=approx,
        residual_from_parent=frobenius_norm(b - approx),
        residual_from_data=frobenius_norm(reference - approx),
        effective_rank=svd(approx).rank,
        degenerate_gap=degenerate,
        svd_was_feasible=feasible,
        projection=diagnostics,
    )


def nnca_sequence(x, *, tol_nonneg=EPS_NONNEG, tol_kkt=TOL_KKT):
    """Full backward sequence A_{r0-1}, ..., A_1 for a rank-r0 matrix.

    Each A_k is computed from A_{k+1}, so every span is contained in the
    previous one.  If an approximation loses rank early, the ranks below
    it down to its effective rank are filled with the same matrix (a
    rank-deficient approximation is already its own best lower-rank
    nonnegative approximation).
    """
    x = as_nonneg_matrix(x, tol=tol_nonneg)
    r0 = svd(x).rank
    if r0 < 2:
        raise ValueError(f"input must have rank >= 2, got rank {r0}")
    steps = []
    b = x
    b_rank = r0
    for k in range(r0 - 1, 0, -1):
        if b_rank <= k:
            steps.append(
                NncaStep(
                    rank_target=k,
                    approx=b.copy(),
                    residual_from_parent=0.0,
                    residual_from_data=frobenius_norm(x - b),
                    effective_rank=b_rank,
                    degenerate_gap=False,
                    svd_was_feasible=True,
                )
            )
            continue
        step = reduce_rank(b, k, data=x, tol_nonneg=tol_nonneg, tol_kkt=tol_kkt)
        steps.append(step)
        b = step.approx
        b_rank = step.effective_rank
    return NncaSequence(source=x, steps=steps)
