"""Comparison measures: principal angles between column spans, out-of-cone
and sparse column counts, residual norms.
"""

import math

import numpy as np

from .linalg import as_matrix, orthonormal_range, singular_values

#: A column leaves the cone when any entry falls below -OUT_OF_CONE_TOL.
OUT_OF_CONE_TOL = 1e-9

#: An entry counts as a zero (for sparsity) when its magnitude is at most this.
SPARSE_ZERO_TOL = 1e-6


def principal_angle(a, b):
    """Largest principal angle, in degrees, between the column spans.

    Bases are rank-cut orthonormal ranges; the lower-rank span is compared
    against the higher-rank one, so the result is 0 exactly when one span
    contains the other.  The angle is acos of the smallest singular value
    of Q_a^T Q_b (for a rank-1 span that is its only singular value),
    evaluated jointly with the complementary sine so that nested spans
    report ~1e-8 degrees instead of sqrt(eps) noise.  Always in [0, 90].
    """
    qa = orthonormal_range(as_matrix(a))
    qb = orthonormal_range(as_matrix(b))
    if qa.shape[0] != qb.shape[0]:
        raise ValueError("matrices live in different dimensions")
    if qa.shape[1] > qb.shape[1]:
        qa, qb = qb, qa
    cross = qa.T @ qb
    cos = min(1.0, float(singular_values(cross)[-1]))
    residual = qa - qb @ (qb.T @ qa)
    sin = min(1.0, float(singular_values(residual)[0]))
    return math.degrees(math.atan2(sin, cos))


def count_out_of_cone(a, tol=OUT_OF_CONE_TOL):
    """Number of columns with any entry below ``-tol``."""
    return int(np.count_nonzero((as_matrix(a) < -tol).any(axis=0)))


def count_sparse_columns(a, tol=SPARSE_ZERO_TOL):
    """Number of columns containing at least one (near-)zero entry."""
    return int(np.count_nonzero((np.abs(as_matrix(a)) <= tol).any(axis=0)))


def residual_fro(x, a):
    """Frobenius norm of ``x - a``; shapes must match."""
    x = as_matrix(x)
    a = as_matrix(a)
    if x.shape != a.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {a.shape}")
    return float(np.sqrt(np.sum((x - a) ** 2)))
