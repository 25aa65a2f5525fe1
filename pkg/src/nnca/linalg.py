"""Dense matrix validation and the linear-algebra kernels used everywhere:
thin SVD, rank-k truncation, QR orthonormalization and norms.

Matrices are plain float64 numpy arrays with shape (d, n): rows are
dimensions, columns are observations.  All functions are pure; inputs are
never modified.
"""

from dataclasses import dataclass, field

import numpy as np

from ._kernels import jacobi_orthogonalize

#: Entries below ``-EPS_NONNEG`` disqualify a matrix from the nonnegative cone.
EPS_NONNEG = 1e-10

#: Relative threshold (times the largest singular value) below which a
#: singular value is treated as zero.
EPS_RANK_REL = 1e-10

_JACOBI_MAX_SWEEPS = 60
_JACOBI_REL_TOL = 1e-12


class SvdConvergenceError(RuntimeError):
    """Jacobi iteration did not reach the off-diagonal tolerance."""

    def __init__(self, sweeps):
        super().__init__(
            f"one-sided Jacobi SVD did not converge within {sweeps} sweeps"
        )
        self.sweeps = sweeps


class RankDeficiencyError(ValueError):
    """Input matrix lacks the column rank an operation requires."""

    def __init__(self, column, message=None):
        super().__init__(
            message or f"matrix is rank deficient at column {column}"
        )
        self.column = column


def as_matrix(m):
    """Validate and return ``m`` as a finite float64 matrix of shape (d, n).

    Raises ValueError for empty, non-2-D or non-finite input.
    """
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"matrix must be at least 1x1, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


def as_nonneg_matrix(m, tol=EPS_NONNEG):
    """Validate ``m`` as a matrix in the nonnegative cone (entries >= -tol)."""
    a = as_matrix(m)
    low = a.min()
    if low < -tol:
        idx = np.unravel_index(int(np.argmin(a)), a.shape)
        raise ValueError(
            f"matrix entry {low:.3e} at {idx} is below the nonnegativity "
            f"tolerance -{tol:.1e}"
        )
    return a


@dataclass
class SvdFactorization:
    """Thin SVD ``m = u @ diag(s) @ v.T`` with descending positive ``s``.

    ``u`` (d, r) and ``v`` (n, r) have orthonormal columns; ``r`` counts
    the singular values above ``EPS_RANK_REL`` times the largest.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray
    sweeps: int = field(default=0, repr=False)

    @property
    def rank(self):
        return self.s.shape[0]

    def reconstruct(self):
        return (self.u * self.s) @ self.v.T


@dataclass
class OrthonormalBasis:
    """Matrix ``q`` (d, k) with orthonormal columns spanning a subspace."""

    q: np.ndarray

    @property
    def k(self):
        return self.q.shape[1]


def _jacobi_factor(z):
    """Run the one-sided Jacobi kernel on ``z`` with rows >= cols.

    Returns (left (p, q), svals (q,), right (q, q), sweeps) unsorted.
    """
    p, q = z.shape
    # .copy() (not ascontiguousarray) so the caller's matrix is never aliased
    wt = z.T.copy()
    vt = np.eye(q)
    sweeps, converged = jacobi_orthogonalize(
        wt, vt, _JACOBI_MAX_SWEEPS, _JACOBI_REL_TOL
    )
    if not converged:
        raise SvdConvergenceError(sweeps)
    svals = np.sqrt(np.sum(wt * wt, axis=1))
    return wt, svals, vt, sweeps


def svd(m):
    """Thin SVD via one-sided Jacobi rotations.

    Deterministic: singular values are sorted descending (stable order)
    and each left singular vector is flipped so its largest-magnitude
    entry is positive (ties broken by lowest index), with the right
    vector flipped along with it.
    """
    a = as_matrix(m)
    d, n = a.shape
    transposed = n > d
    z = a.T if transposed else a
    wt, svals, vt, sweeps = _jacobi_factor(z)

    order = np.argsort(-svals, kind="stable")
    svals = svals[order]
    cutoff = EPS_RANK_REL * svals[0] if svals[0] > 0.0 else 0.0
    r = int(np.sum(svals > cutoff))

    left = np.empty((z.shape[0], r))
    for pos in range(r):
        row = order[pos]
        left[:, pos] = wt[row] / svals[pos]
    right = vt[order[:r]].T.copy()
    s = svals[:r].copy()

    u, v = (right, left) if transposed else (left, right)

    # sign convention keyed on the left factor
    for i in range(r):
        peak = int(np.argmax(np.abs(u[:, i])))
        if u[peak, i] < 0.0:
            u[:, i] = -u[:, i]
            v[:, i] = -v[:, i]
    return SvdFactorization(u=u, s=s, v=v, sweeps=sweeps)


def singular_values(m):
    """All ``min(d, n)`` singular values of ``m``, descending, no rank cut."""
    a = as_matrix(m)
    z = a.T if a.shape[1] > a.shape[0] else a
    _, svals, _, _ = _jacobi_factor(z)
    return np.sort(svals)[::-1]


def truncate(f, k):
    """Best rank-k reconstruction ``sum_{i<=k} s_i u_i v_i^T`` of the SVD."""
    if not 1 <= k <= f.rank:
        raise ValueError(f"rank k={k} outside [1, {f.rank}]")
    return (f.u[:, :k] * f.s[:k]) @ f.v[:, :k].T


def qr_basis(m):
    """Orthonormal basis of the column span of a full-column-rank matrix.

    Raises RankDeficiencyError naming the first dependent column.
    """
    a = as_matrix(m)
    if a.shape[1] > a.shape[0]:
        raise RankDeficiencyError(
            a.shape[0],
            f"cannot orthonormalize {a.shape[1]} columns in "
            f"{a.shape[0]} dimensions",
        )
    q, r = np.linalg.qr(a)
    diag = np.abs(np.diag(r))
    scale = diag.max(initial=0.0)
    bad = np.flatnonzero(diag <= EPS_RANK_REL * scale)
    if scale == 0.0 or bad.size:
        raise RankDeficiencyError(int(bad[0]) if bad.size else 0)
    return OrthonormalBasis(q=q)


def orthonormal_range(m):
    """Orthonormal basis (d, rank) of the column span of any nonzero matrix.

    Unlike :func:`qr_basis` this tolerates redundant columns: the basis is
    cut to the numerical rank via the SVD.
    """
    f = svd(m)
    if f.rank == 0:
        raise ValueError("zero matrix has no column span")
    return f.u


def frobenius_norm(m):
    """Square root of the sum of squared entries."""
    return float(np.sqrt(np.sum(np.square(as_matrix(m)))))
