"""Least-squares projection of columns onto the cone span(U) ∩ R+^d.

Solves ``min ||b - U v||^2`` subject to ``U v >= 0`` for a matrix U with
orthonormal columns.  Because U^T U = I this is the Euclidean projection
of ``c = U^T b`` onto the polyhedral cone ``{v : U v >= 0}``, a strictly
convex QP with a unique solution.  A primal active-set method is used:
each iteration projects onto the nullspace of the working constraints via
QR, walks toward that point until a new constraint blocks, and checks the
Lagrange multipliers on stall.

The problem is solved on ``b / ||b||`` and rescaled afterwards, so the
iteration path (and hence the result) is scale equivariant.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import EPS_NONNEG, as_nonneg_matrix

#: KKT certificate tolerance for declaring a projection converged.
TOL_KKT = 1e-8

_ORTHO_TOL = 1e-8
_STEP_TOL = 1e-13
_MULT_TOL = 1e-12
_BLOCK_TOL = 1e-12


class ConeProjectionError(ValueError):
    """Invalid input to the cone projection."""


@dataclass
class ConeProjectionResult:
    """Solution of one column projection with its KKT certificate.

    ``fitted = u @ v`` is the projected point; ``active_set`` lists the
    coordinates pinned to zero; ``multipliers`` is the full-length dual
    vector (zero off the active set); ``iterations`` counts active-set
    changes.  ``status`` is "converged" or "iteration-capped".
    """

    v: np.ndarray
    fitted: np.ndarray
    active_set: np.ndarray
    multipliers: np.ndarray
    kkt_residual: float
    iterations: int
    status: str


@dataclass
class ProjectionDiagnostics:
    """Per-column projection records for a matrix projection."""

    columns: list
    capped_columns: tuple

    @property
    def total_iterations(self):
        return sum(r.iterations for r in self.columns)


def _check_orthonormal(u):
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 2 or u.shape[0] < u.shape[1] or u.shape[1] < 1:
        raise ConeProjectionError(
            f"basis must be d x k with 1 <= k <= d, got shape {u.shape}"
        )
    gram = u.T @ u
    err = np.sqrt(np.sum((gram - np.eye(u.shape[1])) ** 2))
    if err > _ORTHO_TOL:
        raise ConeProjectionError(
            f"basis columns are not orthonormal (||U^T U - I||_F = {err:.3e})"
        )
    return u


def _nullspace_step(c, u, work):
    """Project c onto the nullspace of the working constraints.

    Returns (candidate, q, r) where q, r factor U[work].T; dependent
    working constraints are pruned in place (lowest-index kept).
    """
    while True:
        if not work:
            return c.copy(), None, None
        gt = u[work, :].T
        q, r = np.linalg.qr(gt)
        diag = np.abs(np.diag(r))
        bad = np.flatnonzero(diag <= 1e-12 * diag.max(initial=0.0))
        if diag.max(initial=0.0) == 0.0:
            bad = np.arange(len(work))
        if bad.size == 0:
            return c - q @ (q.T @ c), q, r
        del work[int(bad[0])]


def _multipliers(c, q, r, work):
    if not work:
        return np.empty(0)
    return np.linalg.solve(r, -(q.T @ c))


def project_column(
    b,
    u,
    *,
    tol_kkt=TOL_KKT,
    tol_nonneg=EPS_NONNEG,
    initial_active_set=None,
    max_changes=None,
):
    """Project one column ``b`` onto span(u) ∩ R+^d.

    ``initial_active_set`` forces the active-set iteration to start from
    v = 0 with the given working set instead of the warm start at the
    unconstrained optimum (used to probe solution uniqueness).
    """
    u = _check_orthonormal(u)
    d, k = u.shape
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if b.shape[0] != d:
        raise ConeProjectionError(
            f"column has length {b.shape[0]}, basis has {d} rows"
        )
    if not np.all(np.isfinite(b)):
        raise ConeProjectionError("column contains non-finite entries")

    scale = float(np.linalg.norm(b))
    if scale == 0.0:
        return ConeProjectionResult(
            v=np.zeros(k),
            fitted=np.zeros(d),
            active_set=np.arange(d),
            multipliers=np.zeros(d),
            kkt_residual=0.0,
            iterations=0,
            status="converged",
        )
    bn = b / scale
    c = u.T @ bn
    cap = max_changes if max_changes is not None else 10 * d

    v = np.zeros(k)
    work = []
    changes = 0
    capped = False

    if initial_active_set is None:
        fitted_unc = u @ c
        if fitted_unc.min() >= -_BLOCK_TOL:
            v = c.copy()
        elif cap < 1:
            capped = True
        else:
            work = [int(np.argmin(fitted_unc))]
            changes = 1
    else:
        work = sorted(int(i) for i in set(initial_active_set))
        if any(i < 0 or i >= d for i in work):
            raise ConeProjectionError("initial active set index out of range")

    in_work = np.zeros(d, dtype=bool)

    while not capped:
        candidate, q, r = _nullspace_step(c, u, work)
        in_work[:] = False
        in_work[work] = True
        step = candidate - v
        if np.linalg.norm(step) <= _STEP_TOL:
            mu_work = _multipliers(c, q, r, work)
            if mu_work.size == 0 or mu_work.min() >= -_MULT_TOL:
                break
            if changes + 1 > cap:
                capped = True
                break
            worst = int(np.argmin(mu_work))
            del work[worst]
            changes += 1
            continue
        fitted_v = u @ v
        fitted_c = u @ candidate
        alpha = 1.0
        blocker = -1
        for i in range(d):
            if in_work[i] or fitted_c[i] >= -_BLOCK_TOL:
                continue
            held = max(fitted_v[i], 0.0)
            a_i = held / (held - fitted_c[i])
            if a_i < alpha:
                alpha = a_i
                blocker = i
        if blocker < 0:
            v = candidate
            continue
        if changes + 1 > cap:
            capped = True
            break
        v = v + alpha * step
        _insert_sorted(work, blocker)
        changes += 1

    fitted_n = u @ v
    mu = np.zeros(d)
    if work:
        # certificate multipliers for the final iterate, independent of
        # whatever loop state was current at exit
        mu_ls = np.linalg.lstsq(u[work, :].T, v - c, rcond=None)[0]
        mu[work] = np.maximum(mu_ls, 0.0)

    stationarity = float(np.linalg.norm(v - c - u.T @ mu))
    feas = float(max(0.0, -fitted_n.min()))
    comp = float(np.max(np.abs(mu * fitted_n), initial=0.0))
    kkt = max(stationarity, feas, comp) * scale

    active = np.flatnonzero(fitted_n <= tol_nonneg)
    status = "converged" if (not capped and kkt <= tol_kkt) else "iteration-capped"
    return ConeProjectionResult(
        v=v * scale,
        fitted=fitted_n * scale,
        active_set=active,
        multipliers=mu * scale,
        kkt_residual=kkt,
        iterations=changes,
        status=status,
    )


def _insert_sorted(work, idx):
    lo = 0
    while lo < len(work) and work[lo] < idx:
        lo += 1
    work.insert(lo, idx)


def project_matrix(b, u, *, tol_kkt=TOL_KKT, tol_nonneg=EPS_NONNEG):
    """Project every column of ``b`` onto span(u) ∩ R+^d.

    Returns ``(a, diagnostics)`` where column j of ``a`` is the fitted
    projection of column j of ``b``.  Per-column failures are re-raised
    with the column index attached.
    """
    b = as_nonneg_matrix(b, tol=tol_nonneg)
    u = _check_orthonormal(u)
    results = []
    for j in range(b.shape[1]):
        try:
            results.append(
                project_column(
                    b[:, j], u, tol_kkt=tol_kkt, tol_nonneg=tol_nonneg
                )
            )
        except ConeProjectionError as exc:
            raise ConeProjectionError(f"column {j}: {exc}") from exc
    a = np.column_stack([r.fitted for r in results])
    capped = tuple(
        j for j, r in enumerate(results) if r.status == "iteration-capped"
    )
    return a, ProjectionDiagnostics(columns=results, capped_columns=capped)
