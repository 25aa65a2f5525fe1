"""Reference decompositions: SVD truncation, mean-centered PCA, and
restart-based NMF with Lee-Seung multiplicative updates.
"""

from dataclasses import dataclass, field

import numpy as np

from ._kernels import nmf_multiplicative
from .linalg import as_matrix, as_nonneg_matrix, svd, truncate
from .rng import stream

NMF_MAX_ITER = 5000
NMF_REL_TOL = 1e-9
_NMF_GUARD = 1e-12


@dataclass
class PcaApproximation:
    """Column mean plus rank-k truncation of the centered matrix."""

    mean: np.ndarray
    column_mean_matrix: np.ndarray
    approx: np.ndarray
    rank_target: int


@dataclass
class NmfFactorization:
    """Factors of ``x ~ w @ h.T`` with w (d, k) unit-L2 columns, h (n, k).

    ``objective`` is the squared Frobenius residual at the returned
    factors; ``trace`` logs the objective after every update iteration
    (trace[0] is the initial objective).
    """

    w: np.ndarray
    h: np.ndarray
    objective: float
    restarts_used: int
    iterations: int
    converged: bool
    restart_index: int = 0
    trace: np.ndarray = field(default=None, repr=False)

    def reconstruct(self):
        return self.w @ self.h.T


def svd_approx(x, k):
    """Best rank-k approximation of ``x`` (Eckart-Young truncation)."""
    return truncate(svd(as_matrix(x)), k)


def pca_approx(x, k):
    """Mean matrix plus rank-k truncation of the column-centered matrix."""
    x = as_matrix(x)
    d, n = x.shape
    if n < 2:
        raise ValueError("PCA needs at least 2 columns")
    mean = x.mean(axis=1)
    centered = x - mean[:, None]
    f = svd(centered)
    mc = np.tile(mean[:, None], (1, n))
    if k < 1 or (f.rank > 0 and k > f.rank):
        raise ValueError(f"rank {k} outside [1, rank(x - mean) = {f.rank}]")
    # identical columns: the centered matrix is zero and the mean matrix
    # already reproduces x at any rank
    correction = truncate(f, k) if f.rank > 0 else 0.0
    return PcaApproximation(
        mean=mean,
        column_mean_matrix=mc,
        approx=mc + correction,
        rank_target=k,
    )


def _check_nmf_args(x, k):
    x = as_nonneg_matrix(x)
    d, n = x.shape
    if not 1 <= k <= min(d, n):
        raise ValueError(f"rank {k} outside [1, min(d, n) = {min(d, n)}]")
    return x


def _finish_factorization(x, w, h, iterations, converged, restart_index,
                          trace):
    scales = np.linalg.norm(w, axis=0)
    scales[scales == 0.0] = 1.0
    w = w / scales
    h = h * scales[:, None]
    residual = x - w @ h
    return NmfFactorization(
        w=w,
        h=h.T.copy(),
        objective=float(np.sum(residual * residual)),
        restarts_used=1,
        iterations=iterations,
        converged=converged,
        restart_index=restart_index,
        trace=trace,
    )


def nmf(x, k, seed=0, max_iter=NMF_MAX_ITER, *, rel_tol=NMF_REL_TOL,
        restart_index=0):
    """One multiplicative-update NMF run from a seeded random start.

    Factors are initialized i.i.d. uniform(0, 1) from the (seed,
    restart_index) stream with the columns of w normalized; on exit the
    unit-norm convention on w is restored by absorbing scales into h.
    """
    x = _check_nmf_args(x, k)
    d, n = x.shape
    gen = stream(seed, "nmf-init", restart_index)
    w = gen.random((d, k))
    w /= np.linalg.norm(w, axis=0)
    h = gen.random((k, n))
    trace, iterations, converged = nmf_multiplicative(
        x, w, h, max_iter, rel_tol, _NMF_GUARD
    )
    return _finish_factorization(x, w, h, iterations, converged,
                                 restart_index, trace)


def nmf_als(x, k, seed=0, max_iter=100, *, tol_fun=1e-4, tol_x=1e-4,
            restart_index=0):
    """Alternating-least-squares NMF with legacy default stopping rules.

    Each half step solves the unconstrained least-squares block and clips
    negatives.  Iteration stops when the RMS residual decrease per
    iteration falls below ``tol_fun * max(1, initial RMS)`` or the
    relative movement of w falls below ``tol_x`` -- the loose defaults of
    the classic implementations.  Unlike the multiplicative variant this
    is not monotone in the objective, and at larger problem sizes the
    rules stop well short of a stationary point; the angle study relies
    on exactly that behavior.
    """
    x = _check_nmf_args(x, k)
    d, n = x.shape
    gen = stream(seed, "nmf-init", restart_index)
    w = gen.random((d, k))
    h = gen.random((k, n))
    nm = d * n
    sqrteps = np.sqrt(np.finfo(float).eps)
    trace = []
    dnorm0 = prev = None
    converged = False
    iterations = 0
    for it in range(1, max_iter + 1):
        h = np.maximum(np.linalg.lstsq(w, x, rcond=None)[0], 0.0)
        w_new = np.maximum(np.linalg.lstsq(h.T, x.T, rcond=None)[0].T, 0.0)
        obj = float(np.sum((x - w_new @ h) ** 2))
        rms = np.sqrt(obj / nm)
        movement = float(
            np.max(np.abs(w_new - w)) / (sqrteps + np.max(np.abs(w)))
        )
        w = w_new
        trace.append(obj)
        iterations = it
        if dnorm0 is None:
            dnorm0 = rms
        else:
            if prev - rms <= tol_fun * max(1.0, dnorm0) or movement <= tol_x:
                converged = True
                break
        prev = rms
    return _finish_factorization(x, w, h, iterations, converged,
                                 restart_index, np.asarray(trace))


def nmf_best_of(x, k, restarts, seed=0, max_iter=None,
                *, variant="multiplicative"):
    """Best of ``restarts`` independent NMF runs by smallest objective.

    Deterministic given the seed; objective ties resolve to the lowest
    restart index.  ``variant`` selects multiplicative updates (default)
    or the legacy alternating-least-squares rule of :func:`nmf_als`.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if variant == "multiplicative":
        runner = lambda r: nmf(
            x, k, seed=seed, max_iter=max_iter or NMF_MAX_ITER,
            restart_index=r,
        )
    elif variant == "als":
        runner = lambda r: nmf_als(
            x, k, seed=seed, max_iter=max_iter or 100, restart_index=r
        )
    else:
        raise ValueError(f"unknown NMF variant {variant!r}")
    best = None
    for r in range(restarts):
        cand = runner(r)
        if best is None or cand.objective < best.objective:
            best = cand
    best.restarts_used = restarts
    return best
