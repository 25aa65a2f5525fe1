"""Hot numeric kernels: one-sided Jacobi orthogonalization and the NMF
multiplicative-update loop.

Both functions are written in njit-compatible numpy, so the same source
compiles under numba and also runs unchanged as plain Python.  The numba
path is selected by default; set ``NNCA_DISABLE_NUMBA=1`` in the
environment to force the pure-numpy fallback (useful for debugging, or
for ``benchmarks/bench_kernels.py`` which times both).
"""

import math
import os

import numpy as np

__all__ = [
    "NUMBA_ENABLED",
    "jacobi_orthogonalize",
    "jacobi_orthogonalize_numpy",
    "nmf_multiplicative",
    "nmf_multiplicative_numpy",
]


def _jacobi_orthogonalize(wt, vt, max_sweeps, rel_tol):
    """Orthogonalize the rows of ``wt`` in place by pairwise rotations.

    ``wt`` holds the matrix being factored transposed (row i of ``wt`` is
    column i of the working matrix), so each rotation touches two
    contiguous rows.  ``vt`` accumulates the rotations and must start as
    the identity.  A row pair counts as converged when
    ``|<wi, wj>| <= rel_tol * ||wi|| * ||wj||``.

    Returns ``(sweeps_used, converged)``.
    """
    m = wt.shape[0]
    for sweep in range(max_sweeps):
        rotated = False
        for i in range(m - 1):
            for j in range(i + 1, m):
                a = np.dot(wt[i], wt[i])
                b = np.dot(wt[j], wt[j])
                if a == 0.0 or b == 0.0:
                    continue
                c = np.dot(wt[i], wt[j])
                if abs(c) <= rel_tol * math.sqrt(a * b):
                    continue
                zeta = (b - a) / (2.0 * c)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + math.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + math.sqrt(1.0 + zeta * zeta))
                cs = 1.0 / math.sqrt(1.0 + t * t)
                sn = cs * t
                wi = cs * wt[i] - sn * wt[j]
                wt[j] = sn * wt[i] + cs * wt[j]
                wt[i] = wi
                vi = cs * vt[i] - sn * vt[j]
                vt[j] = sn * vt[i] + cs * vt[j]
                vt[i] = vi
                rotated = True
        if not rotated:
            return sweep + 1, True
    return max_sweeps, False


def _nmf_multiplicative(x, w, h, max_iter, rel_tol, guard):
    """Lee-Seung multiplicative updates for ``min ||x - w @ h||_F^2``.

    ``w`` (d, k) and ``h`` (k, n) are updated in place.  ``guard`` is
    added to update denominators to avoid division by zero.  Stops when
    the squared-Frobenius objective changes by less than ``rel_tol``
    relative per iteration.

    Returns ``(trace, iterations, converged)`` where ``trace[t]`` is the
    objective after ``t`` full update iterations (``trace[0]`` is the
    objective of the initial factors).
    """
    xsq = np.sum(x * x)
    trace = np.empty(max_iter + 1)
    wt = np.ascontiguousarray(w.T)
    g = np.dot(wt, x)
    wtw = np.dot(wt, w)
    trace[0] = xsq - 2.0 * np.sum(g * h) + np.sum(np.dot(wtw, h) * h)
    iterations = 0
    converged = False
    for it in range(1, max_iter + 1):
        h *= g / (np.dot(wtw, h) + guard)
        ht = np.ascontiguousarray(h.T)
        xh = np.dot(x, ht)
        hht = np.dot(h, ht)
        w *= xh / (np.dot(w, hht) + guard)
        wt = np.ascontiguousarray(w.T)
        g = np.dot(wt, x)
        wtw = np.dot(wt, w)
        obj = xsq - 2.0 * np.sum(g * h) + np.sum(np.dot(wtw, h) * h)
        if obj < 0.0:
            obj = 0.0
        trace[it] = obj
        iterations = it
        if abs(trace[it - 1] - obj) <= rel_tol * max(trace[it - 1], 1e-300):
            converged = True
            break
    return trace[: iterations + 1], iterations, converged


NUMBA_ENABLED = os.environ.get("NNCA_DISABLE_NUMBA", "").lower() not in (
    "1",
    "true",
    "yes",
)
if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

jacobi_orthogonalize_numpy = _jacobi_orthogonalize
nmf_multiplicative_numpy = _nmf_multiplicative

if NUMBA_ENABLED:
    jacobi_orthogonalize = njit(cache=True)(_jacobi_orthogonalize)
    nmf_multiplicative = njit(cache=True)(_nmf_multiplicative)
else:
    jacobi_orthogonalize = _jacobi_orthogonalize
    nmf_multiplicative = _nmf_multiplicative
