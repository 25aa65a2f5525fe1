"""Independent brute-force oracles the implementation is checked against.

These deliberately avoid the library's own code paths: grid search for
the cone projection, two-sided Jacobi eigenvalue iteration for singular
values, and random-subspace sampling for subspace optimality.
"""

import math

import numpy as np


def _best_on_grid(u, c, axes, feas_tol, chunk=400):
    """Feasible grid point minimizing ||v||^2 - 2 c.v (objective up to a
    constant) over the cartesian product of ``axes``."""
    k = u.shape[1]
    if k == 1:
        grid = axes[0][None, :]
        return _scan(u, c, grid, feas_tol)
    best_obj = math.inf
    best_v = None
    for start in range(0, axes[0].size, chunk):
        t1 = axes[0][start : start + chunk]
        g1, g2 = np.meshgrid(t1, axes[1], indexing="ij")
        grid = np.stack([g1.ravel(), g2.ravel()])
        obj, v = _scan(u, c, grid, feas_tol)
        if v is not None and obj < best_obj:
            best_obj = obj
            best_v = v
    return best_obj, best_v


def _scan(u, c, grid, feas_tol):
    fitted = u @ grid
    feasible = (fitted >= -feas_tol).all(axis=0)
    if not feasible.any():
        return math.inf, None
    obj = np.sum(grid * grid, axis=0) - 2.0 * (c @ grid)
    obj[~feasible] = np.inf
    i = int(np.argmin(obj))
    return float(obj[i]), grid[:, i].copy()


def _symmetric_axis(center, half_width, step):
    m = int(math.ceil(half_width / step))
    return center + np.arange(-m, m + 1) * step


def cone_projection_grid(b, u, feas_tol=1e-9):
    """Grid-search solution of min ||b - u v||^2 s.t. u v >= 0.

    The feasible set is a 2-D (or 1-D) cone whose boundary consists of
    rays through the origin, so the dense grid covers both the interior
    box (axis-aligned, step 1e-3) and a 1-D grid along each boundary ray;
    every candidate is refined locally down to step 1e-6.  Axis-aligned
    grids alone cannot approach an optimum on an oblique face closer than
    about one step, which is why the rays are gridded explicitly.
    Supports k in {1, 2}.
    """
    b = np.asarray(b, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    k = u.shape[1]
    assert k in (1, 2), "oracle is built for k in {1, 2}"
    c = u.T @ b
    radius = float(np.linalg.norm(c)) + 5e-3
    stages = ((1e-4, 1.5e-3), (1e-6, 1.5e-4))

    candidates = []

    # interior / axis-aligned scan with local refinement
    axes = [_symmetric_axis(0.0, radius, 1e-3) for _ in range(k)]
    obj, v = _best_on_grid(u, c, axes, feas_tol)
    if v is not None:
        for step, width in stages:
            axes = [_symmetric_axis(v[i], width, step) for i in range(k)]
            obj, v = _best_on_grid(u, c, axes, feas_tol)
        candidates.append((obj, v))

    # boundary rays {v : u[i] . v = 0} (2-D cone boundaries are 1-D rays)
    if k == 2:
        for i in range(u.shape[0]):
            row = u[i]
            norm = np.linalg.norm(row)
            if norm <= 1e-12:
                continue
            direction = np.array([-row[1], row[0]]) / norm
            ts = _symmetric_axis(0.0, radius, 1e-3)
            obj, t = _scan(u, c, direction[:, None] * ts[None, :], feas_tol)
            if t is None:
                continue
            t0 = float(direction @ t)
            for step, width in stages:
                ts = _symmetric_axis(t0, width, step)
                obj, t = _scan(u, c, direction[:, None] * ts[None, :], feas_tol)
                t0 = float(direction @ t)
            candidates.append((obj, t))

    best_obj, best_v = min(candidates, key=lambda it: it[0])
    return u @ best_v, best_v


def symmetric_eigenvalues_jacobi(a, max_sweeps=100, tol=1e-14):
    """Eigenvalues of a small symmetric matrix by two-sided Jacobi
    rotations, sorted descending."""
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    scale = np.linalg.norm(a)
    for _ in range(max_sweeps):
        off = math.sqrt(np.sum(a**2) - np.sum(np.diag(a) ** 2))
        if off <= tol * max(scale, 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-300:
                    continue
                theta = 0.5 * math.atan2(2.0 * a[p, q], a[q, q] - a[p, p])
                cs, sn = math.cos(theta), math.sin(theta)
                j = np.eye(n)
                j[p, p] = cs
                j[q, q] = cs
                j[p, q] = sn
                j[q, p] = -sn
                a = j.T @ a @ j
    return np.sort(np.diag(a))[::-1]


def subspace_squared_distance(b, q):
    """Sum of squared column distances of ``b`` to span(q), q orthonormal."""
    resid = b - q @ (q.T @ b)
    return float(np.sum(resid * resid))


def sampled_best_subspace_distance(b, k, samples, seed):
    """Smallest squared distance of ``b`` to ``samples`` random k-dim
    subspaces (Gaussian bases orthonormalized batch-wise)."""
    d = b.shape[0]
    gen = np.random.Generator(np.random.Philox(seed))
    best = math.inf
    batch = 20000
    bsq = float(np.sum(b * b))
    remaining = samples
    while remaining > 0:
        m = min(batch, remaining)
        remaining -= m
        g = gen.standard_normal((m, d, k))
        q = np.linalg.qr(g)[0]
        proj = np.einsum("mdk,dn->mkn", q, b)
        dist = bsq - np.sum(proj * proj, axis=(1, 2))
        best = min(best, float(dist.min()))
    return best
