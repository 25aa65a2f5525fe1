import numpy as np
import pytest

from nnca.coneqp import (
    ConeProjectionError,
    project_column,
    project_matrix,
)
from nnca.linalg import frobenius_norm, svd

from oracles import cone_projection_grid


def random_basis(seed, d, k):
    gen = np.random.default_rng(seed)
    return np.linalg.qr(gen.standard_normal((d, k)))[0]


def random_instance(seed, d=3):
    gen = np.random.default_rng(seed)
    k = 1 + seed % 2
    u = np.linalg.qr(gen.standard_normal((d, k)))[0]
    b = gen.random(d)
    return b, u


class TestProjectColumn:
    def test_feasible_unconstrained_optimum(self):
        u = random_basis(0, 4, 2)
        # fitted target inside the cone: build b so u (u^T b) is nonnegative
        gen = np.random.default_rng(1)
        for _ in range(50):
            b = gen.random(4)
            if (u @ (u.T @ b)).min() >= 0:
                break
        else:
            pytest.skip("no interior instance found")
        res = project_column(b, u)
        np.testing.assert_allclose(res.v, u.T @ b, atol=1e-12)
        assert res.active_set.size == 0
        assert res.status == "converged"

    def test_zero_column(self):
        u = random_basis(2, 3, 2)
        res = project_column(np.zeros(3), u)
        np.testing.assert_allclose(res.v, 0.0)
        assert res.status == "converged"

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_grid_oracle(self, seed):
        b, u = random_instance(seed)
        res = project_column(b, u)
        fitted_oracle, _ = cone_projection_grid(b, u)
        assert np.linalg.norm(res.fitted - fitted_oracle) <= 1e-4
        assert res.kkt_residual <= 1e-8
        assert res.status == "converged"

    @pytest.mark.parametrize("seed", range(10))
    def test_kkt_certificate(self, seed):
        b, u = random_instance(seed + 100)
        res = project_column(b, u)
        mu = res.multipliers
        assert np.all(mu >= 0)
        stationarity = np.linalg.norm(u.T @ (res.fitted - b) - u.T @ mu)
        assert stationarity <= 1e-8
        assert np.max(np.abs(mu * res.fitted)) <= 1e-8
        assert res.fitted.min() >= -1e-10

    @pytest.mark.parametrize("seed", range(10))
    def test_unique_from_random_starts(self, seed):
        b, u = random_instance(seed + 200)
        d, k = u.shape
        baseline = project_column(b, u)
        gen = np.random.default_rng(seed)
        for _ in range(20):
            size = int(gen.integers(0, k + 1))
            start = gen.choice(d, size=size, replace=False)
            res = project_column(b, u, initial_active_set=start)
            assert np.linalg.norm(res.v - baseline.v) <= 1e-8

    def test_objective_no_worse_than_zero(self):
        for seed in range(20):
            b, u = random_instance(seed + 300)
            res = project_column(b, u)
            assert np.linalg.norm(b - res.fitted) <= np.linalg.norm(b) + 1e-12

    def test_idempotent(self):
        for seed in range(10):
            b, u = random_instance(seed + 400)
            first = project_column(b, u)
            again = project_column(first.fitted, u)
            assert np.linalg.norm(again.fitted - first.fitted) <= 1e-9

    def test_scaling_equivariance(self):
        for seed in range(10):
            b, u = random_instance(seed + 500)
            base = project_column(b, u)
            for alpha in (0.5, 3.0, 1e4):
                scaled = project_column(alpha * b, u)
                assert np.linalg.norm(
                    scaled.fitted - alpha * base.fitted
                ) <= 1e-9 * max(1.0, alpha)

    def test_non_orthonormal_rejected(self):
        with pytest.raises(ConeProjectionError, match="orthonormal"):
            project_column(np.ones(3), np.ones((3, 2)))

    def test_length_mismatch_rejected(self):
        u = random_basis(3, 4, 2)
        with pytest.raises(ConeProjectionError, match="length"):
            project_column(np.ones(3), u)

    def test_bad_initial_active_set(self):
        u = random_basis(4, 3, 2)
        with pytest.raises(ConeProjectionError, match="out of range"):
            project_column(np.ones(3), u, initial_active_set=[7])

    def test_iteration_cap_flagged(self):
        # force an infeasible warm start, then forbid any active-set change
        for seed in range(50):
            b, u = random_instance(seed + 600)
            if (u @ (u.T @ b)).min() < -1e-6:
                res = project_column(b, u, max_changes=0)
                assert res.status == "iteration-capped"
                assert res.fitted.shape == b.shape
                return
        pytest.fail("no infeasible instance found")


class TestProjectMatrix:
    def test_full_space_returns_input(self):
        gen = np.random.default_rng(7)
        b = gen.random((3, 5))
        u = np.linalg.qr(gen.standard_normal((3, 3)))[0]
        a, diag = project_matrix(b, u)
        np.testing.assert_allclose(a, b, atol=1e-10)
        assert diag.capped_columns == ()

    def test_monte_carlo_optimality(self):
        gen = np.random.default_rng(8)
        b = gen.random((3, 6))
        u = svd(b).u[:, :2]
        a, _ = project_matrix(b, u)
        best = frobenius_norm(b - a)
        found = 0
        while found < 1000:
            v = gen.uniform(-2, 2, size=(2, 6))
            p = u @ v
            if p.min() >= 0:
                found += 1
                assert best <= frobenius_norm(b - p) + 1e-9

    def test_output_rank_and_nonnegativity(self):
        for seed in range(20):
            gen = np.random.default_rng(seed + 700)
            b = gen.random((3, 6))
            u = svd(b).u[:, :2]
            a, diag = project_matrix(b, u)
            assert a.min() >= -1e-10
            assert svd(a).rank <= 2
            assert len(diag.columns) == 6

    def test_column_error_carries_index(self):
        b = np.random.default_rng(9).random((3, 4))
        b[1, 2] = np.nan
        u = random_basis(10, 3, 2)
        with pytest.raises(ValueError, match="finite"):
            project_matrix(b, u)
