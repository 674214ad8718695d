import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elmprune.linalg import (
    NumericalFailure,
    min_norm_lsq,
    pseudoinverse,
    smallest_nonzero_singular_value,
    svd,
)


def rel(a, b):
    nb = np.linalg.norm(b)
    return np.linalg.norm(a - b) / (nb if nb > 0 else 1.0)


def penrose_errors(A, P):
    AP, PA = A @ P, P @ A
    return (
        rel(A @ P @ A, A),
        rel(P @ A @ P, P),
        rel(AP.T, AP),
        rel(PA.T, PA),
    )


class TestSvd:
    def test_identity(self):
        _, s, _ = svd(np.eye(3))
        np.testing.assert_allclose(s, [1, 1, 1])

    def test_diagonal(self):
        U, s, V = svd(np.diag([3.0, 2.0]))
        np.testing.assert_allclose(s, [3, 2])
        np.testing.assert_allclose(np.abs(U), np.eye(2), atol=1e-15)
        np.testing.assert_allclose(np.abs(V), np.eye(2), atol=1e-15)

    def test_reconstruction(self, rng):
        A = rng.standard_normal((6, 4))
        U, s, V = svd(A)
        assert rel(U @ np.diag(s) @ V.T, A) < 1e-12
        np.testing.assert_allclose(U.T @ U, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(V.T @ V, np.eye(4), atol=1e-12)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            svd(np.array([[1.0, np.nan]]))

    def test_convergence_failure_is_explicit(self, monkeypatch):
        def boom(*a, **k):
            raise np.linalg.LinAlgError("SVD did not converge")

        monkeypatch.setattr(np.linalg, "svd", boom)
        with pytest.raises(NumericalFailure):
            svd(np.eye(2))
        with pytest.raises(NumericalFailure):
            pseudoinverse(np.eye(2))

    @given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_singular_values_sorted_non_negative(self, m, n, seed):
        A = np.random.default_rng(seed).standard_normal((m, n))
        _, s, _ = svd(A)
        assert np.all(s >= 0)
        assert np.all(np.diff(s) <= 0)


class TestPseudoinverse:
    def test_identity(self):
        np.testing.assert_array_equal(pseudoinverse(np.eye(4)), np.eye(4))

    def test_zero_singular_value_is_not_inverted(self):
        np.testing.assert_allclose(pseudoinverse(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))

    def test_penrose_full_column_rank(self, rng):
        A = rng.standard_normal((5, 3))
        assert max(penrose_errors(A, pseudoinverse(A))) < 1e-10

    def test_shape(self, rng):
        assert pseudoinverse(rng.standard_normal((7, 2))).shape == (2, 7)

    def test_negative_rcond(self):
        with pytest.raises(ValueError):
            pseudoinverse(np.eye(2), rcond=-1.0)

    @given(
        st.integers(1, 50),
        st.integers(1, 50),
        st.integers(1, 50),
        st.integers(0, 2**32 - 1),
    )
    @settings(max_examples=60, deadline=None)
    def test_penrose_property(self, m, n, r, seed):
        g = np.random.default_rng(seed)
        r = min(r, m, n)
        A = g.standard_normal((m, r)) @ g.standard_normal((r, n))
        assert max(penrose_errors(A, pseudoinverse(A))) < 1e-10


class TestMinNormLsq:
    def test_identity(self):
        np.testing.assert_allclose(min_norm_lsq(np.eye(2), [1.0, -1.0]), [1.0, -1.0])

    def test_underdetermined_equal_split(self):
        np.testing.assert_allclose(min_norm_lsq(np.array([[1.0, 1.0]]), [2.0]), [1.0, 1.0])

    def test_matches_normal_equations(self, rng):
        H = rng.standard_normal((8, 5))
        y = rng.standard_normal(8)
        ref = np.linalg.solve(H.T @ H, H.T @ y)
        beta = min_norm_lsq(H, y)
        assert np.linalg.norm(beta - ref) / np.linalg.norm(ref) < 1e-8

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            min_norm_lsq(np.eye(3), [1.0, 2.0])

    def test_residual_is_minimal(self, rng):
        H = rng.standard_normal((12, 6))
        y = rng.standard_normal(12)
        beta = min_norm_lsq(H, y)
        r0 = np.linalg.norm(H @ beta - y)
        for _ in range(100):
            d = rng.standard_normal(6) * rng.uniform(1e-3, 1.0)
            assert np.linalg.norm(H @ (beta + d) - y) >= r0 - 1e-9

    def test_norm_minimal_on_rank_deficient(self, rng):
        H = rng.standard_normal((10, 3)) @ rng.standard_normal((3, 7))
        y = rng.standard_normal(10)
        beta = min_norm_lsq(H, y)
        _, s, V = svd(H)
        null = V[:, s <= 1e-10 * s[0]]
        # the thin SVD of a 10x7 matrix holds the whole null space of rank-3 H
        assert null.shape[1] == 4
        for _ in range(20):
            z = null @ rng.standard_normal(null.shape[1])
            np.testing.assert_allclose(H @ (beta + z), H @ beta, atol=1e-9)
            assert np.linalg.norm(beta + z) > np.linalg.norm(beta)


class TestSmallestNonzeroSingularValue:
    def test_diag(self):
        assert smallest_nonzero_singular_value(np.diag([3.0, 1.0])) == pytest.approx(1.0)

    def test_zero_excluded(self):
        assert smallest_nonzero_singular_value(np.diag([1.0, 0.0]), rcond=1e-12) == pytest.approx(1.0)

    def test_all_zero(self):
        assert smallest_nonzero_singular_value(np.zeros((3, 2))) == 0.0

    def test_adding_random_columns_raises_it_on_average(self):
        # column-normalized Gaussian N x M matrices, M grown from N to 4N
        N = 20
        widths = [N, 30, 40, 60, 80]
        means = []
        for M in widths:
            vals = []
            for seed in range(20):
                A = np.random.default_rng(seed).standard_normal((N, M))
                A /= np.linalg.norm(A, axis=0)
                vals.append(smallest_nonzero_singular_value(A))
            means.append(np.mean(vals))
        assert np.all(np.diff(means) >= 0), means
