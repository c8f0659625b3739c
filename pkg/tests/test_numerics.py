import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from macdof.exceptions import ConfigurationError, ContractViolationError, FactorizationError
from macdof.numerics import (
    as_cmatrix,
    complex_gaussian,
    hermitian_eig,
    intersect_null_spaces,
    left_null_basis,
    null_basis,
    numerical_rank,
    subspace_distance,
    svd,
    trailing_null_basis,
)

EPS = np.finfo(np.float64).eps


def gaussian(seed, rows, cols):
    return complex_gaussian(np.random.default_rng(seed), rows, cols)


def assert_orthonormal(q, tol=1e-9):
    if q.shape[1] == 0:
        return
    gram = q.conj().T @ q
    assert np.linalg.norm(gram - np.eye(q.shape[1])) <= tol


class TestSvd:
    def test_identity(self):
        u, s, v = svd(np.eye(3))
        assert np.allclose(s, 1.0)

    def test_zero_matrix(self):
        _, s, _ = svd(np.zeros((2, 3)))
        assert s.shape == (2,)
        assert np.all(s == 0)

    def test_reconstruction(self):
        a = gaussian(0, 4, 2)
        u, s, v = svd(a)
        sigma = np.zeros((4, 2))
        sigma[:2, :2] = np.diag(s)
        residual = np.linalg.norm(u @ sigma @ v.conj().T - a)
        assert residual <= 1e-10 * max(1.0, np.linalg.norm(a))

    def test_factors_orthonormal(self):
        a = gaussian(1, 5, 3)
        u, s, v = svd(a)
        assert_orthonormal(u)
        assert_orthonormal(v)

    def test_nonincreasing(self):
        _, s, _ = svd(gaussian(2, 6, 6))
        assert np.all(np.diff(s) <= 0)

    def test_rejects_nan(self):
        bad = np.full((2, 2), np.nan)
        with pytest.raises(ContractViolationError):
            svd(bad)


class TestNumericalRank:
    def test_identity(self):
        assert numerical_rank(np.eye(4)).rank == 4

    def test_random_full(self):
        assert numerical_rank(gaussian(3, 5, 3)).rank == 3

    def test_duplicated_column(self):
        a = gaussian(4, 4, 3)
        a = np.hstack([a, a[:, :1]])
        assert numerical_rank(a).rank == 3

    def test_zero_matrix_tolerance(self):
        decision = numerical_rank(np.zeros((3, 3)))
        assert decision.rank == 0
        assert decision.tolerance == EPS

    def test_tolerance_rule(self):
        a = gaussian(5, 4, 6)
        decision = numerical_rank(a)
        assert decision.tolerance == pytest.approx(6 * EPS * decision.singular_values[0])


class TestNullBasis:
    def test_zero_matrix(self):
        basis = null_basis(np.zeros((2, 3)))
        assert basis.shape == (3, 3)
        assert_orthonormal(basis)

    def test_wide_gaussian(self):
        # two rows, three columns: one null direction survives
        a = gaussian(6, 2, 3)
        basis = null_basis(a)
        assert basis.shape == (3, 1)
        assert np.linalg.norm(a @ basis) <= 1e-9 * max(1.0, np.linalg.norm(a))

    def test_full_rank_square(self):
        assert null_basis(gaussian(7, 4, 4)).shape == (4, 0)


class TestLeftNullBasis:
    def test_tall_gaussian(self):
        a = gaussian(8, 3, 2)
        basis = left_null_basis(a)
        assert basis.shape == (3, 1)
        assert np.linalg.norm(basis.conj().T @ a) <= 1e-9 * max(1.0, np.linalg.norm(a))

    def test_square_invertible(self):
        assert left_null_basis(gaussian(9, 3, 3)).shape == (3, 0)

    def test_six_by_two(self):
        a = gaussian(10, 6, 2)
        basis = left_null_basis(a)
        assert basis.shape == (6, 4)
        assert np.linalg.norm(basis.conj().T @ a) <= 1e-9 * max(1.0, np.linalg.norm(a))

    def test_concatenation_full_rank(self):
        a = gaussian(11, 5, 2)
        basis = left_null_basis(a)
        assert numerical_rank(np.hstack([a, basis])).rank == 5


class TestIntersectNullSpaces:
    def oracle(self, mats):
        return left_null_basis(np.hstack(mats))

    def test_single_matrix(self):
        a = gaussian(12, 3, 1)
        basis = intersect_null_spaces([a])
        assert basis.shape == (3, 2)
        assert subspace_distance(basis, left_null_basis(a)) <= 1e-8

    def test_two_matrices(self):
        mats = [gaussian(13, 5, 2), gaussian(14, 5, 2)]
        basis = intersect_null_spaces(mats)
        assert basis.shape == (5, 1)
        for a in mats:
            assert np.linalg.norm(a.conj().T @ basis) <= 1e-9 * np.linalg.norm(a)
        assert subspace_distance(basis, self.oracle(mats)) <= 1e-8

    def test_three_matrices_empty(self):
        mats = [gaussian(s, 5, 2) for s in (15, 16, 17)]
        basis = intersect_null_spaces(mats)
        assert basis.shape == (5, 0)
        assert self.oracle(mats).shape == (5, 0)

    @pytest.mark.parametrize("count,cols", [(2, 1), (3, 2), (2, 3)])
    def test_matches_stacked_oracle(self, count, cols):
        rng = np.random.default_rng([18, count, cols])
        mats = [complex_gaussian(rng, 8, cols) for _ in range(count)]
        basis = intersect_null_spaces(mats)
        assert subspace_distance(basis, self.oracle(mats)) <= 1e-8
        assert_orthonormal(basis)

    def test_row_mismatch_rejected(self):
        with pytest.raises(ConfigurationError):
            intersect_null_spaces([gaussian(19, 5, 2), gaussian(20, 4, 2)])

    def test_empty_list_rejected(self):
        with pytest.raises(ConfigurationError):
            intersect_null_spaces([])


class TestTrailingNullBasis:
    def test_known_null_dimension(self):
        a = gaussian(21, 2, 3)
        basis = trailing_null_basis(a, 1, float(np.linalg.norm(a, 2)))
        assert basis.shape == (3, 1)
        assert np.linalg.norm(a @ basis) <= 1e-9 * np.linalg.norm(a)

    def test_refuses_fake_null(self):
        a = gaussian(22, 3, 3)
        with pytest.raises(FactorizationError):
            trailing_null_basis(a, 1, float(np.linalg.norm(a, 2)))


class TestHermitianEig:
    def test_diagonal(self):
        values, _ = hermitian_eig(np.diag([3.0, 1.0]))
        assert np.allclose(values, [1.0, 3.0])

    def test_psd_product(self):
        y = gaussian(23, 2, 2)
        values, vectors = hermitian_eig(y @ y.conj().T)
        assert np.all(values >= -1e-12)
        assert_orthonormal(vectors)

    def test_reconstruction(self):
        a = gaussian(24, 4, 4)
        a = a + a.conj().T
        values, vectors = hermitian_eig(a)
        assert np.allclose(a @ vectors, vectors @ np.diag(values))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ContractViolationError):
            hermitian_eig(gaussian(25, 3, 3))

    def test_wishart_min_eigenvalue_mean(self):
        # 2x2 complex Wishart: smallest eigenvalue is exponential with rate 2,
        # so the sample mean over 1e5 draws sits at 1/2 within 1 percent.
        rng = np.random.default_rng(26)
        y = (rng.standard_normal((100_000, 2, 2)) + 1j * rng.standard_normal((100_000, 2, 2))) * np.sqrt(0.5)
        w = y @ y.conj().swapaxes(-1, -2)
        smallest = np.linalg.eigvalsh(w)[:, 0]
        assert smallest.mean() == pytest.approx(0.5, rel=0.01)


class TestRankOfProducts:
    @pytest.mark.parametrize("m,n,l", [(2, 4, 3), (3, 5, 5), (1, 6, 4)])
    def test_product_rank(self, m, n, l):
        # product of independent full-rank factors keeps rank min(m, l)
        rng = np.random.default_rng([27, m, n, l])
        for _ in range(200):
            a = complex_gaussian(rng, m, n)
            b = complex_gaussian(rng, n, l)
            assert numerical_rank(a @ b).rank == min(m, l)


@st.composite
def random_matrix(draw):
    rows = draw(st.integers(min_value=1, max_value=8))
    cols = draw(st.integers(min_value=1, max_value=8))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    kind = draw(st.sampled_from(["gaussian", "zero", "duplicated"]))
    rng = np.random.default_rng(seed)
    if kind == "zero":
        return np.zeros((rows, cols), dtype=np.complex128)
    a = complex_gaussian(rng, rows, cols)
    if kind == "duplicated" and cols >= 2:
        a[:, -1] = a[:, 0]
    return a


@given(random_matrix())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(a):
    assert numerical_rank(a).rank + null_basis(a).shape[1] == a.shape[1]


@given(random_matrix())
@settings(max_examples=60, deadline=None)
def test_null_bases_orthonormal(a):
    assert_orthonormal(null_basis(a))
    assert_orthonormal(left_null_basis(a))


@given(random_matrix())
@settings(max_examples=60, deadline=None)
def test_left_null_complements_range(a):
    basis = left_null_basis(a)
    assert numerical_rank(a).rank + basis.shape[1] == a.shape[0]


def test_complex_gaussian_unit_variance():
    rng = np.random.default_rng(28)
    sample = complex_gaussian(rng, 400, 400)
    assert np.mean(np.abs(sample) ** 2) == pytest.approx(1.0, abs=0.02)


def test_as_cmatrix_rejects_vectors():
    with pytest.raises(ContractViolationError):
        as_cmatrix(np.ones(3))
