import numpy as np
import pytest
from sympy import Matrix

from fixpoint_sets import gfp


@pytest.mark.parametrize("rows, p, expected", [
    ([[1, 1], [1, 1]], 2, 1),
    ([[1, 2], [2, 4]], 3, 1),
    ([[1, 2], [3, 4]], 5, 2),
    ([[2, 4], [1, 2]], 2, 1),
    ([[0, 0], [0, 0]], 7, 0),
])
def test_rank(rows, p, expected):
    assert gfp.rank(np.array(rows), p) == expected


def test_inverse_matches_sympy():
    A = [[1, 2, 0], [3, 4, 1], [0, 1, 1]]
    expected = np.array(Matrix(A).inv_mod(5)).astype(np.int64)
    assert np.array_equal(gfp.inverse(np.array(A), 5), expected)


def test_inverse_of_singular_matrix():
    with pytest.raises(ValueError):
        gfp.inverse(np.array([[1, 1], [1, 1]]), 2)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_nullspaces(p):
    rng = np.random.default_rng(7 + p)
    for _ in range(20):
        A = rng.integers(0, p, size=(4, 6))
        N = gfp.nullspace(A, p)
        assert gfp.is_zero(gfp.matmul(A, N, p))
        assert gfp.rank(A, p) + N.shape[1] == 6
        L = gfp.left_nullspace(A, p)
        assert gfp.is_zero(gfp.matmul(L, A, p))
        assert gfp.rank(A, p) + L.shape[0] == 4


def test_row_space_and_span():
    A = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]])
    basis = gfp.row_space(A, 2)
    assert basis.shape[0] == 2
    assert gfp.span_contains(basis, np.array([1, 1, 0]), 2)
    assert not gfp.span_contains(basis, np.array([1, 0, 0]), 2)


def test_matpow():
    J = np.array([[1, 1], [0, 1]])
    assert np.array_equal(gfp.matpow(J, 3, 3), np.eye(2, dtype=np.int64))
    assert np.array_equal(gfp.matpow(J, 0, 3), np.eye(2, dtype=np.int64))


def test_inv_mod_scalar():
    assert gfp.inv_mod_scalar(3, 7) == 5
    with pytest.raises(ZeroDivisionError):
        gfp.inv_mod_scalar(7, 7)
