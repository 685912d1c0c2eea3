"""
Dense linear algebra over GF(p)

Matrices are numpy int64 arrays holding residues in [0, p); p < 2^16 keeps
every product and every row of a matrix product inside int64.
"""

from typing import List, Tuple

import numpy as np

# Dense matrix over GF(p); rows act on the right (v -> v @ A)
MatGFp = np.ndarray


def mod_p(A, p: int) -> MatGFp:
    return np.asarray(A, dtype=np.int64) % p


def identity(n: int) -> MatGFp:
    return np.eye(n, dtype=np.int64)


def zeros(rows: int, cols: int) -> MatGFp:
    return np.zeros((rows, cols), dtype=np.int64)


def inv_mod_scalar(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


def matmul(A: MatGFp, B: MatGFp, p: int) -> MatGFp:
    return (A @ B) % p


def matpow(A: MatGFp, k: int, p: int) -> MatGFp:
    result = identity(A.shape[0])
    base = A % p
    while k:
        if k & 1:
            result = matmul(result, base, p)
        base = matmul(base, base, p)
        k >>= 1
    return result


def rref(A: MatGFp, p: int) -> Tuple[MatGFp, List[int]]:
    """Reduced row echelon form over GF(p). Returns (R, pivot_cols)."""
    R = mod_p(A, p).copy()
    m, n = R.shape
    r = 0
    pivots: List[int] = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = (R[r] * inv_mod_scalar(R[r, c], p)) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            R[rows] = (R[rows] - np.outer(col[rows], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A: MatGFp, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def row_space(A: MatGFp, p: int) -> MatGFp:
    """Basis of the row space, as rows."""
    if A.size == 0:
        return zeros(0, A.shape[1])
    R, pivots = rref(A, p)
    return R[:len(pivots)]


def nullspace(A: MatGFp, p: int) -> MatGFp:
    """Right nullspace basis of A over GF(p); columns form a basis."""
    m, n = A.shape
    if m == 0:
        return identity(n)
    R, pivots = rref(A, p)
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    basis = zeros(n, len(free))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-R[i, f]) % p
    return basis


def left_nullspace(A: MatGFp, p: int) -> MatGFp:
    """Basis of {v : v @ A = 0}, as rows."""
    return nullspace(A.T, p).T


def inverse(A: MatGFp, p: int) -> MatGFp:
    """Gauss-Jordan inverse over GF(p). Raises if singular."""
    n = A.shape[0]
    aug = np.concatenate([mod_p(A, p), identity(n)], axis=1)
    R, _ = rref(aug, p)
    if not np.array_equal(R[:, :n], identity(n)):
        raise ValueError("Matrix not invertible mod p")
    return R[:, n:]


def is_zero(A: MatGFp) -> bool:
    return not np.any(A)


def span_contains(basis_rows: MatGFp, v: MatGFp, p: int) -> bool:
    if basis_rows.shape[0] == 0:
        return is_zero(v % p)
    return rank(np.vstack([basis_rows, v.reshape(1, -1)]), p) == rank(basis_rows, p)
