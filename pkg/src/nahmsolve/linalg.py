"""Small dense complex factorizations.

The matrices handled here are at most n^2 x n^2 for n of a handful of
monopoles, so plain row operations on numpy arrays are fast enough and keep
the structure of each elimination step visible.
"""

import numpy as np

from .errors import SingularBlock


def lu_factor(A):
    """LU factorization with partial pivoting, packed LAPACK style.

    Returns ``(lu, piv)`` where the strict lower triangle of ``lu`` holds the
    unit lower factor and ``piv[k]`` is the row swapped with row ``k``.
    """
    lu = np.array(A, dtype=complex, copy=True)
    n = lu.shape[0]
    if lu.shape != (n, n):
        raise ValueError("lu_factor needs a square matrix")
    piv = np.arange(n)
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        piv[k] = p
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
        pivot = lu[k, k]
        if pivot == 0:
            continue
        lu[k + 1:, k] /= pivot
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def lu_solve(factors, b):
    lu, piv = factors
    x = np.array(b, dtype=complex, copy=True)
    n = lu.shape[0]
    for k in range(n - 1):
        p = piv[k]
        if p != k:
            x[[k, p]] = x[[p, k]]
    for k in range(n):
        x[k + 1:] -= np.multiply.outer(lu[k + 1:, k], x[k])
    for k in range(n - 1, -1, -1):
        x[k] /= lu[k, k]
        x[:k] -= np.multiply.outer(lu[:k, k], x[k])
    return x


def solve(A, b):
    return lu_solve(lu_factor(A), b)


def lu_nopivot(A):
    """Doolittle factorization A = L U with unit lower L and no pivoting."""
    U = np.array(A, dtype=complex, copy=True)
    n = U.shape[0]
    L = np.eye(n, dtype=complex)
    for k in range(n - 1):
        pivot = U[k, k]
        if abs(pivot) == 0:
            raise SingularBlock("zero pivot in unpivoted LU at step %d" % k)
        L[k + 1:, k] = U[k + 1:, k] / pivot
        U[k + 1:, k:] -= np.outer(L[k + 1:, k], U[k, k:])
        U[k + 1:, k] = 0
    return L, U


def ul_decompose(M):
    """Factor M = U L with U upper triangular and L unit lower triangular.

    Reversing rows and columns turns the problem into an LU factorization of
    the transpose: J M J = (J U J)(J L J) is lower times unit upper, so its
    transpose is unit lower times upper.
    """
    J = np.asarray(M)[::-1, ::-1]
    Lt, Ut = lu_nopivot(J.T)
    # J M J = Ut^T Lt^T, Ut^T lower, Lt^T unit upper
    U = Ut.T[::-1, ::-1]
    L = Lt.T[::-1, ::-1]
    return np.ascontiguousarray(U), np.ascontiguousarray(L)


def scale_rows(A):
    """Divide each row by its sup norm; zero rows are left alone."""
    A = np.asarray(A, dtype=complex)
    w = np.max(np.abs(A), axis=1)
    w[w == 0] = 1.0
    return A / w[:, None], w


def smallest_singular_ratio(A):
    if A.size == 0:
        return np.inf
    sv = np.linalg.svd(A, compute_uv=False)
    return sv[-1] / sv[0]


def numerical_nullspace(A, rtol=1e-8):
    """Orthonormal basis (as columns) of the numerical null space of A."""
    A = np.asarray(A, dtype=complex)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if m == 0:
        return np.eye(n, dtype=complex)
    _, sv, vh = np.linalg.svd(A)
    full = np.zeros(n)
    full[:len(sv)] = sv
    rank = int(np.sum(full > rtol * sv[0])) if sv[0] > 0 else 0
    return vh[rank:].conj().T


def subspace_angle(A, B):
    """Largest principal angle between the column spans of A and B."""
    qa, _ = np.linalg.qr(A)
    qb, _ = np.linalg.qr(B)
    if qa.shape[1] != qb.shape[1]:
        return np.pi / 2
    # sine form; arccos of a cosine near 1 loses half the digits
    resid = qb - qa @ (qa.conj().T @ qb)
    sine = np.linalg.norm(resid, 2) if resid.size else 0.0
    return float(np.arcsin(min(sine, 1.0)))
