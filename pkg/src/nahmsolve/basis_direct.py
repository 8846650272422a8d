"""Basis of matching-condition polynomial tuples from the full coefficient system.

Row l of the basis is an n-tuple (Q_0, ..., Q_{n-1}) of polynomials of degree
at most n - 1 with

* Q_i(a_ij) = exp(-s r_ij) Q_j(a_ij) at every double point,
* Q_l monic of degree n - 1,
* deg Q_i <= n - 2 for i < l and Q_i(0) = 0 for i > l.

Stacking the coefficients of every row as columns of an n^2 x n matrix, the
matching conditions read Xi P = 0. The constant and leading coefficient
blocks of P are upper and unit lower triangular, which is what the UL
factorization below recovers.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg, poly
from .errors import ScaleOverflow, SingularBlock

MAX_HALF_EXPONENT = 350.0
SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class BasisMatrix:
    """coeffs[l, i, k] is the zeta**k coefficient of sheet i in row l."""
    coeffs: np.ndarray
    s: float
    normalized: bool = False

    @property
    def n(self):
        return self.coeffs.shape[0]

    def row(self, l):
        return poly.PolyTuple(self.coeffs[l], self.s)

    def evaluate(self, zeta):
        """n x n matrix Q(zeta) with rows indexed by basis element, columns by sheet."""
        return poly.eval_poly(self.coeffs, zeta)


def _check_scale(spectral, s):
    if spectral.n > 1 and s * np.max(spectral.r) / 2 > MAX_HALF_EXPONENT:
        raise ScaleOverflow("s * max r_ij / 2 = %.1f overflows the exponential weights"
                            % (s * np.max(spectral.r) / 2))


def build_constraint_matrix(spectral, s):
    """The n(n-1) x n^2 matrix Xi with the symmetric exp(+-s r / 2) weights.

    Columns are ordered degree-major: index k * n + i holds the zeta**k
    coefficient of sheet i. ``s = 0`` is accepted for the diagnostics.
    """
    _check_scale(spectral, s)
    n = spectral.n
    rows = []
    for i, j in spectral.off_diagonal_pairs():
        a, r = spectral.a[i, j], spectral.r[i, j]
        sheet = np.zeros(n, dtype=complex)
        sheet[i] = np.exp(s * r / 2)
        sheet[j] = -np.exp(-s * r / 2)
        rows.append(np.kron(a ** np.arange(n), sheet))
    return np.array(rows, dtype=complex).reshape(n * (n - 1), n * n)


def scaled_constraint_matrix(spectral, s):
    """Xi with each row multiplied by exp(-s r_ij / 2) and then sup-normalized.

    Row scaling leaves the null space untouched and keeps every entry bounded.
    """
    n = spectral.n
    rows = []
    for i, j in spectral.off_diagonal_pairs():
        a, r = spectral.a[i, j], spectral.r[i, j]
        sheet = np.zeros(n, dtype=complex)
        sheet[i] = 1.0
        sheet[j] = -np.exp(-s * r)
        rows.append(np.kron(a ** np.arange(n), sheet))
    Xi = np.array(rows, dtype=complex).reshape(n * (n - 1), n * n)
    return linalg.scale_rows(Xi)[0]


def _coeffs_from_columns(P, n):
    # P[k * n + i, l] -> coeffs[l, i, k]
    return np.transpose(P.reshape(n, n, n), (2, 1, 0)).copy()


def solve_basis_direct(spectral, s):
    n = spectral.n
    if n == 1:
        return BasisMatrix(np.ones((1, 1, 1), dtype=complex), s)
    _check_scale(spectral, s)
    Xi = scaled_constraint_matrix(spectral, s)
    m = n * (n - 1)
    aB, c = Xi[:, :m], Xi[:, m:]
    ratio = linalg.smallest_singular_ratio(aB)
    if not ratio >= SINGULAR_RTOL:
        raise SingularBlock("degree n-2 block is singular (sigma_min/sigma_max = %.3g); "
                            "non-generic data or s <= 0" % ratio)
    Y = -linalg.solve(aB, c)
    U, Linv = linalg.ul_decompose(Y[:n])
    Lhat = np.linalg.solve(Linv, np.eye(n))
    Lhat = np.tril(Lhat)
    np.fill_diagonal(Lhat, 1.0)
    Ptilde = Y[n:] @ Lhat
    P = np.vstack([U, Ptilde, Lhat])
    return BasisMatrix(_coeffs_from_columns(P, n), s)


@dataclass(frozen=True)
class SectionDiagnostics:
    smallest_singular_value: float
    block_nullity: int
    full_nullity: int
    hitchin_angle: float
    curve_nullity: int = 0
    curve_angle: float = np.nan


def curve_sections(spectral):
    """Columns spanning eta^k zeta^m restricted to the sheets, 2k + m <= n - 2.

    On sheet i, eta is p_i(zeta), so each column is the tuple (p_i^k zeta^m)_i
    in the degree-major layout of the degree n-2 block. For n <= 3 only k = 0
    occurs and the span is r(zeta)(1, ..., 1); from n = 4 on the eta terms add
    further sections.
    """
    n = spectral.n
    cols = []
    for k in range((n - 2) // 2 + 1):
        for m in range(n - 1 - 2 * k):
            c = np.zeros((n, n - 1), dtype=complex)
            for i in range(n):
                p_i = [spectral.z[i], -2 * spectral.x3[i], -np.conj(spectral.z[i])]
                q = np.polynomial.polynomial.polypow(p_i, k)
                q = np.concatenate([np.zeros(m), q])
                c[i, :len(q)] = q
            cols.append(c.T.reshape(-1))
    return np.array(cols).T if cols else np.zeros((n * (n - 1), 0))


def section_space_diagnostics(spectral, s, rtol=1e-8):
    """Numerical-rank summary of the matching system at parameter s.

    ``smallest_singular_value`` is relative to the largest one of the square
    degree n-2 block. At s = 0, ``hitchin_angle`` compares the block's null
    space with span{e_k (x) (1, ..., 1)} and ``curve_angle`` with the span of
    ``curve_sections``, whose dimension is ``curve_nullity``. Both angles are
    nan for s != 0.
    """
    n = spectral.n
    if n == 1:
        zero = 0.0 if s == 0 else np.nan
        return SectionDiagnostics(np.inf, 0, 1, zero, 0, zero)
    Xi = scaled_constraint_matrix(spectral, s)
    m = n * (n - 1)
    block = Xi[:, :m]
    ratio = float(linalg.smallest_singular_ratio(block))
    null_block = linalg.numerical_nullspace(block, rtol)
    null_full = linalg.numerical_nullspace(Xi, rtol)
    curve = curve_sections(spectral)
    angle = curve_angle = np.nan
    if s == 0:
        expected = np.kron(np.eye(n - 1), np.ones((n, 1)))
        angle = linalg.subspace_angle(null_block, expected) if null_block.shape[1] else np.pi / 2
        curve_angle = linalg.subspace_angle(null_block, curve) \
            if null_block.shape[1] == curve.shape[1] else np.pi / 2
    return SectionDiagnostics(ratio, null_block.shape[1], null_full.shape[1], angle,
                              curve.shape[1], curve_angle)
