"""Basis rows from the reduced interpolation system.

Each sheet polynomial of row l is written as

    Q_k(zeta) = C_k A_k(zeta) + sum_{j != k} exp(-s r_kj) Q_j(a_kj) ell_kj(zeta)

with A_k the annihilator of the double points on sheet k and ell_kj the
cardinal polynomial on those nodes. The values Q_j(a_kj) with k < j are
unknowns; those with k > j are read off sheets already built. Together with
C_i for i > l this leaves a square system of n(n-1)/2 + (n-1-l) unknowns
(zero based l): the self-consistency of every unknown value plus Q_i(0) = 0.

Sheet expressions are carried as affine maps of the unknowns, alongside their
exact s-derivatives, so the same pass gives the system and its derivative.

With ``precision="extended"`` the assembly and both solves run on mpmath
numbers and only the final coefficients are rounded to double. The reduced
matrix can have a condition number near 1e7 for five points at small s, and
rounding in its entries then shows up as jitter in s that swamps finite
difference checks; extended precision removes it.
"""

import contextlib
from dataclasses import dataclass

import mpmath
import numpy as np

from . import linalg, poly
from .basis_direct import BasisMatrix, _check_scale
from .errors import SingularSystem

SINGULAR_RTOL = 1e-12
EXTENDED_DPS = 40
AUTO_RTOL = 1e-6


class _Double:
    dtype = complex

    @staticmethod
    def lift(x):
        return np.asarray(x, dtype=complex)

    exp = staticmethod(np.exp)

    @staticmethod
    def real(x):
        return x

    @staticmethod
    def context():
        return contextlib.nullcontext()

    @staticmethod
    def solve(A, b):
        return linalg.solve(A, b)

    @staticmethod
    def prepare(A):
        return A

    rtol = SINGULAR_RTOL

    @staticmethod
    def singular_ratio(A):
        return linalg.smallest_singular_ratio(A)


class _Extended:
    dtype = object

    @staticmethod
    def lift(x):
        x = np.asarray(x)
        if x.dtype == object:
            return x
        out = np.empty(x.shape, dtype=object)
        for idx, v in np.ndenumerate(x):
            out[idx] = mpmath.mpc(complex(v))
        return out

    @staticmethod
    def exp(x):
        return mpmath.exp(x)

    @staticmethod
    def real(x):
        return mpmath.mpf(float(x))

    @staticmethod
    def context():
        return mpmath.workdps(EXTENDED_DPS)

    @staticmethod
    def solve(A, b):
        # mpmath caches the factorization on the matrix object, so A is
        # converted once per system and shared by both solves
        M = A if isinstance(A, mpmath.matrix) else mpmath.matrix(A.tolist())
        x = mpmath.lu_solve(M, mpmath.matrix(b.tolist()))
        return np.array([x[i] for i in range(len(b))], dtype=object)

    @staticmethod
    def prepare(A):
        return mpmath.matrix(A.tolist())

    rtol = 10.0 ** (12 - EXTENDED_DPS)

    @staticmethod
    def singular_ratio(A):
        sv = mpmath.svd_c(mpmath.matrix(A.tolist()), compute_uv=False)
        sv = [abs(sv[i]) for i in range(len(sv))]
        return float(min(sv) / max(sv))


def _backend(precision):
    if precision == "double":
        return _Double
    if precision == "extended":
        return _Extended
    raise ValueError("precision must be 'double' or 'extended', got %r" % (precision,))


def _to_complex(x):
    return np.asarray(x, dtype=object).astype(complex) if np.asarray(x).dtype == object \
        else np.asarray(x, dtype=complex)


def upper_pairs(n):
    """Ordered labels (v, u), v < u, of the matching unknowns X_vu = Q_u(a_vu)."""
    return [(v, u) for v in range(n) for u in range(v + 1, n)]


@dataclass(frozen=True)
class LagrangeSystem:
    """A X = B together with dA/ds and dB/ds.

    ``sheets[k]`` has shape (m + 1, n): row t < m is the coefficient vector
    multiplying unknown t, the last row is the constant part.
    """
    A: np.ndarray
    B: np.ndarray
    dA: np.ndarray
    dB: np.ndarray
    labels: list
    sheets: np.ndarray
    dsheets: np.ndarray

    @property
    def size(self):
        return len(self.labels)


def _sheet_expressions(spectral, s, c_exprs, m, xp=_Double):
    n = spectral.n
    a, r = xp.lift(spectral.a), spectral.r
    index = {p: t for t, p in enumerate(upper_pairs(n))}
    sheets = np.zeros((n, m + 1, n), dtype=xp.dtype)
    dsheets = np.zeros_like(sheets)
    for k in range(n):
        others = [j for j in range(n) if j != k]
        card = poly.lagrange_basis([a[k, j] for j in others])
        Ak = poly.pad(poly.annihilator_from(a, k), n)
        sheets[k] = np.outer(c_exprs[k], Ak)
        for t, j in enumerate(others):
            if k < j:
                v = np.zeros(m + 1, dtype=xp.dtype)
                v[index[(k, j)]] = 1
                d = np.zeros(m + 1, dtype=xp.dtype)
            else:
                v = poly.eval_poly(sheets[j], a[k, j])
                d = poly.eval_poly(dsheets[j], a[k, j])
            e = xp.exp(-xp.real(s) * xp.real(r[k, j]))
            ell = poly.pad(card[t], n)
            sheets[k] += np.outer(e * v, ell)
            dsheets[k] += np.outer(e * d - r[k, j] * e * v, ell)
    return sheets, dsheets


def assemble_reduced_system(spectral, s, l, precision="double"):
    xp = _backend(precision)
    with xp.context():
        return _assemble(spectral, s, l, xp)


def _assemble(spectral, s, l, xp):
    n = spectral.n
    _check_scale(spectral, s)
    pairs = upper_pairs(n)
    tail = list(range(l + 1, n))
    labels = [("X",) + p for p in pairs] + [("C", i) for i in tail]
    m = len(labels)
    c_exprs = np.zeros((n, m + 1), dtype=xp.dtype)
    c_exprs[l, m] = 1
    for t, i in enumerate(tail):
        c_exprs[i, len(pairs) + t] = 1
    sheets, dsheets = _sheet_expressions(spectral, s, c_exprs, m, xp)

    a = xp.lift(spectral.a)
    rows, drows = [], []
    for t, (v, u) in enumerate(pairs):
        row = poly.eval_poly(sheets[u], a[v, u])
        row[t] -= 1
        rows.append(row)
        drows.append(poly.eval_poly(dsheets[u], a[v, u]))
    for i in tail:
        rows.append(sheets[i][:, 0])
        drows.append(dsheets[i][:, 0])
    E = np.array(rows, dtype=xp.dtype).reshape(m, m + 1)
    dE = np.array(drows, dtype=xp.dtype).reshape(m, m + 1)
    return LagrangeSystem(E[:, :m], -E[:, m], dE[:, :m], -dE[:, m], labels, sheets, dsheets)


def _check_singular(system, xp=_Double):
    ratio = xp.singular_ratio(system.A)
    if not ratio >= xp.rtol:
        raise SingularSystem("reduced system is singular (sigma_min/sigma_max = %.3g); "
                             "non-generic data or s <= 0" % ratio)
    return ratio


def solve_basis_lagrange(spectral, s, l, derivative=False, precision="double"):
    """Row l of the basis; with ``derivative`` also its exact s-derivative."""
    xp = _backend(precision)
    with xp.context():
        return _solve_row(spectral, s, l, derivative, xp)


def _solve_row(spectral, s, l, derivative, xp):
    system = _assemble(spectral, s, l, xp)
    if system.size:
        _check_singular(system, xp)
        A = xp.prepare(system.A)
        X = xp.solve(A, system.B)
    else:
        X = np.zeros(0, dtype=xp.dtype)
    X1 = np.append(X, np.ones(1, dtype=xp.dtype))
    coeffs = np.einsum("kmd,m->kd", system.sheets, X1)
    row = poly.PolyTuple(_to_complex(coeffs), s)
    if not derivative:
        return row
    if system.size:
        dX = xp.solve(A, system.dB - system.dA @ X)
    else:
        dX = np.zeros(0, dtype=xp.dtype)
    dcoeffs = (np.einsum("kmd,m->kd", system.dsheets, X1)
               + np.einsum("kmd,m->kd", system.sheets[:, :-1], dX))
    return row, _to_complex(dcoeffs)


def _auto_precision(spectral, s, l):
    system = assemble_reduced_system(spectral, s, l)
    if system.size == 0:
        return "double"
    ratio = linalg.smallest_singular_ratio(system.A)
    return "extended" if ratio < AUTO_RTOL else "double"


def solve_all_rows(spectral, s, derivative=False, precision="double"):
    """Full basis from n independent reduced solves.

    ``precision="auto"`` switches a row to extended precision when its
    reduced matrix has sigma_min / sigma_max below ``AUTO_RTOL``.
    """
    rows = []
    for l in range(spectral.n):
        prec = _auto_precision(spectral, s, l) if precision == "auto" else precision
        rows.append(solve_basis_lagrange(spectral, s, l, derivative, prec))
    if not derivative:
        return BasisMatrix(np.array([r.coeffs for r in rows]), s)
    basis = BasisMatrix(np.array([r.coeffs for r, _ in rows]), s)
    return basis, np.array([d for _, d in rows])


def reconstruct_from_values(spectral, s, X, C):
    """Sheet polynomials from the matching values X and the constants C.

    ``X`` is a mapping (v, u) -> Q_u(a_vu) for v < u, or a sequence in the
    order of ``upper_pairs``. The remaining values Q_u(a_vu), v > u, follow
    from the sheets already built.
    """
    n = spectral.n
    pairs = upper_pairs(n)
    if isinstance(X, dict):
        X = [X[p] for p in pairs]
    X = np.asarray(X, dtype=complex).reshape(len(pairs))
    m = len(pairs)
    c_exprs = np.zeros((n, m + 1), dtype=complex)
    c_exprs[:, m] = np.asarray(C, dtype=complex)
    sheets, _ = _sheet_expressions(spectral, s, c_exprs, m)
    return poly.PolyTuple(np.einsum("kmd,m->kd", sheets, np.append(X, 1.0)), s)
