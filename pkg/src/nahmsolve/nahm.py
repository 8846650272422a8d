"""Lax pair and Nahm matrices from the orthonormal frame, plus verification.

With Q(zeta) the matrix of normalized basis rows (rows = basis index, columns
= sheets), orthonormality gives Q^{-1} = diag(1 / prod_{l != i}(p_i - p_l)) Q~^T
where Q~ holds the reflected rows. Then

    L = Q diag(p) Q^{-1},    M = (-dQ/ds + Q diag(h^+)) Q^{-1},

and the four Nahm matrices are read off at zeta = 0.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import inner_product, poly
from .basis_direct import BasisMatrix, solve_basis_direct
from .basis_lagrange import solve_all_rows
from .errors import ZetaTooCloseToDoublePoint

DOUBLE_POINT_MIN_DISTANCE = 1e-8
LIMIT_RADIUS = 1e-2
LIMIT_NODES = 8


@dataclass(frozen=True)
class NahmData:
    s: float
    T0: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    T3: np.ndarray

    @property
    def n(self):
        return self.T0.shape[0]

    def matrices(self):
        return (self.T0, self.T1, self.T2, self.T3)

    def antihermitian_residual(self):
        """Largest ||T + T^dagger|| / ||T|| over the four matrices."""
        out = 0.0
        for T in self.matrices():
            scale = max(np.linalg.norm(T), 1e-300)
            out = max(out, np.linalg.norm(T + T.conj().T) / scale)
        return out


@dataclass(frozen=True)
class LaxSample:
    zeta: complex
    L: np.ndarray
    M: np.ndarray
    s: float


@dataclass(frozen=True)
class Frame:
    """Normalized basis at s together with its exact s-derivative."""
    Q: BasisMatrix
    dQ: np.ndarray

    @property
    def s(self):
        return self.Q.s


def _norm_derivatives(q, dq, spectral, zetas):
    """Row norms N_l and dN_l/ds, the latter from d<q, q> = <dq, q> + <q, dq>."""
    N = inner_product.row_norms(q, spectral, zetas)
    samples = []
    for z in zetas:
        a, _ = inner_product.pairing_terms(dq, q.coeffs, spectral, z)
        b, _ = inner_product.pairing_terms(q.coeffs, dq, spectral, z)
        samples.append(np.diag(a + b))
    return N, np.mean(samples, axis=0).real


def basis_derivative(spectral, s, basis=None):
    """d/ds of the basis coefficients, differentiating the reduced solve exactly.

    For a normalized (or missing) ``basis`` the derivative of the normalized
    rows is returned, including the change of the normalization factors.
    """
    q, dq = solve_all_rows(spectral, s, derivative=True)
    if basis is not None and not basis.normalized:
        return dq
    zetas = inner_product.zeta_samples(spectral)
    N, dN = _norm_derivatives(q, dq, spectral, zetas)
    root = np.sqrt(N)[:, None, None]
    return dq / root - 0.5 * (dN / N)[:, None, None] * q.coeffs / root


def orthonormal_frame(spectral, s, solver="lagrange", precision="double"):
    """Normalized basis and its derivative from one pass of the chosen solver.

    ``precision="extended"`` runs the reduced solve in extended precision,
    which finite-difference checks at small steps need for larger n.
    """
    q, dq = solve_all_rows(spectral, s, derivative=True, precision=precision)
    if solver == "direct":
        q = solve_basis_direct(spectral, s)
    elif solver != "lagrange":
        raise ValueError("unknown solver %r" % solver)
    zetas = inner_product.zeta_samples(spectral)
    N, dN = _norm_derivatives(q, dq, spectral, zetas)
    root = np.sqrt(N)[:, None, None]
    Qhat = BasisMatrix(q.coeffs / root, s, normalized=True)
    dQhat = dq / root - 0.5 * (dN / N)[:, None, None] * q.coeffs / root
    return Frame(Qhat, dQhat)


def _lax_direct(spectral, s, zeta, Qhat, Qdot):
    n = spectral.n
    Q = poly.eval_poly(Qhat.coeffs, zeta)
    dQ = poly.eval_poly(Qdot, zeta)
    Qinv = poly.eval_poly(poly.reflect(Qhat.coeffs, n), zeta).T / spectral.denominators(zeta)[:, None]
    L = (Q * spectral.p(zeta)[None, :]) @ Qinv
    M = (-dQ + Q * spectral.hplus(zeta)[None, :]) @ Qinv
    return L, M


def _nearest_double_point(spectral, zeta):
    if spectral.n < 2:
        return np.inf, None
    pts = spectral.double_points()
    k = int(np.argmin(np.abs(pts - zeta)))
    return float(abs(pts[k] - zeta)), pts


def lax_at(spectral, s, zeta, Qhat, Qdot, limit=False):
    """L and M at zeta for the normalized frame (Qhat, Qdot).

    Near a double point the inverse formula is 0/0. With ``limit`` the value
    there is taken as the mean over a small circle, which is exact because L
    and M are polynomial in zeta.
    """
    zeta = complex(zeta)
    dist, pts = _nearest_double_point(spectral, zeta)
    if dist < DOUBLE_POINT_MIN_DISTANCE and not limit:
        raise ZetaTooCloseToDoublePoint("zeta is %.2e from a double point" % dist)
    if limit and dist < LIMIT_RADIUS:
        gaps = np.abs(pts - zeta)
        others = gaps[gaps > dist]
        rho = LIMIT_RADIUS if len(others) == 0 else min(LIMIT_RADIUS, 0.3 * np.min(others))
        circle = zeta + rho * np.exp(2j * np.pi * np.arange(LIMIT_NODES) / LIMIT_NODES)
        parts = [_lax_direct(spectral, s, w, Qhat, Qdot) for w in circle]
        L = np.mean([p[0] for p in parts], axis=0)
        M = np.mean([p[1] for p in parts], axis=0)
    else:
        L, M = _lax_direct(spectral, s, zeta, Qhat, Qdot)
    return LaxSample(zeta, L, M, s)


def extract(L0, M0, s):
    """Nahm matrices from the Lax pair at zeta = 0."""
    L0h, M0h = L0.conj().T, M0.conj().T
    return NahmData(s, (M0 - M0h) / 2, 0.5j * (L0 + L0h), (L0 - L0h) / 2, 0.5j * (M0 + M0h))


def nahm_matrices(spectral, s, frame=None, solver="lagrange", precision="double"):
    if frame is None:
        frame = orthonormal_frame(spectral, s, solver, precision)
    sample = lax_at(spectral, s, 0.0, frame.Q, frame.dQ, limit=True)
    return extract(sample.L, sample.M, s)


def _comm(a, b):
    return a @ b - b @ a


def nahm_rhs_residuals(T, dT1, dT2, dT3):
    """||dT_i/ds + [T0, T_i] - [T_j, T_k]|| for the three cyclic equations."""
    T0, T1, T2, T3 = T.matrices()
    return np.array([
        np.linalg.norm(dT1 + _comm(T0, T1) - _comm(T2, T3)),
        np.linalg.norm(dT2 + _comm(T0, T2) - _comm(T3, T1)),
        np.linalg.norm(dT3 + _comm(T0, T3) - _comm(T1, T2)),
    ])


def default_fd_step(s):
    return 1e-5 * max(1.0, s)


def nahm_fd_residuals(spectral, s, h=None, solver="lagrange", precision="double"):
    """Central-difference residuals of Nahm's equations at s."""
    h = default_fd_step(s) if h is None else h
    Tp = nahm_matrices(spectral, s + h, solver=solver, precision=precision)
    Tm = nahm_matrices(spectral, s - h, solver=solver, precision=precision)
    T = nahm_matrices(spectral, s, solver=solver, precision=precision)
    d = [(a - b) / (2 * h) for a, b in zip(Tp.matrices()[1:], Tm.matrices()[1:])]
    return nahm_rhs_residuals(T, *d)


def _relative(num, den):
    return float(num / max(den, 1e-300))


def reality_residuals(sample, sample_reflected):
    """Residuals of L(-1/conj z)^dagger = -L(z)/z^2 and M(-1/conj z)^dagger = -M(z) - L(z)/z."""
    z = sample.zeta
    L, M = sample.L, sample.M
    Lr, Mr = sample_reflected.L, sample_reflected.M
    rl = _relative(np.linalg.norm(Lr.conj().T + L / z ** 2), np.linalg.norm(L / z ** 2))
    target = M + L / z
    rm = _relative(np.linalg.norm(Mr.conj().T + target),
                   max(np.linalg.norm(M), np.linalg.norm(L / z)))
    return rl, rm


def spectrum_residual(L, pvals):
    ev = np.linalg.eigvals(L)
    cost = np.abs(ev[:, None] - pvals[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols]) / max(1.0, np.max(np.abs(pvals))))


def degree_residuals(spectral, s, frame, nodes=None):
    """Relative size of the zeta^3 coefficient of L and the zeta^2 coefficient of M.

    L is fitted by a cubic through four nodes and M by a quadratic through
    three; both leading coefficients must vanish.
    """
    if nodes is None:
        nodes = inner_product.zeta_samples(spectral, count=4, seed=7)
    Ls, Ms = [], []
    for z in nodes:
        smp = lax_at(spectral, s, z, frame.Q, frame.dQ)
        Ls.append(smp.L)
        Ms.append(smp.M)
    Ls, Ms = np.array(Ls), np.array(Ms)

    def leading(values, pts):
        n = values.shape[1]
        out = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                out[i, j] = poly.lagrange_interpolate(pts, values[:, i, j])[-1]
        return out

    cubic = leading(Ls, nodes[:4])
    quad = leading(Ms[:3], nodes[:3])
    return (_relative(np.max(np.abs(cubic)), np.max(np.abs(Ls))),
            _relative(np.max(np.abs(quad)), np.max(np.abs(Ms))))


@dataclass(frozen=True)
class VerificationReport:
    nahm_residuals: np.ndarray
    lax_residual: float
    reality_residual: float
    reality_residual_M: float
    degree_residuals: tuple
    spectrum_residual: float
    gram_residual: float
    gram_spread: float
    antihermitian_residual: float
    extras: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "nahm_residuals": [float(x) for x in self.nahm_residuals],
            "lax_residual": self.lax_residual,
            "reality_residual": self.reality_residual,
            "reality_residual_M": self.reality_residual_M,
            "degree_residuals": [float(x) for x in self.degree_residuals],
            "spectrum_residual": self.spectrum_residual,
            "gram_residual": self.gram_residual,
            "gram_spread": self.gram_spread,
            "antihermitian_residual": self.antihermitian_residual,
            **self.extras,
        }


def residuals(spectral, s, fd_step=None, zetas=None, solver="lagrange", precision="double"):
    h = default_fd_step(s) if fd_step is None else fd_step
    if s - h <= 0:
        raise ValueError("s - fd_step must be positive")
    if zetas is None:
        zetas = inner_product.zeta_samples(spectral, seed=3)
    frame = orthonormal_frame(spectral, s, solver, precision)
    fp = orthonormal_frame(spectral, s + h, solver, precision)
    fm = orthonormal_frame(spectral, s - h, solver, precision)

    T = nahm_matrices(spectral, s, frame)
    Tp, Tm = nahm_matrices(spectral, s + h, fp), nahm_matrices(spectral, s - h, fm)
    d = [(a - b) / (2 * h) for a, b in zip(Tp.matrices()[1:], Tm.matrices()[1:])]
    nahm_res = nahm_rhs_residuals(T, *d)

    lax_res = reality_L = reality_M = spectrum_err = 0.0
    for z in zetas:
        smp = lax_at(spectral, s, z, frame.Q, frame.dQ)
        Lp = lax_at(spectral, s + h, z, fp.Q, fp.dQ).L
        Lm = lax_at(spectral, s - h, z, fm.Q, fm.dQ).L
        dL = (Lp - Lm) / (2 * h)
        lax_res = max(lax_res, _relative(np.linalg.norm(dL - _comm(smp.L, smp.M)),
                                         max(1.0, np.linalg.norm(smp.L))))
        refl = lax_at(spectral, s, -1 / np.conj(z), frame.Q, frame.dQ)
        rl, rm = reality_residuals(smp, refl)
        reality_L, reality_M = max(reality_L, rl), max(reality_M, rm)
        spectrum_err = max(spectrum_err, spectrum_residual(smp.L, spectral.p(z)))

    report = inner_product.gram(frame.Q, spectral)
    gram_res = float(np.max(np.abs(report.gram - np.eye(spectral.n))))
    return VerificationReport(
        nahm_residuals=nahm_res,
        lax_residual=lax_res,
        reality_residual=reality_L,
        reality_residual_M=reality_M,
        degree_residuals=degree_residuals(spectral, s, frame),
        spectrum_residual=spectrum_err,
        gram_residual=gram_res,
        gram_spread=report.zeta_spread,
        antihermitian_residual=T.antihermitian_residual(),
    )


@dataclass(frozen=True)
class BoundaryReport:
    s_small: float
    eigenvalues: np.ndarray
    expected_eigenvalues: np.ndarray
    eigenvalue_error: float
    casimir_residual: float
    s_large: tuple
    limit_distances: tuple
    decay_exponent: float
    min_separation: float

    def as_dict(self):
        return {
            "s_small": self.s_small,
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "expected_eigenvalues": [float(x) for x in self.expected_eigenvalues],
            "eigenvalue_error": self.eigenvalue_error,
            "casimir_residual": self.casimir_residual,
            "s_large": list(self.s_large),
            "limit_distances": list(self.limit_distances),
            "decay_exponent": self.decay_exponent,
            "min_separation": self.min_separation,
        }


def limit_distance(spectral, T):
    """max_j ||T_j - i diag(tau_j)|| with tau_j the j-th coordinates of the points."""
    pts = spectral.points
    return max(np.linalg.norm(Tj - 1j * np.diag(pts[:, j]))
               for j, Tj in enumerate(T.matrices()[1:]))


def boundary_report(spectral, s_small, s_large, s_large2=None, solver="lagrange",
                    precision="double"):
    """Residue representation near s = 0 and exponential approach at large s.

    The decay exponent is fitted from ``s_large`` and ``s_large2`` (default
    s_large - 2).
    """
    n = spectral.n
    if not 0 < s_small < s_large:
        raise ValueError("need 0 < s_small < s_large")
    T = nahm_matrices(spectral, s_small, solver=solver, precision=precision)
    H = -2j * s_small * T.T3
    ev = np.sort(np.linalg.eigvalsh((H + H.conj().T) / 2))[::-1]
    expected = np.arange(n - 1, -n, -2, dtype=float)
    cas = sum((2 * s_small * Tj) @ (2 * s_small * Tj) for Tj in T.matrices()[1:])
    cas_res = float(np.linalg.norm(cas + (n * n - 1) * np.eye(n), 2))

    s2 = s_large - 2 if s_large2 is None else s_large2
    s_pair = tuple(sorted((s2, s_large)))
    dists = tuple(limit_distance(spectral, nahm_matrices(spectral, v, solver=solver,
                                                         precision=precision))
                  for v in s_pair)
    if n > 1 and dists[0] > 0 and dists[1] > 0:
        rate = float(np.log(dists[0] / dists[1]) / (s_pair[1] - s_pair[0]))
    else:
        rate = np.inf
    return BoundaryReport(s_small, ev, expected, float(np.max(np.abs(ev - expected))),
                          cas_res, s_pair, dists, rate, spectral.min_separation())


def pole_cancellation(spectral, s, frame=None, radius=1e-3, nodes=16):
    """Largest relative contour residue of L and M around any double point."""
    if frame is None:
        frame = orthonormal_frame(spectral, s)
    worst = 0.0
    if spectral.n < 2:
        return worst
    w = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    for a in spectral.double_points():
        resL, resM, scale = 0.0, 0.0, 0.0
        for u in w:
            smp = _lax_direct(spectral, s, a + radius * u, frame.Q, frame.dQ)
            resL = resL + smp[0] * radius * u / nodes
            resM = resM + smp[1] * radius * u / nodes
            scale = max(scale, np.max(np.abs(smp[0])), np.max(np.abs(smp[1])))
        worst = max(worst, float(max(np.max(np.abs(resL)), np.max(np.abs(resM))) / scale))
    return worst
