"""Dirac zero modes on both sides of the Nahm transform.

Nahm side: the twisted operator

    D_x = i d/ds + i T0 + sum_j sigma_j (x) (T_j - i x_j)

annihilates (1, a)^T (x) w whenever (L - p_x(a)) w = 0 and
(d/ds + M - h_x^+(a)) w = 0. Eigenvectors of L at the two roots a of
p_j - p_x give a full 2n x 2n fundamental matrix W, and V = (W^dagger)^{-1}
solves the adjoint problem.

Monopole side: for the superposed Dirac monopoles, a tuple of polynomials
satisfying the matching conditions is turned into a zero mode of the
s-twisted monopole Dirac operator by summing residues at the roots a_xi.
The twist factor exp(-s h^-(zeta)) solves the linear problem for the pair

    D_s = sigma.D - i Phi - s,    D_s^dagger = -sigma.D - i Phi - s,

with D_j = d_j + A_j, and the resulting modes decay like exp(-s |x|).
"""

from dataclasses import dataclass

import numpy as np

from . import inner_product
from .errors import AtSource, NonGenericTwist, PoleHit, StringCrossing, VerticalPair
from .geometry import double_point
from .nahm import orthonormal_frame, nahm_matrices
from .oracles import RepGenerators

PAULI = RepGenerators.build(2).as_tuple()
STRING_TOL = 1e-8
SOURCE_TOL = 1e-12
POLE_TOL = 1e-12
FD_STEP_X = 1e-4


@dataclass(frozen=True)
class PointTwist:
    """Roots a_jx, a_xj of p_j - p_x for every sheet j."""
    x: np.ndarray
    px: np.ndarray
    a_jx: np.ndarray
    a_xj: np.ndarray

    def p(self, zeta):
        c0, c1, c2 = self.px
        return c0 + zeta * (c1 + zeta * c2)

    def hplus(self, zeta):
        return self.x[2] + complex(self.x[0], -self.x[1]) * zeta


def point_roots(spectral, x):
    x = np.asarray(x, dtype=float)
    pts = spectral.points
    if np.min(np.linalg.norm(pts - x, axis=1)) <= SOURCE_TOL:
        raise AtSource("twist point coincides with a source")
    ajx, axj = [], []
    try:
        for c in pts:
            ajx.append(double_point(c, x)[0])
            axj.append(double_point(x, c)[0])
    except VerticalPair as exc:
        raise NonGenericTwist("twist point is vertically aligned with a source") from exc
    z = complex(x[0], x[1])
    px = np.array([z, -2 * x[2], -np.conj(z)], dtype=complex)
    return PointTwist(x, px, np.array(ajx), np.array(axj))


@dataclass(frozen=True)
class ZeroModeFrame:
    W: np.ndarray
    s: float
    x: np.ndarray

    @property
    def V(self):
        return np.linalg.inv(self.W.conj().T)


def nahm_side_frame(spectral, s, x, frame=None):
    """Columns exp(s h_x^+(a)) (1, a) (x) U_j(s, a) for a in {a_jx, a_xj}, sheet by sheet."""
    tw = point_roots(spectral, x)
    if frame is None:
        frame = orthonormal_frame(spectral, s)
    cols = []
    for j in range(spectral.n):
        for a in (tw.a_jx[j], tw.a_xj[j]):
            u = inner_product.to_section_frame(frame.Q, spectral, a)[:, j]
            cols.append(np.exp(s * tw.hplus(a)) * np.kron([1.0, a], u))
    return ZeroModeFrame(np.array(cols).T, s, tw.x)


def twisted_operator_parts(T, x):
    """(i T0 lifted, sum_j sigma_j (x) (T_j - i x_j)) as 2n x 2n matrices."""
    n = T.n
    eye = np.eye(n)
    S = sum(np.kron(sig, Tj - 1j * xj * eye) for sig, Tj, xj in zip(PAULI, T.matrices()[1:], x))
    return 1j * np.kron(np.eye(2), T.T0), S


def nahm_dirac_residuals(spectral, s, x, h=1e-5):
    """Column-wise relative FD residuals of D_x W = 0 and D_x^dagger V = 0.

    Returns (worst W residual, worst V residual).
    """
    x = np.asarray(x, dtype=float)
    frames = {}
    for v in (s - h, s, s + h):
        fr = orthonormal_frame(spectral, v)
        frames[v] = (nahm_side_frame(spectral, v, x, fr), nahm_matrices(spectral, v, fr))
    (Wm, _), (W0, T), (Wp, _) = frames[s - h], frames[s], frames[s + h]
    iT0, S = twisted_operator_parts(T, x)

    def worst(F, Fp, Fm, sign):
        dF = (Fp - Fm) / (2 * h)
        res = 1j * dF + iT0 @ F + sign * (S @ F)
        scale = np.linalg.norm(1j * dF, axis=0) + np.linalg.norm(iT0 @ F, axis=0) \
            + np.linalg.norm(S @ F, axis=0)
        return float(np.max(np.linalg.norm(res, axis=0) / scale))

    rw = worst(W0.W, Wp.W, Wm.W, +1)
    rv = worst(W0.V, Wp.V, Wm.V, -1)
    return rw, rv


def eigen_residual(spectral, s, x, frame=None):
    """max |(L(a) - p_x(a)) u| / |u| over the vector parts of the frame columns."""
    from .nahm import lax_at
    tw = point_roots(spectral, x)
    if frame is None:
        frame = orthonormal_frame(spectral, s)
    worst = 0.0
    for j in range(spectral.n):
        for a in (tw.a_jx[j], tw.a_xj[j]):
            L = lax_at(spectral, s, a, frame.Q, frame.dQ, limit=True).L
            u = inner_product.to_section_frame(frame.Q, spectral, a)[:, j]
            worst = max(worst, np.linalg.norm((L - tw.p(a) * np.eye(spectral.n)) @ u)
                        / (np.linalg.norm(u) * max(1.0, np.linalg.norm(L))))
    return float(worst)


@dataclass(frozen=True)
class DecayReport:
    rates_V: np.ndarray
    decaying: np.ndarray
    expected_rates: np.ndarray


def classify_decay(spectral, x, s1, s2):
    """Growth rates log(|v(s2)| / |v(s1)|) / (s2 - s1) of the columns of V.

    Columns with negative rate span the solutions decaying at large s; for
    a regular configuration their rates approach -|x - c_j|.
    """
    V1 = nahm_side_frame(spectral, s1, x).V
    V2 = nahm_side_frame(spectral, s2, x).V
    rates = np.log(np.linalg.norm(V2, axis=0) / np.linalg.norm(V1, axis=0)) / (s2 - s1)
    expected = np.linalg.norm(spectral.points - np.asarray(x, dtype=float), axis=1)
    return DecayReport(rates, np.nonzero(rates < 0)[0], expected)


@dataclass(frozen=True)
class MonopoleField:
    Phi: complex
    A: np.ndarray


def _relative(cfg_points, x):
    rel = np.asarray(x, dtype=float)[None, :] - np.asarray(cfg_points, dtype=float)
    r = np.linalg.norm(rel, axis=1)
    if np.min(r) <= SOURCE_TOL:
        raise AtSource("point coincides with a monopole")
    return rel, r


def _points(cfg):
    return getattr(cfg, "points", cfg)


def monopole_fields(cfg, x):
    """Higgs field and connection of superposed unit Dirac monopoles.

    Both are imaginary; A is regular off the strings below each source.
    """
    rel, r = _relative(_points(cfg), x)
    phi = complex(np.sum(0.5j / r))
    w = 1j / (2 * r * (r + rel[:, 2]))
    A = np.array([np.sum(w * rel[:, 1]), np.sum(-w * rel[:, 0]), 0.0], dtype=complex)
    return MonopoleField(phi, A)


def _monopole_roots(cfg, x):
    rel, r = _relative(_points(cfg), x)
    zk = rel[:, 0] + 1j * rel[:, 1]
    if np.any(np.abs(zk) <= STRING_TOL * r):
        raise StringCrossing("point lies on the vertical line through a source")
    axk = -(rel[:, 2] + r) / np.conj(zk)
    return rel, r, zk, axk


def _roots(rel, r, zk):
    """sqrt(-a_xk / conj(z_k)) on the branch sqrt(r_k + x_k^3) / conj(z_k).

    -a_xk / conj(z_k) = (r_k + x_k^3) / conj(z_k)^2, so this branch is smooth
    away from the vertical lines through the sources, unlike the principal
    one, whose cut runs through the plane Re z_k = 0.
    """
    return np.sqrt(r + rel[:, 2]) / np.conj(zk)


def chi(cfg, s, x, zeta, sheet=0):
    """Product of single-monopole solutions of the linear problem at zeta.

    The s-twist exp(-s h^-(zeta)) is applied once, in coordinates relative
    to source ``sheet``.
    """
    rel, r, zk, axk = _monopole_roots(cfg, x)
    if np.min(np.abs(zeta - axk)) <= POLE_TOL:
        raise PoleHit("zeta is at a pole a_xk")
    val = np.prod(_roots(rel, r, zk) / (zeta - axk))
    if s:
        val = val * np.exp(-s * (rel[sheet, 2] - zk[sheet] / zeta))
    return complex(val)


def residues(cfg, s, x, coeffs):
    """Analytic residues at a_xi of (Q_i/zeta) exp(-s h_i^-(zeta)) chi(zeta), one per sheet."""
    rel, r, zk, axk = _monopole_roots(cfg, x)
    n = len(axk)
    roots = _roots(rel, r, zk)
    out = np.zeros(n, dtype=complex)
    for i in range(n):
        a = axk[i]
        others = np.prod([roots[k] / (a - axk[k]) for k in range(n) if k != i])
        q = np.polyval(np.asarray(coeffs[i])[::-1], a)
        out[i] = q / a * np.exp(-s * (rel[i, 2] - zk[i] / a)) * roots[i] * others
    return out


def contour_residues(cfg, s, x, coeffs, radius=1e-2, nodes=64):
    """The same residues by the trapezoid rule on small circles."""
    rel, r, zk, axk = _monopole_roots(cfg, x)
    n = len(axk)
    out = np.zeros(n, dtype=complex)
    w = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    for i in range(n):
        acc = 0.0
        for u in w:
            zeta = axk[i] + radius * u
            q = np.polyval(np.asarray(coeffs[i])[::-1], zeta)
            acc += q / zeta * chi(cfg, s, x, zeta, sheet=i) * radius * u
        out[i] = acc / nodes
    return out


def _profile(cfg, s, coeffs):
    return lambda x: complex(np.sum(residues(cfg, s, x, coeffs)))


def _grad(f, x, h):
    x = np.asarray(x, dtype=float)
    out = np.zeros(3, dtype=complex)
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        out[j] = (f(x + e) - f(x - e)) / (2 * h)
    return out


def _mass(s, phi):
    return -s - 1j * phi


def _apply_D(cfg, s, f, x, h):
    """D_s (f, 0)^T = (D_3 f + m f, D_1 f + i D_2 f) with m = -i Phi - s."""
    fld = monopole_fields(cfg, x)
    fx = f(x)
    Df = _grad(f, x, h) + fld.A * fx
    return np.array([Df[2] + _mass(s, fld.Phi) * fx, Df[0] + 1j * Df[1]])


def monopole_zero_mode(cfg, s, x, coeffs, h=FD_STEP_X):
    """Spinor D_s (1, 0)^T f at x, with f the residue sum for the tuple ``coeffs``.

    ``coeffs[i]`` are the ascending coefficients of Q_i.
    """
    return _apply_D(cfg, s, _profile(cfg, s, coeffs), np.asarray(x, dtype=float), h)


def adjoint_residual(cfg, s, x, coeffs, h=FD_STEP_X):
    """Relative size of D_s^dagger psi = (-sigma.D - i Phi - s) psi at x, by nested FD."""
    x = np.asarray(x, dtype=float)
    psi = lambda y: monopole_zero_mode(cfg, s, y, coeffs, h)
    fld = monopole_fields(cfg, x)
    p0 = psi(x)
    D = np.zeros((3, 2), dtype=complex)
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        D[j] = (psi(x + e) - psi(x - e)) / (2 * h) + fld.A[j] * p0
    sigD = sum(sig @ D[j] for j, sig in enumerate(PAULI))
    mass = _mass(s, fld.Phi) * p0
    res = -sigD + mass
    return float(np.linalg.norm(res) / (np.linalg.norm(sigD) + np.linalg.norm(mass)))


def covariant_laplacian_residual(cfg, x, h=1e-3):
    """Relative size of (sum_j D_j^2 + Phi^2) chi for the untwisted chi at zeta = 0."""
    x = np.asarray(x, dtype=float)
    f = lambda y: chi(cfg, 0.0, y, 0.0)
    fld = monopole_fields(cfg, x)
    f0 = f(x)
    total, scale = fld.Phi ** 2 * f0, abs(fld.Phi ** 2 * f0)
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        fp, fm = f(x + e), f(x - e)
        Ap = monopole_fields(cfg, x + e).A[j]
        Am = monopole_fields(cfg, x - e).A[j]
        # D_j^2 f = f'' + A_j' f + 2 A_j f' + A_j^2 f
        d2 = (fp - 2 * f0 + fm) / h ** 2
        d1 = (fp - fm) / (2 * h)
        dA = (Ap - Am) / (2 * h)
        term = d2 + dA * f0 + 2 * fld.A[j] * d1 + fld.A[j] ** 2 * f0
        total += term
        scale += abs(d2) + abs(2 * fld.A[j] * d1) + abs(fld.A[j] ** 2 * f0)
    return float(abs(total) / scale)


def radial_decay_exponent(cfg, s, coeffs, direction, radii=(4.0, 6.0, 8.0), center=None):
    """Fit log|psi(R u)| = c + m log R - kappa R through three radii; returns kappa."""
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    c = np.zeros(3) if center is None else np.asarray(center, dtype=float)
    R = np.asarray(radii, dtype=float)
    y = [np.log(np.linalg.norm(monopole_zero_mode(cfg, s, c + v * u, coeffs))) for v in R]
    A = np.column_stack([np.ones_like(R), np.log(R), -R])
    return float(np.linalg.solve(A, y)[2])


def string_clearance(cfg, x):
    """min_k (r_k + x_k^3) / r_k; zero on a string, two on the opposite axis."""
    rel, r = _relative(_points(cfg), x)
    return float(np.min((r + rel[:, 2]) / r))


def sample_points(cfg, count=5, radius=1.5, min_clearance=0.3, seed=0):
    """Seeded points on a sphere about the centroid, kept off the Dirac strings.

    Finite differences across the singular connection are meaningless, so
    points closer than ``min_clearance`` to any string are rejected.
    """
    pts = np.asarray(_points(cfg), dtype=float)
    c = pts.mean(axis=0)
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        u = rng.normal(size=3)
        x = c + radius * u / np.linalg.norm(u)
        r = np.linalg.norm(pts - x, axis=1)
        if np.min(r) > 0.2 * radius and string_clearance(pts, x) >= min_clearance:
            out.append(x)
    return np.array(out)
