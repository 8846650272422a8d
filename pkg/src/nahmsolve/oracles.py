"""Closed-form reference solutions and gauge alignment."""

from dataclasses import dataclass

import numpy as np

from .linalg import numerical_nullspace
from .nahm import NahmData


@dataclass(frozen=True)
class RepGenerators:
    """Irreducible n-dimensional su(2) triple with sigma_3 diagonal and decreasing."""
    sigma1: np.ndarray
    sigma2: np.ndarray
    sigma3: np.ndarray

    @classmethod
    def build(cls, n):
        k = np.arange(1, n)
        plus = np.diag(np.sqrt(k * (n - k)).astype(complex), 1)
        s1 = plus + plus.conj().T
        s2 = (plus - plus.conj().T) / 1j
        s3 = np.diag(np.arange(n - 1, -n, -2).astype(complex))
        return cls(s1, s2, s3)

    def as_tuple(self):
        return (self.sigma1, self.sigma2, self.sigma3)


def exact_n1(point, s=1.0):
    x = np.asarray(point, dtype=float)
    z = np.zeros((1, 1), dtype=complex)
    return NahmData(s, z, 1j * x[0] * np.ones((1, 1)), 1j * x[1] * np.ones((1, 1)),
                    1j * x[2] * np.ones((1, 1)))


def exact_n2(points, s):
    """The general two-point solution in closed form."""
    p = np.asarray(getattr(points, "points", points), dtype=float)
    (x1, y1, h1), (x2, y2, h2) = p
    z12 = complex(x1 - x2, y1 - y2)
    r = float(np.linalg.norm(p[0] - p[1]))
    x3 = h1 - h2
    az = abs(z12)
    ph = np.conj(z12) / az if az > 0 else 1.0
    sh, ch = np.sinh(s * r), np.cosh(s * r)
    off = r / (2 * sh)
    den = r * ch - x3 * sh
    T1 = 1j * np.array([[x1, -off * ph], [-off * np.conj(ph), x2]])
    T2 = 1j * np.array([[y1, -1j * off * ph], [1j * off * np.conj(ph), y2]])
    d = r * r / (sh * den)
    T3 = 0.5j * np.array([[2 * h1 - d, -r * az / den], [-r * az / den, 2 * h2 + d]])
    T0 = np.array([[0, r * az / (2 * den)], [-r * az / (2 * den), 0]], dtype=complex)
    return NahmData(s, T0, T1, T2, T3)


def axis_n2(c, s):
    """Hyperbolic solution for points (0, 0, +-c/2) in the gauge with the s -> 0 pole i sigma_j / 2s."""
    sig = RepGenerators.build(2)
    f = c / (2 * np.sinh(c * s))
    g = c / (2 * np.tanh(c * s))
    return NahmData(s, np.zeros((2, 2), dtype=complex), 1j * f * sig.sigma1,
                    1j * f * sig.sigma2, 1j * g * sig.sigma3)


def axis_n2_frame_gauge(c, s):
    """The same solution as it comes out of the frame construction."""
    sig = RepGenerators.build(2)
    f = c / (2 * np.sinh(c * s))
    g = c / (2 * np.tanh(c * s))
    return NahmData(s, np.zeros((2, 2), dtype=complex), -1j * f * sig.sigma1,
                    1j * f * sig.sigma2, -1j * g * sig.sigma3)


AXIS_GAUGE = np.array([[0, -1j], [1j, 0]])


def basis_n2(spectral, s):
    """Unnormalized two-point basis in closed form, rows as coeffs[l, sheet, k]."""
    a12, a21 = spectral.a[0, 1], spectral.a[1, 0]
    r = spectral.r[0, 1]
    e, e2 = np.exp(s * r), np.exp(2 * s * r)
    out = np.zeros((2, 2, 2), dtype=complex)
    out[0, 0] = [-a12 + a12 * (a21 - a12) / (a21 * e2 - a12), 1]
    out[0, 1] = [0, (a21 - a12) / (a21 * e - a12 / e)]
    out[1, 0] = [(a12 - a21) / (e - 1 / e), 0]
    out[1, 1] = [-a21 + (a12 - a21) / (e2 - 1), 1]
    return out


def norms_n2(spectral, s):
    a12, a21 = spectral.a[0, 1], spectral.a[1, 0]
    r = spectral.r[0, 1]
    zb = np.conj(spectral.z[0] - spectral.z[1])
    q = np.exp(-2 * s * r)
    n1 = (-1 + q) / (-zb * (a21 - a12 * q))
    n2 = (a21 - a12 * q) / (-zb * a12 * a21 * (1 - q))
    return np.array([n1, n2])


def relative_deviation(T, T_ref):
    """Frobenius norm of the difference of the quadruples over that of T_ref."""
    num = sum(np.linalg.norm(a - b) ** 2 for a, b in zip(T.matrices(), T_ref.matrices()))
    den = sum(np.linalg.norm(b) ** 2 for b in T_ref.matrices())
    return float(np.sqrt(num / den)) if den > 0 else float(np.sqrt(num))


@dataclass(frozen=True)
class Alignment:
    g: np.ndarray
    distance: float
    ambiguous: bool


def gauge_align(T, T_ref, rtol=1e-8):
    """Constant unitary g minimizing sum ||g T_mu g^dagger - T_ref,mu||^2.

    For gauge-equivalent data g solves the linear equations g T_mu = R_mu g;
    the least singular vector of that stacked system, projected to the
    nearest unitary, is the minimizer up to the commutant of the data.
    ``ambiguous`` flags a null space of dimension above one.
    """
    n = T.n
    eye = np.eye(n)
    blocks = []
    for A, R in zip(T.matrices(), T_ref.matrices()):
        # vec(g A - R g) with row-major vec: (I kron A^T - R kron I) vec(g)
        blocks.append(np.kron(eye, A.T) - np.kron(R, eye))
    K = np.vstack(blocks)
    _, sv, vh = np.linalg.svd(K)
    g = vh[-1].conj().reshape(n, n)
    u, _, wh = np.linalg.svd(g)
    g = u @ wh
    scale = max(1.0, max(np.linalg.norm(R) for R in T_ref.matrices()))
    ambiguous = numerical_nullspace(K / scale, rtol).shape[1] > 1
    dist = np.sqrt(sum(np.linalg.norm(g @ A @ g.conj().T - R) ** 2
                       for A, R in zip(T.matrices(), T_ref.matrices())))
    return Alignment(g, float(dist), bool(ambiguous))


def n3_first_order_display(spectral, corrected=True):
    """First-order Lax entries at zeta = 0 for three points, transcribed.

    Returns a dict with the zeroth order diagonals under "L0", "M0" and the
    coefficients of exp(-s r_ij) under ("L", i, j) / ("M", i, j) for the lower
    entries (2,1), (3,1), (3,2), indexed from one as displayed.

    As printed, the (3,1) entry of M carries the wrong overall sign; both the
    linearized frame and the exact solve at large s give its negative, which
    ``corrected`` applies.
    """
    A = lambda i, j: spectral.a[i - 1, j - 1]
    z = lambda i: spectral.z[i - 1]
    zz = lambda i, j: spectral.z[i - 1] - spectral.z[j - 1]
    zb = lambda i, j: np.conj(zz(i, j))
    x = lambda i: spectral.x3[i - 1]
    r = lambda i, j: spectral.r[i - 1, j - 1]
    root = lambda v: np.sqrt(complex(v).real)

    L21 = (abs(zz(1, 2)) * root(zb(1, 3) * A(3, 1) * zb(2, 3) * A(3, 2)) * (A(2, 1) - A(1, 2))
           / zz(1, 2)
           * (z(1) * A(1, 3) * (A(1, 2) - A(2, 3)) / (zz(1, 3) * (A(1, 2) - A(1, 3)))
              - z(2) * A(2, 3) * A(3, 2) * (A(1, 2) - A(3, 1))
              / (zz(2, 3) * A(3, 1) * (A(1, 2) - A(3, 2)))))
    L31 = (abs(zz(1, 3)) * root(-zb(1, 2) * A(2, 1) * zb(2, 3) * A(2, 3)) * (A(1, 3) - A(3, 1))
           / zz(1, 3)
           * (z(1) * A(1, 2) * (A(1, 3) - A(3, 2)) / (zz(1, 2) * (A(1, 2) - A(1, 3)))
              - z(3) * A(2, 3) * A(3, 2) * (A(1, 3) - A(2, 1))
              / (zz(2, 3) * A(2, 1) * (A(1, 3) - A(2, 3)))))
    L32 = (abs(zz(2, 3)) * root(zb(1, 2) * A(1, 2) * zb(1, 3) * A(1, 3)) * (A(2, 3) - A(3, 2))
           / zz(2, 3)
           * (z(2) * A(2, 1) * (A(2, 3) - A(3, 1)) / (zz(1, 2) * (A(2, 3) - A(2, 1)))
              - z(3) * A(1, 3) * A(3, 1) * (A(1, 2) - A(2, 3))
              / (zz(1, 3) * A(1, 2) * (A(1, 3) - A(2, 3)))))
    M21 = (abs(zz(1, 2)) * root(zb(1, 3) * A(3, 1) * zb(2, 3) * A(3, 2)) * (A(1, 2) - A(2, 1))
           / zz(1, 2)
           * (x(2) * A(3, 2) * A(2, 3) * (A(1, 2) - A(3, 1))
              / (zz(2, 3) * A(3, 1) * (A(1, 2) - A(3, 2)))
              - (x(1) + r(1, 2)) * A(1, 3) * (A(1, 2) - A(2, 3))
              / (zz(1, 3) * (A(1, 2) - A(1, 3)))))
    M31 = (abs(zz(1, 3)) * root(-zb(1, 2) * A(2, 1) * zb(2, 3) * A(2, 3)) * (A(1, 3) - A(3, 1))
           / zz(1, 3)
           * (x(3) * A(2, 3) * A(3, 2) * (A(1, 3) - A(2, 1))
              / (zz(2, 3) * A(2, 1) * (A(1, 3) - A(2, 3)))
              - (x(1) + r(1, 3)) * A(1, 2) * (A(1, 3) - A(3, 2))
              / (zz(1, 2) * (A(1, 2) - A(1, 3)))))
    M32 = (abs(zz(2, 3)) * root(zb(1, 2) * A(1, 2) * zb(1, 3) * A(1, 3)) * (A(2, 3) - A(3, 2))
           / zz(2, 3)
           * (x(3) * A(1, 3) * A(3, 1) * (A(1, 2) - A(2, 3))
              / (zz(1, 3) * A(1, 2) * (A(2, 3) - A(1, 3)))
              - (x(2) + r(2, 3)) * A(2, 1) * (A(2, 3) - A(3, 1))
              / (zz(1, 2) * (A(2, 1) - A(2, 3)))))
    if corrected:
        M31 = -M31
    return {
        "L0": np.array([z(1), z(2), z(3)]),
        "M0": np.array([x(1), x(2), x(3)], dtype=complex),
        ("L", 2, 1): L21, ("L", 3, 1): L31, ("L", 3, 2): L32,
        ("M", 2, 1): M21, ("M", 3, 1): M31, ("M", 3, 2): M32,
    }
