"""Hitchin's inner product on tuples of sheet polynomials.

For tuples P, R of degree <= n-1 satisfying the matching conditions,

    <P, R> = sum_i P_i(zeta) R~_i(zeta) / prod_{j != i} (p_i(zeta) - p_j(zeta)),

with R~_i(zeta) = (-zeta)**(n-1) conj(R_i(-1/conj(zeta))), is independent of
zeta. It is evaluated at a few sample points and the agreement between
samples is reported as a consistency check.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import poly
from .basis_direct import BasisMatrix
from .errors import InconsistentSpread, NonPositiveNorm, ZetaAtSingularity

SAMPLE_RADIUS = 0.7
SAMPLE_COUNT = 5
SAMPLE_CLEARANCE = 1e-3
SPREAD_TOL = 1e-6
NORM_IMAG_TOL = 1e-4


def zeta_samples(spectral, count=SAMPLE_COUNT, radius=SAMPLE_RADIUS, seed=0,
                 clearance=SAMPLE_CLEARANCE):
    """Seeded points on |zeta| = radius kept away from every double point."""
    rng = np.random.default_rng(seed)
    nodes = spectral.double_points() if spectral.n > 1 else np.zeros(0)
    out = []
    while len(out) < count:
        z = radius * np.exp(2j * np.pi * rng.random())
        if len(nodes) == 0 or np.min(np.abs(nodes - z)) > clearance:
            out.append(z)
    return np.array(out)


def _check_zeta(spectral, zeta):
    if spectral.n > 1 and np.min(np.abs(spectral.double_points() - zeta)) < SAMPLE_CLEARANCE:
        raise ZetaAtSingularity("zeta = %s is within %.0e of a double point"
                                % (zeta, SAMPLE_CLEARANCE))


def pairing_terms(P, R, spectral, zeta):
    """Matrix of summed values <P_l, R_m> at zeta and the matching term scale.

    P and R are coefficient arrays of shape (rows, n, degree); the results
    have shape (rows_P, rows_R).
    """
    n = spectral.n
    _check_zeta(spectral, zeta)
    Pv = poly.eval_poly(P, zeta)
    Rt = poly.eval_poly(poly.reflect(R, n), zeta)
    den = spectral.denominators(zeta)
    values = (Pv / den) @ Rt.T
    scale = np.abs(Pv / den) @ np.abs(Rt).T
    return values, scale


def _sampled(P, R, spectral, zetas):
    if zetas is None:
        zetas = zeta_samples(spectral)
    vals, scales = zip(*(pairing_terms(P, R, spectral, z) for z in zetas))
    vals = np.array(vals)
    mean = vals.mean(axis=0)
    scale = np.maximum(np.max(np.array(scales), axis=0), np.abs(mean))
    scale = np.where(scale > 0, scale, 1.0)
    spread = float(np.max(np.abs(vals - mean) / scale))
    return mean, spread


def pairing(p, r, spectral, zetas=None, tol=SPREAD_TOL, return_spread=False):
    """<p, r> for two PolyTuples, averaged over ``zetas``.

    The spread is the largest deviation of a single sample from the mean,
    relative to the magnitude of the summed terms. A spread above ``tol``
    means the tuples do not satisfy the matching conditions.
    """
    mean, spread = _sampled(p.coeffs[None], r.coeffs[None], spectral, zetas)
    if spread > tol:
        raise InconsistentSpread("pairing varies with zeta (spread %.3g > %.3g)" % (spread, tol))
    value = complex(mean[0, 0])
    return (value, spread) if return_spread else value


@dataclass(frozen=True)
class GramReport:
    gram: np.ndarray
    zeta_spread: float


def gram(basis, spectral, zetas=None, tol=SPREAD_TOL):
    G, spread = _sampled(basis.coeffs, basis.coeffs, spectral, zetas)
    if spread > tol:
        raise InconsistentSpread("Gram matrix varies with zeta (spread %.3g > %.3g)"
                                 % (spread, tol))
    return GramReport(G, spread)


def row_norms(basis, spectral, zetas=None):
    """Positive squared norms of the rows; raises NonPositiveNorm otherwise."""
    d = np.diag(gram(basis, spectral, zetas).gram)
    bad = (d.real <= 0) | (np.abs(d.imag) > NORM_IMAG_TOL * np.abs(d))
    if np.any(bad):
        raise NonPositiveNorm("row norms %s are not positive reals" % d[bad])
    return d.real


def normalize(basis, spectral, zetas=None):
    if basis.normalized:
        return basis
    norms = row_norms(basis, spectral, zetas)
    coeffs = basis.coeffs / np.sqrt(norms)[:, None, None]
    return replace(basis, coeffs=coeffs, normalized=True)


def to_section_frame(Qhat, spectral, zeta):
    """U[l, j] = Q[l, j](zeta) exp(-s h_j^+(zeta))."""
    return Qhat.evaluate(zeta) * np.exp(-Qhat.s * spectral.hplus(zeta))[None, :]


__all__ = ["BasisMatrix", "GramReport", "gram", "normalize", "pairing", "pairing_terms",
           "row_norms", "to_section_frame", "zeta_samples"]
