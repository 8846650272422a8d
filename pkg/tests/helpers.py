import numpy as np

from nahmsolve import poly


def matching_defect(coeffs, spectral, s):
    """Largest relative |Q_i(a_ij) - exp(-s r_ij) Q_j(a_ij)| over rows and pairs."""
    worst = 0.0
    for row in np.atleast_3d(coeffs).reshape(-1, *coeffs.shape[-2:]):
        scale = max(1.0, np.max(np.abs(row)))
        for i, j in spectral.off_diagonal_pairs():
            a = spectral.a[i, j]
            qi, qj = poly.eval_poly(row[i], a), poly.eval_poly(row[j], a)
            worst = max(worst, abs(qi - np.exp(-s * spectral.r[i, j]) * qj) / scale)
    return worst


def pattern_defect(coeffs):
    """Deviation from conditions (A): row l monic of degree n-1 on sheet l,
    degree <= n-2 on sheets i < l, vanishing at zero on sheets i > l."""
    n = coeffs.shape[0]
    worst = 0.0
    for l in range(n):
        worst = max(worst, abs(coeffs[l, l, n - 1] - 1))
        for i in range(l):
            worst = max(worst, abs(coeffs[l, i, n - 1]))
        for i in range(l + 1, n):
            worst = max(worst, abs(coeffs[l, i, 0]))
    return worst
