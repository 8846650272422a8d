"""Large-s expansion of the basis rows in powers of exp(-s r_ij).

Row l is the fixed point of Q = Q0 + T(Q), where Q0 carries A_l on sheet l
and

    T(Q)_j(zeta) = sum_{i != j} exp(-s r_ij) Q_i(a_ji) psi_ji(zeta),

with psi_ji the cardinal polynomial of a_ji among the double points of sheet
j, multiplied by zeta / a_ji on sheets j > l so that Q_j(0) = 0 survives.
Iterating T gives the series. Every term is labelled by an integer vector of
pair multiplicities, so terms are merged only when their exponents agree
symbolically.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import inner_product, poly
from .basis_direct import solve_basis_direct

CUT_FACTOR = 12.0


def pair_index(n):
    """Map unordered pair (i, j), i < j, to its slot in an exponent key."""
    return {(i, j): t for t, (i, j) in enumerate((i, j) for i in range(n) for j in range(i + 1, n))}


def key_exponent(key, spectral):
    """Delta = sum_{i<j} m_ij r_ij for an exponent key."""
    return float(sum(key[t] * spectral.r[i, j] for (i, j), t in pair_index(spectral.n).items()))


@dataclass(frozen=True)
class PerturbSeries:
    """terms maps a multiplicity tuple to per-sheet coefficients (n, n)."""
    l: int
    terms: dict
    max_order: int
    r: np.ndarray

    @property
    def n(self):
        return self.r.shape[0]

    def exponent(self, key):
        idx = pair_index(self.n)
        return float(sum(key[t] * self.r[i, j] for (i, j), t in idx.items()))

    def order_of(self, key):
        return int(sum(key))

    def coefficients(self, s):
        """Summed coefficient array at parameter s."""
        out = np.zeros((self.n, self.n), dtype=complex)
        for key, c in self.terms.items():
            out += np.exp(-s * self.exponent(key)) * c
        return out


def _psi(spectral, l, j, i):
    """Interpolating factor for sheet j taking the value 1 at a_ji."""
    n = spectral.n
    others = [m for m in range(n) if m != j]
    card = poly.lagrange_basis([spectral.a[j, m] for m in others])[others.index(i)]
    card = poly.pad(card, n)
    if j > l:
        card = np.concatenate([[0], card[:-1]]) / spectral.a[j, i]
    return card


def expand_basis(spectral, l, order, cutoff=None):
    """Series for row l through ``order`` applications of the recursion.

    Terms with exponent above ``cutoff`` (default 12 min r_ij) are dropped.
    """
    n = spectral.n
    if cutoff is None:
        cutoff = CUT_FACTOR * spectral.min_separation() if n > 1 else np.inf
    idx = pair_index(n)
    zero = tuple([0] * len(idx))
    base = np.zeros((n, n), dtype=complex)
    base[l] = poly.pad(poly.annihilator(spectral, l), n)
    terms = {zero: base}
    psi = {(j, i): _psi(spectral, l, j, i) for j in range(n) for i in range(n) if i != j}

    frontier = {zero: base}
    for _ in range(order):
        nxt = {}
        for key, c in frontier.items():
            for i in range(n):
                if not np.any(c[i]):
                    continue
                for j in range(n):
                    if j == i:
                        continue
                    k = list(key)
                    k[idx[(min(i, j), max(i, j))]] += 1
                    k = tuple(k)
                    if key_exponent(k, spectral) > cutoff * (1 + 1e-12):
                        continue
                    val = poly.eval_poly(c[i], spectral.a[j, i])
                    term = nxt.setdefault(k, np.zeros((n, n), dtype=complex))
                    term[j] += val * psi[(j, i)]
        for k, c in nxt.items():
            if k in terms:
                terms[k] = terms[k] + c
            else:
                terms[k] = c
        frontier = nxt
        if not frontier:
            break
    return PerturbSeries(l, terms, order, spectral.r.copy())


def eval_series(series, s, zeta):
    return poly.eval_poly(series.coefficients(s), zeta)


def series_basis(spectral, s, order, cutoff=None):
    return np.array([expand_basis(spectral, l, order, cutoff).coefficients(s)
                     for l in range(spectral.n)])


def series_error(spectral, s, order, cutoff=None):
    """Largest coefficient deviation of the truncated series from the exact basis."""
    exact = solve_basis_direct(spectral, s).coeffs
    return float(np.max(np.abs(series_basis(spectral, s, order, cutoff) - exact)))


def matching_defects(series, spectral):
    """Per key, the largest coefficient of exp(-s Delta) in Q_i(a_ij) - exp(-s r_ij) Q_j(a_ij).

    Only keys whose shifted counterparts are all retained are meaningful, so
    keys at the truncation order are skipped.
    """
    n = spectral.n
    idx = pair_index(n)
    out = {}
    for key in series.terms:
        if series.order_of(key) >= series.max_order:
            continue
        worst = 0.0
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                lhs = poly.eval_poly(series.terms[key][i], spectral.a[i, j])
                t = idx[(min(i, j), max(i, j))]
                if key[t] > 0:
                    prev = list(key)
                    prev[t] -= 1
                    prev = tuple(prev)
                    rhs = poly.eval_poly(series.terms[prev][j], spectral.a[i, j]) \
                        if prev in series.terms else 0.0
                else:
                    rhs = 0.0
                worst = max(worst, abs(lhs - rhs))
        out[key] = worst
    return out


def zeroth_order_norms(spectral):
    """Squared norms of the diagonal annihilator rows (exact at s = infinity)."""
    n = spectral.n
    q0 = np.zeros((n, n, n), dtype=complex)
    for l in range(n):
        q0[l, l] = poly.pad(poly.annihilator(spectral, l), n)
    zetas = inner_product.zeta_samples(spectral)
    vals = [np.diag(inner_product.pairing_terms(q0, q0, spectral, z)[0]) for z in zetas]
    return np.mean(vals, axis=0).real


def first_order_lax(spectral):
    """Coefficients of exp(-s r_ij) in L(s, 0) and M(s, 0), keyed by pair (i, j), i < j.

    Linearizes L = Q diag(p) Q^{-1} and M = (-dQ/ds + Q diag(h^+)) Q^{-1}
    around the diagonal zeroth order. Diagonal normalization corrections
    commute with the diagonal zeroth order and do not enter.
    """
    n = spectral.n
    idx = pair_index(n)
    rows = [expand_basis(spectral, l, 1) for l in range(n)]
    q0 = np.array([poly.eval_poly(rows[l].terms[tuple([0] * len(idx))], 0.0) for l in range(n)])
    D = 1 / np.sqrt(zeroth_order_norms(spectral))
    P = np.diag(spectral.p(0.0))
    H = np.diag(spectral.hplus(0.0))
    q0inv = np.linalg.inv(q0)
    out = {}
    for (i, j), t in idx.items():
        key = [0] * len(idx)
        key[t] = 1
        key = tuple(key)
        q1 = np.array([poly.eval_poly(rows[l].terms[key], 0.0) if key in rows[l].terms
                       else np.zeros(n, dtype=complex) for l in range(n)])
        delta = spectral.r[i, j]
        dL = (q1 @ P - P @ q1) @ q0inv
        dM = (delta * q1 + q1 @ H - H @ q1) @ q0inv
        scale = np.outer(D, 1 / D)
        out[(i, j)] = (dL * scale, dM * scale)
    return out


def series_to_json(series, spectral):
    idx = pair_index(series.n)
    terms = []
    for key, c in sorted(series.terms.items()):
        terms.append({
            "pairs": {"%d,%d" % p: key[t] for p, t in idx.items() if key[t]},
            "exponent": series.exponent(key),
            "coefficients": [[[float(v.real), float(v.imag)] for v in sheet] for sheet in c],
        })
    return {"row": series.l, "max_order": series.max_order, "terms": terms}


def dumps(series, spectral):
    return json.dumps(series_to_json(series, spectral), indent=1)
