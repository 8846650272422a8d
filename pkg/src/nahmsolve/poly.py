"""Complex polynomials stored as ascending coefficient arrays.

A polynomial is a 1-d complex array ``c`` with ``c[k]`` the coefficient of
zeta**k. Tuples of polynomials (one per sheet) are 2-d arrays indexed
``[sheet, k]`` and a full basis is a 3-d array ``[row, sheet, k]``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DuplicateNodes

TINY = 1e-300


def _arr(c):
    """Complex array, or an object array left as is (extended precision)."""
    c = np.asarray(c)
    return c if c.dtype == object else c.astype(complex)


@dataclass(frozen=True)
class PolyTuple:
    """One polynomial per sheet; coeffs[i, k] multiplies zeta**k on sheet i."""
    coeffs: np.ndarray
    s: float

    @property
    def n(self):
        return self.coeffs.shape[0]

    def evaluate(self, zeta):
        return eval_poly(self.coeffs, zeta)


def trim(c):
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    nz = np.nonzero(np.abs(c) > TINY)[0]
    if len(nz) == 0:
        return np.zeros(1, dtype=complex)
    return c[:nz[-1] + 1]


def degree(c):
    c = trim(c)
    if len(c) == 1 and c[0] == 0:
        return -1
    return len(c) - 1


def pad(c, length):
    c = _arr(c)
    out = np.zeros(c.shape[:-1] + (length,), dtype=c.dtype)
    m = min(length, c.shape[-1])
    out[..., :m] = c[..., :m]
    return out


def eval_poly(c, zeta):
    """Horner evaluation along the last axis; broadcasts over leading axes."""
    c = _arr(c)
    zeta = _arr(zeta)
    dt = object if object in (c.dtype, zeta.dtype) else complex
    out = np.zeros(np.broadcast_shapes(c.shape[:-1], zeta.shape), dtype=dt)
    for k in range(c.shape[-1] - 1, -1, -1):
        out = out * zeta + c[..., k]
    return out


def derivative(c):
    c = np.asarray(c, dtype=complex)
    if c.shape[-1] <= 1:
        return np.zeros(c.shape[:-1] + (1,), dtype=complex)
    return c[..., 1:] * np.arange(1, c.shape[-1])


def from_roots(roots):
    """Monic polynomial with the given roots; the empty product is 1."""
    roots = _arr(roots)
    c = np.ones(1, dtype=roots.dtype)
    for r in roots:
        c = np.concatenate([[0], c]) - r * np.concatenate([c, [0]])
    return c


def multiply(a, b):
    return np.convolve(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def reflect(c, n):
    """(-zeta)**(n-1) * conj(P(-1/conj(zeta))) for deg P <= n-1.

    The result is again a polynomial of degree <= n-1; this is the partner
    polynomial entering the inner product and the frame inverse.
    """
    c = pad(c, n)
    k = np.arange(n)
    sign = (-1.0) ** (n - 1 - k)
    return (np.conj(c) * sign)[..., ::-1]


def _check_nodes(nodes):
    nodes = _arr(nodes)
    if len(nodes) > 1:
        diff = np.abs(nodes[:, None] - nodes[None, :])
        np.fill_diagonal(diff, np.inf)
        scale = max(1.0, float(np.max(np.abs(nodes))))
        if np.min(diff) <= 1e-14 * scale:
            raise DuplicateNodes("interpolation nodes are not pairwise distinct")
    return nodes


def barycentric_weights(nodes):
    nodes = _check_nodes(nodes)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def barycentric_eval(nodes, values, zeta):
    """Evaluate the interpolant through (nodes, values) at zeta."""
    nodes = np.asarray(nodes, dtype=complex)
    values = np.asarray(values, dtype=complex)
    w = barycentric_weights(nodes)
    d = zeta - nodes
    hit = np.nonzero(d == 0)[0]
    if len(hit):
        return values[hit[0]]
    t = w / d
    return np.sum(t * values) / np.sum(t)


def lagrange_interpolate(nodes, values):
    """Coefficients of the unique polynomial of degree < len(nodes).

    Divided differences are formed in Newton form and then expanded to the
    monomial basis one nested factor at a time.
    """
    nodes = _check_nodes(nodes)
    values = np.asarray(values, dtype=complex)
    m = len(nodes)
    if m == 0:
        return np.zeros(1, dtype=complex)
    dd = values.astype(complex).copy()
    for j in range(1, m):
        dd[j:] = (dd[j:] - dd[j - 1:-1]) / (nodes[j:] - nodes[:m - j])
    c = np.array([dd[-1]], dtype=complex)
    for j in range(m - 2, -1, -1):
        # c <- c * (zeta - nodes[j]) + dd[j]
        c = np.concatenate([[0], c]) - nodes[j] * np.concatenate([c, [0]])
        c[0] += dd[j]
    return c


def lagrange_basis(nodes):
    """Rows are the coefficient vectors of the cardinal polynomials.

    Row j is prod_{m != j} (zeta - nodes[m]) / (nodes[j] - nodes[m]).
    """
    nodes = _check_nodes(nodes)
    m = len(nodes)
    out = np.zeros((m, max(m, 1)), dtype=nodes.dtype)
    for j in range(m):
        others = np.delete(nodes, j)
        out[j, :m] = from_roots(others) / np.prod(nodes[j] - others)
    if m == 0:
        out = np.zeros((0, 1), dtype=complex)
    return out


def cardinal_value(nodes, j, zeta):
    """Value of the j-th cardinal polynomial at zeta via the product formula."""
    nodes = np.asarray(nodes, dtype=complex)
    others = np.delete(nodes, j)
    return complex(np.prod((zeta - others) / (nodes[j] - others)))


def annihilator(spectral, k):
    """A_k(zeta) = prod_{j != k} (zeta - a_kj), monic of degree n - 1."""
    return annihilator_from(spectral.a, k)


def annihilator_from(a, k):
    return from_roots([a[k, j] for j in range(a.shape[0]) if j != k])
