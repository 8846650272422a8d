import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nahmsolve import poly
from nahmsolve.errors import DuplicateNodes


def test_eval_examples():
    assert poly.eval_poly([0], 2.5 + 1j) == 0
    assert poly.eval_poly([1, 0, -1], -1) == 0
    assert poly.eval_poly([0.964028, 1], 0) == pytest.approx(0.964028)


def test_eval_broadcasts_over_tuples():
    c = np.array([[1, 2], [0, 1j]])
    assert np.allclose(poly.eval_poly(c, 2.0), [5, 2j])


def test_interpolation_examples():
    assert np.allclose(poly.trim(poly.lagrange_interpolate([0, 1], [0, 1])), [0, 1])
    assert poly.degree(poly.lagrange_interpolate([-1, 1], [0, 0])) == -1
    assert np.allclose(poly.lagrange_interpolate([-1, 0, 1], [0, -1, 0]), [-1, 0, 1])


def test_duplicate_nodes():
    with pytest.raises(DuplicateNodes):
        poly.lagrange_interpolate([1, 1], [0, 1])


def test_annihilator_examples(e2):
    assert np.allclose(poly.from_roots([]), [1])
    assert np.allclose(poly.annihilator(e2, 0), [1, 1])
    assert np.allclose(poly.annihilator(e2, 1), [-1, 1])


def test_annihilator_roots(random_spectral):
    sp = random_spectral(4, 1)
    for k in range(4):
        A = poly.annihilator(sp, k)
        assert len(A) == 4 and A[-1] == 1
        for j in range(4):
            if j != k:
                assert abs(poly.eval_poly(A, sp.a[k, j])) < 1e-12 * max(1, np.max(np.abs(A)))


def test_reflect_matches_definition(rng):
    n = 4
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    for z in (0.3 + 0.7j, -1.2 + 0.1j):
        direct = (-z) ** (n - 1) * np.conj(poly.eval_poly(c, -1 / np.conj(z)))
        assert poly.eval_poly(poly.reflect(c, n), z) == pytest.approx(direct)


def test_cardinal_and_barycentric(rng):
    nodes = np.exp(1j * np.array([0.1, 1.3, 2.9, 4.4]))
    vals = rng.normal(size=4) + 1j * rng.normal(size=4)
    c = poly.lagrange_interpolate(nodes, vals)
    z = 0.2 - 0.5j
    assert poly.barycentric_eval(nodes, vals, z) == pytest.approx(poly.eval_poly(c, z))
    B = poly.lagrange_basis(nodes)
    for j in range(4):
        assert poly.cardinal_value(nodes, j, z) == pytest.approx(poly.eval_poly(B[j], z))
        assert np.allclose(poly.eval_poly(B[j], nodes), np.eye(4)[j], atol=1e-12)


cplx = st.builds(complex, st.floats(-2, 2), st.floats(-2, 2))


@settings(max_examples=50, deadline=None)
@given(st.lists(cplx, min_size=1, max_size=6), st.integers(0, 10 ** 6))
def test_interpolation_round_trip(coeffs, seed):
    c = np.array(coeffs)
    d = len(c) - 1
    rng = np.random.default_rng(seed)
    nodes = np.exp(2j * np.pi * (np.arange(d + 1) + 0.3 * rng.random(d + 1)) / (d + 1))
    got = poly.lagrange_interpolate(nodes, poly.eval_poly(c, nodes))
    assert np.max(np.abs(poly.pad(got, d + 1) - c)) <= 1e-9 * max(1, np.max(np.abs(c)))


def test_object_arrays_stay_exact():
    import mpmath
    with mpmath.workdps(30):
        roots = [mpmath.mpc(1, 1) / 3, mpmath.mpc(-1, 2) / 7]
        c = poly.from_roots(roots)
        assert c.dtype == object
        assert abs(poly.eval_poly(c, roots[0])) < mpmath.mpf(10) ** -28
