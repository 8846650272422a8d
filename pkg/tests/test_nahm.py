import numpy as np
import pytest

from nahmsolve import basis_lagrange as BL, geometry as G, nahm
from nahmsolve.errors import ZetaTooCloseToDoublePoint


def test_n1_pipeline():
    sp = G.spectral_data(G.MonopoleConfig([[0.4, -0.7, 1.1]]))
    fr = nahm.orthonormal_frame(sp, 1.0)
    assert np.allclose(fr.dQ, 0)
    smp = nahm.lax_at(sp, 1.0, 0.0, fr.Q, fr.dQ)
    assert smp.L[0, 0] == pytest.approx(0.4 - 0.7j)
    assert smp.M[0, 0] == pytest.approx(1.1)
    T = nahm.nahm_matrices(sp, 1.0)
    assert np.allclose([T.T0[0, 0], T.T1[0, 0], T.T2[0, 0], T.T3[0, 0]],
                       [0, 0.4j, -0.7j, 1.1j])
    rep = nahm.residuals(sp, 1.0)
    assert max(rep.nahm_residuals) < 1e-12 and rep.lax_residual < 1e-12


def test_unnormalized_derivative_e2(e2):
    _, d = BL.solve_all_rows(e2, 1.0, derivative=True)
    expect = -2 * np.sinh(2) / np.cosh(2) ** 2
    assert d[0, 1, 1] == pytest.approx(expect, rel=1e-12)
    assert expect == pytest.approx(-0.512481, abs=1e-6)


def test_normalized_derivative_matches_fd(random_spectral):
    sp = random_spectral(3, 0)
    s, h = 1.2, 1e-6
    d = nahm.basis_derivative(sp, s)
    fd = (nahm.orthonormal_frame(sp, s + h).Q.coeffs
          - nahm.orthonormal_frame(sp, s - h).Q.coeffs) / (2 * h)
    assert np.max(np.abs(d - fd)) <= 1e-7 * np.max(np.abs(d))


def test_e2_nahm_matrices(e2):
    T = nahm.nahm_matrices(e2, 1.0)
    f = 1 / np.sinh(2)
    assert np.allclose(T.T1, 1j * np.array([[1, -f], [-f, -1]]), atol=1e-12)
    assert np.allclose(np.diag(T.T2), 0, atol=1e-12)
    assert abs(T.T0[0, 1]) == pytest.approx(1 / np.cosh(2), rel=1e-12)
    assert T.antihermitian_residual() <= 1e-12


def test_e2_spectrum(e2):
    fr = nahm.orthonormal_frame(e2, 1.0)
    smp = nahm.lax_at(e2, 1.0, 0.3, fr.Q, fr.dQ)
    assert np.allclose(np.sort(np.linalg.eigvals(smp.L).real), [-0.91, 0.91])


def test_double_point_guard(e2):
    fr = nahm.orthonormal_frame(e2, 1.0)
    with pytest.raises(ZetaTooCloseToDoublePoint):
        nahm.lax_at(e2, 1.0, e2.a[0, 1], fr.Q, fr.dQ)
    lim = nahm.lax_at(e2, 1.0, e2.a[0, 1], fr.Q, fr.dQ, limit=True)
    near = nahm.lax_at(e2, 1.0, e2.a[0, 1] + 1e-4, fr.Q, fr.dQ)
    assert np.allclose(lim.L, near.L, atol=1e-3)


@pytest.mark.parametrize("n,seed", [(2, 1), (3, 0), (4, 1)])
def test_verification_report(n, seed, random_spectral):
    sp = random_spectral(n, seed)
    rep = nahm.residuals(sp, 1.5)
    d = rep.as_dict()
    assert all(np.all(np.isfinite(v)) and np.all(np.asarray(v) >= 0) for v in d.values())
    assert max(rep.nahm_residuals) <= 1e-6
    assert rep.lax_residual <= 1e-6
    assert rep.reality_residual <= 1e-9 and rep.reality_residual_M <= 1e-9
    assert max(rep.degree_residuals) <= 1e-8
    assert rep.spectrum_residual <= 1e-8
    assert rep.gram_residual <= 1e-10
    assert rep.antihermitian_residual <= 1e-10


def test_equilateral_degree(equilateral):
    fr = nahm.orthonormal_frame(equilateral, 2.0)
    assert max(nahm.degree_residuals(equilateral, 2.0, fr)) <= 1e-8


def test_pole_cancellation(random_spectral):
    assert nahm.pole_cancellation(random_spectral(3, 1), 1.0) <= 1e-8


def test_isospectral_in_s(random_spectral):
    sp = random_spectral(3, 2)
    z = 0.3 - 0.6j
    for s in (0.5, 1.0, 3.0):
        fr = nahm.orthonormal_frame(sp, s)
        L = nahm.lax_at(sp, s, z, fr.Q, fr.dQ).L
        assert nahm.spectrum_residual(L, sp.p(z)) <= 1e-8


def test_fd_order(e2):
    r1 = np.max(nahm.nahm_fd_residuals(e2, 0.5, 1e-2))
    r2 = np.max(nahm.nahm_fd_residuals(e2, 0.5, 5e-3))
    assert 3.5 <= r1 / r2 <= 4.5


def test_boundary_e2(e2):
    b = nahm.boundary_report(e2, 1e-3, 8.0)
    assert np.allclose(b.eigenvalues, [1, -1], atol=1e-2)
    assert b.casimir_residual <= 5e-2 * 3
    T = nahm.nahm_matrices(e2, 8.0)
    assert np.linalg.norm(T.T1 - 1j * np.diag([1, -1])) == pytest.approx(
        np.sqrt(2) / np.sinh(16), rel=1e-6)
    with pytest.raises(ValueError):
        nahm.boundary_report(e2, 2.0, 1.0)


def test_precision_options_agree(random_spectral):
    sp = random_spectral(3, 1)
    a = nahm.nahm_matrices(sp, 1.0)
    b = nahm.nahm_matrices(sp, 1.0, precision="extended")
    assert max(np.linalg.norm(x - y) for x, y in zip(a.matrices(), b.matrices())) <= 1e-10
