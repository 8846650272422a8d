import numpy as np
import pytest

from nahmsolve import basis_direct as BD, geometry as G
from nahmsolve.errors import ScaleOverflow, SingularBlock

from helpers import matching_defect, pattern_defect

E2_ROW0 = (0.964028, 0.265802)
E2_ROW1 = (-0.275721, -1.037315)


def test_constraint_matrix_shape_and_s0_row(e2):
    Xi = BD.build_constraint_matrix(e2, 0.7)
    assert Xi.shape == (2, 4)
    Xi0 = BD.build_constraint_matrix(e2, 0.0)
    # row (0, 1): (1, a) kron (1, -1) with a = -1
    assert np.allclose(Xi0[0], [1, -1, -1, 1])


def test_constant_tuples_in_null_space_at_s0(random_spectral):
    sp = random_spectral(3, 0)
    Xi = BD.build_constraint_matrix(sp, 0.0)
    for r in ([1, 0, 0], [0.3, -1j, 2]):
        v = np.kron(r, np.ones(3))
        assert np.max(np.abs(Xi @ v)) < 1e-12 * np.max(np.abs(Xi))


def test_scale_guard(e2):
    with pytest.raises(ScaleOverflow):
        BD.build_constraint_matrix(e2, 400.0)
    with pytest.raises(ScaleOverflow):
        BD.solve_basis_direct(e2, 400.0)


def test_n1_basis():
    sp = G.spectral_data(G.MonopoleConfig([[0.2, 0.1, -0.3]]))
    assert np.array_equal(BD.solve_basis_direct(sp, 1.0).coeffs, np.ones((1, 1, 1)))


def test_e2_rows(e2):
    q = BD.solve_basis_direct(e2, 1.0).coeffs
    assert q[0, 0] == pytest.approx([E2_ROW0[0], 1], abs=1e-6)
    assert q[0, 1] == pytest.approx([0, E2_ROW0[1]], abs=1e-6)
    assert q[1, 0] == pytest.approx([E2_ROW1[0], 0], abs=1e-6)
    assert q[1, 1] == pytest.approx([E2_ROW1[1], 1], abs=1e-6)
    # closed forms behind the rounded numbers
    assert q[0, 0, 0] == pytest.approx(1 - 2 / (np.exp(4) + 1), rel=1e-13)
    assert q[0, 1, 1] == pytest.approx(1 / np.cosh(2), rel=1e-13)
    assert q[1, 0, 0] == pytest.approx(-1 / np.sinh(2), rel=1e-13)
    assert q[1, 1, 0] == pytest.approx(-1 - 2 / (np.exp(4) - 1), rel=1e-13)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 5.0])
def test_conditions_A(n, s, random_spectral):
    sp = random_spectral(n, n)
    q = BD.solve_basis_direct(sp, s).coeffs
    assert matching_defect(q, sp, s) <= 1e-9
    assert pattern_defect(q) <= 1e-10


def test_singular_block_at_s0(e2):
    with pytest.raises(SingularBlock):
        BD.solve_basis_direct(e2, 0.0)


def test_large_s_diagonalizes(random_spectral):
    from nahmsolve import poly
    sp = random_spectral(3, 4)
    s = 8.0
    q = BD.solve_basis_direct(sp, s).coeffs
    bound = 50 * np.exp(-s * sp.min_separation())
    for l in range(3):
        for i in range(3):
            target = poly.pad(poly.annihilator(sp, l), 3) if i == l else np.zeros(3)
            assert np.max(np.abs(q[l, i] - target)) <= bound


def test_section_diagnostics(e2, equilateral):
    d = BD.section_space_diagnostics(e2, 1.0)
    assert d.block_nullity == 0 and d.smallest_singular_value > 1e-10
    d0 = BD.section_space_diagnostics(equilateral, 0.0)
    assert d0.block_nullity == 2
    assert d0.hitchin_angle <= 1e-8
    one = G.spectral_data(G.MonopoleConfig([[0, 0, 0]]))
    assert BD.section_space_diagnostics(one, 2.0).block_nullity == 0


@pytest.mark.parametrize("n,expected", [(2, 1), (3, 2), (4, 4), (5, 6), (6, 9)])
def test_s0_null_space_is_curve_sections(n, expected, random_spectral):
    d = BD.section_space_diagnostics(random_spectral(n, 1), 0.0)
    assert d.block_nullity == d.curve_nullity == expected
    assert d.curve_angle <= 1e-8
    if n <= 3:
        assert d.hitchin_angle <= 1e-8
    else:
        assert d.block_nullity > n - 1


def test_curve_sections_match(random_spectral):
    sp = random_spectral(4, 0)
    Xi = BD.scaled_constraint_matrix(sp, 0.0)[:, :12]
    assert np.max(np.abs(Xi @ BD.curve_sections(sp))) <= 1e-12
