"""End-to-end acceptance checks, one test per criterion."""

import time

import numpy as np
import pytest

from nahmsolve import (basis_direct as BD, basis_lagrange as BL, dirac, geometry as G, nahm,
                       oracles, perturbation as P)

SEEDS = (0, 1, 2)
SPECTRAL = {}


def spectral(n, seed):
    if (n, seed) not in SPECTRAL:
        SPECTRAL[n, seed] = G.spectral_data(G.random_config(n, seed))
    return SPECTRAL[n, seed]


def rel(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


def test_closed_form_n2(e2, verdict):
    t0 = time.perf_counter()
    worst = max(oracles.relative_deviation(nahm.nahm_matrices(e2, s), oracles.exact_n2(G.E2, s))
                for s in (0.5, 1.0, 2.0, 5.0))
    dt = time.perf_counter() - t0
    verdict(1, worst <= 1e-9 and dt < 1.0, "max deviation %.2e, %.2f s" % (worst, dt))


def test_solver_equivalence(verdict):
    t0 = time.perf_counter()
    worst = 0.0
    for n in (2, 3, 4, 5):
        for seed in SEEDS:
            sp = spectral(n, seed)
            for s in (0.5, 2.0, 5.0):
                worst = max(worst, rel(BL.solve_all_rows(sp, s).coeffs,
                                       BD.solve_basis_direct(sp, s).coeffs))
    dt = time.perf_counter() - t0
    verdict(2, worst <= 1e-8 and dt < 10.0, "max relative gap %.2e, %.2f s" % (worst, dt))


def test_nahm_residual(verdict):
    worst, ratios = 0.0, []
    for n in (2, 3, 4, 5):
        for seed in SEEDS:
            sp = spectral(n, seed)
            for s in (0.5, 2.0, 5.0):
                worst = max(worst, np.max(nahm.nahm_fd_residuals(sp, s, 1e-5, precision="auto")))
                # the step ratio is read where truncation error dominates rounding
                r1 = np.max(nahm.nahm_fd_residuals(sp, s, 1e-2, precision="auto"))
                r2 = np.max(nahm.nahm_fd_residuals(sp, s, 5e-3, precision="auto"))
                ratios.append(r1 / r2)
    ok = worst <= 1e-6 and all(3.5 <= q <= 4.5 for q in ratios)
    verdict(3, ok, "max residual %.2e at h=1e-5, halving ratios in [%.2f, %.2f]"
            % (worst, min(ratios), max(ratios)))


REPORT_CASES = [(n, 0, s) for n in (2, 3, 4, 5) for s in (0.5, 2.0)]


@pytest.fixture(scope="module")
def reports():
    return [nahm.residuals(spectral(n, seed), s, precision="auto")
            for n, seed, s in REPORT_CASES]


def test_isospectral_and_degrees(reports, verdict):
    spectrum = max(r.spectrum_residual for r in reports)
    deg = max(max(r.degree_residuals) for r in reports)
    verdict(4, spectrum <= 1e-8 and deg <= 1e-8,
            "spectrum %.2e, degree excess %.2e" % (spectrum, deg))


def test_reality(reports, verdict):
    rl = max(r.reality_residual for r in reports)
    rm = max(r.reality_residual_M for r in reports)
    verdict(5, max(rl, rm) <= 1e-9, "L %.2e, M %.2e" % (rl, rm))


def test_orthonormality(reports, verdict):
    g = max(r.gram_residual for r in reports)
    sp = max(r.gram_spread for r in reports)
    verdict(6, g <= 1e-10 and sp <= 1e-9, "gram %.2e, zeta spread %.2e" % (g, sp))


@pytest.fixture(scope="module")
def boundaries():
    return {(n, seed): nahm.boundary_report(spectral(n, seed), 1e-3, 8.0, 6.0, precision="auto")
            for n in (2, 3, 4) for seed in SEEDS}


def test_boundary_small_s(boundaries, verdict):
    ev = max(b.eigenvalue_error for b in boundaries.values())
    cas = max(b.casimir_residual / (5e-2 * (len(b.eigenvalues) ** 2 - 1))
              for b in boundaries.values())
    verdict(7, ev <= 1e-2 and cas <= 1.0,
            "n<=4: eigenvalue error %.2e, casimir at %.2f of its bound" % (ev, cas))


def test_boundary_large_s(boundaries, verdict):
    dev = max(abs(b.decay_exponent / b.min_separation - 1) for b in boundaries.values())
    verdict(8, dev <= 0.2, "worst relative rate deviation %.3f" % dev)


def test_perturbation(equilateral, e2, verdict):
    e3 = P.series_error(equilateral, 3.0, 1)
    e4 = P.series_error(equilateral, 4.0, 1)
    expect = np.exp(-2 * equilateral.min_separation())
    ratio_dev = abs(e4 / e3 / expect - 1)
    disp = 0.0
    for seed in SEEDS:
        sp = spectral(3, seed)
        lin = P.first_order_lax(sp)
        shown = oracles.n3_first_order_display(sp)
        for kind, k in (("L", 0), ("M", 1)):
            for i, j in ((2, 1), (3, 1), (3, 2)):
                want = shown[kind, i, j]
                disp = max(disp, abs(lin[(j - 1, i - 1)][k][i - 1, j - 1] - want) / abs(want))
    resum = max(np.max(np.abs(P.series_basis(e2, s, 40, cutoff=np.inf) - oracles.basis_n2(e2, s)))
                for s in (0.5, 1.0, 2.0, 5.0))
    verdict(9, ratio_dev <= 0.2 and disp <= 1e-9 and resum <= 1e-10,
            "ratio off by %.3f, display %.2e, resummation %.2e" % (ratio_dev, disp, resum))


def test_section_dimension(equilateral, verdict):
    # for n >= 4 the s = 0 null space also holds eta^k r(zeta), so the
    # r(zeta)(1, ..., 1) form is checked where it is the whole null space
    small = [equilateral] + [spectral(n, seed) for n in (2, 3) for seed in SEEDS]
    large = [spectral(n, seed) for n in (4, 5) for seed in SEEDS]
    nullity_ok, angle, smin = True, 0.0, np.inf
    for sp in small + large:
        d0 = BD.section_space_diagnostics(sp, 0.0)
        if sp.n <= 3:
            nullity_ok &= d0.block_nullity == sp.n - 1
            angle = max(angle, d0.hitchin_angle)
        else:
            nullity_ok &= d0.block_nullity == d0.curve_nullity
            angle = max(angle, d0.curve_angle)
        for s in (0.5, 2.0, 5.0):
            smin = min(smin, BD.section_space_diagnostics(sp, s).smallest_singular_value)
    verdict(10, nullity_ok and angle <= 1e-8 and smin > 1e-10,
            "nullity as expected: %s (n<=3 r(zeta)(1..1), n=4,5 with eta terms), "
            "angle %.2e, min singular ratio %.2e" % (nullity_ok, angle, smin))


def test_dirac_nahm_side(verdict):
    worst = 0.0
    for n in (1, 2, 3):
        sp = spectral(n, 1)
        for x in ((0.3, 0.4, 1.2), (-0.7, 0.2, -0.5)):
            worst = max(worst, *dirac.nahm_dirac_residuals(sp, 1.0, x))
    verdict(11, worst <= 1e-6, "max W/V residual %.2e" % worst)


def test_dirac_monopole_side(verdict):
    res, dev = 0.0, 0.0
    s = 1.0
    for n in (1, 2):
        cfg = G.random_config(n, 0)
        co = nahm.orthonormal_frame(G.spectral_data(cfg), s).Q.coeffs[0]
        for x in dirac.sample_points(cfg, 5):
            res = max(res, dirac.adjoint_residual(cfg, s, x, co))
        kappa = dirac.radial_decay_exponent(cfg, s, co, (0.3, 0.5, 0.8),
                                            center=cfg.points.mean(axis=0))
        dev = max(dev, abs(kappa / s - 1))
    verdict(12, res <= 1e-4 and dev <= 0.2, "residual %.2e, decay off by %.3f" % (res, dev))
