"""Spectral curve data for a configuration of Dirac monopoles.

Each point x_j in R^3 gives a sheet eta = p_j(zeta) of the spectral curve,
with p_j(zeta) = z_j - 2 x_j^3 zeta - conj(z_j) zeta^2 and z_j = x_j^1 + i x_j^2.
Sheets i and j cross above the two double points a_ij and a_ji, the
stereographic images of the directions from x_i to x_j and back.

Sheet indices are zero based throughout the package.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import (DegenerateConfig, DuplicatePoints, GenericityFailure,
                     IndexOutOfRange, VerticalPair, ZeroZeta)

MIN_MODULUS = 1e-6
MAX_MODULUS = 1e6
MIN_SEPARATION = 1e-6
MAX_ROTATION_ATTEMPTS = 1000


@dataclass(frozen=True)
class MonopoleConfig:
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True).reshape(-1, 3)
        if len(pts) < 1:
            raise DuplicatePoints("a configuration needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise DuplicatePoints("point coordinates must be finite")
        d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
        np.fill_diagonal(d, np.inf)
        if len(pts) > 1 and np.min(d) <= 0.0:
            i, j = np.unravel_index(np.argmin(d), d.shape)
            raise DuplicatePoints(
                "points must be pairwise distinct (r_ij > 0); points %d and %d coincide"
                % (i, j))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return len(self.points)


@dataclass(frozen=True)
class SheetPolynomial:
    j: int
    coefficients: np.ndarray

    def __call__(self, zeta):
        c0, c1, c2 = self.coefficients
        return c0 + zeta * (c1 + zeta * c2)


@dataclass(frozen=True)
class PairData:
    i: int
    j: int
    a: complex
    r: float
    z: complex


@dataclass(frozen=True)
class SpectralData:
    """All s-independent data the solvers need, as dense arrays.

    ``a[i, j]`` is the double point a_ij and ``r[i, j]`` the separation; the
    diagonals hold nan and 0 respectively.
    """
    config: MonopoleConfig
    z: np.ndarray
    x3: np.ndarray
    a: np.ndarray
    r: np.ndarray

    @property
    def n(self):
        return self.config.n

    @property
    def points(self):
        return self.config.points

    def p(self, zeta):
        """Values p_j(zeta) for all sheets."""
        return self.z - 2 * self.x3 * zeta - np.conj(self.z) * zeta ** 2

    def hplus(self, zeta):
        return self.x3 + np.conj(self.z) * zeta

    def hminus(self, zeta):
        if zeta == 0:
            raise ZeroZeta("h-minus is singular at zeta = 0")
        return -self.z / zeta + self.x3

    def denominators(self, zeta):
        """prod_{l != i} (p_i(zeta) - p_l(zeta)) for each sheet i."""
        pv = self.p(zeta)
        diff = pv[:, None] - pv[None, :]
        np.fill_diagonal(diff, 1.0)
        return np.prod(diff, axis=1)

    def off_diagonal_pairs(self):
        return [(i, j) for i in range(self.n) for j in range(self.n) if i != j]

    def double_points(self):
        return np.array([self.a[i, j] for i, j in self.off_diagonal_pairs()],
                        dtype=complex)

    def min_separation(self):
        if self.n < 2:
            return np.inf
        return float(np.min(self.r[~np.eye(self.n, dtype=bool)]))


def sheet_polynomial(cfg, j):
    if not 0 <= j < cfg.n:
        raise IndexOutOfRange("sheet index %d outside 0..%d" % (j, cfg.n - 1))
    x1, x2, x3 = cfg.points[j]
    z = complex(x1, x2)
    return SheetPolynomial(j, np.array([z, -2 * x3, -np.conj(z)], dtype=complex))


def double_point(xi, xj):
    """a_ij for the ordered pair of points (xi, xj)."""
    r = float(np.linalg.norm(np.subtract(xj, xi)))
    denom = complex(xj[0] - xi[0], -(xj[1] - xi[1]))
    scale = max(r, 1e-300)
    if abs(denom) <= 1e-14 * scale:
        raise VerticalPair("points are vertically separated; double point at 0 or infinity")
    return (xi[2] - xj[2] + r) / denom, r


def spectral_data(cfg, check_distinct=True, rel_tol=MIN_SEPARATION):
    n = cfg.n
    pts = cfg.points
    z = pts[:, 0] + 1j * pts[:, 1]
    x3 = pts[:, 2].copy()
    a = np.full((n, n), np.nan + 0j)
    r = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                a[i, j], r[i, j] = double_point(pts[i], pts[j])
    if check_distinct and n > 1:
        vals = a[~np.eye(n, dtype=bool)]
        scale = np.max(np.abs(vals))
        diff = np.abs(vals[:, None] - vals[None, :]) / scale
        np.fill_diagonal(diff, np.inf)
        if np.min(diff) < rel_tol:
            raise DegenerateConfig("two double points coincide within tolerance")
    return SpectralData(cfg, z, x3, a, r)


def pair_data(cfg):
    sp = spectral_data(cfg)
    return [PairData(i, j, complex(sp.a[i, j]), float(sp.r[i, j]), complex(sp.z[i] - sp.z[j]))
            for i, j in sp.off_diagonal_pairs()]


def h_split(cfg, j, zeta):
    """(h_j^+(zeta), h_j^-(zeta)), the splitting -h^+ - h^- = p_j / zeta."""
    if not 0 <= j < cfg.n:
        raise IndexOutOfRange("sheet index %d outside 0..%d" % (j, cfg.n - 1))
    x1, x2, x3 = cfg.points[j]
    hp = x3 + complex(x1, -x2) * zeta
    if zeta == 0:
        raise ZeroZeta("h-minus is singular at zeta = 0")
    hm = -complex(x1, x2) / zeta + x3
    return hp, hm


def is_generic(cfg, min_modulus=MIN_MODULUS, max_modulus=MAX_MODULUS,
               min_separation=MIN_SEPARATION):
    if cfg.n < 2:
        return True
    try:
        sp = spectral_data(cfg, check_distinct=False)
    except VerticalPair:
        return False
    vals = sp.double_points()
    mods = np.abs(vals)
    if not np.all(np.isfinite(vals)):
        return False
    if np.min(mods) < min_modulus or np.max(mods) > max_modulus:
        return False
    diff = np.abs(vals[:, None] - vals[None, :]) / np.max(mods)
    np.fill_diagonal(diff, np.inf)
    return bool(np.min(diff) >= min_separation)


def genericize(cfg, seed=0, max_attempts=MAX_ROTATION_ATTEMPTS, **thresholds):
    """Rotate cfg until every double point is finite, nonzero and distinct.

    Returns ``(rotation, cfg')``; the rotation is the identity when cfg already
    qualifies. Rotations are drawn uniformly from a generator seeded by ``seed``.
    """
    if is_generic(cfg, **thresholds):
        return np.eye(3), cfg
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        R = Rotation.random(random_state=rng).as_matrix()
        rotated = MonopoleConfig(cfg.points @ R.T)
        if is_generic(rotated, **thresholds):
            return R, rotated
    raise GenericityFailure("no generic rotation found in %d attempts" % max_attempts)


def random_config(n, seed, box=1.5, min_distance=0.4):
    """Seeded random generic configuration used by tests and benchmarks."""
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        cand = rng.uniform(-box, box, size=3)
        if all(np.linalg.norm(cand - q) >= min_distance for q in pts):
            pts.append(cand)
    return genericize(MonopoleConfig(np.array(pts)), seed=seed)[1]


def equilateral_config():
    c = np.sqrt(3) / 2
    return MonopoleConfig([[1, 0, 0], [-0.5, c, 0], [-0.5, -c, 0]])


E2 = MonopoleConfig([[1, 0, 0], [-1, 0, 0]])

