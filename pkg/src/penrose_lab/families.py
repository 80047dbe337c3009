"""Closed-form spherically symmetric initial data families."""

import numpy as np

from .initial_data import RadialGrid, SphericalInitialData


def _data(grid, a, rho, k_rr=None, k_t=None, name=""):
    zeros = np.zeros_like(grid.nodes)
    return SphericalInitialData(grid, a, rho,
                                zeros if k_rr is None else k_rr,
                                zeros if k_t is None else k_t, name)


def flat(r_max, count=1024, r_min=0.0):
    grid = RadialGrid.uniform(r_min, r_max, count)
    r = grid.nodes
    return _data(grid, np.ones_like(r), r.copy(), name="flat")


def schwarzschild(m, r_max, count=1024, r_min=None):
    """Time-symmetric slice in area-radius coordinates; needs r_min > 2m."""
    r_min = 3.0 * m if r_min is None else r_min
    if r_min <= 2.0 * m:
        raise ValueError("area-radius Schwarzschild needs r_min > 2m; "
                         "use schwarzschild_isotropic to reach the horizon")
    grid = RadialGrid.uniform(r_min, r_max, count)
    r = grid.nodes
    return _data(grid, 1.0 / (1.0 - 2.0 * m / r), r.copy(), name="schwarzschild")


def isotropic_radius(area_radius, m):
    """Isotropic coordinate of the sphere with the given area radius (outer sheet)."""
    R = np.asarray(area_radius, dtype=float)
    return 0.5 * (R - m + np.sqrt(np.maximum(R * R - 2.0 * m * R, 0.0)))


def schwarzschild_isotropic(m, area_r_max, count=1024, area_r_min=None):
    """Time-symmetric slice in isotropic coordinates.

    The default inner end is the horizon ``r_iso = m/2`` (area radius 2m).
    """
    area_r_min = 2.0 * m if area_r_min is None else area_r_min
    grid = RadialGrid.uniform(float(isotropic_radius(area_r_min, m)),
                              float(isotropic_radius(area_r_max, m)), count)
    r = grid.nodes
    psi = 1.0 + m / (2.0 * r)
    return _data(grid, psi ** 4, r * psi ** 2, name="schwarzschild_isotropic")


def painleve_gullstrand(m, r_max, count=1024, r_min=None):
    """Flat slice of Schwarzschild with extrinsic curvature from the shift sqrt(2m/r)."""
    r_min = 0.25 * m if r_min is None else r_min
    if r_min <= 0:
        raise ValueError("the PG slice is singular at r = 0")
    grid = RadialGrid.uniform(r_min, r_max, count)
    r = grid.nodes
    k_t = np.sqrt(2.0 * m / r) / r
    k_rr = -0.5 * np.sqrt(2.0 * m / r ** 3)
    return _data(grid, np.ones_like(r), r.copy(), k_rr, k_t, name="painleve_gullstrand")


def constant_density_star(rho0, r_max, count=1024):
    """Time-symmetric interior of a uniform-density star, ``mu = rho0``."""
    c = 8.0 * np.pi * rho0 / 3.0
    if c * r_max ** 2 >= 1.0:
        raise ValueError("density too large: 2M(r)/r reaches 1 inside the domain")
    grid = RadialGrid.uniform(0.0, r_max, count)
    r = grid.nodes
    return _data(grid, 1.0 / (1.0 - c * r * r), r.copy(), name="constant_density_star")


def dumbbell_rho(r):
    """Profile with a bulge (rho=1.5 at r=1) and a neck (rho=1 at r=2)."""
    return r ** 3 - 4.5 * r ** 2 + 6.0 * r - 1.0


def dumbbell(r_min=0.3, r_max=3.0, count=1024):
    grid = RadialGrid.uniform(r_min, r_max, count)
    r = grid.nodes
    return _data(grid, np.ones_like(r), dumbbell_rho(r), name="dumbbell")


def cylinder(radius, half_length, count=1024):
    """Round cylinder ``S^2_R x (0, 2L)``."""
    grid = RadialGrid.uniform(0.0, 2.0 * half_length, count)
    r = grid.nodes
    return _data(grid, np.ones_like(r), np.full_like(r, radius), name="cylinder")


def umbilic_flat(lam, r_max, count=1024, r_min=0.0):
    """Flat metric with ``k = lam g`` (a flat de Sitter slice).

    ``mu = 6 lam^2 / 16 pi`` and ``J = 0``; the sphere ``r = 1/lam`` is a MOTS.
    """
    grid = RadialGrid.uniform(r_min, r_max, count)
    r = grid.nodes
    k = np.full_like(r, lam)
    return _data(grid, np.ones_like(r), r.copy(), k, k.copy(), name="umbilic_flat")
