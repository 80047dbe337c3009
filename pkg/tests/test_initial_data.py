import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from penrose_lab import families
from penrose_lab.errors import DegenerateInputError
from penrose_lab.initial_data import (RadialGrid, check_admissible_boundary, check_dec,
                                      compute_constraints, curvature_profile, sphere_geometry)


def test_grid_validation():
    with pytest.raises(ValueError):
        RadialGrid(np.array([0.0, 1.0, 0.5]))
    g = RadialGrid.uniform(1.0, 3.0, 21)
    assert (g.r_min, g.r_max, g.count) == (1.0, 3.0, 21)
    assert g.contains(2.0) and not g.contains(3.5)


def test_flat_vacuum():
    em = compute_constraints(families.flat(4.0, 512))
    assert_allclose(em.mu, 0.0, atol=1e-10)
    assert_allclose(em.J_r, 0.0, atol=1e-12)


@pytest.mark.parametrize("n", [1024, 4096])
def test_schwarzschild_vacuum(n):
    d = families.schwarzschild(1.0, 4.0, n, r_min=2.5)
    em = compute_constraints(d)
    assert np.max(np.abs(em.mu)) < 50.0 * d.grid.spacing ** 2
    assert check_dec(em, d).holds


def test_star_density():
    d = families.constant_density_star(0.01, 2.0, 2048)
    em = compute_constraints(d)
    assert_allclose(em.mu, 0.01, atol=1e-6)
    assert_allclose(em.J_r, 0.0, atol=1e-14)


def test_pg_is_vacuum():
    d = families.painleve_gullstrand(1.0, 4.0, 4096, r_min=1.0)
    em = compute_constraints(d)
    assert np.max(np.abs(em.mu)) < 1e-5
    assert np.max(np.abs(em.J_norm)) < 1e-5


def test_negated_density_violates_dec():
    d = families.constant_density_star(0.01, 2.0, 512)
    em = compute_constraints(d)
    flipped = type(em)(-em.mu, em.J_r, em.J_norm, em.scale)
    assert not check_dec(flipped, d).holds


def test_sphere_geometry_closed_forms():
    g = sphere_geometry(families.flat(4.0, 1024), 2.0)
    assert_allclose([g.area, g.H, g.tr_k], [16 * np.pi, 1.0, 0.0], atol=1e-12)
    g = sphere_geometry(families.schwarzschild(1.0, 4.0, 4096, r_min=2.5), 4.0)
    assert_allclose(g.area, 64 * np.pi, rtol=1e-12)
    assert_allclose(g.H, 0.5 * np.sqrt(0.5), atol=1e-6)
    g = sphere_geometry(families.painleve_gullstrand(1.0, 4.0, 4096), 4.0)
    assert_allclose(g.H, 0.5, atol=1e-6)
    assert_allclose(g.tr_k, 2.0 * np.sqrt(0.5) / 4.0, atol=1e-12)


def test_admissible_boundary():
    assert check_admissible_boundary(families.painleve_gullstrand(1.0, 4.0, 1024)).holds
    assert not check_admissible_boundary(families.painleve_gullstrand(1.0, 2.0, 1024)).holds
    assert check_admissible_boundary(families.flat(3.0, 256)).holds


def test_curvatures():
    c = curvature_profile(families.schwarzschild(1.0, 4.0, 4096, r_min=2.5).metric)
    assert_allclose(c.K_tan[-1], 1 / 32, atol=1e-6)
    assert_allclose(c.K_rad[-1], -1 / 64, atol=1e-6)
    c = curvature_profile(families.cylinder(1.5, 1.0, 256).metric)
    assert_allclose(c.K_tan, 1 / 1.5 ** 2, atol=1e-12)
    assert_allclose(c.K_rad, 0.0, atol=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 2.0), st.floats(2.5, 6.0))
def test_hawking_mass_of_schwarzschild(m, factor):
    d = families.schwarzschild_isotropic(m, factor * m, 2048)
    prof = d.metric.hawking_mass_profile()
    assert_allclose(prof, m, rtol=1e-4)


def test_degenerate_input():
    with pytest.raises((DegenerateInputError, ValueError)):
        compute_constraints(families.cylinder(0.0, 1.0, 64))
