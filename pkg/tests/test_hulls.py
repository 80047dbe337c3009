import numpy as np
import pytest
from numpy.testing import assert_allclose

from penrose_lab import families
from penrose_lab.errors import UnsupportedGeometryError
from penrose_lab.hulls import (find_outermost_minimal, find_outermost_mots, is_outward_minimizing,
                               rad, strictly_minimizing_hull)


def test_outward_minimizing():
    schw = families.schwarzschild_isotropic(1.0, 6.0, 1024).metric
    assert all(is_outward_minimizing(schw, r) for r in schw.nodes[::100])
    flat = families.flat(4.0, 512).metric
    assert is_outward_minimizing(flat, 1.3)
    dumb = families.dumbbell().metric
    assert not is_outward_minimizing(dumb, 1.5)


def test_hulls():
    schw = families.schwarzschild(1.0, 6.0, 2048, r_min=2.5).metric
    h = strictly_minimizing_hull(schw, 3.0)
    assert_allclose(h.r_hull, 3.0, atol=1e-12)
    assert not h.jumped
    flat = families.flat(4.0, 512).metric
    assert_allclose(strictly_minimizing_hull(flat, 1.0).r_hull, 1.0, atol=1e-2)
    dumb = families.dumbbell(count=2048).metric
    h = strictly_minimizing_hull(dumb, 1.5)
    assert h.jumped
    assert_allclose(h.r_hull, 2.0, atol=1e-3)
    assert_allclose(h.area_hull, 4 * np.pi, rtol=1e-5)


def test_mots():
    pg = find_outermost_mots(families.painleve_gullstrand(1.0, 4.0, 4096))
    assert_allclose(pg.radius, 2.0, atol=1e-6)
    assert pg.kind == "future"
    schw = find_outermost_mots(families.schwarzschild_isotropic(1.0, 4.0, 4096))
    assert_allclose(np.sqrt(schw.area / (16 * np.pi)), 1.0, atol=1e-6)
    assert find_outermost_mots(families.flat(4.0, 512)) is None


def test_minimal_spheres():
    d = families.schwarzschild_isotropic(1.0, 4.0, 4096)
    rec = find_outermost_minimal(d.metric)
    assert_allclose(rec.radius, 0.5, atol=1e-6)  # isotropic horizon r = m / 2
    assert find_outermost_minimal(families.flat(4.0, 256).metric) is None
    rec = find_outermost_minimal(families.dumbbell(count=2048).metric)
    assert_allclose(rec.radius, 2.0, atol=1e-6)


def test_rad_models():
    assert_allclose(rad(families.flat(4.0, 512).metric).value, 2.0, rtol=1e-12)
    cyl = rad(families.cylinder(1.0, 1.0, 256).metric)
    assert cyl.kind == "cylinder"
    assert_allclose(cyl.value, 1.0, rtol=1e-12)
    d = families.schwarzschild(1.0, 4.0, 4096, r_min=3.0)
    thick = np.trapezoid(np.sqrt(d.a), d.nodes)
    assert_allclose(rad(d.metric).value, 0.5 * thick, rtol=1e-6)
    with pytest.raises(UnsupportedGeometryError):
        rad(families.dumbbell().metric)
