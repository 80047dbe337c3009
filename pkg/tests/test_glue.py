import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from penrose_lab.glue import (cutoff, shi_tam_round_extension, smooth_corner, solve_conformal,
                              verify_mass_chain)
from penrose_lab.errors import IncompletePipelineError


def test_extension_masses():
    assert_allclose(shi_tam_round_extension(16 * np.pi, 1.0).m_ext, 0.0, atol=1e-12)
    ext = shi_tam_round_extension(64 * np.pi, 0.5 * np.sqrt(0.5))
    assert_allclose(ext.m_ext, 1.0, atol=1e-10)
    assert_allclose(ext.boundary_H, 0.5 * np.sqrt(0.5), atol=1e-10)
    # (1/8pi) * 64pi * (0.5 - 0.353553) is the Liu-Yau value, compared against m_ext = 1
    assert_allclose(ext.shi_tam.lhs, 8.0 * (0.5 - 0.5 * np.sqrt(0.5)), atol=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.5, 10.0), st.floats(0.05, 0.95))
def test_extension_matches_boundary(rho_b, slope):
    ext = shi_tam_round_extension(4 * np.pi * rho_b ** 2, 2.0 * slope / rho_b)
    rho, _, _ = ext.profile(0.0)
    assert_allclose(rho, rho_b, rtol=1e-10)
    assert_allclose(ext.m_ext, 0.5 * rho_b * (1 - slope ** 2), rtol=1e-8)
    _, _, R = ext.samples(64)
    assert np.max(np.abs(R)) < 1e-6


@settings(max_examples=30)
@given(st.floats(1e-4, 1e-1))
def test_cutoff_shape(delta):
    t = np.linspace(-delta, 0.0, 401)
    s, ds = cutoff(t, delta)
    assert s[0] == 1.0 and s[-1] == 0.0
    assert np.all(np.diff(s) <= 1e-15) and np.all(ds <= 0.0)


def test_self_glued_schwarzschild(schw_graph):
    gm = schw_graph.metric
    ext = shi_tam_round_extension(float(gm.area[-1]), float(gm.mean_curvature[-1]))
    assert_allclose(ext.m_ext, 1.0, atol=1e-5)
    g = smooth_corner(schw_graph, ext, 1e-2)
    assert np.max(np.abs(g.K_minus)) == 0.0
    sol = solve_conformal(g)
    assert sol.A_tail == 0.0 and np.all(sol.w == 0.0)
    assert sol.scalar_check().holds


def test_pg_annulus_glue(pg_annulus_graph):
    gm = pg_annulus_graph.metric
    ext = shi_tam_round_extension(float(gm.area[-1]), float(gm.mean_curvature[-1]))
    g = smooth_corner(pg_annulus_graph, ext, 1e-2)
    assert g.support_confined
    sol = solve_conformal(g)
    assert np.min(sol.u) >= 1.0
    assert sol.scalar_check().holds
    assert_allclose(sol.A_tail, sol.A_volume, rtol=1e-5)
    assert sol.mass_identity().holds


def test_mass_chain_requires_artifacts():
    with pytest.raises(IncompletePipelineError):
        verify_mass_chain({"m_LY": 1.0})
