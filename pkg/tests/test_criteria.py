import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from penrose_lab import families
from penrose_lab.criteria import (CriterionVerdict, MeeksYauConstant, evaluate_curvature_bound,
                                  evaluate_hoop, evaluate_minimal_sphere, isoperimetric_scan,
                                  m_star, schoen_yau_criterion, shi_tam_mass)
from penrose_lab.initial_data import RadialGrid, RadialMetric
from penrose_lab.jang import assemble_jang_graph, solve_jang_dirichlet

from conftest import LY_SCHW


def _graph(data):
    return assemble_jang_graph(data, solve_jang_dirichlet(data))


FLAT = families.flat(4.0, 1024)
FLAT_GRAPH = _graph(FLAT)


def test_meeks_yau_constant():
    my = MeeksYauConstant.compute(1.0, 1.0, np.pi, 1.0)
    # int_0^pi sin(s)^2 / s ds
    s = np.linspace(1e-9, np.pi, 200001)
    assert_allclose(my.integral, np.trapezoid(np.sin(s) ** 2 / s, s), rtol=1e-8)
    assert 0 < my.alpha <= 1
    assert MeeksYauConstant.compute(1e6, 1.0, 1.0, 1.0).alpha == 1.0


@settings(max_examples=30)
@given(st.floats(1e-3, 10), st.floats(1e-3, 10), st.floats(1e-3, 10), st.floats(1e-3, 10))
def test_meeks_yau_alpha_in_unit_interval(C, K, r, den):
    a = MeeksYauConstant.compute(C, K, r, den).alpha
    assert 0.0 <= a <= 1.0


def test_verdict_rejects_unknown_conclusion():
    with pytest.raises(ValueError):
        CriterionVerdict("x", True, 0, 0, "maybe")


def test_shi_tam_flat_and_schwarzschild():
    assert shi_tam_mass(FLAT.metric).value == 0.0
    d = families.schwarzschild_isotropic(1.0, 4.0, 2048)
    g = _graph(d).metric
    # Omega_1 = [2, 2.5] inside Omega_2 = [2, 3.5] in area radius
    pairs = [(families.isotropic_radius(2.5, 1.0), families.isotropic_radius(3.5, 1.0))]
    v = shi_tam_mass(g, pairs).value
    assert 0.0 < v <= 1.0 + 1e-6


def test_shi_tam_negative_profile_floors_at_zero():
    # a < 1 everywhere: every centered sphere has negative Hawking mass
    r = np.linspace(0.0, 2.0, 512)
    m = RadialMetric(RadialGrid(r), np.full(r.size, 0.8), r.copy())
    assert np.all(m.hawking_mass_profile()[1:] < 0)
    assert shi_tam_mass(m).value == 0.0


def test_m_star():
    ms = m_star(FLAT, FLAT_GRAPH)
    assert ms.value == 0.0 and ms.details["beta"] == 1.0
    d = families.schwarzschild_isotropic(1.0, 4.0, 2048)
    ms = m_star(d, _graph(d))
    assert 0.0 < ms.value <= 1.0 and ms.details["beta"] == 1.0
    assert ms.value <= shi_tam_mass(_graph(d).metric).value + 1e-12


def test_m_star_pg_ball_uses_capped_rad():
    d = families.painleve_gullstrand(1.0, 4.0, 1024)
    from penrose_lab.jang import truncate_outside_blowup
    sol = truncate_outside_blowup(solve_jang_dirichlet(d, inner="neumann"))
    ms = m_star(sol.data, assemble_jang_graph(sol.data, sol))
    assert np.isfinite(ms.value) and ms.details["beta"] > 0


def test_flat_criteria():
    hoop = evaluate_hoop(FLAT, FLAT_GRAPH)
    assert hoop.conclusion == "inconclusive" and not hoop.details["ground_truth_found"]
    iso = evaluate_minimal_sphere(FLAT, FLAT_GRAPH)
    assert iso.conclusion == "inconclusive"
    cb = evaluate_curvature_bound(FLAT, FLAT_GRAPH)
    assert cb.conclusion == "not_exists" and cb.details["C"] == 0.0


def test_schwarzschild_curvature_bound_is_inconclusive():
    d = families.schwarzschild_isotropic(1.0, 4.0, 4096)
    cb = evaluate_curvature_bound(d, _graph(d))
    assert_allclose(cb.details["C2"], 0.25, atol=1e-5)
    assert_allclose(cb.rhs, 1.0, atol=1e-5)
    assert_allclose(cb.lhs, LY_SCHW, atol=1e-6)
    assert cb.conclusion == "inconclusive" and cb.details["consistent"]
    assert cb.details["gauss_bonnet_ok"] and cb.details["penrose_ok"]


def test_weak_field_annulus_excludes_mots():
    d = families.schwarzschild(0.01, 4.0, 1024, r_min=3.0)
    cb = evaluate_curvature_bound(d, _graph(d))
    assert cb.conclusion == "not_exists"
    assert cb.lhs < cb.rhs


def test_dumbbell_isoperimetric_scan_and_minimal_sphere():
    d = families.dumbbell(count=2048)
    r_iso, _ = isoperimetric_scan(d.metric)
    assert abs(r_iso - 2.0) < 0.1
    v = evaluate_minimal_sphere(d, _graph(d))
    assert_allclose(v.details["minimal_radius"], 2.0, atol=1e-6)
    # DEC fails for the dumbbell, so no existence claim is made
    assert v.conclusion == "inconclusive"


def test_hoop_on_horizons():
    for d in (families.painleve_gullstrand(1.0, 4.0, 1024),
              families.schwarzschild_isotropic(1.0, 4.0, 2048)):
        sol = solve_jang_dirichlet(d, inner="neumann" if d.k_t.any() else "auto")
        from penrose_lab.jang import truncate_outside_blowup
        sol = truncate_outside_blowup(sol)
        v = evaluate_hoop(d, assemble_jang_graph(sol.data, sol))
        assert v.details["ground_truth_found"]
        assert v.conclusion in ("exists", "inconclusive")


def test_schoen_yau():
    v = schoen_yau_criterion(families.schwarzschild(1.0, 4.0, 1024, r_min=3.0))
    assert v.conclusion == "inconclusive" and v.details["Lambda"] <= 1e-6
    star = schoen_yau_criterion(families.constant_density_star(0.01, 2.0, 1024))
    assert_allclose(star.details["Lambda"], 8 * np.pi * 0.01, rtol=1e-5)
    assert star.conclusion == "inconclusive" and star.lhs < star.rhs


@pytest.mark.parametrize("fill", [0.5, 0.9, 0.98])
def test_schoen_yau_threshold_is_out_of_reach_for_uniform_stars(fill):
    # with c = 8 pi rho0 / 3 the domain needs c r_b^2 < 1; Rad stays below the threshold
    r_b = 2.0
    rho0 = fill * 3.0 / (8 * np.pi * r_b ** 2)
    v = schoen_yau_criterion(families.constant_density_star(rho0, r_b, 2048))
    assert v.lhs < v.rhs and v.conclusion == "inconclusive"
