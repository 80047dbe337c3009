import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from penrose_lab import families
from penrose_lab.fd import richardson_order
from penrose_lab.jang import (assemble_jang_graph, audit_admissible_X, jang_operator,
                              solve_jang_dirichlet, truncate_outside_blowup)


@pytest.mark.parametrize("data", [families.flat(4.0, 256),
                                  families.schwarzschild_isotropic(1.0, 4.0, 512),
                                  families.constant_density_star(0.01, 2.0, 256)])
def test_time_symmetric_gives_zero(data):
    sol = solve_jang_dirichlet(data)
    assert np.all(sol.f == 0.0)
    assert sol.residual < 1e-12
    graph = assemble_jang_graph(data, sol)
    assert_allclose(graph.gbar_rr, data.a, rtol=0, atol=0)
    assert np.all(graph.X_r == 0.0)
    audit = audit_admissible_X(graph)
    assert (audit.L1, audit.L32, audit.L65) == (0.0, 0.0, 0.0)
    assert audit.X_nu_boundary == 0.0 and not audit.x_nu_positive


def test_pg_annulus_converges():
    fs, res = [], []
    for n in (513, 1025, 2049, 4097):
        sol = solve_jang_dirichlet(families.painleve_gullstrand(1.0, 4.0, n, r_min=3.0),
                                   inner="dirichlet")
        fs.append(sol.f)
        res.append(sol.residual)
        assert sol.blowup is None
    assert max(res) < 1e-8
    diffs = [np.max(np.abs(fs[i + 1][::2] - fs[i])) for i in range(3)]
    assert np.all(richardson_order(diffs) >= 1.9)


def test_pg_ball_blows_up_at_horizon():
    sol = solve_jang_dirichlet(families.painleve_gullstrand(1.0, 4.0, 1024), inner="neumann")
    assert sol.blowup is not None
    assert abs(sol.blowup.radius - 2.0) < 1e-2
    assert sol.blowup.kind == "future"
    trunc = truncate_outside_blowup(sol)
    assert trunc.data.grid.r_min > sol.blowup.radius


def test_operator_vanishes_on_solution(pg_annulus_graph):
    g = pg_annulus_graph
    sol_res = jang_operator(g.data, g.f)
    assert np.max(np.abs(sol_res[1:-1])) < 1e-6


def test_scalar_bound_on_vacuum_annulus(pg_annulus_graph):
    assert np.min(pg_annulus_graph.scalar_bound_defect) >= -1e-8


def test_audit_norms_against_double_resolution(pg_annulus_graph):
    a1 = audit_admissible_X(pg_annulus_graph)
    d = families.painleve_gullstrand(1.0, 4.0, 2047, r_min=3.0)
    a2 = audit_admissible_X(assemble_jang_graph(d, solve_jang_dirichlet(d, inner="dirichlet")))
    for k in ("L1", "L32", "L65"):
        assert np.isfinite(getattr(a1, k))
        assert_allclose(getattr(a1, k), getattr(a2, k), rtol=1e-6)


def test_scaled_X_violates_smallness(pg_annulus_graph):
    g = pg_annulus_graph
    big = dataclasses.replace(g, X_r=g.X_r * 1e6, divX=g.divX * 1e6,
                              X_norm_sq=g.X_norm_sq * 1e12, X_nu_boundary=g.X_nu_boundary * 1e6)
    assert not audit_admissible_X(big).smallness_ok


@settings(max_examples=10, deadline=None)
@given(st.floats(-0.5, 0.5))
def test_boundary_value_is_imposed(tau_b):
    data = families.painleve_gullstrand(1.0, 4.0, 257, r_min=3.0)
    sol = solve_jang_dirichlet(data, tau_b=tau_b, inner="dirichlet")
    assert_allclose(sol.f[-1], tau_b, atol=1e-12)
    assert sol.residual < 1e-8
