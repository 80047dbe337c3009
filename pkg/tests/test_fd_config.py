import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from penrose_lab.config import PipelineConfig, Tolerances
from penrose_lab.fd import d1, d2, richardson_order
from penrose_lab.verdict import VerdictReport, compare


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_derivatives_exact_on_quadratics(a, b, c):
    x = np.sort(np.r_[0.0, np.random.default_rng(0).uniform(0.0, 1.0, 30), 1.0])
    x = np.unique(x)
    f = a + b * x + c * x * x
    assert_allclose(d1(f, x), b + 2 * c * x, atol=1e-8)
    assert_allclose(d2(f, x), np.full_like(x, 2 * c), atol=1e-6)


def test_second_order_convergence():
    errs = []
    for n in (65, 129, 257):
        x = np.linspace(0.0, 1.0, n)
        errs.append(np.max(np.abs(d2(np.sin(x), x) + np.sin(x))))
    assert np.all(richardson_order(errs) > 1.9)


def test_richardson_order_values():
    assert_allclose(richardson_order([1.0, 0.25, 0.0625]), [2.0, 2.0])
    assert_allclose(richardson_order([1.0, 1 / 3.0], refinement=3.0), [1.0])


@pytest.mark.parametrize("relation,lhs,rhs,tol,ok", [
    (">=", 1.0, 1.0, 0.0, True), (">=", 0.99, 1.0, 0.02, True), (">", 1.0, 1.0, 0.0, False),
    ("<=", 2.0, 1.0, 0.5, False), ("==", 1.0, 1.0 + 1e-11, 1e-10, True), ("<", 0.5, 1.0, 0.0, True)])
def test_compare(relation, lhs, rhs, tol, ok):
    v = compare("x", lhs, rhs, tol, relation, note=1)
    assert v.holds is ok
    assert v.details == {"note": 1}
    assert set(v.to_dict()) == {"name", "holds", "lhs", "rhs", "relation", "tolerance", "details"}


def test_compare_rejects_unknown_relation():
    with pytest.raises(ValueError):
        compare("x", 1, 2, relation="~")


def test_margin_signs():
    assert VerdictReport("a", True, 2.0, 1.0).margin == 1.0
    assert VerdictReport("a", True, 1.0, 2.0, relation="<=").margin == 1.0
    assert VerdictReport("a", True, 1.0, 1.5, 1.0, "==").margin == 0.5


def test_config_defaults_frozen():
    cfg = PipelineConfig()
    assert cfg.glue.delta == 1e-3
    assert cfg.admissibility.delta == cfg.glue.delta
    with pytest.raises(Exception):
        cfg.glue.delta = 1.0
    assert Tolerances().tol_embed == 1e-6
