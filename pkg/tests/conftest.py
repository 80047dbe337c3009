import numpy as np
import pytest

from penrose_lab import families
from penrose_lab.acceptance import builtin_reports
from penrose_lab.jang import assemble_jang_graph, solve_jang_dirichlet

LY_SCHW = 4.0 * (1.0 - np.sqrt(0.5))  # r (1 - sqrt(1 - 2m/r)) at m = 1, r = 4


@pytest.fixture(scope="session")
def reports():
    return builtin_reports()


@pytest.fixture(scope="session")
def pg_annulus_graph():
    data = families.painleve_gullstrand(1.0, 4.0, 1024, r_min=3.0)
    return assemble_jang_graph(data, solve_jang_dirichlet(data, inner="dirichlet"))


@pytest.fixture(scope="session")
def schw_graph():
    data = families.schwarzschild_isotropic(1.0, 4.0, 2048)
    return assemble_jang_graph(data, solve_jang_dirichlet(data))
