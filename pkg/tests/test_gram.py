import numpy as np
import pytest
import scipy.sparse as sp

from shapecurrents.currents import evaluate_current
from shapecurrents.curve import circle
from shapecurrents.gram import DEFAULT_SIGMA, GramOperator
from shapecurrents.space import build_space


def test_default_sigma():
    assert DEFAULT_SIGMA == pytest.approx(1.0 / np.sqrt(10.0))


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_lagrange_mass_integrates_area(degree):
    space = build_space("lagrange", M=4, degree=degree, domain=(-1, 1, -1, 1))
    G = GramOperator(space)
    ones = np.ones(space.dof_count)
    assert ones @ (G.mass @ ones) == pytest.approx(4.0, rel=1e-12)
    # the stiffness of a constant vanishes
    assert abs(ones @ (G.stiffness @ ones)) < 1e-12


def test_lagrange_stiffness_of_linear():
    space = build_space("lagrange", M=5, degree=1, domain=(-1, 1, -1, 1))
    G = GramOperator(space)
    x = space.dof_coords()[:, 0]
    # int |grad x|^2 over the 2x2 domain
    assert x @ (G.stiffness @ x) == pytest.approx(4.0, rel=1e-12)


def test_monomial_gram_exact_integrals():
    space = build_space("monomial", N=3, domain=(-1, 1, -1, 1))
    G = GramOperator(space)
    # mass entries are rectangle integrals of x^(m1+m2) y^(n1+n2)
    assert G.mass[0, 0] == pytest.approx(4.0)       # int 1
    assert G.mass[1, 1] == pytest.approx(4.0 / 3.0)  # int x^2
    assert G.mass[1, 2] == pytest.approx(0.0, abs=1e-15)  # int x y


def test_gram_matrix_symmetry():
    for space in (build_space("lagrange", M=6, degree=2, domain=(-1, 1, -1, 1)),
                  build_space("monomial", N=5, domain=(-1, 1, -1, 1))):
        G = GramOperator(space)
        A = G.G.toarray() if sp.issparse(G.G) else G.G
        np.testing.assert_allclose(A, A.T, atol=1e-13)
        assert np.all(np.linalg.eigvalsh(A) > 0)


def test_solve_inverts_matrix(rng):
    space = build_space("lagrange", M=5, degree=1, domain=(-1, 1, -1, 1))
    G = GramOperator(space)
    b = rng.standard_normal(space.dof_count)
    x = G.solve(b)
    np.testing.assert_allclose(G.G @ x, b, atol=1e-10)


def test_solve_power_composition(rng):
    space = build_space("lagrange", M=5, degree=1, domain=(-1, 1, -1, 1))
    G = GramOperator(space)
    f = rng.standard_normal(space.dof_count)
    b1 = G.solve_power(f, 1)
    np.testing.assert_allclose(b1, G.solve(f), atol=1e-12)
    b2 = G.solve_power(f, 2)
    np.testing.assert_allclose(b2, G.solve(G.mass @ G.solve(f)), atol=1e-12)


@pytest.mark.parametrize("kind,s", [("lagrange", 1), ("lagrange", 2),
                                    ("monomial", 1), ("monomial", 2)])
def test_whiten_norm_matches_quadratic_form(kind, s, rng):
    if kind == "lagrange":
        space = build_space("lagrange", M=6, degree=1, domain=(-1, 1, -1, 1))
    else:
        space = build_space("monomial", N=5, domain=(-1, 1, -1, 1))
    G = GramOperator(space)
    f = evaluate_current(circle(0.5, 256), space).fx
    w = G.whiten(f, s)
    quad = float(f @ G.solve_power(f, s))
    assert np.dot(w, w) == pytest.approx(quad, rel=1e-9)


def test_sigma_must_be_positive():
    from shapecurrents.errors import ConfigurationError
    space = build_space("lagrange", M=4, degree=1, domain=(-1, 1, -1, 1))
    with pytest.raises(ConfigurationError):
        GramOperator(space, sigma=0.0)


def test_small_sigma_approaches_mass(rng):
    space = build_space("lagrange", M=4, degree=1, domain=(-1, 1, -1, 1))
    G = GramOperator(space, sigma=1e-8)
    np.testing.assert_allclose(G.G.toarray(), G.mass.toarray(), atol=1e-12)
