import math

import numpy as np
import pytest

from caloron import lie
from caloron.errors import ArityError, BranchError, DimensionError, InvariantError

H = np.diag([1j, -1j])


def test_bracket_with_self_vanishes():
    assert np.array_equal(lie.bracket(H, H), np.zeros((2, 2)))


def test_bracket_hand_computed():
    # XY = diag(i, -i) and YX = diag(-i, i)
    X = np.array([[0, 1], [-1, 0]], complex)
    Y = np.array([[0, 1j], [1j, 0]])
    np.testing.assert_allclose(lie.bracket(X, Y), np.diag([2j, -2j]))
    np.testing.assert_allclose(lie.bracket(Y, X), np.diag([-2j, 2j]))


def test_bracket_dimension_mismatch():
    with pytest.raises(DimensionError):
        lie.bracket(np.zeros((2, 2)), np.zeros((3, 3)))


def test_adjoint_action_hand_computed():
    phi = 0.37
    g = np.diag([np.exp(1j * phi), np.exp(-1j * phi)])
    X = np.array([[0, 1], [-1, 0]], complex)
    expect = np.array([[0, np.exp(2j * phi)], [-np.exp(-2j * phi), 0]])
    np.testing.assert_allclose(lie.adjoint_action(g, X), expect, atol=1e-15)


def test_adjoint_action_identity_and_homomorphism(rng):
    X, Y = lie.random_algebra(3, rng, (2,))
    g = lie.random_group(3, rng)
    np.testing.assert_allclose(lie.adjoint_action(np.eye(3), X), X)
    lhs = lie.adjoint_action(g, lie.bracket(X, Y))
    rhs = lie.bracket(lie.adjoint_action(g, X), lie.adjoint_action(g, Y))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_inner_coroot_normalization():
    assert lie.inner(H, H) == pytest.approx(2.0, abs=1e-15)
    H3 = np.diag([1j, -1j, 0])
    assert lie.inner(H3, H3) == pytest.approx(2.0, abs=1e-15)


def test_inner_orthogonal_root_spaces():
    E1 = np.zeros((3, 3), complex)
    E1[0, 1], E1[1, 0] = 1, -1
    E2 = np.zeros((3, 3), complex)
    E2[1, 2], E2[2, 1] = 1, -1
    assert lie.inner(E1, E2) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("n", [2, 3])
def test_su_basis_orthonormal(n):
    B = lie.su_basis(n)
    assert B.shape == (n * n - 1, n, n)
    G = lie.inner(B[:, None], B[None, :])
    np.testing.assert_allclose(G, np.eye(n * n - 1), atol=1e-14)
    assert lie.algebra_defect(B) < 1e-15


def test_exp_examples():
    np.testing.assert_allclose(lie.exp(np.zeros((2, 2))), np.eye(2))
    np.testing.assert_allclose(lie.exp(np.diag([1j * np.pi / 2, -1j * np.pi / 2])), np.diag([1j, -1j]),
                               atol=1e-15)


def test_log_identity_is_zero():
    np.testing.assert_allclose(lie.log(np.eye(3)), np.zeros((3, 3)), atol=1e-15)


def test_exp_log_round_trip(rng):
    g = lie.random_group(2, rng, (200,))
    np.testing.assert_allclose(lie.exp(lie.log(g)), g, atol=1e-12)
    assert lie.algebra_defect(lie.log(g)) < 1e-12
    # in SU(3) stay inside the principal domain, where the eigenangles sum to zero
    g3 = lie.exp(lie.random_algebra(3, rng, (200,), scale=0.4))
    np.testing.assert_allclose(lie.exp(lie.log(g3)), g3, atol=1e-12)


def test_log_rejects_non_traceless_principal_branch():
    # eigenangles 2.5, 2.5, 2 pi - 5 sum to 2 pi
    g = np.diag(np.exp(1j * np.array([2.5, 2.5, -5.0])))
    with pytest.raises(BranchError):
        lie.log(g)


def test_log_rejects_cut_locus():
    with pytest.raises(BranchError):
        lie.log(-np.eye(2))
    with pytest.raises(BranchError):
        lie.log(np.diag([-1, -1, 1]).astype(complex))


def test_log_degenerate_spectrum():
    # repeated eigenvalues away from -1 are fine
    g = lie.exp(np.diag([0.4j, 0.4j, -0.8j]))
    np.testing.assert_allclose(lie.log(g), np.diag([0.4j, 0.4j, -0.8j]), atol=1e-13)


def test_dexp_left_matches_finite_difference(rng):
    Y = lie.random_algebra(2, rng, scale=0.7)
    V = lie.random_algebra(2, rng)
    h = 1e-6
    fd = lie.dagger(lie.exp(Y)) @ (lie.exp(Y + h * V) - lie.exp(Y - h * V)) / (2 * h)
    np.testing.assert_allclose(lie.dexp_left(Y, V), fd, atol=1e-8)
    np.testing.assert_allclose(lie.dexp_left_inverse(Y, lie.dexp_left(Y, V)), V, atol=1e-12)


def test_p1_normalization():
    f = lie.p1poly()
    # -(1/8 pi^2) <H, H> with <H, H> = 2
    assert f(H, H) == pytest.approx(-1.0 / (4 * math.pi ** 2), rel=1e-14)


def test_p1_is_scaled_inner_product(rng):
    X, Y = lie.random_algebra(3, rng, (2, 50))
    np.testing.assert_allclose(lie.p1poly()(X, Y), -lie.inner(X, Y) / (8 * math.pi ** 2), rtol=1e-13)


def test_eval_poly_zero_argument_and_symmetry(rng):
    f = lie.InvariantPolynomial(3, 0.5)
    X, Y, Z = lie.random_algebra(3, rng, (3,))
    assert abs(f(X, np.zeros((3, 3)), Z)) == 0
    np.testing.assert_allclose(f(X, Y, Z), f(Z, X, Y), atol=1e-14)
    np.testing.assert_allclose(f(X, Y, Z), f(Y, X, Z), atol=1e-14)


def test_eval_poly_arity():
    with pytest.raises(ArityError):
        lie.p1poly()(H)
    with pytest.raises(ArityError):
        lie.ad_invariance_defect(lie.p1poly(), H, H)


def test_eval_poly_even_degree_is_real(rng):
    X = lie.random_algebra(2, rng, (4,))
    v = lie.InvariantPolynomial(4)(*X)
    assert np.isrealobj(v)


def test_ad_invariance_defect_examples(rng):
    f = lie.InvariantPolynomial(3)
    X = lie.random_algebra(3, rng, (3,))
    assert lie.ad_invariance_defect(f, np.zeros((3, 3)), *X) == 0
    A = lie.random_algebra(3, rng)
    assert abs(lie.ad_invariance_defect(f, A, *X)) < 1e-12
    tr = lie.InvariantPolynomial(1)
    assert abs(lie.ad_invariance_defect(tr, A, X[0])) < 1e-14


def test_invalid_polynomial():
    with pytest.raises(ValueError):
        lie.InvariantPolynomial(0)
    with pytest.raises(ValueError):
        lie.InvariantPolynomial(2, kind="pfaffian")


def test_check_helpers():
    with pytest.raises(InvariantError):
        lie.check_algebra(np.eye(2))
    with pytest.raises(InvariantError):
        lie.check_group(2 * np.eye(2))
    lie.check_group(np.eye(2))


def test_polar_unitary_projects(rng):
    g = lie.random_group(2, rng, (10,))
    noisy = g + 1e-6 * rng.standard_normal(g.shape)
    u = lie.polar_unitary(noisy)
    np.testing.assert_allclose(u @ lie.dagger(u), np.broadcast_to(np.eye(2), u.shape), atol=1e-14)
    far = lie.polar_unitary(np.array([[2.0, 0.3], [0.1, 0.5]], complex))
    np.testing.assert_allclose(far @ lie.dagger(far), np.eye(2), atol=1e-14)
