import numpy as np
import pytest

from caloron import lie, loops
from caloron.errors import InvariantError, ResolutionError

X = np.diag([1j, -1j])


def test_theta_grid():
    t = loops.theta_grid(8)
    assert t[0] == 0 and t[-1] == pytest.approx(2 * np.pi * 7 / 8)


def test_constant_field_derivative_vanishes():
    f = loops.LoopAlgebraField(loops.constant_loop(X, 16))
    assert np.max(np.abs(loops.theta_derivative(f).samples)) < 1e-14


def test_sin_to_cos_spectrally_exact():
    t = loops.theta_grid(32)
    f = loops.LoopAlgebraField(np.sin(t)[:, None, None] * X)
    d = loops.theta_derivative(f).samples
    np.testing.assert_allclose(d, np.cos(t)[:, None, None] * X, atol=1e-14)
    dd = loops.theta_derivative(loops.theta_derivative(f)).samples
    np.testing.assert_allclose(dd, -np.sin(t)[:, None, None] * X, atol=1e-13)


def test_fd4_derivative_order():
    errs = []
    for n in (16, 32, 64):
        t = loops.theta_grid(n)
        f = np.sin(3 * t)[:, None, None] * X
        d = loops.theta_derivative(f, mode="fd4")
        errs.append(np.max(np.abs(d - 3 * np.cos(3 * t)[:, None, None] * X)))
    ratios = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(ratios > 3.5)


def test_too_few_samples():
    with pytest.raises(ResolutionError):
        loops.theta_derivative(np.zeros((4, 2, 2)))


def test_based_flags():
    with pytest.raises(InvariantError):
        loops.LoopAlgebraField(loops.constant_loop(X, 8), based=True)
    with pytest.raises(InvariantError):
        loops.LoopGroupField(loops.constant_loop(1j * np.eye(2), 8), based=True)
    loops.LoopGroupField(loops.identity_loop(2, 8), based=True)
    with pytest.raises(InvariantError):
        loops.PathGroupField(loops.constant_loop(1j * np.eye(2), 9))


def test_log_derivative_identity_loop():
    g = loops.LoopGroupField(loops.identity_loop(2, 16))
    assert np.max(np.abs(loops.log_derivative(g).samples)) < 1e-15


def test_log_derivative_abelian_closed_form():
    t = loops.theta_grid(64)
    g = lie.exp(np.sin(t)[:, None, None] * X)
    d = loops.log_derivative(loops.LoopGroupField(g)).samples
    np.testing.assert_allclose(d, np.cos(t)[:, None, None] * X, atol=1e-12)


def test_log_derivative_product_rule(rng):
    t = loops.theta_grid(64)
    A, B = lie.random_algebra(2, rng, (2,), scale=0.5)
    gam = lie.exp(np.sin(t)[:, None, None] * A + (1 - np.cos(2 * t))[:, None, None] * B)
    dlt = lie.exp(np.cos(t)[:, None, None] * B)
    lhs = loops.log_derivative(loops.multiply(gam, dlt))
    rhs = lie.adjoint_action(lie.dagger(dlt), loops.log_derivative(gam).samples) + loops.log_derivative(dlt).samples
    assert np.max(np.abs(lhs.samples - rhs)) < 1e-8


def test_log_derivative_of_path_uses_quasi_periodicity():
    # p(t) = exp(t Y) has constant logarithmic derivative Y
    Y = np.array([[0.3j, 0.2], [-0.2, -0.3j]])
    t = np.linspace(0, 2 * np.pi, 65)
    p = loops.PathGroupField(lie.exp(t[:, None, None] * Y))
    d = loops.log_derivative(p).samples
    assert d.shape == (64, 2, 2)
    np.testing.assert_allclose(d, np.broadcast_to(Y, d.shape), atol=1e-12)
    assert p.periodicity_defect() < 1e-6


def test_under_resolved_loop_rejected():
    t = loops.theta_grid(8)
    g = lie.exp((4 * t)[:, None, None] * X)
    assert loops.resolution(g) > loops.RESOLUTION_LIMIT
    with pytest.raises(ResolutionError):
        loops.log_derivative(loops.LoopGroupField(g))


def test_product_rule_decays_spectrally():
    errs = []
    for n in (8, 16, 32):
        t = loops.theta_grid(n)
        f = np.exp(np.sin(t))[:, None, None] * X
        g = np.exp(np.cos(t))[:, None, None] * np.array([[0, 1], [-1, 0]])
        lhs = loops.theta_derivative(f @ g)
        rhs = loops.theta_derivative(f) @ g + f @ loops.theta_derivative(g)
        errs.append(np.max(np.abs(lhs - rhs)))
    assert errs[2] < 1e-12 < errs[0]
