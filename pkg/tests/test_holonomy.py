import numpy as np
import pytest

from caloron import forms, lie, loops
from caloron.errors import InvariantError
from caloron.gauge import GaugePair, gauge_transform, random_gauge_pair, random_trig_gauge
from caloron.holonomy import (caloron_holonomy_defect, classifying_map, group_distance, higgs_holonomy,
                              unitarity_drift)

X = np.diag([0.5j, -0.5j])


def test_zero_field_gives_identity_path():
    path = higgs_holonomy(np.zeros((16, 2, 2), complex))
    assert path.samples.shape == (17, 2, 2)
    assert group_distance(path.samples, np.eye(2)) == 0


def test_abelian_closed_form_path():
    t = loops.theta_grid(256)
    path = higgs_holonomy((1 - np.cos(t))[:, None, None] * X)
    tt = np.append(t, 2 * np.pi)
    exact = lie.exp((tt - np.sin(tt))[:, None, None] * X)
    assert group_distance(path.samples, exact) < 1e-10
    np.testing.assert_allclose(path.endpoint, -np.eye(2), atol=1e-10)
    assert unitarity_drift(path) < 1e-12


def test_fourth_order_in_substeps():
    t = loops.theta_grid(32)
    phi = (1 - np.cos(t))[:, None, None] * X
    errs = [group_distance(higgs_holonomy(phi, s).endpoint, -np.eye(2)) for s in (1, 2, 4)]
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 3.5)


def test_pure_gauge_field_recovers_the_gauge():
    M = forms.torus(1, 4)
    gamma = random_trig_gauge(M, 256, seed=2)
    path = higgs_holonomy(loops.log_derivative(gamma))
    assert group_distance(path.endpoint, np.eye(2)) < 1e-8
    assert group_distance(path.samples[..., :-1, :, :], gamma.samples) < 1e-8


def test_rejects_non_algebra_input():
    with pytest.raises(InvariantError):
        higgs_holonomy(np.broadcast_to(np.eye(2, dtype=complex), (8, 2, 2)))


def test_classifying_map_of_zero_higgs_field():
    M = forms.torus(2, 4)
    pair = GaugePair(forms.zero_form(M, 1, ntheta=16), forms.zero_form(M, 0, ntheta=16))
    assert group_distance(classifying_map(pair), np.eye(2)) == 0
    assert caloron_holonomy_defect(pair) == 0


def test_classifying_map_is_gauge_invariant_and_equivariant():
    M = forms.torus(2, 6)
    pair = random_gauge_pair(M, 256, 2, seed=3, amplitude=0.3)
    gamma = random_trig_gauge(M, 256, seed=4)
    moved = gauge_transform(pair, gamma)
    assert group_distance(classifying_map(moved), classifying_map(pair)) < 1e-8
    g = higgs_holonomy(pair.Phi.components[0])
    g2 = higgs_holonomy(moved.Phi.components[0])
    ext = np.concatenate([gamma.samples, gamma.samples[..., :1, :, :]], axis=-3)
    assert group_distance(g2.samples, g.samples @ ext) < 1e-8


def test_caloron_holonomy_defect_is_tiny():
    pair = random_gauge_pair(forms.torus(2, 6), 64, 2, seed=8, n=3)
    assert caloron_holonomy_defect(pair) < 1e-10


def test_substep_refinement_shrinks_difference():
    pair = random_gauge_pair(forms.torus(1, 6), 32, 2, seed=1)
    ref = classifying_map(pair, 32)
    errs = [group_distance(classifying_map(pair, s), ref) for s in (1, 2, 4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] / errs[2] > 10
