import numpy as np
import pytest

from caloron import forms, lie, loops
from caloron.errors import DimensionError
from caloron.forms import FormField, from_components
from caloron.gauge import GaugePair, random_gauge_pair
from caloron.transform import (assembled_curvature, caloron_curvature, caloron_curvature_defect,
                               caloron_transform, inverse_caloron)

X = np.diag([1j, -1j])


def _zero_pair(M, nt):
    return GaugePair(forms.zero_form(M, 1, ntheta=nt), forms.zero_form(M, 0, ntheta=nt))


def test_zero_pair_transforms_to_zero():
    M = forms.torus(2, 8)
    At = caloron_transform(_zero_pair(M, 16))
    assert At.norm_inf() == 0 and At.base.shape == (8, 8, 16)
    assert caloron_curvature_defect(_zero_pair(M, 16)) == 0


def test_zero_higgs_gives_no_dtheta_component():
    M = forms.torus(2, 8)
    pair = random_gauge_pair(M, 16, 2, seed=0)
    pair = GaugePair(pair.A, forms.zero_form(M, 0, ntheta=16))
    At = caloron_transform(pair)
    assert np.max(np.abs(At.component((2,)))) == 0
    assert np.array_equal(At.component((0,)), pair.A.components[0])


def test_inverse_of_pure_dtheta_form():
    P = forms.product_with_circle(forms.torus(2, 8), 16)
    x, y, t = P.mesh()
    h = np.sin(x + t) * np.cos(y)
    At = from_components(P, 1, {(2,): h[..., None, None] * X})
    pair = inverse_caloron(At)
    assert pair.A.norm_inf() == 0
    np.testing.assert_array_equal(pair.Phi.components[0], h[..., None, None] * X)
    At2 = from_components(P, 1, {(0,): h[..., None, None] * X})
    assert inverse_caloron(At2).Phi.norm_inf() == 0


def test_round_trips_are_bit_exact():
    M = forms.torus(3, 6)
    pair = random_gauge_pair(M, 8, 2, seed=7, n=3)
    back = inverse_caloron(caloron_transform(pair))
    assert np.array_equal(back.A.components, pair.A.components)
    assert np.array_equal(back.Phi.components, pair.Phi.components)
    At = caloron_transform(pair)
    assert np.array_equal(caloron_transform(inverse_caloron(At)).components, At.components)


def test_inverse_needs_a_circle_axis():
    T = forms.torus(3, 4)
    with pytest.raises(DimensionError):
        inverse_caloron(forms.zero_form(T, 1))


@pytest.mark.parametrize("seed", range(3))
def test_curvature_identity_spectral(seed):
    pair = random_gauge_pair(forms.torus(2, 32), 64, 3, seed)
    assert caloron_curvature_defect(pair) < 1e-8


def test_curvature_identity_su3():
    pair = random_gauge_pair(forms.torus(2, 16), 32, 2, seed=5, n=3)
    assert caloron_curvature_defect(pair) < 1e-8


def test_direct_and_assembled_routes_differ_in_code_not_value():
    pair = random_gauge_pair(forms.torus(2, 16), 32, 2, seed=1)
    direct = caloron_curvature(caloron_transform(pair))
    assembled = assembled_curvature(pair)
    assert direct.base.same_grid(assembled.base)
    assert np.max(np.abs(direct.components - assembled.components)) < 1e-10 * direct.norm_inf()


def test_fd4_defect_shrinks_fourth_order():
    res = []
    for N in (16, 32):
        M = forms.torus(2, N, "fd4")
        res.append(caloron_curvature_defect(random_gauge_pair(M, 2 * N, 3, seed=0)))
    assert 10 < res[0] / res[1] < 25
