import math
from fractions import Fraction

import numpy as np
import pytest

from caloron import forms, lie
from caloron.charts import GroupChart, cartan_density, hopf_chart
from caloron.errors import BranchError, DimensionError
from caloron.gauge import GaugePair, curvature, random_gauge_pair
from caloron.holonomy import classifying_map, group_distance
from caloron.string_forms import (CutoffFunction, LinearRamp, TransgressionCoefficient, class_pairing,
                                  covering_pairing, difference_correction, independence_defect,
                                  killingback_form, path_fibration_pair, path_section,
                                  standard_curvature, string_form, string_form_caloron,
                                  sury_identity, transgression_form)

P1 = lie.p1poly()


def _rel(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


def test_transgression_coefficients():
    assert TransgressionCoefficient(1).value == 1 and TransgressionCoefficient(1).signed == 1
    assert TransgressionCoefficient(2).value == Fraction(1, 3)
    assert TransgressionCoefficient(2).signed == Fraction(-1, 6)
    assert TransgressionCoefficient(3).signed == Fraction(1, 40)
    with pytest.raises(ValueError):
        TransgressionCoefficient(0)


@pytest.mark.parametrize("k", range(1, 21))
def test_sury_identity(k):
    lhs, rhs, equal = sury_identity(k)
    assert equal and isinstance(lhs, Fraction) and lhs == rhs


def test_cutoff_function():
    a = CutoffFunction()
    t = np.linspace(0, 2 * np.pi, 401)
    assert a(0.0) == 0 and a(2 * np.pi) == pytest.approx(1.0, abs=1e-14)
    assert a(-1.0) == 0 and a(7.0) == pytest.approx(1.0)
    assert np.all(np.diff(a(t)) >= -1e-15)
    assert a.smoothness == 3
    p = a._poly
    for j in range(1, 4):
        assert abs(p.deriv(j)(0.0)) < 1e-12 and abs(p.deriv(j)(1.0)) < 1e-9
    h = 1e-6
    np.testing.assert_allclose(a.derivative(t[1:-1]), (a(t[1:-1] + h) - a(t[1:-1] - h)) / (2 * h), atol=1e-7)
    with pytest.raises(ValueError):
        CutoffFunction(4)


def test_linear_ramp():
    r = LinearRamp()
    assert r(np.pi) == 0.5 and np.all(r.derivative(np.zeros(3)) == 1 / (2 * np.pi))


def test_zero_pair_has_zero_string_form():
    M = forms.torus(3, 6)
    pair = GaugePair(forms.zero_form(M, 1, ntheta=8), forms.zero_form(M, 0, ntheta=8))
    assert string_form(P1, pair).norm_inf() == 0


def test_routes_agree_on_torus():
    pair = random_gauge_pair(forms.torus(3, 12), 16, 2, seed=0)
    s = string_form(P1, pair)
    assert s.degree == 3 and s.kind == "scalar" and s.ntheta is None
    assert _rel(string_form_caloron(P1, pair).components, s.components) < 1e-8
    assert _rel(killingback_form(pair).components, s.components) < 1e-10


def test_routes_agree_for_su3_and_degree_one():
    pair = random_gauge_pair(forms.torus(3, 8), 16, 2, seed=3, n=3)
    f = lie.InvariantPolynomial(2, 0.7)
    assert _rel(string_form_caloron(f, pair).components, string_form(f, pair).components) < 1e-8
    f1 = lie.InvariantPolynomial(1)
    # the trace vanishes on su(n), so the degree-one form is identically zero
    assert string_form(f1, pair).norm_inf() < 1e-12


def test_degree_overflow():
    pair = random_gauge_pair(forms.torus(3, 8), 16, 2, seed=0)
    with pytest.raises(DimensionError):
        string_form(lie.InvariantPolynomial(3), pair)
    with pytest.raises(DimensionError):
        killingback_form(random_gauge_pair(forms.torus(2, 8), 16, 2, seed=0))


def _identity_chart():
    # g = e at every node with a nonzero differential
    M = forms.torus(3, 2)
    rng = np.random.default_rng(0)
    dg = np.broadcast_to(lie.random_algebra(2, rng, (3,))[:, None, None, None], (3,) + M.shape + (2, 2))
    return GroupChart(M, np.broadcast_to(np.eye(2, dtype=complex), M.shape + (2, 2)), dg.copy())


def test_path_fibration_at_identity():
    chart = _identity_chart()
    alpha = CutoffFunction()
    pair = path_fibration_pair(alpha, chart, 16)
    t = 2 * np.pi * np.arange(16) / 16
    assert pair.Phi.norm_inf() < 1e-15
    expect = (t / (2 * np.pi) - alpha(t))[:, None, None] * chart.dg[..., None, :, :]
    np.testing.assert_allclose(pair.A.components, expect, atol=1e-14)


def test_path_fibration_rejects_cut_locus_and_bad_ramp():
    chart = _identity_chart()
    minus = GroupChart(chart.manifold, -chart.g, chart.dg)
    with pytest.raises(BranchError):
        path_fibration_pair(CutoffFunction(), minus, 16)
    R = np.array([[0, 1], [-1, 0]], complex)
    with pytest.raises(ValueError):
        path_fibration_pair(CutoffFunction(), chart, 16, base_point=R)
    with pytest.raises(ValueError):
        path_fibration_pair(CutoffFunction(), chart, 4)


def test_path_section_endpoints():
    chart = hopf_chart(4, 6, 6, eta_range=(1.2, 1.5))
    p = path_section(chart, 16)
    np.testing.assert_allclose(p[..., 0, :, :], np.broadcast_to(np.eye(2), chart.g.shape), atol=1e-14)
    np.testing.assert_allclose(p[..., -1, :, :], chart.g, atol=1e-13)


def test_path_fibration_small_patch():
    chart = hopf_chart(12, 24, 24, eta_range=(1.25, np.pi / 2))
    alpha = CutoffFunction()
    pair = path_fibration_pair(alpha, chart, 32)
    s, tau = string_form(P1, pair), transgression_form(P1, chart)
    assert _rel(s.components, tau.components) < 1e-5
    assert _rel(curvature(pair).components, standard_curvature(alpha, chart, 32).components) < 1e-6
    assert group_distance(classifying_map(pair), chart.g) < 1e-6


def test_transgression_matches_cartan_density():
    chart = hopf_chart(8, 8, 8)
    tau = transgression_form(P1, chart).components[0]
    np.testing.assert_allclose(tau, -cartan_density(chart).real / (24 * math.pi ** 2), atol=1e-15)


def test_difference_correction_and_independence():
    M = forms.torus(3, 12)
    a, b = random_gauge_pair(M, 16, 1, 0), random_gauge_pair(M, 16, 1, 1)
    resid, chi = independence_defect(P1, a, b, quad_nodes=2)
    assert chi.degree == 2 and resid < 1e-6
    # higher quadrature changes nothing since the rule is already exact
    chi8 = difference_correction(P1, a, b, quad_nodes=8)
    assert np.max(np.abs(chi8.components - chi.components)) < 1e-12
    assert abs(class_pairing(string_form(P1, a)) - class_pairing(string_form(P1, b))) < 1e-7
    with pytest.raises(ValueError):
        difference_correction(P1, a, b, quad_nodes=1)
    with pytest.raises(DimensionError):
        difference_correction(P1, a, random_gauge_pair(forms.torus(3, 8), 16, 1, 2))


def test_class_pairing_needs_closed_manifold():
    chart = hopf_chart(4, 4, 4, eta_range=(0.5, 1.0))
    with pytest.raises(DimensionError):
        class_pairing(transgression_form(P1, chart))
    vol = forms.volume_form(forms.torus(3, 4))
    assert class_pairing(vol) == pytest.approx((2 * np.pi) ** 3)


def test_covering_pairing_is_minus_one():
    assert covering_pairing(P1, ntheta=32, n_eta=16, n_xi=24) == pytest.approx(-1.0, abs=1e-3)


def test_exact_form_pairs_to_zero():
    M = forms.torus(3, 12)
    x, y, z = M.mesh()
    a = forms.from_components(M, 2, {(0, 1): np.sin(x + z) * np.cos(y), (1, 2): np.exp(np.cos(x))}, kind="scalar")
    assert abs(class_pairing(forms.exterior_derivative(a))) < 1e-8


def test_difference_correction_vanishes_for_equal_pairs():
    pair = random_gauge_pair(forms.torus(3, 8), 16, 2, seed=0)
    assert difference_correction(P1, pair, pair, quad_nodes=2).norm_inf() == 0
