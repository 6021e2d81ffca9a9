"""Caloron transform of gauge data and the curvature identity.

In the canonical section ``g = e`` the transformed connection on
``M x S^1`` is ``A(theta) + Phi dtheta``; the loop axis of the pair
becomes the last grid axis of the product.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError
from .forms import FormField, exterior_derivative, from_components, product_with_circle, wedge_bracket
from .gauge import GaugePair, curvature, higgs_covariant_derivative


def caloron_transform(pair, product=None):
    """Pure data reshuffle: the circle components become ``dtheta`` components."""
    P = product or product_with_circle(pair.base, pair.ntheta)
    comps = np.concatenate([pair.A.components, pair.Phi.components], axis=0)
    return FormField(P, 1, comps, "algebra")


def inverse_caloron(At, theta_mode="spectral"):
    """Split a 1-form on ``M x S^1`` into connection and Higgs field on ``M``."""
    M = At.base.factor
    if M is None:
        raise DimensionError("form is not defined on a product with a circle")
    if At.degree != 1 or At.kind != "algebra" or At.ntheta:
        raise DimensionError("inverse caloron expects a plain algebra-valued 1-form")
    nt = At.base.shape[-1]
    d = M.dim
    A = FormField(M, 1, At.components[:d], "algebra", nt)
    Phi = FormField(M, 0, At.components[d:], "algebra", nt)
    return GaugePair(A, Phi, theta_mode)


def caloron_curvature(At):
    """``dA~ + 1/2 [A~, A~]`` with the circle treated as a geometric direction."""
    return exterior_derivative(At) + 0.5 * wedge_bracket(At, At)


def assembled_curvature(pair, product=None):
    """``F + nabla Phi ^ dtheta`` on ``M x S^1``, built from the gauge module."""
    P = product or product_with_circle(pair.base, pair.ntheta)
    F = curvature(pair)
    nabla = higgs_covariant_derivative(pair)
    d = pair.base.dim
    comps = {}
    for I, c in zip(F.indices, F.components):
        comps[I] = c
    for (i,), c in zip(nabla.indices, nabla.components):
        comps[(i, d)] = c
    return from_components(P, 2, comps, "algebra")


def caloron_curvature_defect(pair, product=None):
    """``||F~_direct - (F + nabla Phi dtheta)||_inf / ||F~_direct||_inf``."""
    P = product or product_with_circle(pair.base, pair.ntheta)
    direct = caloron_curvature(caloron_transform(pair, P))
    assembled = assembled_curvature(pair, P)
    scale = direct.norm_inf()
    diff = np.max(np.abs(direct.components - assembled.components), initial=0.0)
    return float(diff / scale) if scale > 0 else float(diff)
