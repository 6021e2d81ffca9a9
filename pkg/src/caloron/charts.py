"""Coordinate charts on SU(2) with analytic Maurer-Cartan forms."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forms import FormField, GridManifold, hopf
from .lie import dagger


@dataclass(frozen=True, eq=False)
class GroupChart:
    """Grid manifold together with its map into the group.

    ``g`` has shape ``(*shape, n, n)``; ``dg`` holds the coordinate partial
    derivatives with shape ``(dim, *shape, n, n)``.
    """

    manifold: GridManifold
    g: np.ndarray
    dg: np.ndarray

    @property
    def n(self):
        return self.g.shape[-1]


def hopf_chart(n_eta=48, n_xi1=64, n_xi2=64, eta_range=(0.0, np.pi / 2), left=None,
               deriv="spectral"):
    """SU(2) in Hopf coordinates, optionally left-translated by ``left``.

    ``g = [[cos(eta) e^{i xi1}, sin(eta) e^{i xi2}],
           [-sin(eta) e^{-i xi2}, cos(eta) e^{-i xi1}]]``
    """
    M = hopf(n_eta, n_xi1, n_xi2, eta_range, deriv)
    eta, x1, x2 = M.mesh()
    a = np.cos(eta) * np.exp(1j * x1)
    b = np.sin(eta) * np.exp(1j * x2)
    g = _su2(a, b)
    d_eta = _su2(-np.sin(eta) * np.exp(1j * x1), np.cos(eta) * np.exp(1j * x2))
    d_x1 = _su2(1j * a, 0 * b)
    d_x2 = _su2(0 * a, 1j * b)
    dg = np.array([d_eta, d_x1, d_x2])
    if left is not None:
        g, dg = left @ g, left @ dg
    return GroupChart(M, g, dg)


def _su2(a, b):
    # [[a, b], [-conj(b), conj(a)]] is the general su(2)-linear block
    out = np.empty(np.shape(a) + (2, 2), dtype=complex)
    out[..., 0, 0] = a
    out[..., 0, 1] = b
    out[..., 1, 0] = -np.conj(b)
    out[..., 1, 1] = np.conj(a)
    return out


def maurer_cartan(chart: GroupChart, right: bool = False) -> FormField:
    """Left-invariant ``g^{-1} dg`` or, with ``right=True``, ``dg g^{-1}``."""
    if right:
        comps = chart.dg @ dagger(chart.g)[None]
    else:
        comps = dagger(chart.g)[None] @ chart.dg
    return FormField(chart.manifold, 1, comps, "algebra")


def cartan_density(chart: GroupChart) -> np.ndarray:
    """Coefficient of ``tr(Theta^3)`` on the chart, ``sum_sigma sgn tr(Theta_s1 Theta_s2 Theta_s3)``.

    Computed straight from the coordinate components as an independent
    check on the form machinery.
    """
    T = dagger(chart.g)[None] @ chart.dg
    t0, t1, t2 = T
    tr = lambda X: np.trace(X, axis1=-2, axis2=-1)
    val = (tr(t0 @ t1 @ t2) - tr(t0 @ t2 @ t1) - tr(t1 @ t0 @ t2)
           + tr(t1 @ t2 @ t0) + tr(t2 @ t0 @ t1) - tr(t2 @ t1 @ t0))
    return val
