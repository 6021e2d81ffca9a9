"""Higgs-field holonomy: solving ``dg/dtheta = g phi(theta)`` from ``g(0) = e``.

The solver is classical fourth-order Runge-Kutta on a refined circle grid.
Intermediate values of ``phi`` come from trigonometric interpolation, and
every step is followed by a polar projection back onto the unitary group.
"""
from __future__ import annotations

import numpy as np

from . import _diff
from .errors import InvariantError
from .lie import algebra_defect, polar_unitary, project_algebra
from .loops import PathGroupField
from .transform import caloron_transform

DEFAULT_SUBSTEPS = 8


def higgs_holonomy(phi, substeps=DEFAULT_SUBSTEPS, tol=1e-8):
    """Path ``g`` on ``[0, 2 pi]`` with ``g^{-1} dg/dtheta = phi``.

    ``phi`` is a loop field (or raw samples) of shape ``(..., N, n, n)``;
    leading axes are solved independently.  Returns the path sampled at
    the ``N + 1`` circle nodes including ``theta = 2 pi``.
    """
    a = phi.samples if hasattr(phi, "samples") else np.asarray(phi)
    if algebra_defect(a) > tol * max(1.0, float(np.max(np.abs(a), initial=0.0))):
        raise InvariantError("Higgs field samples are not anti-Hermitian traceless")
    a = project_algebra(a)
    N, n = a.shape[-3], a.shape[-1]
    steps = N * substeps
    h = 2 * np.pi / steps
    fine = _diff.fourier_resample(a, a.ndim - 3, 2 * steps)
    fine = np.moveaxis(fine, -3, 0)
    g = np.broadcast_to(np.eye(n, dtype=complex), a.shape[:-3] + (n, n)).copy()
    path = [g]
    for i in range(steps):
        p0, ph, p1 = fine[2 * i], fine[2 * i + 1], fine[(2 * i + 2) % (2 * steps)]
        k1 = g @ p0
        k2 = (g + 0.5 * h * k1) @ ph
        k3 = (g + 0.5 * h * k2) @ ph
        k4 = (g + h * k3) @ p1
        g = polar_unitary(g + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4))
        if (i + 1) % substeps == 0:
            path.append(g)
    return PathGroupField(np.stack(path, axis=-3))


def classifying_map(pair, substeps=DEFAULT_SUBSTEPS):
    """Endpoint ``hol_Phi(m)`` at every base node, shape ``(*M.shape, n, n)``."""
    return higgs_holonomy(pair.Phi.components[0], substeps).endpoint


def group_distance(g, h):
    """Largest spectral-norm distance between stacked group elements."""
    return float(np.max(np.linalg.norm(np.asarray(g) - np.asarray(h), ord=2, axis=(-2, -1)), initial=0.0))


def caloron_holonomy_defect(pair, substeps=DEFAULT_SUBSTEPS):
    """Distance between the circle holonomy of the caloron connection and ``hol_Phi``.

    The circle holonomy is read from the ``dtheta`` component of the
    transformed 1-form on ``M x S^1``.
    """
    At = caloron_transform(pair)
    d = pair.base.dim
    along_circle = At.components[d]  # (*M, ntheta, n, n): theta is the last grid axis
    h_circle = higgs_holonomy(along_circle, substeps).endpoint
    return group_distance(h_circle, classifying_map(pair, substeps))


def unitarity_drift(path):
    g = path.samples
    n = g.shape[-1]
    return float(np.max(np.abs(g @ np.conj(np.swapaxes(g, -1, -2)) - np.eye(n))))
