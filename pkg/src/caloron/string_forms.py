"""String forms of loop-group gauge data and the transgression form on SU(2).

``string_form`` integrates ``k f(nabla Phi, F, ..., F)`` over the loop
circle.  The path-fibration pair realizes the standard connection and
Higgs field pulled back along a local section of ``PG -> G``, for which
the string form coincides pointwise with the transgression form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _diff, loops
from .charts import GroupChart, hopf_chart, maurer_cartan
from .errors import DimensionError
from .forms import (FormField, exterior_derivative, fiber_integrate_S1, from_components,
                    integrate_top, multi_indices, poly_on_forms, product_with_circle,
                    theta_integral, wedge_bracket)
from .gauge import GaugePair, curvature, higgs_covariant_derivative
from .lie import _eig_antihermitian, _phi_left, dagger, exp, inner, log
from .transform import caloron_curvature, caloron_transform

# -- exact coefficients ----------------------------------------------------------

@dataclass(frozen=True)
class TransgressionCoefficient:
    """``k! (k-1)! / (2k-1)!``; the sign ``(-1/2)^(k-1)`` is applied separately."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")

    @property
    def value(self) -> Fraction:
        k = self.k
        return Fraction(math.factorial(k) * math.factorial(k - 1), math.factorial(2 * k - 1))

    @property
    def signed(self) -> Fraction:
        return Fraction(-1, 2) ** (self.k - 1) * self.value


def sury_identity(k):
    """Both sides of ``k sum_i C(k-1, i) (-1)^i / (k+i) = k!(k-1)!/(2k-1)!``."""
    if k < 1:
        raise ValueError("k must be positive")
    lhs = k * sum(Fraction(math.comb(k - 1, i) * (-1) ** i, k + i) for i in range(k))
    rhs = TransgressionCoefficient(k).value
    return lhs, rhs, lhs == rhs


# -- cutoff ------------------------------------------------------------------------

@dataclass(frozen=True)
class CutoffFunction:
    """Polynomial smoothstep on ``[0, 2 pi]``, 0 before and 1 after.

    An odd ``order = 2m + 1`` gives a ramp whose first ``m`` derivatives
    vanish at both ends.
    """

    order: int = 7
    period: float = 2 * np.pi

    def __post_init__(self):
        if self.order < 1 or self.order % 2 == 0:
            raise ValueError("smoothstep order must be odd and positive")

    @property
    def smoothness(self):
        return (self.order - 1) // 2

    @property
    def _poly(self):
        m = self.smoothness
        c = np.zeros(self.order + 1)
        for j in range(m + 1):
            c[m + 1 + j] = math.comb(m + j, j) * math.comb(2 * m + 1, m - j) * (-1) ** j
        return np.polynomial.Polynomial(c)

    def __call__(self, t):
        x = np.clip(np.asarray(t, dtype=float) / self.period, 0.0, 1.0)
        return self._poly(x)

    def derivative(self, t):
        x = np.asarray(t, dtype=float) / self.period
        inside = (x > 0) & (x < 1)
        return np.where(inside, self._poly.deriv()(np.clip(x, 0, 1)) / self.period, 0.0)


@dataclass(frozen=True)
class LinearRamp:
    """``t / 2 pi``: the ramp of the one-parameter section ``exp(t log g / 2 pi)``."""

    period: float = 2 * np.pi

    def __call__(self, t):
        return np.asarray(t, dtype=float) / self.period

    def derivative(self, t):
        return np.full(np.shape(t), 1.0 / self.period)


# -- string forms ------------------------------------------------------------------

def _check_degree(f, dim):
    if 2 * f.degree - 1 > dim:
        raise DimensionError(f"a {2 * f.degree - 1}-form does not fit on a {dim}-dimensional base")


def string_form(f, pair):
    """``k int_{S^1} f(nabla Phi, F, ..., F) dtheta`` on the base of ``pair``."""
    _check_degree(f, pair.base.dim)
    F = curvature(pair)
    nabla = higgs_covariant_derivative(pair)
    integrand = poly_on_forms(f, nabla, *([F] * (f.degree - 1)))
    return theta_integral(integrand) * f.degree


def string_form_caloron(f, pair):
    """Fiber integral of the Chern-Weil form of the caloron connection."""
    _check_degree(f, pair.base.dim)
    Ft = caloron_curvature(caloron_transform(pair))
    return fiber_integrate_S1(poly_on_forms(f, *([Ft] * f.degree)))


def killingback_form(pair):
    """``-(1/4 pi^2) int <nabla Phi, F> dtheta`` assembled component by component."""
    M = pair.base
    if M.dim < 3:
        raise DimensionError("a 3-form needs a base of dimension at least 3")
    F = curvature(pair)
    nabla = higgs_covariant_derivative(pair)
    comps = {}
    for a, b, c in multi_indices(M.dim, 3):
        dens = (inner(nabla.component((a,)), F.component((b, c)))
                - inner(nabla.component((b,)), F.component((a, c)))
                + inner(nabla.component((c,)), F.component((a, b))))
        comps[(a, b, c)] = -dens.sum(axis=-1) * (2 * np.pi / pair.ntheta) / (4 * np.pi ** 2)
    return from_components(M, 3, comps, "scalar")


def transgression_form(f, chart):
    """``(-1/2)^(k-1) k!(k-1)!/(2k-1)! f(Theta, [Theta, Theta], ...)`` on a group chart."""
    if not isinstance(chart, GroupChart):
        chart = hopf_chart() if chart is None else chart
    _check_degree(f, chart.manifold.dim)
    Theta = maurer_cartan(chart)
    B = wedge_bracket(Theta, Theta)
    coeff = float(TransgressionCoefficient(f.degree).signed)
    return poly_on_forms(f, Theta, *([B] * (f.degree - 1))) * coeff


def class_pairing(omega, M=None):
    """Pairing of a top-degree form with the fundamental cycle of a closed grid manifold."""
    M = M or omega.base
    if not M.closed:
        raise DimensionError(f"{M.name} is not a closed manifold")
    return integrate_top(omega, M)


# -- path fibration ----------------------------------------------------------------

def _ad_scaled(w, U, s, func, X):
    # func(s ad_Y) X for Y = U diag(i w) U^*; the eigenbasis is shared by all s
    z = 1j * s * (w[..., :, None] - w[..., None, :])
    return U @ (func(z) * (dagger(U) @ X @ U)) @ dagger(U)


def path_fibration_pair(alpha, chart, ntheta, base_point=None, ramp=None):
    """Standard connection and Higgs field of ``PG -> G`` pulled back to ``chart``.

    The section is ``p(t) = exp(beta(t) Z) exp(beta(t) Y)`` with
    ``Z = log c`` and ``Y = log(c^{-1} g)``.  With the default ``c = e``
    and linear ``beta`` this is ``exp(t log g / 2 pi)``.  A base point
    other than ``e`` needs a flat-ended ``ramp`` so that ``p^{-1} dp/dt``
    stays periodic.
    """
    if ntheta < 8:
        raise ValueError("need at least 8 loop samples")
    ramp = ramp or LinearRamp()
    g, dg = chart.g, chart.dg
    n = chart.n
    if base_point is None:
        Z = np.zeros((n, n), complex)
        c = np.eye(n, dtype=complex)
    else:
        if isinstance(ramp, LinearRamp):
            raise ValueError("a base point other than e needs a flat-ended ramp")
        c = np.asarray(base_point, dtype=complex)
        Z = log(c)
    Y = log(dagger(c) @ g)
    wY, UY = _eig_antihermitian(Y)
    wZ, UZ = _eig_antihermitian(Z)
    Theta = dagger(g)[None] @ dg
    Theta_hat = dg @ dagger(g)[None]
    dY = _ad_scaled(wY, UY, 1.0, lambda z: 1.0 / _phi_left(z), Theta)

    t = loops.theta_grid(ntheta)
    beta, dbeta, a_t = ramp(t), ramp.derivative(t), alpha(t)
    A = np.empty((chart.manifold.dim,) + g.shape[:-2] + (ntheta, n, n), complex)
    Phi = np.empty(g.shape[:-2] + (ntheta, n, n), complex)
    for j in range(ntheta):
        b = (UY * np.exp(1j * beta[j] * wY)[..., None, :]) @ dagger(UY)
        a = (UZ * np.exp(1j * beta[j] * wZ)[None, :]) @ dagger(UZ)
        p = a @ b
        pullback_mc = _ad_scaled(wY, UY, beta[j], _phi_left, beta[j] * dY)
        A[..., j, :, :] = pullback_mc - a_t[j] * (dagger(p)[None] @ Theta_hat @ p[None])
        Phi[..., j, :, :] = dbeta[j] * (dagger(b) @ Z @ b + Y)
    M = chart.manifold
    return GaugePair(FormField(M, 1, A, "algebra", ntheta),
                     FormField(M, 0, Phi[None], "algebra", ntheta), "spectral")


def path_section(chart, ntheta, base_point=None, ramp=None):
    """Samples of the section ``p(theta)`` on the chart, shape ``(*shape, ntheta + 1, n, n)``."""
    ramp = ramp or LinearRamp()
    n = chart.n
    c = np.eye(n, dtype=complex) if base_point is None else np.asarray(base_point, complex)
    Z = log(c) if base_point is not None else np.zeros((n, n), complex)
    Y = log(dagger(c) @ chart.g)
    t = np.linspace(0.0, 2 * np.pi, ntheta + 1)
    out = [exp(ramp(s) * Z) @ exp(ramp(s) * Y) for s in t]
    return np.stack(out, axis=-3)


def standard_curvature(alpha, chart, ntheta, base_point=None, ramp=None):
    """Closed form ``1/2 (alpha^2 - alpha) Ad(p^{-1}) [Theta_hat, Theta_hat]``."""
    Theta_hat = maurer_cartan(chart, right=True)
    B = wedge_bracket(Theta_hat, Theta_hat).components
    p = path_section(chart, ntheta, base_point, ramp)[..., :-1, :, :]
    a_t = alpha(loops.theta_grid(ntheta))
    fac = (0.5 * (a_t ** 2 - a_t))[:, None, None]
    comps = fac * (dagger(p)[None] @ B[..., None, :, :] @ p[None])
    return FormField(chart.manifold, 2, comps, "algebra", ntheta)


# -- connection independence -------------------------------------------------------

def difference_correction(f, pair, pair2, quad_nodes=8):
    """``chi = k int_0^1 int_{S^1} f(alpha~, F~_t, ..., F~_t) dt``.

    Along the straight line ``A_t = A + t alpha``, ``Phi_t = Phi + t phi``
    the integrand is a polynomial of degree at most ``2k - 2`` in ``t``,
    so Gauss-Legendre with ``quad_nodes >= k`` nodes is exact.
    """
    k = f.degree
    if quad_nodes < k:
        raise ValueError(f"need at least {k} quadrature nodes for exactness")
    M = pair.base
    if not (M.same_grid(pair2.base) and pair.n == pair2.n and pair.ntheta == pair2.ntheta):
        raise DimensionError("pairs live on different grids")
    if 2 * k - 1 > M.dim:
        raise DimensionError(f"a {2 * k - 1}-form does not fit on a {M.dim}-dimensional base")
    P = product_with_circle(M, pair.ntheta)
    dA, dPhi = pair2.A - pair.A, pair2.Phi - pair.Phi
    alpha_t = caloron_transform(GaugePair(dA, dPhi, pair.theta_mode), P)
    nodes, weights = _diff.gauss_legendre(quad_nodes, 0.0, 1.0)
    chi = None
    for t, w in zip(nodes, weights):
        pt = GaugePair(pair.A + dA * t, pair.Phi + dPhi * t, pair.theta_mode)
        Ft = caloron_curvature(caloron_transform(pt, P))
        term = fiber_integrate_S1(poly_on_forms(f, alpha_t, *([Ft] * (k - 1)))) * (k * w)
        chi = term if chi is None else chi + term
    return chi


def independence_defect(f, pair, pair2, quad_nodes=8):
    """``||s_f(pair2) - s_f(pair) - d chi||_inf`` and the correction ``chi``."""
    chi = difference_correction(f, pair, pair2, quad_nodes)
    delta = string_form(f, pair2) - string_form(f, pair)
    resid = delta - exterior_derivative(chi)
    return resid.norm_inf(), chi


# -- covering of SU(2) ---------------------------------------------------------------

# Second base point for the covering: the patch near eta = 0 uses c = R,
# whose cut point -R sits on the circle eta = pi/2.
_R = np.array([[0, 1], [-1, 0]], dtype=complex)


def covering_pairing(f, ntheta=32, n_eta=24, n_xi=24, overlap=(np.pi / 6, np.pi / 3),
                     alpha=None, blend_order=15):
    """Integral of ``s_f`` over SU(2) assembled from two Hopf patches.

    The patch ``eta >= overlap[0]`` uses the section based at ``e``; the
    patch ``eta <= overlap[1]`` one based at ``R``.  A smoothstep in
    ``eta`` across the overlap serves as partition of unity.
    """
    alpha = alpha or CutoffFunction()
    lo, hi = overlap
    blend = CutoffFunction(blend_order, period=1.0)
    total = 0.0
    patches = [((lo, np.pi / 2), None, None, lambda e: blend((e - lo) / (hi - lo))),
               ((0.0, hi), _R, CutoffFunction(), lambda e: 1.0 - blend((e - lo) / (hi - lo)))]
    for rng, c, ramp, weight in patches:
        chart = hopf_chart(n_eta, n_xi, n_xi, eta_range=rng)
        s = string_form(f, path_fibration_pair(alpha, chart, ntheta, c, ramp))
        eta = chart.manifold.mesh()[0]
        total += integrate_top(s * weight(eta)[None], chart.manifold)
    return total
