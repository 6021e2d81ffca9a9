"""Connection and Higgs field pairs of a trivialized loop-group bundle.

Both fields are loop-algebra valued forms on the base ``M``: the
connection ``A`` is a 1-form and the Higgs field ``Phi`` a 0-form, each
carrying a loop axis of ``ntheta`` samples.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import loops
from .errors import BandwidthError, DimensionError, InvariantError
from .forms import FormField, exterior_derivative, pullback, wedge_bracket
from .lie import TOL_ALG, algebra_defect, dagger, exp, su_basis


@dataclass(frozen=True, eq=False)
class GaugePair:
    A: FormField
    Phi: FormField
    theta_mode: str = "spectral"

    def __post_init__(self):
        A, Phi = self.A, self.Phi
        if A.degree != 1 or Phi.degree != 0:
            raise DimensionError("need a 1-form connection and a 0-form Higgs field")
        if A.value_kind != "loop-algebra" or Phi.value_kind != "loop-algebra":
            raise DimensionError("connection and Higgs field must be loop-algebra valued")
        if not A.base.same_grid(Phi.base) or A.ntheta != Phi.ntheta or A.n != Phi.n:
            raise DimensionError("connection and Higgs field disagree on grid, loop size or n")

    @property
    def base(self):
        return self.A.base

    @property
    def ntheta(self):
        return self.A.ntheta

    @property
    def n(self):
        return self.A.n

    def validate(self, tol=1e-10):
        d = max(algebra_defect(self.A.components), algebra_defect(self.Phi.components))
        if d > tol:
            raise InvariantError(f"gauge data leave su(n): defect {d:.2e}")
        return self


def curvature(pair):
    """``F = dA + 1/2 [A, A]``, differentiating along the base only."""
    A = pair.A
    return exterior_derivative(A) + 0.5 * wedge_bracket(A, A)


def theta_derivative_form(omega, mode="spectral"):
    return omega.like(loops.theta_derivative(omega.components, mode))


def higgs_covariant_derivative(pair):
    """``nabla Phi = d Phi + [A, Phi] - dA/dtheta``."""
    dPhi = exterior_derivative(pair.Phi)
    return dPhi + wedge_bracket(pair.A, pair.Phi) - theta_derivative_form(pair.A, pair.theta_mode)


def gauge_transform(pair, gamma):
    """Act by a based map ``gamma: M -> Omega G`` given as ``(*M, ntheta, n, n)`` samples.

    ``A -> Ad(gamma^{-1}) A + gamma^{-1} d gamma`` and
    ``Phi -> Ad(gamma^{-1}) Phi + gamma^{-1} d gamma / dtheta``.
    """
    g = gamma.samples if hasattr(gamma, "samples") else np.asarray(gamma)
    M = pair.base
    if g.shape != M.shape + (pair.ntheta, pair.n, pair.n):
        raise DimensionError(f"gauge samples {g.shape} do not match the pair")
    if np.max(np.abs(g[..., 0, :, :] - np.eye(pair.n))) > TOL_ALG:
        raise InvariantError("gauge transformation is not based at theta = 0")
    gi = dagger(g)
    dg = np.array([M.diff(g, i) for i in range(M.dim)])
    A = pair.A.like(gi @ pair.A.components @ g + gi @ dg)
    dth = loops.theta_derivative(g, pair.theta_mode)
    Phi = pair.Phi.like(gi @ pair.Phi.components @ g + (gi @ dth)[None])
    return GaugePair(A, Phi, pair.theta_mode)


def pullback_pair(psi, pair):
    """Pull both fields back along a grid map; the loop axis rides along."""
    return GaugePair(pullback(psi, pair.A), pullback(psi, pair.Phi), pair.theta_mode)


def _axis_basis(ax, bw):
    s = 2 * np.pi * (ax.nodes - ax.lo) / ax.length
    rows = [np.ones_like(s)]
    for k in range(1, bw + 1):
        rows += [np.cos(k * s), np.sin(k * s)]
    return np.array(rows)


def _theta_basis(ntheta, bw, based):
    t = loops.theta_grid(ntheta)
    rows = [] if based else [np.ones_like(t)]
    for k in range(1, bw + 1):
        rows += [1 - np.cos(k * t), np.sin(k * t)] if based else [np.cos(k * t), np.sin(k * t)]
    return np.array(rows)


def _freqs(bw):
    return np.array([0] + [k for k in range(1, bw + 1) for _ in (0, 1)])


def random_trig_field(M, ntheta, bandwidth, rng, n=2, amplitude=0.5, count=1, based=False):
    """Band-limited su(n)-valued samples of shape ``(count, *M.shape, ntheta, n, n)``.

    Coefficients decay like ``1 / (1 + |k|^2)``; ``based=True`` uses only
    circle modes vanishing at ``theta = 0``.
    """
    bases = [_axis_basis(ax, bandwidth) for ax in M.axes]
    tb = _theta_basis(ntheta, bandwidth, based)
    if tb.shape[0] == 0:
        return np.zeros((count,) + M.shape + (ntheta, n, n), complex)
    freqs = [_freqs(bandwidth)] * M.dim + [_freqs(bandwidth)[1:] if based else _freqs(bandwidth)]
    ksq = sum(np.meshgrid(*[f ** 2 for f in freqs], indexing="ij"))
    dim = n * n - 1
    C = rng.standard_normal((count,) + ksq.shape + (dim,)) * (amplitude / (1.0 + ksq))[None, ..., None]
    vals = C
    for B in bases + [tb]:
        # contracting the leading frequency axis appends its grid axis last
        vals = np.tensordot(vals, B, axes=(1, 0))
    vals = np.moveaxis(vals, 1, -1)
    return np.einsum("...a,aij->...ij", vals, su_basis(n))


def random_gauge_pair(M, ntheta, bandwidth, seed, n=2, amplitude=0.5, theta_mode="spectral"):
    """Reproducible band-limited pair; the Higgs field is unbased."""
    if bandwidth < 0:
        raise BandwidthError("bandwidth must be non-negative")
    if 2 * bandwidth >= min(min(M.shape), ntheta):
        raise BandwidthError(f"bandwidth {bandwidth} reaches the Nyquist limit of the grid")
    rng = np.random.default_rng(seed)
    fields = random_trig_field(M, ntheta, bandwidth, rng, n, amplitude, count=M.dim + 1)
    A = FormField(M, 1, fields[: M.dim], "algebra", ntheta)
    Phi = FormField(M, 0, fields[M.dim:], "algebra", ntheta)
    return GaugePair(A, Phi, theta_mode)


def random_based_gauge(M, ntheta, bandwidth, seed, n=2, amplitude=0.3):
    """``exp`` of a band-limited algebra field that vanishes at ``theta = 0``."""
    if 2 * bandwidth >= min(min(M.shape), ntheta):
        raise BandwidthError(f"bandwidth {bandwidth} reaches the Nyquist limit of the grid")
    rng = np.random.default_rng(seed)
    X = random_trig_field(M, ntheta, bandwidth, rng, n, amplitude, count=1, based=True)[0]
    g = exp(X)
    g[..., 0, :, :] = np.eye(n)
    return loops.LoopGroupField(g, based=True)


def _integer_spectrum(n, rng, max_freq):
    # U diag(i m) U^* with integer m summing to zero: exp(t Y) is 2 pi periodic
    # and a trigonometric polynomial in t of degree at most max_freq
    while True:
        m = rng.integers(-max_freq, max_freq + 1, size=n - 1)
        last = -m.sum()
        if abs(last) <= max_freq and (np.any(m != 0) or last != 0):
            break
    m = np.append(m, last)
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return (Q * (1j * m)[None, :]) @ dagger(Q), m


def _periodic_exp(Y, m, t):
    # exp(t Y) for an integer-spectrum Y, evaluated exactly on an array of t
    _, U = np.linalg.eigh(-1j * Y)
    w = np.round(np.linalg.eigvalsh(-1j * Y))
    return (U * np.exp(1j * np.multiply.outer(t, w))[..., None, :]) @ dagger(U)


def random_trig_gauge(M, ntheta, seed, n=2, factors=2, max_freq=1):
    """Based gauge map that is a trigonometric polynomial in every variable.

    ``gamma = prod_j h_j exp(theta Y_j) h_j^{-1}`` with ``h_j = exp(x_a W_j)``
    for a random periodic axis ``x_a``; ``Y_j`` and ``W_j`` have integer
    spectra bounded by ``max_freq``, so the map is resolved exactly once
    the grids exceed twice its total frequency.
    """
    rng = np.random.default_rng(seed)
    periodic = [i for i, ax in enumerate(M.axes) if ax.periodic]
    if not periodic:
        raise DimensionError("random_trig_gauge needs a periodic axis")
    mesh = M.mesh()
    t = loops.theta_grid(ntheta)
    g = np.broadcast_to(np.eye(n, dtype=complex), M.shape + (ntheta, n, n)).copy()
    for _ in range(factors):
        a = periodic[rng.integers(len(periodic))]
        ax = M.axes[a]
        x = 2 * np.pi * (mesh[a] - ax.lo) / ax.length
        W, mw = _integer_spectrum(n, rng, max_freq)
        Y, my = _integer_spectrum(n, rng, max_freq)
        h = _periodic_exp(W, mw, x)[..., None, :, :]
        r = _periodic_exp(Y, my, t)
        g = g @ (h @ r @ dagger(h))
    g[..., 0, :, :] = np.eye(n)
    return loops.LoopGroupField(g, based=True)
