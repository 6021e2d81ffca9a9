"""Circle-sampled loops in su(n) and SU(n), and paths in SU(n).

Samples sit at ``theta_j = 2 pi j / N`` with the loop axis third from the
end: algebra and group samples have shape ``(..., N, n, n)``, where any
leading axes are a batch (typically the nodes of a base grid).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _diff
from .errors import InvariantError, ResolutionError
from .lie import TOL_ALG, dagger, identity

THETA_AXIS = -3
RESOLUTION_LIMIT = 0.5


def theta_grid(n):
    return 2 * np.pi * np.arange(n) / n


@dataclass(frozen=True, eq=False)
class LoopAlgebraField:
    samples: np.ndarray
    based: bool = False

    def __post_init__(self):
        if self.samples.ndim < 3:
            raise InvariantError("loop samples need shape (..., N, n, n)")
        if self.based and np.max(np.abs(self.samples[..., 0, :, :])) > TOL_ALG:
            raise InvariantError("based loop does not vanish at theta = 0")

    @property
    def ntheta(self):
        return self.samples.shape[THETA_AXIS]


@dataclass(frozen=True, eq=False)
class LoopGroupField:
    samples: np.ndarray
    based: bool = True

    def __post_init__(self):
        if self.based:
            n = self.samples.shape[-1]
            if np.max(np.abs(self.samples[..., 0, :, :] - np.eye(n))) > TOL_ALG:
                raise InvariantError("based loop is not the identity at theta = 0")

    @property
    def ntheta(self):
        return self.samples.shape[THETA_AXIS]


@dataclass(frozen=True, eq=False)
class PathGroupField:
    """Path on ``[0, 2 pi]`` sampled at ``N + 1`` nodes including both ends."""

    samples: np.ndarray

    def __post_init__(self):
        n = self.samples.shape[-1]
        if np.max(np.abs(self.samples[..., 0, :, :] - np.eye(n))) > 1e-10:
            raise InvariantError("path does not start at the identity")

    @property
    def ntheta(self):
        return self.samples.shape[THETA_AXIS] - 1

    @property
    def endpoint(self):
        return self.samples[..., -1, :, :]

    def periodicity_defect(self):
        """Mismatch of the logarithmic derivative between ``t = 0`` and ``t = 2 pi``."""
        h = 2 * np.pi / self.ntheta
        p = self.samples
        c0 = np.array([-25, 48, -36, 16, -3]) / (12 * h)
        d0 = np.einsum("k,...kij->...ij", c0, p[..., :5, :, :])
        d1 = -np.einsum("k,...kij->...ij", c0, p[..., ::-1, :, :][..., :5, :, :])
        return float(np.max(np.abs(d0 - dagger(p[..., -1, :, :]) @ d1)))


def _values(x):
    return x.samples if hasattr(x, "samples") else np.asarray(x)


def theta_derivative(field, mode="spectral"):
    """d/dtheta of loop samples, spectral by default or fourth-order differences."""
    a = _values(field)
    if a.shape[THETA_AXIS] < 8:
        raise ResolutionError("need at least 8 samples on the circle")
    out = _diff.periodic_diff(a, a.ndim + THETA_AXIS, 2 * np.pi, mode)
    if isinstance(field, LoopAlgebraField):
        return LoopAlgebraField(out, based=False)
    return out


def resolution(gamma):
    """Largest ``||I - g_j^{-1} g_{j+1}||_2`` between neighbouring samples."""
    g = _values(gamma)
    nxt = np.roll(g, -1, axis=THETA_AXIS)
    if isinstance(gamma, PathGroupField):
        g, nxt = g[..., :-1, :, :], g[..., 1:, :, :]
    step = np.eye(g.shape[-1]) - dagger(g) @ nxt
    return float(np.max(np.linalg.norm(step, ord=2, axis=(-2, -1)), initial=0.0))


def log_derivative(gamma, mode="spectral"):
    """``gamma^{-1} d gamma / d theta`` for a loop or a path in the group.

    Loops are differentiated spectrally (or by ``fd4``).  Paths are
    differentiated with fourth-order central differences, using the
    quasi-periodicity ``p(t + 2 pi) = p(2 pi) p(t)`` for ghost samples.
    """
    if resolution(gamma) >= RESOLUTION_LIMIT:
        raise ResolutionError("adjacent samples too far apart; refine the circle grid")
    g = _values(gamma)
    if isinstance(gamma, PathGroupField):
        end = g[..., -1:, :, :]
        ext = np.concatenate([
            dagger(end) @ g[..., -3:-1, :, :],
            g,
            end @ g[..., 1:3, :, :],
        ], axis=THETA_AXIS)
        h = 2 * np.pi / (g.shape[THETA_AXIS] - 1)
        s = lambda k: ext[..., 2 + k: ext.shape[THETA_AXIS] - 2 + k, :, :]
        dg = (8 * (s(1) - s(-1)) - (s(2) - s(-2))) / (12 * h)
        # the derivative is periodic, so the t = 2 pi sample repeats t = 0
        return LoopAlgebraField((dagger(g) @ dg)[..., :-1, :, :], based=False)
    dg = _diff.periodic_diff(g, g.ndim + THETA_AXIS, 2 * np.pi, mode)
    return LoopAlgebraField(dagger(g) @ dg, based=False)


def multiply(a, b):
    """Pointwise product of two group loops."""
    return _values(a) @ _values(b)


def constant_loop(X, ntheta):
    X = np.asarray(X)
    return np.broadcast_to(X[..., None, :, :], X.shape[:-2] + (ntheta,) + X.shape[-2:]).copy()


def identity_loop(n, ntheta, shape=()):
    return identity(n, tuple(shape) + (ntheta,))
