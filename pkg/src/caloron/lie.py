"""Matrix arithmetic for SU(n) and su(n) in the fundamental representation.

Algebra elements are anti-Hermitian traceless complex matrices and group
elements are special unitary matrices.  Every function accepts stacked
arrays of shape ``(..., n, n)`` and broadcasts over the leading axes, so a
whole grid of values can be handled in one call.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ArityError, BranchError, DimensionError, InvariantError

TOL_ALG = 1e-12


def dagger(X):
    return np.conj(np.swapaxes(X, -1, -2))


def _check_pair(X, Y):
    if X.shape[-2:] != Y.shape[-2:]:
        raise DimensionError(f"matrix sizes differ: {X.shape[-2:]} vs {Y.shape[-2:]}")


def identity(n, shape=()):
    return np.broadcast_to(np.eye(n, dtype=complex), tuple(shape) + (n, n)).copy()


def algebra_defect(X):
    """Largest deviation of ``X`` from being anti-Hermitian and traceless."""
    X = np.asarray(X)
    herm = np.max(np.abs(X + dagger(X)), initial=0.0)
    tr = np.max(np.abs(np.trace(X, axis1=-2, axis2=-1)), initial=0.0)
    return float(max(herm, tr))


def group_defect(g):
    """Largest deviation of ``g`` from being unitary with determinant one."""
    g = np.asarray(g)
    n = g.shape[-1]
    unit = np.max(np.abs(g @ dagger(g) - np.eye(n)), initial=0.0)
    det = np.max(np.abs(np.linalg.det(g) - 1.0), initial=0.0)
    return float(max(unit, det))


def check_algebra(X, tol=TOL_ALG):
    d = algebra_defect(X)
    if d > tol:
        raise InvariantError(f"not in su(n): defect {d:.3e} > {tol:.1e}")
    return X


def check_group(g, tol=TOL_ALG):
    d = group_defect(g)
    if d > tol:
        raise InvariantError(f"not in SU(n): defect {d:.3e} > {tol:.1e}")
    return g


def project_algebra(X):
    """Nearest su(n) element: anti-Hermitian part with the trace removed."""
    X = 0.5 * (X - dagger(X))
    n = X.shape[-1]
    tr = np.trace(X, axis1=-2, axis2=-1)[..., None, None]
    return X - tr * np.eye(n) / n


def polar_unitary(g, tol=1e-15, max_iter=6):
    """Unitary factor of the polar decomposition.

    Near-unitary input converges quadratically under the Newton-Schulz
    iteration ``g <- g (3 - g^* g) / 2``; anything else goes through SVD.
    """
    n = g.shape[-1]
    eye = np.eye(n)
    for _ in range(max_iter):
        E = dagger(g) @ g - eye
        err = np.max(np.abs(E), initial=0.0)
        if err < tol:
            return g
        if err > 0.1:
            break
        g = g @ (eye - 0.5 * E)
    u, _, vh = np.linalg.svd(g)
    return u @ vh


# -- Lie algebra structure ---------------------------------------------------

def bracket(X, Y):
    X, Y = np.asarray(X), np.asarray(Y)
    _check_pair(X, Y)
    return X @ Y - Y @ X


def adjoint_action(g, X):
    """``g X g^{-1}``; the inverse of a unitary ``g`` is its adjoint."""
    g, X = np.asarray(g), np.asarray(X)
    _check_pair(g, X)
    return g @ X @ dagger(g)


def inner(X, Y):
    """Invariant inner product ``-tr(XY)``.

    With this normalization the coroot ``diag(i, -i)`` has squared length 2.
    """
    X, Y = np.asarray(X), np.asarray(Y)
    _check_pair(X, Y)
    return -np.einsum("...ij,...ji->...", X, Y).real


def su_basis(n):
    """Basis of su(n) orthonormal for ``inner``, shape ``(n*n - 1, n, n)``.

    Built from generalized Gell-Mann matrices scaled by ``i/sqrt(2)``.
    """
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            S = np.zeros((n, n), complex)
            S[a, b] = S[b, a] = 1.0
            A = np.zeros((n, n), complex)
            A[a, b], A[b, a] = -1j, 1j
            out += [S, A]
    for m in range(1, n):
        D = np.zeros((n, n), complex)
        D[np.arange(m), np.arange(m)] = 1.0
        D[m, m] = -m
        out.append(D * math.sqrt(2.0 / (m * (m + 1))))
    return np.array([1j * M / math.sqrt(2.0) for M in out])


def random_algebra(n, rng, shape=(), scale=1.0):
    coeffs = rng.standard_normal(tuple(shape) + (n * n - 1,)) * scale
    return np.einsum("...a,aij->...ij", coeffs, su_basis(n))


def random_group(n, rng, shape=()):
    """Haar-distributed SU(n) elements via QR of a complex Gaussian matrix."""
    Z = rng.standard_normal(tuple(shape) + (n, n)) + 1j * rng.standard_normal(tuple(shape) + (n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=-2, axis2=-1)
    Q = Q * (d / np.abs(d))[..., None, :]
    det = np.linalg.det(Q)
    return Q / (det ** (1.0 / n))[..., None, None]


# -- exponential and logarithm -----------------------------------------------

def _eig_antihermitian(X):
    w, U = np.linalg.eigh(-1j * X)
    return w, U


def exp(X):
    """Exponential of anti-Hermitian ``X`` through its unitary eigenbasis."""
    X = np.asarray(X, dtype=complex)
    w, U = _eig_antihermitian(X)
    return (U * np.exp(1j * w)[..., None, :]) @ dagger(U)


def _eig_unitary(g):
    # A generic real combination of the Hermitian and skew parts has simple
    # spectrum whenever g does; degenerate eigenvalues of g are harmless.
    K = 0.5 * (g + dagger(g)) + 0.7548776662466927 * (g - dagger(g)) / 2j
    _, U = np.linalg.eigh(K)
    D = dagger(U) @ g @ U
    lam = np.diagonal(D, axis1=-2, axis2=-1).copy()
    off = np.abs(D - np.einsum("...i,ij->...ij", lam, np.eye(g.shape[-1])))
    bad = np.max(off, axis=(-2, -1)) > 1e-9
    if np.any(bad):
        import scipy.linalg

        flat_g = g.reshape(-1, *g.shape[-2:])
        flat_U = U.reshape(flat_g.shape)
        flat_l = lam.reshape(-1, g.shape[-1])
        for i in np.flatnonzero(bad.reshape(-1)):
            T, Z = scipy.linalg.schur(flat_g[i], output="complex")
            flat_U[i], flat_l[i] = Z, np.diag(T)
        U, lam = flat_U.reshape(U.shape), flat_l.reshape(lam.shape)
    return lam, U


def log(g, cut_tol=1e-6):
    """Principal logarithm of a special unitary matrix.

    Raises :class:`BranchError` when an eigenvalue lies within ``cut_tol``
    (in angle) of -1, or when the principal branch leaves su(n).
    """
    g = np.asarray(g, dtype=complex)
    lam, U = _eig_unitary(g)
    ang = np.angle(lam)
    if np.any(np.pi - np.abs(ang) < cut_tol):
        raise BranchError("eigenvalue at -1: principal logarithm undefined")
    if np.any(np.abs(ang.sum(axis=-1)) > 1e-8):
        raise BranchError("principal logarithm is not traceless")
    return (U * (1j * ang)[..., None, :]) @ dagger(U)


def ad_function(Y, func, M):
    """Apply an analytic function of ``ad_Y`` to ``M``.

    In the eigenbasis of ``Y = U diag(i mu) U^*`` the operator ``ad_Y`` is
    diagonal on matrix units with eigenvalue ``i(mu_a - mu_b)``.
    """
    w, U = _eig_antihermitian(np.asarray(Y, dtype=complex))
    z = 1j * (w[..., :, None] - w[..., None, :])
    Mt = dagger(U) @ M @ U
    return U @ (func(z) * Mt) @ dagger(U)


def _phi_left(z):
    # (1 - e^{-z}) / z with the removable singularity filled in
    small = np.abs(z) < 1e-8
    zs = np.where(small, 1.0, z)
    return np.where(small, 1.0 - z / 2.0, -np.expm1(-zs) / zs)


def dexp_left(Y, dY):
    """Left-trivialized differential ``exp(-Y) d exp(Y)`` in direction ``dY``."""
    return ad_function(Y, _phi_left, dY)


def dexp_left_inverse(Y, V):
    """Solve ``dexp_left(Y, dY) = V`` for ``dY``."""
    return ad_function(Y, lambda z: 1.0 / _phi_left(z), V)


# -- invariant polynomials -----------------------------------------------------

@dataclass(frozen=True)
class InvariantPolynomial:
    """Scaled symmetrized trace ``c/k! * sum_sigma tr(X_s1 ... X_sk)``."""

    degree: int
    coefficient: float = 1.0
    kind: str = "symmetrized-trace"

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")
        if self.kind != "symmetrized-trace":
            raise ValueError(f"unsupported polynomial kind {self.kind!r}")

    def __call__(self, *X):
        return eval_poly(self, *X)


def p1poly():
    """First Pontryagin polynomial ``-(1/8 pi^2) <X, Y>``."""
    return InvariantPolynomial(2, 1.0 / (8.0 * math.pi ** 2))


def symmetrized_trace(*X):
    """``sum_sigma tr(X_s1 ... X_sk) / k!`` as a complex array.

    Cyclicity of the trace lets the first argument stay in front, leaving
    ``(k-1)!`` distinct products.
    """
    k = len(X)
    first, rest = X[0], X[1:]
    total = 0
    for perm in itertools.permutations(range(k - 1)):
        P = first
        for j in perm:
            P = P @ rest[j]
        total = total + np.trace(P, axis1=-2, axis2=-1)
    return total / math.factorial(k - 1)


def eval_poly(f, *X):
    """Evaluate ``f`` on ``k`` algebra elements (stacked arrays allowed).

    For even degree the value is real and returned as such; odd degrees
    return the complex value.
    """
    if len(X) != f.degree:
        raise ArityError(f"polynomial of degree {f.degree} got {len(X)} arguments")
    X = [np.asarray(x) for x in X]
    for x in X[1:]:
        _check_pair(X[0], x)
    val = f.coefficient * symmetrized_trace(*X)
    return val.real if f.degree % 2 == 0 else val


def ad_invariance_defect(f, A, *X):
    """Degree-zero residual of the infinitesimal ad-invariance identity.

    ``f([X1, A], X2, ..., Xk) - sum_{i>=2} f(X1, ..., [A, Xi], ..., Xk)``
    """
    if len(X) != f.degree:
        raise ArityError(f"expected {f.degree} arguments after A, got {len(X)}")
    X = list(X)
    lhs = eval_poly(f, bracket(X[0], A), *X[1:])
    rhs = 0
    for i in range(1, len(X)):
        Y = X.copy()
        Y[i] = bracket(A, X[i])
        rhs = rhs + eval_poly(f, *Y)
    return lhs - rhs
