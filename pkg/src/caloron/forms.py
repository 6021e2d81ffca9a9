"""Differential forms sampled on structured grids.

A :class:`FormField` of degree ``q`` on a ``d``-dimensional
:class:`GridManifold` stores one grid array per strictly increasing
multi-index ``I``, meaning ``omega = sum_I omega_I dx^I``.  Values are
scalars or su(n) matrices.  A form may additionally carry a loop axis of
``ntheta`` samples right after the grid axes; such a form is loop-algebra
valued (the circle is a label, not a direction of the base).

Component arrays have shape ``(C(d, q), *base.shape[, ntheta][, n, n])``.
"""
from __future__ import annotations

import itertools
import math
import struct
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Optional

import numpy as np

from . import _diff
from .errors import DimensionError
from .lie import bracket, symmetrized_trace

MAX_DIM = 5


# -- grids ---------------------------------------------------------------------

@dataclass(frozen=True)
class Axis:
    """One coordinate direction: periodic and half-open, or Gauss-Legendre."""

    name: str
    n: int
    lo: float
    hi: float
    periodic: bool = True

    def __post_init__(self):
        if self.n < 1 or not self.hi > self.lo:
            raise ValueError(f"bad axis {self}")

    @property
    def length(self):
        return self.hi - self.lo

    @cached_property
    def nodes(self):
        if self.periodic:
            return self.lo + self.length * np.arange(self.n) / self.n
        return _diff.gauss_legendre(self.n, self.lo, self.hi)[0]

    @cached_property
    def weights(self):
        if self.periodic:
            return np.full(self.n, self.length / self.n)
        return _diff.gauss_legendre(self.n, self.lo, self.hi)[1]

    def diff(self, a, axis, mode="spectral"):
        if self.periodic:
            return _diff.periodic_diff(a, axis, self.length, mode)
        return _diff.matrix_diff(a, axis, _diff.collocation_matrix(self.n, self.lo, self.hi))

    def node_index(self, x, tol=1e-10):
        """Node indices of ``x`` when every coordinate is a node, else ``None``."""
        x = np.asarray(x, dtype=float)
        if self.periodic:
            s = (x - self.lo) / self.length * self.n
            k = np.rint(s)
            if np.all(np.abs(s - k) < tol * self.n):
                return k.astype(np.int64) % self.n
            return None
        k = np.searchsorted(self.nodes, x).clip(0, self.n - 1)
        km = (k - 1).clip(0)
        pick = np.where(np.abs(self.nodes[km] - x) < np.abs(self.nodes[k] - x), km, k)
        if np.all(np.abs(self.nodes[pick] - x) < tol * self.length):
            return pick
        return None

    def interp_weights(self, x):
        if self.periodic:
            return _diff.trig_interp_weights(x, self.n, self.lo, self.length)
        x = np.asarray(x, dtype=float)
        slack = 1e-12 * self.length
        if np.any(x < self.lo - slack) or np.any(x > self.hi + slack):
            raise DimensionError(f"interpolation outside chart range on axis {self.name!r}")
        return _diff.lagrange_interp_weights(x, self.n, self.lo, self.hi)


@dataclass(frozen=True, eq=False)
class GridManifold:
    """Tensor-product coordinate grid over a parametrized base manifold.

    ``density`` maps the coordinate mesh to the Riemannian volume density.
    ``factor`` is set on products ``M x S^1``; the circle is then the last axis.
    """

    name: str
    axes: tuple
    deriv: str = "spectral"
    density: Optional[Callable] = None
    factor: Optional["GridManifold"] = None

    def __post_init__(self):
        if not 1 <= len(self.axes) <= MAX_DIM:
            raise DimensionError(f"dimension {len(self.axes)} outside 1..{MAX_DIM}")
        if self.deriv not in _diff.MODES:
            raise ValueError(f"unknown derivative mode {self.deriv!r}")

    @property
    def dim(self):
        return len(self.axes)

    @property
    def shape(self):
        return tuple(a.n for a in self.axes)

    @property
    def closed(self):
        return all(a.periodic for a in self.axes) or self.name == "SU2-hopf"

    @property
    def fiber_axis(self):
        return self.dim - 1 if self.factor is not None else None

    def mesh(self):
        return np.meshgrid(*[a.nodes for a in self.axes], indexing="ij")

    def quadrature_weights(self):
        w = np.ones(())
        for a in self.axes:
            w = np.multiply.outer(w, a.weights)
        return w

    def diff(self, a, axis, offset=0):
        """Partial derivative along grid axis ``axis``; ``offset`` leading array axes are skipped."""
        return self.axes[axis].diff(a, axis + offset, self.deriv)

    def same_grid(self, other):
        return self is other or (
            self.shape == other.shape
            and all(
                a.periodic == b.periodic and np.isclose(a.lo, b.lo) and np.isclose(a.hi, b.hi)
                for a, b in zip(self.axes, other.axes)
            )
        )

    def with_deriv(self, mode):
        factor = self.factor.with_deriv(mode) if self.factor is not None else None
        return GridManifold(self.name, self.axes, mode, self.density, factor)

    def interpolate(self, values, points, chunk_elems=4_000_000):
        """Evaluate grid data at scattered coordinate points.

        ``values`` has the grid axes first; ``points`` has shape ``(..., dim)``.
        Returns an array of shape ``points.shape[:-1] + values.shape[dim:]``.
        """
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.dim:
            raise DimensionError("point dimension does not match the grid")
        lead = points.shape[:-1]
        P = points.reshape(-1, self.dim)
        trail = values.shape[self.dim:]
        idx = [ax.node_index(P[:, i]) for i, ax in enumerate(self.axes)]
        if all(i is not None for i in idx):
            # every point is a grid node: interpolation reduces to a gather
            return values[tuple(idx)].reshape(lead + trail)
        Ws = [ax.interp_weights(P[:, i]) for i, ax in enumerate(self.axes)]
        per_point = int(np.prod(self.shape[1:], dtype=np.int64)) * int(np.prod(trail, dtype=np.int64))
        step = max(1, chunk_elems // max(per_point, 1))
        out = np.empty((P.shape[0],) + trail, dtype=np.result_type(values, float))
        for s in range(0, P.shape[0], step):
            t = np.tensordot(Ws[0][s:s + step], values, axes=(1, 0))
            for W in Ws[1:]:
                t = np.einsum("pb,pb...->p...", W[s:s + step], t)
            out[s:s + step] = t
        return out.reshape(lead + trail)


def torus(d, n, deriv="spectral"):
    ns = (n,) * d if np.isscalar(n) else tuple(n)
    axes = tuple(Axis(f"x{i}", m, 0.0, 2 * np.pi) for i, m in enumerate(ns))
    return GridManifold(f"T{d}", axes, deriv, density=lambda *x: np.ones(np.broadcast(*x).shape))


def circle(n, deriv="spectral"):
    return GridManifold("S1", (Axis("theta", n, 0.0, 2 * np.pi),), deriv,
                        density=lambda t: np.ones_like(t))


def hopf(n_eta=48, n_xi1=64, n_xi2=64, eta_range=(0.0, np.pi / 2), deriv="spectral"):
    """Hopf coordinates ``(eta, xi1, xi2)`` on the unit three-sphere.

    ``eta`` carries Gauss-Legendre nodes, so the coordinate-singular
    boundary circles are never sampled.  A sub-range of ``eta`` gives a
    chart of a solid torus.
    """
    axes = (
        Axis("eta", n_eta, eta_range[0], eta_range[1], periodic=False),
        Axis("xi1", n_xi1, 0.0, 2 * np.pi),
        Axis("xi2", n_xi2, 0.0, 2 * np.pi),
    )
    full = np.isclose(eta_range[0], 0.0) and np.isclose(eta_range[1], np.pi / 2)
    name = "SU2-hopf" if full else "SU2-hopf-patch"
    return GridManifold(name, axes, deriv, density=lambda eta, x1, x2: np.sin(eta) * np.cos(eta) + 0 * x1 + 0 * x2)


def product_with_circle(M, ntheta):
    axes = M.axes + (Axis("theta", ntheta, 0.0, 2 * np.pi),)
    dens = None
    if M.density is not None:
        dens = lambda *x: M.density(*x[:-1])
    return GridManifold(f"{M.name}xS1", axes, M.deriv, dens, factor=M)


# -- multi-index bookkeeping ---------------------------------------------------

@lru_cache(maxsize=None)
def multi_indices(d, q):
    return tuple(itertools.combinations(range(d), q))


@lru_cache(maxsize=None)
def _position(d, q):
    return {I: i for i, I in enumerate(multi_indices(d, q))}


def perm_sign(seq):
    seq = list(seq)
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


@lru_cache(maxsize=None)
def shuffle_table(d, degrees):
    """For each output multi-index, the signed splits into the given degrees.

    Entry ``I`` lists ``(sign, (pos_1, ..., pos_k))`` where ``pos_j`` indexes
    the degree-``degrees[j]`` component and
    ``dx^{J_1} ^ ... ^ dx^{J_k} = sign * dx^I``.
    """
    total = sum(degrees)
    table = []
    for I in multi_indices(d, total):
        terms = []

        def rec(remaining, j, parts):
            if j == len(degrees):
                order = [x for p in parts for x in p]
                pos = tuple(_position(d, len(p))[p] for p in parts)
                terms.append((perm_sign(order), pos))
                return
            for J in itertools.combinations(remaining, degrees[j]):
                rest = tuple(x for x in remaining if x not in J)
                rec(rest, j + 1, parts + (J,))

        rec(I, 0, ())
        table.append(tuple(terms))
    return tuple(table)


# -- forms ----------------------------------------------------------------------

KINDS = ("scalar", "algebra")


@dataclass(frozen=True, eq=False)
class FormField:
    base: GridManifold
    degree: int
    components: np.ndarray
    kind: str = "algebra"
    ntheta: Optional[int] = None

    def __post_init__(self):
        d, q = self.base.dim, self.degree
        if not 0 <= q <= d:
            raise DimensionError(f"degree {q} on a {d}-dimensional base")
        if self.kind not in KINDS:
            raise ValueError(f"unknown value kind {self.kind!r}")
        c = self.components
        expect = (math.comb(d, q),) + self.base.shape + ((self.ntheta,) if self.ntheta else ())
        if c.shape[: len(expect)] != expect:
            raise DimensionError(f"component array {c.shape} does not start with {expect}")
        extra = c.shape[len(expect):]
        if self.kind == "scalar" and extra:
            raise DimensionError("scalar form with trailing value axes")
        if self.kind == "algebra" and (len(extra) != 2 or extra[0] != extra[1]):
            raise DimensionError("algebra form needs square matrix values")

    @property
    def value_kind(self):
        if self.kind == "algebra" and self.ntheta:
            return "loop-algebra"
        return self.kind

    @property
    def n(self):
        return self.components.shape[-1] if self.kind == "algebra" else None

    @property
    def indices(self):
        return multi_indices(self.base.dim, self.degree)

    def component(self, I):
        return self.components[_position(self.base.dim, self.degree)[tuple(I)]]

    def like(self, components, degree=None, kind=None, base=None):
        return FormField(base or self.base, self.degree if degree is None else degree,
                         components, kind or self.kind, self.ntheta)

    def _compatible(self, other):
        if (not self.base.same_grid(other.base) or self.degree != other.degree
                or self.kind != other.kind or self.ntheta != other.ntheta):
            raise DimensionError("forms live on different grids or have different type")

    def __add__(self, other):
        self._compatible(other)
        return self.like(self.components + other.components)

    def __sub__(self, other):
        self._compatible(other)
        return self.like(self.components - other.components)

    def __neg__(self):
        return self.like(-self.components)

    def __mul__(self, c):
        return self.like(self.components * c)

    __rmul__ = __mul__

    def norm_inf(self):
        return float(np.max(np.abs(self.components), initial=0.0))


def zero_form(base, degree, kind="algebra", n=2, ntheta=None):
    shape = (math.comb(base.dim, degree),) + base.shape + ((ntheta,) if ntheta else ())
    if kind == "algebra":
        shape += (n, n)
    return FormField(base, degree, np.zeros(shape, dtype=complex if kind == "algebra" else float),
                     kind, ntheta)


def from_components(base, degree, comps, kind="algebra", ntheta=None):
    """Build a form from a mapping ``{multi-index: array}``; missing entries are zero."""
    comps = {tuple(k): np.asarray(v) for k, v in comps.items()}
    sample = next(iter(comps.values()))
    full = base.shape + ((ntheta,) if ntheta else ()) + (sample.shape[-2:] if kind == "algebra" else ())
    dtype = np.result_type(*comps.values(), float)
    arr = np.zeros((math.comb(base.dim, degree),) + full, dtype=dtype)
    pos = _position(base.dim, degree)
    for I, v in comps.items():
        if I not in pos:
            raise DimensionError(f"{I} is not a strictly increasing index of length {degree}")
        arr[pos[I]] = np.broadcast_to(v, full)
    return FormField(base, degree, arr, kind, ntheta)


def exterior_derivative(omega):
    """``(d omega)_J = sum_p (-1)^p d_{J_p} omega_{J minus J_p}``.

    Differentiates only grid directions; a loop axis is carried along.
    """
    d, q = omega.base.dim, omega.degree
    if q >= d:
        raise DimensionError(f"exterior derivative of a {q}-form on a {d}-dimensional base")
    pos = _position(d, q)
    out = []
    for J in multi_indices(d, q + 1):
        acc = 0
        for p, axis in enumerate(J):
            K = J[:p] + J[p + 1:]
            term = omega.base.diff(omega.components[pos[K]], axis)
            acc = acc + term if p % 2 == 0 else acc - term
        out.append(acc)
    return omega.like(np.array(out), degree=q + 1)


def _product(forms, op, kind):
    base = forms[0].base
    for w in forms[1:]:
        if not base.same_grid(w.base) or w.ntheta != forms[0].ntheta:
            raise DimensionError("forms live on different grids")
    degrees = tuple(w.degree for w in forms)
    if sum(degrees) > base.dim:
        raise DimensionError(f"total degree {sum(degrees)} exceeds dimension {base.dim}")
    out = []
    for terms in shuffle_table(base.dim, degrees):
        acc = 0
        for sign, pos in terms:
            val = op(*[w.components[i] for w, i in zip(forms, pos)])
            acc = acc + val if sign > 0 else acc - val
        out.append(acc)
    return FormField(base, sum(degrees), np.array(out), kind, forms[0].ntheta)


def wedge_bracket(alpha, beta):
    """Graded bracket ``[alpha, beta] = sum [alpha_J, beta_K] dx^J ^ dx^K``.

    For a 1-form this gives ``[A, A](d_i, d_j) = 2 [A_i, A_j]``.
    """
    if alpha.kind != "algebra" or beta.kind != "algebra":
        raise DimensionError("wedge_bracket needs algebra-valued forms")
    return _product((alpha, beta), bracket, "algebra")


def wedge(alpha, beta):
    """Exterior product where at least the first factor is scalar-valued."""
    if alpha.kind != "scalar":
        raise DimensionError("wedge expects a scalar-valued first factor")

    def op(a, b):
        if beta.kind == "algebra":
            return a[..., None, None] * b
        return a * b

    return _product((alpha, beta), op, beta.kind)


def poly_on_forms(f, *forms):
    """Apply an invariant polynomial through components, with shuffle signs."""
    from .errors import ArityError

    if len(forms) != f.degree:
        raise ArityError(f"polynomial of degree {f.degree} got {len(forms)} forms")
    if any(w.kind != "algebra" for w in forms):
        raise DimensionError("poly_on_forms needs algebra-valued forms")
    even = f.degree % 2 == 0

    def op(*X):
        v = f.coefficient * symmetrized_trace(*X)
        return v.real if even else v

    return _product(forms, op, "scalar")


def adjoint(g, omega):
    """Pointwise ``g omega g^{-1}`` for a group-valued array matching the value grid."""
    return omega.like(g @ omega.components @ np.conj(np.swapaxes(g, -1, -2)))


# -- integration -------------------------------------------------------------------

def fiber_integrate_S1(omega):
    """Integrate over the circle factor of ``M x S^1``.

    ``beta + gamma ^ dtheta`` maps to ``int_0^{2 pi} gamma dtheta``; terms
    without ``dtheta`` are dropped.  The trapezoid rule is used.
    """
    M = omega.base.factor
    if M is None:
        raise DimensionError("base has no distinguished circle axis")
    d, q = omega.base.dim, omega.degree
    th = d - 1
    if q == 0:
        raise DimensionError("a 0-form has no dtheta component to integrate")
    w = omega.base.axes[th].weights
    pos = _position(d, q)
    out = [np.tensordot(omega.components[pos[I + (th,)]], w, axes=(th, 0))
           for I in multi_indices(d - 1, q - 1)]
    return FormField(M, q - 1, np.array(out), omega.kind, omega.ntheta)


def theta_integral(omega):
    """Trapezoid integral over the loop axis of a loop-valued form."""
    if not omega.ntheta:
        raise DimensionError("form carries no loop axis")
    ax = 1 + omega.base.dim
    w = 2 * np.pi / omega.ntheta
    return FormField(omega.base, omega.degree, omega.components.sum(axis=ax) * w, omega.kind, None)


def integrate_top(omega, M=None):
    """Quadrature of a top-degree scalar form over its (closed) base."""
    M = M or omega.base
    if omega.degree != M.dim:
        raise DimensionError(f"degree {omega.degree} is not the top degree {M.dim}")
    if omega.kind != "scalar" or omega.ntheta:
        raise DimensionError("integrate_top needs a plain scalar form")
    val = np.sum(omega.components[0] * M.quadrature_weights())
    return float(val.real) if not np.iscomplexobj(val) or val.imag == 0 else complex(val)


def volume_form(M):
    return FormField(M, M.dim, M.density(*M.mesh())[None].astype(float), "scalar")


# -- pullback --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridMap:
    """A map from the nodes of ``source`` into the coordinates of ``target``.

    ``points`` has shape ``(*source.shape, target.dim)`` and ``jacobian``
    has shape ``(*source.shape, target.dim, source.dim)``.
    """

    source: GridManifold
    target: GridManifold
    points: np.ndarray
    jacobian: np.ndarray

    @classmethod
    def from_function(cls, source, target, fn, jac):
        X = source.mesh()
        pts = np.stack(fn(*X), axis=-1)
        J = np.array(jac(*X), dtype=float)
        if J.ndim == 2:  # constant Jacobian
            J = J.reshape(J.shape + (1,) * source.dim)
        J = np.broadcast_to(J, (target.dim, source.dim) + source.shape)
        return cls(source, target, pts, np.moveaxis(J, (0, 1), (-2, -1)))


def pullback(psi, omega):
    """``(psi^* omega)_I = sum_J omega_J(psi(x)) det(d psi^J / d x^I)``.

    Target values come from trigonometric interpolation on periodic axes
    and Lagrange interpolation on Gauss-Legendre axes.
    """
    if not psi.target.same_grid(omega.base):
        raise DimensionError("form does not live on the target of the map")
    q, ds, dt = omega.degree, psi.source.dim, psi.target.dim
    vals = np.moveaxis(omega.components, 0, dt)  # grid axes first
    interp = psi.target.interpolate(vals, psi.points)
    interp = np.moveaxis(interp, ds, 0)  # (ncomp_t, *source, ...)
    trail = interp.ndim - 1 - ds
    out = []
    for I in multi_indices(ds, q):
        acc = 0
        for j, J in enumerate(multi_indices(dt, q)):
            if q == 0:
                coef = 1.0
            else:
                sub = psi.jacobian[..., list(J), :][..., list(I)]
                coef = np.linalg.det(sub)
            coef = np.reshape(coef, np.shape(coef) + (1,) * trail)
            acc = acc + coef * interp[j]
        out.append(np.broadcast_to(acc, psi.source.shape + interp.shape[1 + ds:]))
    return FormField(psi.source, q, np.array(out), omega.kind, omega.ntheta)


# -- CALF binary dumps ---------------------------------------------------------------

CALF_MAGIC = b"CALF"
CALF_VERSION = 1
_KIND_TAGS = {("scalar", False): 0, ("algebra", False): 1, ("algebra", True): 2, ("scalar", True): 3}


def dump_form(omega, path):
    """Write a form in the CALF layout.

    Header: magic, then little-endian u32 version, d, q, kind tag, the
    per-axis sizes, the matrix size n (algebra kinds) and the loop size
    (loop kinds).  Components follow in multi-index order, each grid
    row-major, every value as two little-endian float64 (real, imag).
    """
    tag = _KIND_TAGS[(omega.kind, bool(omega.ntheta))]
    head = [CALF_VERSION, omega.base.dim, omega.degree, tag, *omega.base.shape]
    if omega.kind == "algebra":
        head.append(omega.n)
    if omega.ntheta:
        head.append(omega.ntheta)
    data = np.ascontiguousarray(omega.components, dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(CALF_MAGIC)
        fh.write(struct.pack(f"<{len(head)}I", *head))
        fh.write(data.tobytes())


def read_calf(path):
    """Parse a CALF file into ``(header dict, complex component array)``."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != CALF_MAGIC:
        raise ValueError("not a CALF file")
    off = 4
    version, d, q, tag = struct.unpack_from("<4I", raw, off)
    off += 16
    shape = struct.unpack_from(f"<{d}I", raw, off)
    off += 4 * d
    kind, loop = {v: k for k, v in _KIND_TAGS.items()}[tag]
    n = ntheta = None
    if kind == "algebra":
        (n,) = struct.unpack_from("<I", raw, off)
        off += 4
    if loop:
        (ntheta,) = struct.unpack_from("<I", raw, off)
        off += 4
    full = (math.comb(d, q),) + tuple(shape) + ((ntheta,) if loop else ()) + ((n, n) if n else ())
    arr = np.frombuffer(raw, dtype="<c16", offset=off).reshape(full)
    head = dict(version=version, dim=d, degree=q, kind=kind, ntheta=ntheta, n=n, shape=tuple(shape))
    return head, arr.astype(complex)


def load_form(path, base):
    head, arr = read_calf(path)
    if head["shape"] != base.shape:
        raise DimensionError("CALF grid does not match the supplied base")
    if head["kind"] == "scalar":
        arr = arr.real
    return FormField(base, head["degree"], arr, head["kind"], head["ntheta"])
