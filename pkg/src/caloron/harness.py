"""Scenario-driven verification suites, convergence studies and JSON reports.

A :class:`Scenario` names a suite and the grids, seeds and tolerances it
runs with.  Every check yields residuals and a tolerance; the report
verdict is ``pass`` exactly when every check passes.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__, _diff, lie
from .charts import cartan_density, hopf_chart
from .errors import CaloronError
from .forms import (FormField, GridMap, dump_form, exterior_derivative, hopf, integrate_top,
                    pullback, torus)
from .gauge import (curvature, gauge_transform, pullback_pair, random_gauge_pair, random_trig_field,
                    random_trig_gauge)
from .holonomy import (caloron_holonomy_defect, classifying_map, group_distance, higgs_holonomy,
                       unitarity_drift)
from .loops import log_derivative, theta_grid
from .string_forms import (CutoffFunction, TransgressionCoefficient, class_pairing,
                           covering_pairing, independence_defect, killingback_form,
                           path_fibration_pair, standard_curvature, string_form,
                           string_form_caloron, sury_identity, transgression_form)
from .transform import (caloron_curvature, caloron_curvature_defect, caloron_transform,
                        inverse_caloron)

SUITES = ("identities", "caloron", "string-form", "path-fibration", "holonomy", "transgress")
STUDIES = ("d2", "caloron", "closedness", "holonomy")
ROUNDOFF_FLOOR = 1e-10


class ConfigError(CaloronError, ValueError):
    """Scenario could not be parsed or is inconsistent."""


# -- scenarios -----------------------------------------------------------------------

# Per-suite defaults; anything in a config file or on the command line wins.
SUITE_DEFAULTS = {
    "identities": dict(manifold="T3", N=8, ntheta=16),
    "caloron": dict(manifold="T2", N=32, ntheta=64, bandwidth=3),
    "string-form": dict(manifold="T3", N=20, ntheta=32, bandwidth=1),
    "path-fibration": dict(manifold="SU2-hopf", N=[16, 32, 32], ntheta=32),
    "holonomy": dict(manifold="T2", N=8, ntheta=256, bandwidth=2),
    "transgress": dict(manifold="SU2-hopf", N=[48, 64, 64], ntheta=32),
}


@dataclass(frozen=True)
class Scenario:
    name: str = "default"
    suite: str = "all"
    n: int = 2
    manifold: str = "T3"
    N: object = 16
    ntheta: int = 32
    poly: dict = field(default_factory=lambda: {"kind": "symmetrized-trace", "k": 2,
                                                "coefficient": "p1"})
    seed: int = 0
    seeds: int = 1
    bandwidth: int = 2
    deriv: str = "spectral"
    substeps: int = 8
    quad_nodes: int = 8
    kmax: int = 20
    ladder: tuple = (16, 32, 64)
    tolerances: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d, suite=None):
        if not isinstance(d, dict):
            raise ConfigError("scenario must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
        suite = d.get("suite", suite or "all")
        merged = dict(SUITE_DEFAULTS.get(suite, {}))
        merged.update(d)
        merged["suite"] = suite
        if "ladder" in merged:
            merged["ladder"] = tuple(merged["ladder"])
        try:
            sc = cls(**merged)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        sc.validate()
        return sc

    @classmethod
    def from_json(cls, path, suite=None):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read scenario {path}: {exc}") from None
        return cls.from_dict(data, suite)

    def replace(self, **kw):
        sc = dataclasses.replace(self, **kw)
        sc.validate()
        return sc

    # -- derived quantities --
    @property
    def grid(self):
        N = self.N
        dim = self.manifold_dim
        if isinstance(N, (list, tuple)):
            if len(N) != dim:
                raise ConfigError(f"grid {list(N)} does not match dimension {dim} of {self.manifold}")
            return tuple(int(x) for x in N)
        return (int(N),) * dim

    @property
    def manifold_dim(self):
        if self.manifold == "SU2-hopf":
            return 3
        if self.manifold.startswith("T") and self.manifold[1:].isdigit():
            return int(self.manifold[1:])
        raise ConfigError(f"unknown manifold {self.manifold!r}")

    def polynomial(self):
        p = self.poly
        if p.get("kind", "symmetrized-trace") != "symmetrized-trace":
            raise ConfigError(f"unsupported polynomial kind {p.get('kind')!r}")
        c = p.get("coefficient", 1.0)
        if c == "p1":
            if int(p.get("k", 2)) != 2:
                raise ConfigError("the p1 normalization is a degree-2 polynomial")
            return lie.p1poly()
        return lie.InvariantPolynomial(int(p.get("k", 2)), float(c))

    def base(self):
        if self.manifold == "SU2-hopf":
            return hopf(*self.grid, deriv=self.deriv)
        return torus(self.manifold_dim, self.grid, self.deriv)

    def tol(self, name, default):
        return float(self.tolerances.get(name, default))

    def validate(self):
        if self.suite not in SUITES + ("all",):
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.n not in (2, 3):
            raise ConfigError("group rank n must be 2 or 3")
        if self.deriv not in _diff.MODES:
            raise ConfigError(f"derivative mode must be one of {_diff.MODES}")
        dim = self.manifold_dim
        if not 1 <= dim <= 4:
            raise ConfigError("manifold dimension must be between 1 and 4")
        grid = self.grid
        ints = dict(ntheta=self.ntheta, seeds=self.seeds, substeps=self.substeps,
                    quad_nodes=self.quad_nodes, kmax=self.kmax)
        for k, v in ints.items():
            if not isinstance(v, int) or v <= 0:
                raise ConfigError(f"{k} must be a positive integer")
        if any(g <= 0 for g in grid) or any(g <= 0 for g in self.ladder):
            raise ConfigError("grid sizes must be positive")
        if self.bandwidth < 0:
            raise ConfigError("bandwidth must be non-negative")
        if self.manifold != "SU2-hopf" and 2 * self.bandwidth >= min(min(grid), self.ntheta):
            raise ConfigError(f"bandwidth {self.bandwidth} is not below the Nyquist limit")
        if self.ntheta < 8:
            raise ConfigError("need at least 8 loop samples")
        f = self.polynomial()
        if self.suite == "string-form" and 2 * f.degree - 1 > dim:
            raise ConfigError(f"degree-{f.degree} string forms do not fit on {self.manifold}")
        if self.suite in ("path-fibration", "transgress") and (self.manifold != "SU2-hopf" or self.n != 2):
            raise ConfigError(f"suite {self.suite} runs on SU2-hopf with n = 2")
        if self.suite in ("path-fibration", "transgress") and 2 * f.degree - 1 > 3:
            raise ConfigError("SU(2) charts carry forms of degree at most 3")
        if self.quad_nodes < f.degree:
            raise ConfigError("difference correction needs at least k quadrature nodes")

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["ladder"] = list(self.ladder)
        return d


# -- checks and reports ----------------------------------------------------------------

@dataclass
class Check:
    name: str
    residuals: list
    tolerance: float
    order: Optional[float] = None
    order_min: Optional[float] = None
    note: str = ""
    monotone: Optional[bool] = None

    @property
    def verdict(self):
        ok = all(np.isfinite(r) and r <= self.tolerance for r in self.residuals)
        if self.order_min is not None:
            ok = ok and self.order is not None and self.order >= self.order_min
        if self.monotone is False:
            ok = False
        return "pass" if ok else "fail"

    def to_dict(self):
        d = dict(name=self.name, residuals=[float(r) for r in self.residuals],
                 tolerance=self.tolerance, verdict=self.verdict)
        if self.order is not None or self.order_min is not None:
            d["order"] = None if self.order is None else float(self.order)
            d["order_min"] = self.order_min
        if self.monotone is not None:
            d["monotone"] = self.monotone
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    scenario: dict
    checks: list
    wall_time: float = 0.0
    digests: dict = field(default_factory=dict)
    version: str = __version__

    @property
    def verdict(self):
        return "pass" if all(c.verdict == "pass" for c in self.checks) else "fail"

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self, canonical=False):
        d = dict(scenario=self.scenario, checks=[c.to_dict() for c in self.checks],
                 verdict=self.verdict, version=self.version, digests=dict(sorted(self.digests.items())))
        if not canonical:
            d["wall_time"] = round(self.wall_time, 3)
        return d

    def to_json(self, canonical=False):
        return json.dumps(self.to_dict(canonical), indent=2, sort_keys=True) + "\n"

    def write(self, path, canonical=False):
        Path(path).write_text(self.to_json(canonical))

    def summary(self):
        lines = []
        for c in self.checks:
            worst = max(c.residuals) if c.residuals else float("nan")
            extra = f" order={c.order:.2f}" if c.order is not None else ""
            lines.append(f"{c.verdict.upper():4s} {c.name}: max residual {worst:.3e} "
                         f"(tol {c.tolerance:.1e}){extra}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


class _Fields:
    """Collects field digests and optionally writes CALF dumps."""

    def __init__(self, dump_dir=None):
        self.dump_dir = Path(dump_dir) if dump_dir else None
        self.digests = {}
        if self.dump_dir:
            self.dump_dir.mkdir(parents=True, exist_ok=True)

    def add(self, name, form):
        data = np.ascontiguousarray(form.components, dtype="<c16").tobytes()
        self.digests[name] = hashlib.sha256(data).hexdigest()
        if self.dump_dir:
            dump_form(form, self.dump_dir / f"{name}.calf")


def _rel(a, b):
    scale = float(np.max(np.abs(b), initial=0.0))
    diff = float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))
    return diff / scale if scale > 0 else diff


def _seeds(sc):
    return [sc.seed + i for i in range(sc.seeds)]


# -- suites ---------------------------------------------------------------------------

def suite_identities(sc, fields):
    rng = np.random.default_rng(sc.seed)
    n = sc.n
    checks = []
    bad = [k for k in range(1, sc.kmax + 1) if not sury_identity(k)[2]]
    checks.append(Check(f"sury_identity k=1..{sc.kmax}", [float(len(bad))], 0.0,
                        note="count of k with unequal exact sides"))
    X, Y, Z = (lie.random_algebra(n, rng, (100,)) for _ in range(3))
    jac = lie.bracket(X, lie.bracket(Y, Z)) + lie.bracket(Y, lie.bracket(Z, X)) + lie.bracket(Z, lie.bracket(X, Y))
    checks.append(Check("jacobi", [float(np.max(np.abs(jac)))], sc.tol("jacobi", 1e-12)))
    H = np.zeros((n, n), complex)
    H[0, 0], H[1, 1] = 1j, -1j
    checks.append(Check("inner_normalization", [abs(lie.inner(H, H) - 2.0)], 1e-15))
    g = lie.random_group(n, rng, (100,))
    res_inv, res_ad = [], []
    for k in (2, 3, 4):
        f = lie.InvariantPolynomial(k)
        Xs = [lie.random_algebra(n, rng, (100,)) for _ in range(k)]
        A = lie.random_algebra(n, rng, (100,))
        moved = [lie.adjoint_action(g, x) for x in Xs]
        res_inv.append(float(np.max(np.abs(lie.eval_poly(f, *moved) - lie.eval_poly(f, *Xs)))))
        res_ad.append(float(np.max(np.abs(lie.ad_invariance_defect(f, A, *Xs)))))
    checks.append(Check("poly_conjugation_invariance k=2,3,4", res_inv, sc.tol("poly_invariance", 1e-12)))
    checks.append(Check("ad_invariance_defect k=2,3,4", res_ad, sc.tol("ad_invariance", 1e-12)))
    W = lie.random_algebra(n, rng, (100,), scale=0.5)
    checks.append(Check("exp_log_roundtrip", [float(np.max(np.abs(lie.exp(lie.log(lie.exp(W))) - lie.exp(W))))],
                        sc.tol("exp_log", 1e-12)))
    coeff = [abs(float(TransgressionCoefficient(1).signed) - 1.0),
             abs(float(TransgressionCoefficient(2).signed) + 1.0 / 6.0)]
    checks.append(Check("transgression_coefficients k=1,2", coeff, 0.0))
    return checks


def suite_caloron(sc, fields):
    M = sc.base()
    checks = []
    if sc.deriv == "spectral":
        defects, holo, trips = [], [], []
        for s in _seeds(sc):
            pair = random_gauge_pair(M, sc.ntheta, sc.bandwidth, s, sc.n)
            defects.append(caloron_curvature_defect(pair))
            At = caloron_transform(pair)
            back = caloron_transform(inverse_caloron(At))
            trips.append(0.0 if np.array_equal(back.components, At.components) else 1.0)
            holo.append(caloron_holonomy_defect(pair, sc.substeps))
            if s == sc.seed:
                fields.add("caloron_A_tilde", At)
                fields.add("caloron_F_tilde", caloron_curvature(At))
        checks.append(Check("caloron_curvature_defect", defects, sc.tol("caloron", 1e-8)))
        checks.append(Check("caloron_round_trip_bit_exact", trips, 0.0))
        checks.append(Check("caloron_holonomy_defect", holo, sc.tol("caloron_holonomy", 1e-10)))
    else:
        checks.append(convergence_check("caloron", sc, list(sc.ladder)))
    return checks


def _closedness(f, sc, seed):
    """``||d s_f||`` on a torus large enough for a nontrivial exterior derivative."""
    dim = sc.manifold_dim
    if dim >= 2 * f.degree and sc.manifold != "SU2-hopf":
        M = sc.base()
        pair = random_gauge_pair(M, sc.ntheta, sc.bandwidth, seed, sc.n)
    else:
        M = torus(2 * f.degree, 12, sc.deriv)
        pair = random_gauge_pair(M, 16, 1, seed, sc.n)
    s = string_form(f, pair)
    return exterior_derivative(s).norm_inf() / max(s.norm_inf(), 1.0)


def _shear(M):
    d = M.dim
    J = np.eye(d)
    J[0, 1] = 1.0
    return GridMap.from_function(M, M, lambda *x: (x[0] + x[1],) + tuple(x[1:]), lambda *x: J)


def suite_string(sc, fields):
    f = sc.polynomial()
    M = sc.base()
    routes, kb, gauge, closed, indep_pair, indep_pt, natural = [], [], [], [], [], [], []
    for s in _seeds(sc):
        pair = random_gauge_pair(M, sc.ntheta, sc.bandwidth, s, sc.n)
        sf = string_form(f, pair)
        routes.append(_rel(string_form_caloron(f, pair).components, sf.components))
        if sc.polynomial() == lie.p1poly() and M.dim >= 3:
            kb.append(_rel(killingback_form(pair).components, sf.components))
        gamma = random_trig_gauge(M, sc.ntheta, s + 1000, sc.n)
        gauge.append(_rel(string_form(f, gauge_transform(pair, gamma)).components, sf.components))
        closed.append(_closedness(f, sc, s))
        if M.closed and M.dim == 2 * f.degree - 1:
            pair2 = random_gauge_pair(M, sc.ntheta, sc.bandwidth, s + 500, sc.n)
            resid, chi = independence_defect(f, pair, pair2, sc.quad_nodes)
            indep_pt.append(resid)
            indep_pair.append(abs(class_pairing(string_form(f, pair2)) - class_pairing(sf)))
        natural.append(_rel(pullback(_shear(M), sf).components,
                            string_form(f, pullback_pair(_shear(M), pair)).components))
        if s == sc.seed:
            fields.add("string_form", sf)
    checks = [Check("string_form_route_equality", routes, sc.tol("routes", 1e-8))]
    if kb:
        checks.append(Check("killingback_route", kb, sc.tol("routes", 1e-8)))
    checks += [Check("string_form_gauge_invariance", gauge, sc.tol("gauge", 1e-7)),
               Check("string_form_closedness", closed, sc.tol("closed", 1e-7),
                     note="relative sup norm of d s_f on a torus of dimension 2k")]
    if indep_pair:
        checks += [Check("independence_class_pairing", indep_pair, sc.tol("independence", 1e-7)),
                   Check("independence_correction_defect", indep_pt, sc.tol("correction", 1e-6))]
    checks.append(Check("naturality_shear_pullback", natural, sc.tol("naturality", 1e-8)))
    return checks


PATCH = (np.pi / 3, np.pi / 2)


def suite_path_fibration(sc, fields):
    f = sc.polynomial()
    ne, n1, n2 = sc.grid
    chart = hopf_chart(ne, n1, n2, eta_range=PATCH, deriv=sc.deriv)
    alpha = CutoffFunction(int(sc.tolerances.get("cutoff_order", 7)))
    pair = path_fibration_pair(alpha, chart, sc.ntheta)
    s = string_form(f, pair)
    tau = transgression_form(f, chart)
    fields.add("path_fibration_string_form", s)
    fields.add("transgression_form_patch", tau)
    checks = [
        Check("path_fibration_pointwise", [_rel(s.components, tau.components)], sc.tol("pointwise", 1e-5)),
        Check("standard_curvature_closed_form",
              [_rel(curvature(pair).components, standard_curvature(alpha, chart, sc.ntheta).components)],
              sc.tol("standard_curvature", 1e-6)),
        Check("classifying_map_is_inclusion", [group_distance(classifying_map(pair, sc.substeps), chart.g)],
              sc.tol("inclusion", 1e-6)),
    ]
    cov = covering_pairing(f, sc.ntheta, 16, 24, alpha=alpha)
    ref = integrate_top(transgression_form(f, hopf_chart(24, 32, 32)))
    checks.append(Check("covering_pairing_matches_transgression", [abs(cov - ref)], sc.tol("pairing", 1e-3)))
    checks.append(Check("covering_pairing_integrality", [abs(abs(cov) - 1.0)], sc.tol("pairing", 1e-3)))
    return checks


def suite_transgress(sc, fields):
    f = sc.polynomial()
    chart = hopf_chart(*sc.grid, deriv=sc.deriv)
    tau = transgression_form(f, chart)
    fields.add("transgression_form", tau)
    total = integrate_top(tau)
    oracle = float(np.sum(cartan_density(chart).real * chart.manifold.quadrature_weights())) / (24 * np.pi ** 2)
    return [
        Check("transgression_integral_abs_one", [abs(abs(total) - 1.0)], sc.tol("quantized", 1e-3)),
        Check("transgression_matches_cartan_oracle", [abs(total + oracle)], sc.tol("oracle", 1e-10),
              note="tau(p1) = -tr(Theta^3)/(24 pi^2)"),
    ]


def _abelian_endpoint_error(substeps, ntheta=256):
    X = np.diag([0.5j, -0.5j])
    t = theta_grid(ntheta)
    phi = (1 - np.cos(t))[:, None, None] * X
    path = higgs_holonomy(phi, substeps)
    exact = lie.exp(2 * np.pi * X)
    return group_distance(path.endpoint, exact), unitarity_drift(path)


def suite_holonomy(sc, fields):
    M = sc.base()
    err, drift = _abelian_endpoint_error(sc.substeps)
    ladder = [1, 2, 4]
    errs = [_abelian_endpoint_error(s, 64)[0] for s in ladder]
    order = -np.polyfit(np.log(ladder), np.log(errs), 1)[0]
    checks = [Check("abelian_endpoint", [err], sc.tol("abelian", 1e-10)),
              Check("abelian_substep_order", errs, 1.0, order=order, order_min=3.5)]
    pure, equiv, cal, drifts = [], [], [], [drift]
    for s in _seeds(sc):
        gamma = random_trig_gauge(M, sc.ntheta, s + 1000, sc.n)
        path = higgs_holonomy(log_derivative(gamma), sc.substeps)
        pure.append(group_distance(path.endpoint, np.eye(sc.n)))
        pair = random_gauge_pair(M, sc.ntheta, sc.bandwidth, s, sc.n, amplitude=0.3)
        g = higgs_holonomy(pair.Phi.components[0], sc.substeps)
        g2 = higgs_holonomy(gauge_transform(pair, gamma).Phi.components[0], sc.substeps)
        ext = np.concatenate([gamma.samples, gamma.samples[..., :1, :, :]], axis=-3)
        equiv.append(group_distance(g2.samples, g.samples @ ext))
        cal.append(caloron_holonomy_defect(pair, sc.substeps))
        drifts.append(unitarity_drift(g))
    checks += [Check("pure_gauge_endpoint", pure, sc.tol("pure_gauge", 1e-8)),
               Check("right_translation_equivariance", equiv, sc.tol("equivariance", 1e-8)),
               Check("caloron_holonomy_defect", cal, sc.tol("caloron_holonomy", 1e-10)),
               Check("unitarity_drift", drifts, 1e-12)]
    return checks


SUITE_FUNCS: dict[str, Callable] = {
    "identities": suite_identities,
    "caloron": suite_caloron,
    "string-form": suite_string,
    "path-fibration": suite_path_fibration,
    "holonomy": suite_holonomy,
    "transgress": suite_transgress,
}


# -- convergence studies ------------------------------------------------------------------

def _study_residual(check, sc, N):
    if check == "d2":
        M = torus(3, N, sc.deriv)
        rng = np.random.default_rng(sc.seed)
        bw = min(sc.bandwidth, N // 2 - 1)
        vals = random_trig_field(M, 8, bw, rng, sc.n, count=3)[..., 0, :, :]
        w = FormField(M, 1, vals, "algebra")
        return exterior_derivative(exterior_derivative(w)).norm_inf()
    if check == "caloron":
        # the direct route differentiates along the circle with the grid stencil,
        # so the circle is refined together with the base
        M = torus(2, N, sc.deriv)
        pair = random_gauge_pair(M, 2 * N, min(sc.bandwidth, N // 2 - 1), sc.seed, sc.n)
        return caloron_curvature_defect(pair)
    if check == "closedness":
        f = sc.polynomial()
        M = torus(2 * f.degree, N, sc.deriv)
        pair = random_gauge_pair(M, 16, 1, sc.seed, sc.n)
        s = string_form(f, pair)
        return exterior_derivative(s).norm_inf() / max(s.norm_inf(), 1.0)
    if check == "holonomy":
        return _abelian_endpoint_error(N, 64)[0]
    raise ConfigError(f"unknown study {check!r}; choose from {STUDIES}")


def convergence_check(check, sc, ladder):
    """Residuals along a grid ladder with the fitted algebraic order.

    Spectral ladders must sit at the roundoff floor.  Fourth-order ladders
    must fit an order of at least 3.5, unless every residual is already at
    the floor (schemes for which the identity holds exactly).  The
    closedness ladder only has to decrease: its fd4 residual stays
    pre-asymptotic on four-dimensional grids that fit in memory.
    """
    if len(ladder) < 3:
        raise ConfigError("a convergence study needs at least three grid sizes")
    res = [float(_study_residual(check, sc, N)) for N in ladder]
    floor = sc.tol("floor", ROUNDOFF_FLOOR)
    at_floor = all(r < floor for r in res)
    positive = [r for r in res if r > 0]
    order = None
    if len(positive) == len(res):
        order = float(-np.polyfit(np.log(ladder), np.log(res), 1)[0])
    name = f"study_{check}_{sc.deriv}"
    algebraic = sc.deriv == "fd4" or check == "holonomy"
    if at_floor:
        return Check(name, res, floor, order=order, note="residuals at roundoff floor")
    if not algebraic:
        return Check(name, res, floor, order=order, note="spectral ladder above roundoff floor")
    monotone = all(b < a for a, b in zip(res, res[1:]))
    note = "" if monotone else "non-monotone residuals"
    order_min = None if check == "closedness" else 4.0 - 0.5
    return Check(name, res, max(res), order=order, order_min=order_min, note=note, monotone=monotone)


def convergence_study(check, sc=None, ladder=None):
    sc = sc or Scenario()
    ladder = list(ladder or sc.ladder)
    t0 = time.perf_counter()
    c = convergence_check(check, sc, ladder)
    scen = sc.to_dict()
    scen.update(study=check, ladder=ladder)
    return Report(scen, [c], time.perf_counter() - t0)


# -- running ----------------------------------------------------------------------------

def _threads():
    try:
        return max(1, int(os.environ.get("CALORON_THREADS", "1")))
    except ValueError:
        raise ConfigError("CALORON_THREADS must be an integer") from None


def run_suites(sc, suites, dump_dir=None):
    """Run the named suites; checks are gathered in suite order regardless of threading."""
    fields = _Fields(dump_dir)
    t0 = time.perf_counter()
    scenarios = []
    for name in suites:
        if len(suites) > 1:
            d = sc.to_dict()
            base = {k: d[k] for k in ("seed", "seeds", "n", "substeps", "quad_nodes", "kmax",
                                      "poly", "tolerances", "name")}
            s = Scenario.from_dict(base, name)
        else:
            s = sc if sc.suite == name else sc.replace(suite=name)
        scenarios.append((name, s))
    workers = _threads()
    from threadpoolctl import threadpool_limits

    with threadpool_limits(limits=workers):
        if workers > 1 and len(scenarios) > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(lambda p: SUITE_FUNCS[p[0]](p[1], fields), scenarios))
        else:
            results = [SUITE_FUNCS[name](s, fields) for name, s in scenarios]
    checks = [c for r in results for c in r]
    scen = sc.to_dict() if len(scenarios) > 1 else scenarios[0][1].to_dict()
    return Report(scen, checks, time.perf_counter() - t0, fields.digests)


def run_scenario(path, dump_dir=None):
    """Load a JSON scenario and run it.  Returns ``(report, exit_status)``."""
    sc = Scenario.from_json(path)
    suites = list(SUITES) if sc.suite == "all" else [sc.suite]
    report = run_suites(sc, suites, dump_dir)
    return report, 0 if report.passed else 2
