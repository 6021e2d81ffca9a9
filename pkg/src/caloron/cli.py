"""Command-line front end: ``caloron verify <suite>`` and ``caloron study <check>``.

Exit status: 0 pass, 2 fail, 3 configuration error, 4 numerical error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import CaloronError
from .harness import (STUDIES, SUITES, ConfigError, Scenario, _threads, convergence_study,
                      run_suites)

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors, not failed checks
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common(p):
    p.add_argument("--config", help="JSON scenario file; flags override its entries")
    p.add_argument("--seed", type=int)
    p.add_argument("--seeds", type=int, help="number of consecutive seeds")
    p.add_argument("--N", type=int, help="uniform per-axis grid size")
    p.add_argument("--grid", type=_int_list, help="per-axis grid sizes, e.g. 16,32,32")
    p.add_argument("--ntheta", type=int)
    p.add_argument("--deriv", choices=("spectral", "fd4"))
    p.add_argument("--manifold", help="T1..T4 or SU2-hopf")
    p.add_argument("--bandwidth", type=int)
    p.add_argument("--substeps", type=int)
    p.add_argument("--quad-nodes", dest="quad_nodes", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--n", type=int, help="group rank of SU(n)")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--canonical", action="store_true",
                   help="omit wall time so reports compare byte for byte")


def build_parser():
    parser = _Parser(prog="caloron", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--dump-fields", dest="dump_fields", help="directory for CALF field dumps")
    _common(v)
    s = sub.add_parser("study", help="run a convergence ladder")
    s.add_argument("check", choices=STUDIES)
    s.add_argument("--ladder", type=_int_list, default=None)
    _common(s)
    return parser


def _scenario(args, suite):
    overrides = {k: getattr(args, k) for k in ("seed", "seeds", "ntheta", "deriv", "manifold",
                                                "bandwidth", "substeps", "quad_nodes", "kmax", "n")
                 if getattr(args, k) is not None}
    if args.grid is not None:
        overrides["N"] = args.grid
    elif args.N is not None:
        overrides["N"] = args.N
    if getattr(args, "ladder", None):
        overrides["ladder"] = args.ladder
    base = {}
    if args.config:
        base = Scenario.from_json(args.config, suite).to_dict()
        if suite != "all" and base.get("suite") not in (suite, "all"):
            raise ConfigError(f"config names suite {base['suite']!r}, command asks for {suite!r}")
        base["suite"] = suite
    base.update(overrides)
    return Scenario.from_dict(base, suite)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _threads()
        if args.command == "verify":
            sc = _scenario(args, args.suite)
            suites = list(SUITES) if args.suite == "all" else [args.suite]
            with np.errstate(divide="raise", over="raise", invalid="raise"):
                report = run_suites(sc, suites, args.dump_fields)
        else:
            sc = _scenario(args, "all")
            with np.errstate(divide="raise", over="raise", invalid="raise"):
                report = convergence_study(args.check, sc, args.ladder)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CaloronError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(report.summary())
    if args.report:
        report.write(args.report, canonical=args.canonical)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
