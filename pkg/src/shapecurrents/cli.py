"""Command-line interface.

Subcommands:
  current     evaluate a curve's current vector against a chosen test space
  distance    dual-norm distance between two curve files
  experiment  run a named preset and write its CSV/JSON artifact set
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .curve import load_csv
from .currents import evaluate_current
from .errors import (
    ConfigurationError,
    InvalidCurveError,
    OutOfDomainError,
    ShapeCurrentsError,
)
from .experiments import PRESETS, ExperimentConfig, run_preset
from .gram import DEFAULT_SIGMA, GramOperator
from .metric import distance
from .space import build_space

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4


def _add_space_args(parser):
    parser.add_argument("--mesh", type=int, default=80,
                        help="number of squares per side of the structured mesh")
    parser.add_argument("--degree", type=int, default=1,
                        help="polynomial degree of the element basis")
    parser.add_argument("--monomial", type=int, default=0,
                        help="use the polynomial test space of total degree < N "
                             "instead of an element mesh")
    parser.add_argument("--sigma", type=float, default=DEFAULT_SIGMA,
                        help="length scale of the metric")
    parser.add_argument("--s", type=int, default=1, choices=(1, 2),
                        help="order of the dual norm")
    parser.add_argument("--rule", choices=("midpoint", "simpson"),
                        default="midpoint", help="quadrature rule along the curve")
    parser.add_argument("--points", type=int, default=512,
                        help="number of sample points for generated curves")
    parser.add_argument("--domain", type=float, nargs=4,
                        default=(-1.0, 1.0, -1.0, 1.0),
                        metavar=("X0", "X1", "Y0", "Y1"))


def _space_from_args(args):
    domain = tuple(args.domain)
    if args.monomial > 0:
        return build_space("monomial", N=args.monomial, domain=domain)
    return build_space("lagrange", M=args.mesh, degree=args.degree, domain=domain)


def cmd_current(args):
    curve = load_csv(args.curve)
    space = _space_from_args(args)
    f = evaluate_current(curve, space, rule=args.rule)
    text = f.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return EXIT_OK


def cmd_distance(args):
    a = load_csv(args.curve_a)
    b = load_csv(args.curve_b)
    space = _space_from_args(args)
    G = GramOperator(space, sigma=args.sigma)
    fa = evaluate_current(a, space, rule=args.rule)
    fb = evaluate_current(b, space, rule=args.rule)
    d = distance(fa, fb, G, s=args.s)
    sys.stdout.write(f"{d:.17g}\n")
    return EXIT_OK


def cmd_experiment(args):
    if args.config:
        with open(args.config) as fh:
            cfg = ExperimentConfig.from_json(json.load(fh))
        if args.out:
            cfg.out = args.out
    else:
        if args.preset not in PRESETS:
            known = "\n  ".join(sorted(PRESETS))
            sys.stderr.write(
                f"unknown preset {args.preset!r}; available presets:\n  {known}\n")
            return EXIT_USAGE
        cfg = ExperimentConfig(
            preset=args.preset, mesh=args.mesh, degree=args.degree,
            monomial=args.monomial if args.monomial > 0 else 10,
            sigma=args.sigma, s=args.s, rule=args.rule, points=args.points,
            seed=args.seed, domain=tuple(args.domain), out=args.out or ".")
    summary = run_preset(cfg)
    sys.stdout.write(json.dumps(summary, default=float) + "\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="shapecurrents",
        description="Shape distances for planar curves via finite-element currents")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("current", help="evaluate a curve's current vector")
    p.add_argument("curve", help="curve CSV file (t,x,y rows)")
    p.add_argument("--out", help="write the JSON result here instead of stdout")
    _add_space_args(p)
    p.set_defaults(func=cmd_current)

    p = sub.add_parser("distance", help="distance between two curves")
    p.add_argument("curve_a")
    p.add_argument("curve_b")
    _add_space_args(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("experiment", help="run a named experiment preset")
    p.add_argument("preset", nargs="?", default="",
                   help="preset name (see --list)")
    p.add_argument("--out", help="output directory (default: current directory)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="re-run from a previously emitted config.json")
    _add_space_args(p)
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (OSError, InvalidCurveError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except (ConfigurationError, OutOfDomainError, ShapeCurrentsError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC
    except np.linalg.LinAlgError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
