# -*- coding: utf-8 -*-
"""
Command line interface.

::

    spherekit quad 3 1 1 0
    spherekit certify pyramid.json
    spherekit bound upper pyramid.json --f exp
    spherekit energy simplex3.json --p 2
    spherekit frame-bound code.json --ref simplex:n=3 --A +-1/3
    spherekit catalog emit cube:n=4

Exit codes: 0 on success, 2 when a precondition or hypothesis fails,
1 on input/output, parse and numerical errors, 64 on usage errors.

SPDX-License-Identifier: MIT
"""
import argparse
import json
import logging
import os
import sys

import numpy as np
import pandas as pd

from spherekit import __version__
from spherekit import bounds
from spherekit import catalog
from spherekit import designs
from spherekit import energy
from spherekit import tools
from spherekit.exceptions import CodeFormatError
from spherekit.exceptions import DomainError
from spherekit.exceptions import InternalConsistencyError
from spherekit.exceptions import InvalidParameterError
from spherekit.exceptions import NumericFailureError
from spherekit.exceptions import ParseError
from spherekit.exceptions import PreconditionError
from spherekit.quadrature import build_rule

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PRECONDITION = 2
EXIT_USAGE = 64
FORMATS = ("json", "table", "csv")


class UsageError(Exception):
    """A request that parses but cannot be served."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number: {text}")
    return value


def _key_value(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value: {text}")
    if "," in value:
        return key, [float(v) for v in value.split(",")]
    return key, float(value)


def _node_values(text):
    """Parse ``"+-1/3"`` or ``"-0.5,0,0.5"`` into a list of numbers."""
    values = []
    for item in filter(None, text.split(",")):
        item = item.strip()
        if item.startswith("+-"):
            value = energy.parse_value(item[2:])
            values.extend([-value, value])
        else:
            values.append(energy.parse_value(item))
    return sorted(set(values))


def build_parser():
    parser = _Parser(
        prog="spherekit",
        description="Certify weighted spherical designs and evaluate "
        "universal potential and energy bounds.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log INFO (-v) or DEBUG (-vv) messages to stderr",
    )
    parser.add_argument(
        "--format", choices=FORMATS, default="json", help="output format"
    )
    parser.add_argument(
        "--tol",
        type=positive_float,
        default=designs.DEFAULT_TOL,
        help="residual tolerance of design certification",
    )
    parser.add_argument(
        "--cluster-tol",
        type=positive_float,
        default=designs.CLUSTER_TOL,
        help="clustering tolerance of dot product spectra",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    quad = sub.add_parser("quad", help="build a Gauss-type quadrature rule")
    quad.add_argument("n", type=int)
    quad.add_argument("m", type=int)
    quad.add_argument("mu", type=int, choices=(0, 1))
    quad.add_argument("nu", type=int, choices=(0, 1))

    certify = sub.add_parser("certify", help="certify a weighted code")
    certify.add_argument("code")
    certify.add_argument(
        "--candidates", help="JSON file with a list of candidate points"
    )
    certify.add_argument("--max-m", type=int, default=None)

    bound = sub.add_parser("bound", help="universal potential bound")
    bound.add_argument("side", choices=bounds.SIDES)
    bound.add_argument("code")
    _potential_options(bound, default=None)
    bound.add_argument("--m", type=int, default=None)
    bound.add_argument("--nu", type=int, choices=(0, 1), default=None)
    bound.add_argument("--force", action="store_true")
    bound.add_argument("--samples", type=int, default=bounds.SPHERE_SAMPLES)
    bound.add_argument(
        "--candidates", help="JSON file with a list of candidate points"
    )

    en = sub.add_parser("energy", help="f-energy or p-frame energy")
    en.add_argument("code")
    group = en.add_mutually_exclusive_group(required=True)
    group.add_argument("--f", dest="family", choices=sorted(bounds.POTENTIALS))
    group.add_argument("--p", type=positive_float, nargs="+")
    en.add_argument(
        "--param", type=_key_value, action="append", default=[]
    )

    frame = sub.add_parser(
        "frame-bound", help="constrained energy lower bound"
    )
    frame.add_argument("code")
    frame.add_argument(
        "--ref",
        required=True,
        help="catalog name (name:key=value,..) or code file of the reference",
    )
    frame.add_argument(
        "--A",
        dest="nodes",
        type=_node_values,
        default=None,
        help="dot products of the reference, e.g. +-1/3 or -0.5,0,0.5",
    )
    _potential_options(frame, default="power")
    frame.add_argument(
        "--mode", choices=energy.MODES, default="general"
    )
    frame.add_argument("--force", action="store_true")

    cat = sub.add_parser("catalog", help="named codes")
    cat.add_argument("action", choices=("list", "emit"))
    cat.add_argument("name", nargs="?")
    return parser


def _potential_options(parser, default):
    parser.add_argument(
        "--f",
        dest="family",
        choices=sorted(bounds.POTENTIALS),
        default=default,
        required=default is None,
        help="potential family",
    )
    parser.add_argument(
        "--param",
        type=_key_value,
        action="append",
        default=[],
        help="family parameter key=value (repeatable)",
    )


def _potential(args):
    params = dict(args.param)
    if args.family == "power" and not params:
        params = {"q": 1.0}
    return bounds.make_potential(args.family, **params)


def _read_points(path):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        points = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{path} is not a list of points.") from None
    if points.ndim != 2:
        raise ParseError(f"{path} is not a list of points.")
    return points


def _reference(text):
    if os.path.exists(text):
        return designs.WeightedCode.read(text), None
    name, params = catalog.parse_spec(text)
    return catalog.make(name, **params), catalog.frame_nodes(name, **params)


def _render(args, data, text=None, frame=None):
    if args.format == "json":
        return tools.to_json(data)
    if args.format == "table":
        return text if text is not None else tools.mapping_to_text(data)
    if frame is None:
        raise UsageError(
            f"csv output is not available for '{args.command}'."
        )
    return tools.frame_to_csv(frame)


def run_quad(args):
    rule = build_rule(args.n, args.m, args.mu, args.nu)
    frame = pd.DataFrame({"node": rule.nodes, "weight": rule.weights})
    text = "\n\n".join(
        [
            f"rule {rule.describe()}, exact to degree "
            f"{rule.exactness_degree}",
            tools.frame_to_text(frame),
        ]
    )
    return _render(args, rule.to_dict(), text)


def run_certify(args):
    code = designs.WeightedCode.read(args.code)
    candidates = _read_points(args.candidates) if args.candidates else None
    cert = designs.classify(
        code,
        candidates,
        tol=args.tol,
        cluster_tol=args.cluster_tol,
        max_m=args.max_m,
    )
    return _render(args, cert.to_dict(), cert.to_text())


def _rule_parameters(strength, side, m, nu):
    if m is not None and nu is not None:
        return m, nu
    if side == "lower":
        nu = (strength + 1) % 2
        m = (strength + 1 - nu) // 2
    else:
        nu = strength % 2
        m = (strength - nu) // 2
    if m < 1:
        raise PreconditionError(
            f"A {strength}-design admits no {side} bound."
        )
    return m, nu


def run_bound(args):
    code = designs.WeightedCode.read(args.code)
    f = _potential(args)
    strength, _ = designs.design_strength(code, tol=args.tol)
    m, nu = _rule_parameters(strength, args.side, args.m, args.nu)
    candidates = _read_points(args.candidates) if args.candidates else None
    report = bounds.attainment_report(
        code,
        m,
        nu,
        args.side,
        f,
        candidates=candidates,
        samples=args.samples,
        force=args.force,
    )
    frame = None
    if args.format == "csv":
        if len(report.attaining_points):
            start = report.attaining_points[0]
        else:
            start = code.points[0]
        frame = bounds.potential_curve(
            code, f, start, bound=report.bound_value
        )
    return _render(args, report.to_dict(), report.to_text(), frame)


def run_energy(args):
    code = designs.WeightedCode.read(args.code)
    if args.p:
        values = [energy.p_frame_energy(code, p) for p in args.p]
        frame = pd.DataFrame(
            {
                "param": args.p,
                "potential_or_energy": values,
                "bound": np.nan,
            }
        )
        if len(values) == 1:
            data = {"p": args.p[0], "energy": values[0]}
        else:
            data = {
                "p": list(args.p),
                "energy": values,
            }
        return _render(args, data, tools.frame_to_text(frame), frame)
    f = _potential(args)
    value = energy.energy(code, f)
    data = {"potential": f.describe(), "energy": value}
    frame = pd.DataFrame(
        {"param": [np.nan], "potential_or_energy": [value], "bound": np.nan}
    )
    return _render(args, data, None, frame)


def run_frame_bound(args):
    code = designs.WeightedCode.read(args.code)
    reference, nodes = _reference(args.ref)
    if args.nodes is not None:
        nodes = energy.SymmetricNodeSet(args.nodes)
    if nodes is None:
        raise UsageError(
            "The reference has no known set A, pass it with --A."
        )
    f = energy.SquaredPotential(_potential(args))
    report = energy.genframe_bound(reference, nodes, f, force=args.force)
    flags = energy.check_equality_conditions(code, report, nodes, args.mode)
    data = report.to_dict()
    data.update(
        {
            "A": list(nodes.alpha),
            "code_energy": energy.energy(code, f),
            "code_theta": energy.theta(code),
            "bound_applies": report.applies_to(code),
            "equality_flags": flags.to_dict(),
        }
    )
    if code.size == code.dim + 1:
        data["simplex_bound"] = energy.simplex_energy_bound(code.dim, f)
    text = tools.mapping_to_text(data)
    if not report.certified:
        text = "UNCERTIFIED\n" + text
    return _render(args, data, text)


def run_catalog(args):
    if args.action == "list":
        data = catalog.listing()
        frame = pd.DataFrame(
            [
                {
                    "name": item["name"],
                    "defaults": item["defaults"],
                    "strength": item["expected"].get("strength"),
                    "class": item["expected"].get("design_class"),
                }
                for item in data
            ]
        ).set_index("name")
        return _render(args, data, tools.frame_to_text(frame))
    if not args.name:
        raise UsageError("catalog emit needs a name.")
    name, params = catalog.parse_spec(args.name)
    code = catalog.make(name, **params)
    return _render(args, code.to_dict(), code.to_json())


COMMANDS = {
    "quad": run_quad,
    "certify": run_certify,
    "bound": run_bound,
    "energy": run_energy,
    "frame-bound": run_frame_bound,
    "catalog": run_catalog,
}


def _configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv=None):
    """
    Run the command line interface.

    Parameters
    ----------
    argv : list of str
        Arguments without the program name. Default: ``sys.argv[1:]``.

    Returns
    -------
    int
        Exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE
    _configure_logging(args.verbose)
    try:
        output = COMMANDS[args.command](args)
    except UsageError as err:
        print(f"spherekit: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, DomainError, InvalidParameterError) as err:
        print(f"spherekit: {err}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (
        CodeFormatError,
        ParseError,
        NumericFailureError,
        InternalConsistencyError,
        json.JSONDecodeError,
        OSError,
    ) as err:
        print(f"spherekit: {err}", file=sys.stderr)
        return EXIT_FAILURE
    print(output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
