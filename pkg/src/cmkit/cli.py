"""Command-line front end.

Commands: validate, morse, index, check-geometry, lift, project.
Exit codes: 0 success, 1 analysis-level failure, 2 usage or parse error.
Every JSON output embeds a run manifest; ``--reproducible`` suppresses the
timestamp so identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys

from . import __version__
from .complex import ComplexError
from .field import FieldError
from .flow import is_isolated_invariant, reduce_solution, is_solution
from .geometry import (GeometricDynamics, GeometryError, LiftError, ParamsError,
                       default_params, make_params)
from .homology import conley_index, poincare_polynomial, relative_betti
from .io import (InputError, format_simplex_set, format_solution, load_system,
                 orbit_from_json, orbit_to_json, parse_fraction, parse_simplex_set,
                 parse_solution, point_to_json)
from .morse import conley_morse_graph, export_dot, export_json
from .verify import SampleConfig, run_property_suite

USAGE_ERROR = 2
ANALYSIS_ERROR = 1


def _manifest(args, command: str) -> dict:
    manifest = {
        "command": command,
        "input": args.input,
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "overrides": {
            name: getattr(args, name)
            for name in ("eps", "gamma", "delta", "delta_prime", "samples", "cap", "set", "solution")
            if getattr(args, name, None) is not None
        },
    }
    if not getattr(args, "reproducible", False):
        manifest["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return manifest


def _params_from(args, dim: int):
    overrides = [getattr(args, n, None) for n in ("eps", "gamma", "delta", "delta_prime")]
    if all(o is None for o in overrides):
        return default_params(dim)
    base = default_params(dim)
    values = []
    for given, fallback in zip(overrides, (base.eps, base.gamma, base.delta, base.delta_prime)):
        values.append(parse_fraction(given) if given is not None else fallback)
    return make_params(*values).validate(dim)


def _write(path, text, fallback_stdout=True):
    if path:
        with open(path, "w") as handle:
            handle.write(text)
    elif fallback_stdout:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    try:
        complex_, field = load_system(args.input)
    except FieldError as exc:
        print(f"invalid field: {exc}", file=sys.stderr)
        return ANALYSIS_ERROR
    print(f"valid: {len(complex_)} simplices, dimension {complex_.dim}, "
          f"{len(field.matched)} vectors, {len(field.critical)} critical cells")
    return 0


def _index_report(complex_, field, sset) -> tuple[int, str]:
    report = is_isolated_invariant(complex_, field, sset)
    if not report.ok:
        lines = [f"not an isolated invariant set (clause {report.clause}): {report.message}"]
        for sigma in report.tail_head_violations:
            tail = field.sigma_minus(sigma)
            head = field.sigma_plus(sigma)
            lines.append(
                f"  tail/head witness {format_simplex_set(complex_, [sigma])}: "
                f"tail {format_simplex_set(complex_, [tail])} "
                f"{'in' if tail in sset else 'not in'} set, "
                f"head {format_simplex_set(complex_, [head])} "
                f"{'in' if head in sset else 'not in'} set")
        return ANALYSIS_ERROR, "\n".join(lines)
    exit_ = complex_.exit_set(sset)
    betti = conley_index(complex_, field, sset)
    text = (f"Exit={{{format_simplex_set(complex_, exit_)}}}, "
            f"Betti={list(betti)}, P(t)={poincare_polynomial(betti)}")
    return 0, text


def cmd_index(args) -> int:
    complex_, field = load_system(args.input)
    sset = parse_simplex_set(complex_, args.set)
    code, text = _index_report(complex_, field, sset)
    print(text)
    return code


def cmd_morse(args) -> int:
    complex_, field = load_system(args.input)
    if args.set:
        sset = parse_simplex_set(complex_, args.set)
        code, text = _index_report(complex_, field, sset)
        print(text)
        return code
    graph = conley_morse_graph(complex_, field)
    manifest = _manifest(args, "morse")
    if args.dot:
        _write(args.dot, export_dot(graph), fallback_stdout=False)
    payload = export_json(graph, manifest)
    if args.json:
        _write(args.json, payload, fallback_stdout=False)
    if not args.dot and not args.json:
        sys.stdout.write(payload)
    for i, poly in enumerate(graph.poincare):
        print(f"M{i}: P(t)={poly} "
              f"[{format_simplex_set(complex_, graph.sets[i])}]", file=sys.stderr)
    return 0


def cmd_check_geometry(args) -> int:
    complex_, field = load_system(args.input)
    params = _params_from(args, complex_.dim)
    sset = parse_simplex_set(complex_, args.set) if args.set else None
    config = SampleConfig(count=args.samples, seed=args.seed)
    report = run_property_suite(complex_, field, sset, params, config)
    payload = report.to_json(_manifest(args, "check-geometry"))
    if args.json:
        _write(args.json, payload, fallback_stdout=False)
    sys.stdout.write(report.to_text())
    if report.precondition_failure:
        return ANALYSIS_ERROR
    return 0 if report.ok else ANALYSIS_ERROR


def cmd_lift(args) -> int:
    complex_, field = load_system(args.input)
    params = _params_from(args, complex_.dim)
    rho = parse_solution(complex_, args.solution)
    if not is_solution(complex_, field, rho):
        print("input is not a solution of the flow", file=sys.stderr)
        return ANALYSIS_ERROR
    reduced = reduce_solution(field, rho)
    dyn = GeometricDynamics(complex_, field, params)
    try:
        points = dyn.lift_solution(reduced, cap=args.cap)
    except LiftError as exc:
        print(f"lift failed ({exc.kind}): {exc}", file=sys.stderr)
        return ANALYSIS_ERROR
    periodic = bool(reduced.left)
    payload = orbit_to_json(points, periodic, _manifest(args, "lift"))
    if args.json:
        _write(args.json, payload, fallback_stdout=False)
    else:
        sys.stdout.write(payload)
    print(f"lifted {format_solution(reduced)} to {len(points)} point(s); "
          "all consecutive memberships verified", file=sys.stderr)
    return 0


def cmd_project(args) -> int:
    complex_, field = load_system(args.input)
    params = _params_from(args, complex_.dim)
    with open(args.orbit_file) as handle:
        points, periodic = orbit_from_json(complex_, handle.read())
    dyn = GeometricDynamics(complex_, field, params)
    try:
        solution = dyn.project_orbit(points, periodic)
    except GeometryError as exc:
        print(f"projection failed: {exc}", file=sys.stderr)
        return ANALYSIS_ERROR
    print(format_solution(solution))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmkit",
        description="Combinatorial vector field dynamics on simplicial complexes")
    parser.add_argument("--version", action="version", version=f"cmkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_params=False):
        p.add_argument("input", help="system JSON file")
        p.add_argument("--reproducible", action="store_true",
                       help="omit the timestamp from the embedded manifest")
        if with_params:
            for name in ("eps", "gamma", "delta", "delta-prime"):
                p.add_argument(f"--{name}", dest=name.replace("-", "_"),
                               help=f"override {name} (exact rational like 1/6)")

    p = sub.add_parser("validate", help="validate the complex and field")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("morse", help="minimal Morse sets, order and labeled graph")
    common(p)
    p.add_argument("--dot", help="write Graphviz output here")
    p.add_argument("--json", help="write JSON output here")
    p.add_argument("--set", help="instead, report the index of this family (e.g. 'B,F;F')")
    p.set_defaults(func=cmd_morse)

    p = sub.add_parser("index", help="Conley index of an isolated invariant set")
    common(p)
    p.add_argument("--set", required=True, help="family, e.g. 'B,F' or 'A;A,D'")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("check-geometry", help="run the geometric property suite")
    common(p, with_params=True)
    p.add_argument("--set", help="isolated invariant set to target")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--json", help="write the JSON report here")
    p.set_defaults(func=cmd_check_geometry)

    p = sub.add_parser("lift", help="lift a combinatorial solution to an orbit")
    common(p, with_params=True)
    p.add_argument("--solution", required=True, help="e.g. '(A,D,C)*' or 'B,F;B;B,E'")
    p.add_argument("--cap", type=int, default=64, help="grid refinement cap")
    p.add_argument("--json", help="write the orbit JSON here")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("project", help="project an orbit back to a combinatorial solution")
    common(p, with_params=True)
    p.add_argument("--orbit-file", required=True, help="orbit JSON as written by lift")
    p.set_defaults(func=cmd_project)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else USAGE_ERROR
    try:
        return args.func(args)
    except (InputError, ComplexError, ParamsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except FieldError as exc:
        print(f"invalid field: {exc}", file=sys.stderr)
        return ANALYSIS_ERROR
    except (GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ANALYSIS_ERROR


if __name__ == "__main__":
    sys.exit(main())
