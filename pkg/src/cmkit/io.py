"""Input parsing and serialization shared by the CLI and tests.

System files are JSON objects with four keys::

    {
      "vertices": ["A", "B", ...],
      "maximal_simplices": [["A", "C"], ...],
      "vectors": [[["A"], ["A", "D"]], ...],
      "critical": [["B", "F"], ...]
    }

On the command line a simplex is comma-joined vertices, families are
semicolon-separated ("B,F;F"), and solutions may carry periodic tails in
"(...)*" groups.  Inside a solution, a comma-joined token is read as one
simplex when the complex contains it and as a run of vertex simplices
otherwise, so "(A,D,C)*" is the 3-periodic vertex sequence while "(B,F)*"
is the constant solution at the edge BF.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .complex import SimplicialComplex, ComplexError
from .field import VectorField, validate_field
from .flow import SolutionSeq
from .geometry import BaryPoint, bary_point


class InputError(ValueError):
    """Malformed file or flag syntax; maps to the usage exit code."""


def load_system(path: str) -> tuple[SimplicialComplex, VectorField]:
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: line {exc.lineno} column {exc.colno}") from exc
    return system_from_dict(data)


def system_from_dict(data: dict) -> tuple[SimplicialComplex, VectorField]:
    for key in ("vertices", "maximal_simplices", "vectors", "critical"):
        if key not in data:
            raise InputError(f"missing required key {key!r}")
    complex_ = SimplicialComplex(data["vertices"], data["maximal_simplices"])
    field = validate_field(complex_, [tuple(v) for v in data["vectors"]], data["critical"])
    return complex_, field


def system_to_dict(complex_: SimplicialComplex, field: VectorField) -> dict:
    return {
        "vertices": list(complex_.vertices),
        "maximal_simplices": [list(s) for s in _maximal(complex_)],
        "vectors": [[list(t), list(h)] for t, h in field.vectors()],
        "critical": [list(s) for s in sorted(field.critical, key=complex_.sort_key)],
    }


def _maximal(complex_: SimplicialComplex):
    out = []
    for sigma in complex_.sorted_simplices():
        if not complex_.cofacets(sigma):
            out.append(sigma)
    return out


def parse_simplex(complex_: SimplicialComplex, text: str):
    vs = [v for v in text.strip().split(",") if v]
    if not vs:
        raise InputError("empty simplex token")
    try:
        sigma = complex_.simplex(vs)
    except ComplexError as exc:
        raise InputError(str(exc)) from exc
    if sigma not in complex_.simplices:
        raise InputError(f"simplex {text!r} not in complex")
    return sigma


def parse_simplex_set(complex_: SimplicialComplex, text: str):
    tokens = [t for t in text.strip().split(";") if t]
    return frozenset(parse_simplex(complex_, t) for t in tokens)


def format_simplex(sigma) -> str:
    return ",".join(sigma)


def format_simplex_set(complex_: SimplicialComplex, family) -> str:
    return ";".join(format_simplex(s) for s in sorted(family, key=complex_.sort_key))


def _parse_solution_word(complex_: SimplicialComplex, text: str):
    """One segment of a solution: plain tokens, with comma fallback to vertex runs."""
    word = []
    for token in (t for t in text.split(";") if t):
        if "," in token:
            vs = [v for v in token.split(",") if v]
            try:
                sigma = complex_.simplex(vs)
            except ComplexError:
                sigma = None
            if sigma is not None and sigma in complex_.simplices:
                word.append(sigma)
            else:
                word.extend(parse_simplex(complex_, v) for v in vs)
        else:
            word.append(parse_simplex(complex_, token))
    return tuple(word)


def parse_solution(complex_: SimplicialComplex, text: str) -> SolutionSeq:
    """Solution syntax: segments split on ';', periodic tails written "(...)*"."""
    raw = text.strip()
    segments = []
    depth = 0
    current = []
    for ch in raw:
        if ch == "(":
            depth += 1
            current.append(ch)
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InputError("unbalanced parentheses in solution")
            current.append(ch)
        elif ch == ";" and depth == 0:
            segments.append("".join(current))
            current = []
        else:
            current.append(ch)
    segments.append("".join(current))
    segments = [s for s in (seg.strip() for seg in segments) if s]
    if not segments:
        raise InputError("empty solution")

    def is_cycle(segment: str) -> bool:
        return segment.startswith("(") and segment.endswith(")*")

    cycles = [i for i, s in enumerate(segments) if is_cycle(s)]
    if not cycles:
        middle = tuple(x for seg in segments for x in _parse_solution_word(complex_, seg))
        return SolutionSeq.finite(middle)
    if len(cycles) == 1 and len(segments) == 1:
        cycle = _parse_solution_word(complex_, segments[0][1:-2])
        return SolutionSeq.periodic(cycle)
    left = middle_start = right = None
    if cycles == [0, len(segments) - 1] and len(segments) >= 2:
        left = _parse_solution_word(complex_, segments[0][1:-2])
        right = _parse_solution_word(complex_, segments[-1][1:-2])
        middle = tuple(x for seg in segments[1:-1] for x in _parse_solution_word(complex_, seg))
        return SolutionSeq(left, middle, right)
    raise InputError("periodic groups may appear only at the two ends of a solution")


def format_solution(rho: SolutionSeq) -> str:
    parts = []
    if rho.left:
        parts.append("(" + ";".join(format_simplex(s) for s in rho.left) + ")*")
    if rho.middle:
        parts.append(";".join(format_simplex(s) for s in rho.middle))
    if rho.right and (rho.right != rho.left or rho.middle):
        parts.append("(" + ";".join(format_simplex(s) for s in rho.right) + ")*")
    return ";".join(parts)


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not an exact rational: {text!r}") from exc


def point_to_json(x: BaryPoint) -> dict:
    return {"coords": {v: str(c) for v, c in x.items}}


def point_from_json(complex_: SimplicialComplex, data: dict) -> BaryPoint:
    if "coords" not in data:
        raise InputError("point object needs a 'coords' mapping")
    return bary_point(complex_, {v: Fraction(c) for v, c in data["coords"].items()})


def orbit_to_json(points, periodic: bool, manifest=None) -> str:
    payload = {
        "periodic": periodic,
        "points": [point_to_json(p) for p in points],
    }
    if manifest is not None:
        payload["manifest"] = manifest
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def orbit_from_json(complex_: SimplicialComplex, text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed orbit JSON: {exc}") from exc
    if "points" not in data:
        raise InputError("orbit file needs a 'points' list")
    points = [point_from_json(complex_, p) for p in data["points"]]
    return points, bool(data.get("periodic", False))
