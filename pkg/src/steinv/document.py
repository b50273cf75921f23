"""JSON documents describing a triple, named elements, and tasks.

The surface format keeps everything exact: rationals are integers or
"p/q" strings (floats are rejected), field elements are arrays of
rationals in power-basis coordinates.  Parsing is strict: unknown keys
raise ParseError so typos cannot silently change a computation.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .classify import Verdict
from .elements import FixedPointReport, PLMap, from_prefix_pairs, make_plmap
from .errors import ParseError
from .modules import BreakpointModule, SlopeGroup, SteinTriple
from .numbers import FieldElement, RealAlgebraicField, rational_field

_TOP_KEYS = {"field", "gamma", "lambda", "ell", "elements", "tasks"}
_FIELD_KEYS = {"minpoly", "root_interval"}
_GAMMA_KEYS = {"basis", "inverted_primes"}
_LAMBDA_KEYS = {"generators"}
_ELEMENT_KEYS = {"pieces", "pairs"}


@dataclass(frozen=True)
class SpecDocument:
    triple: SteinTriple
    elements: dict
    tasks: Tuple[str, ...] = ()

    @property
    def field(self) -> RealAlgebraicField:
        return self.triple.field


def _require_dict(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"{where} must be an object")
    return value


def _check_keys(data: dict, allowed, where: str) -> None:
    for key in data:
        if key not in allowed:
            raise ParseError(f"unknown key {key!r} in {where}")


def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"{where}: booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ParseError(f'{where}: floats are inexact, write "p/q" instead')
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: {value!r} is not a rational p/q") from None
    raise ParseError(f"{where}: expected a rational, got {type(value).__name__}")


def parse_value(value, field: RealAlgebraicField, where: str) -> FieldElement:
    """A field element: either a rational or a coordinate array."""
    if isinstance(value, list):
        coords = [parse_rational(x, f"{where}[{i}]") for i, x in enumerate(value)]
        if len(coords) > field.degree:
            raise ParseError(
                f"{where}: {len(coords)} coordinates exceed field degree "
                f"{field.degree}"
            )
        return field.element(coords)
    return field.from_rational(parse_rational(value, where))


def _parse_field(data) -> RealAlgebraicField:
    if data is None:
        return rational_field()
    data = _require_dict(data, "field")
    _check_keys(data, _FIELD_KEYS, "field")
    if "minpoly" not in data or "root_interval" not in data:
        raise ParseError("field needs both minpoly and root_interval")
    if not isinstance(data["minpoly"], list):
        raise ParseError("field.minpoly must be an array of integers")
    coeffs = [parse_rational(c, f"field.minpoly[{i}]") for i, c in enumerate(data["minpoly"])]
    interval = data["root_interval"]
    if not isinstance(interval, list) or len(interval) != 2:
        raise ParseError("field.root_interval must be [lo, hi]")
    lo = parse_rational(interval[0], "field.root_interval[0]")
    hi = parse_rational(interval[1], "field.root_interval[1]")
    return RealAlgebraicField(coeffs, (lo, hi))


def _parse_gamma(data, field: RealAlgebraicField) -> BreakpointModule:
    data = _require_dict(data, "gamma")
    _check_keys(data, _GAMMA_KEYS, "gamma")
    if "basis" not in data or not isinstance(data["basis"], list) or not data["basis"]:
        raise ParseError("gamma.basis must be a nonempty array")
    basis = [
        parse_value(b, field, f"gamma.basis[{i}]") for i, b in enumerate(data["basis"])
    ]
    primes = data.get("inverted_primes", [])
    if not isinstance(primes, list):
        raise ParseError("gamma.inverted_primes must be an array")
    for i, p in enumerate(primes):
        if isinstance(p, bool) or not isinstance(p, int):
            raise ParseError(f"gamma.inverted_primes[{i}] must be an integer")
    return BreakpointModule(field, basis, primes)


def _parse_lambda(data, field: RealAlgebraicField) -> SlopeGroup:
    data = _require_dict(data, "lambda")
    _check_keys(data, _LAMBDA_KEYS, "lambda")
    if "generators" not in data or not isinstance(data["generators"], list):
        raise ParseError("lambda.generators must be an array")
    gens = [
        parse_value(g, field, f"lambda.generators[{i}]")
        for i, g in enumerate(data["generators"])
    ]
    return SlopeGroup(gens, field=field)


def _parse_element(name: str, data, triple: SteinTriple) -> PLMap:
    where = f"elements.{name}"
    data = _require_dict(data, where)
    _check_keys(data, _ELEMENT_KEYS, where)
    has_pieces = "pieces" in data
    has_pairs = "pairs" in data
    if has_pieces == has_pairs:
        raise ParseError(f"{where} needs exactly one of pieces or pairs")
    field = triple.field
    if has_pieces:
        pieces = data["pieces"]
        if not isinstance(pieces, list):
            raise ParseError(f"{where}.pieces must be an array")
        parsed = []
        for i, piece in enumerate(pieces):
            if not isinstance(piece, list) or len(piece) != 3:
                raise ParseError(
                    f"{where}.pieces[{i}] must be [start, slope, offset]"
                )
            parsed.append(
                tuple(
                    parse_value(x, field, f"{where}.pieces[{i}][{j}]")
                    for j, x in enumerate(piece)
                )
            )
        return make_plmap(triple, parsed)
    pairs = data["pairs"]
    if not isinstance(pairs, list):
        raise ParseError(f"{where}.pairs must be an array")
    cleaned = []
    for i, pair in enumerate(pairs):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(w, str) for w in pair)
        ):
            raise ParseError(f"{where}.pairs[{i}] must be [\"u\", \"v\"]")
        cleaned.append((pair[0], pair[1]))
    return from_prefix_pairs(triple, cleaned)


def parse_spec(source) -> SpecDocument:
    """Parse a document from JSON text, a file path, or a parsed dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            # anything that is not inline JSON is taken as a path
            if not os.path.exists(text):
                raise ParseError(f"no such file: {text}")
            with open(text, "r", encoding="utf-8") as handle:
                text = handle.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(
                f"line {e.lineno}, column {e.colno}: {e.msg}"
            ) from None
    data = _require_dict(data, "document")
    _check_keys(data, _TOP_KEYS, "document")
    if "gamma" not in data or "lambda" not in data:
        raise ParseError("a document needs gamma and lambda")
    field = _parse_field(data.get("field"))
    module = _parse_gamma(data["gamma"], field)
    slopes = _parse_lambda(data["lambda"], field)
    ell = None
    if "ell" in data and data["ell"] is not None:
        ell = parse_value(data["ell"], field, "ell")
    triple = SteinTriple(module, slopes, ell)
    elements = {}
    raw_elements = data.get("elements", {})
    raw_elements = _require_dict(raw_elements, "elements")
    for name in sorted(raw_elements):
        if not isinstance(name, str) or not name:
            raise ParseError("element names must be nonempty strings")
        elements[name] = _parse_element(name, raw_elements[name], triple)
    tasks = data.get("tasks", [])
    if not isinstance(tasks, list) or not all(isinstance(t, str) for t in tasks):
        raise ParseError("tasks must be an array of strings")
    return SpecDocument(triple, elements, tuple(tasks))


# ---------------------------------------------------------------------------
# serialization


def format_rational(q: Fraction) -> str:
    return str(q)


def value_to_json(v: FieldElement):
    """Inverse of parse_value: "p/q" in degree one, else a coordinate list."""
    if v.field.degree == 1:
        return format_rational(v.as_fraction())
    return [format_rational(c) for c in v.coords]


def plmap_to_json(f: PLMap) -> dict:
    return {
        "pieces": [
            [
                value_to_json(p.start),
                value_to_json(p.slope),
                value_to_json(p.offset),
            ]
            for p in f.pieces
        ]
    }


def triple_to_json(triple: SteinTriple, elements: Optional[dict] = None) -> dict:
    """Document dict for a triple; parse_spec of the result rebuilds it."""
    field = triple.field
    out = {}
    if field.degree > 1:
        lo, hi = field.initial_interval()
        out["field"] = {
            "minpoly": list(field.minpoly.coefficients),
            "root_interval": [format_rational(lo), format_rational(hi)],
        }
    out["gamma"] = {
        "basis": [value_to_json(b) for b in triple.module.basis],
        "inverted_primes": list(triple.module.inverted_primes),
    }
    generators = []
    for mu in triple.slopes.generator_values():
        if isinstance(mu, FieldElement):
            generators.append(value_to_json(mu))
        else:
            generators.append(format_rational(mu))
    out["lambda"] = {"generators": generators}
    if triple.endpoint is not None:
        out["ell"] = value_to_json(triple.endpoint)
    if elements:
        out["elements"] = {
            name: plmap_to_json(f) for name, f in sorted(elements.items())
        }
    return out


def verdict_to_json(v: Verdict) -> dict:
    return {
        "outcome": v.outcome,
        "witness": v.witness,
        "obstruction": v.obstruction,
        "reason": v.reason,
        "explanation": v.describe(),
    }


def fixed_points_to_json(report: FixedPointReport) -> dict:
    return {
        "fixed_points": [
            {
                "value": value_to_json(fp.point.value),
                "side": fp.point.side,
                "slope": value_to_json(fp.slope),
                "attracting": fp.attracting,
            }
            for fp in report.points
        ],
        "non_cut_values": [value_to_json(v) for v in report.non_cut_values],
    }


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
