"""JSON encodings of the exact objects.

Rationals are written as ``"p/q"`` strings (always with a denominator,
so ``1`` becomes ``"1/1"``); readers also accept integers and ``"p"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .char_cycle import ConicChain
from .constructible import ConstructibleFunction, make_function
from .errors import ValidationError
from .faces import Cone
from .polynomials import MultiPoly
from .polytope import Polytope, hull
from .valuations import ValuationExpr, make_valuation


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise ValidationError(f"expected an exact rational, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        t = s.strip()
        num, _, den = t.partition("/")
        try:
            if den:
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        except (ValueError, ZeroDivisionError):
            pass
    raise ValidationError(f"expected a rational 'p/q', got {s!r}")


def _require(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"missing key {key!r}")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise ValidationError(f"key {key!r} has the wrong type")
    return v


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def polytope_to_json(P: Polytope) -> dict:
    return {"dim": P.ambient_dim, "vertices": [[rat(x) for x in v] for v in P.vertices]}


def polytope_from_json(obj) -> Polytope:
    n = _require(obj, "dim", int)
    verts = _require(obj, "vertices", list)
    pts = []
    for v in verts:
        if not isinstance(v, list):
            raise ValidationError("each vertex must be a list of coordinates")
        pts.append([parse_rat(x) for x in v])
    return hull(pts, n)


def function_to_json(f: ConstructibleFunction) -> dict:
    cells = list(f.complex.cells)
    idx = {c: i for i, c in enumerate(cells)}
    return {
        "dim": f.ambient_dim,
        "cells": [polytope_to_json(c) for c in cells],
        "coeffs": [[idx[c], rat(v)] for c, v in f.coeffs],
    }


def function_from_json(obj) -> ConstructibleFunction:
    n = _require(obj, "dim", int)
    cells = [polytope_from_json(c) for c in _require(obj, "cells", list)]
    coeffs: dict[Polytope, Fraction] = {}
    for entry in _require(obj, "coeffs", list):
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], int)):
            raise ValidationError("coeffs entries must be [cell_index, 'p/q']")
        i, v = entry
        if not 0 <= i < len(cells):
            raise ValidationError(f"cell index {i} out of range")
        coeffs[cells[i]] = coeffs.get(cells[i], Fraction(0)) + parse_rat(v)
    f = make_function(n, coeffs)
    f.complex.validate()
    return f


def cone_to_json(C: Cone) -> dict:
    return {"rays": [list(r) for r in C.rays], "lineality": [[rat(x) for x in v] for v in C.lineality]}


def chain_to_json(c: ConicChain) -> dict:
    return {
        "dim": c.ambient_dim,
        "projectivized": c.projectivized,
        "pieces": [
            {"base": polytope_to_json(b), "cone": cone_to_json(C), "mult": rat(m)} for b, C, m in c.pieces
        ],
    }


def multipoly_to_json(p: MultiPoly) -> dict:
    return {"vars": list(p.variables), "terms": [[list(e), rat(c)] for e, c in p.terms]}


def multipoly_from_json(obj) -> MultiPoly:
    vars_ = _require(obj, "vars", list)
    terms = {}
    for entry in _require(obj, "terms", list):
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], list)):
            raise ValidationError("terms entries must be [[exponents...], 'p/q']")
        e = tuple(entry[0])
        terms[e] = terms.get(e, Fraction(0)) + parse_rat(entry[1])
    return MultiPoly.from_dict([str(v) for v in vars_], terms)


def valuation_to_json(phi: ValuationExpr) -> dict:
    return {
        "dim": phi.ambient_dim,
        "terms": [
            {
                "coeff": rat(t.coeff),
                "weight": multipoly_to_json(t.weight),
                "bodies": [polytope_to_json(b) for b in t.bodies],
            }
            for t in phi.terms
        ],
    }


def valuation_from_json(obj) -> ValuationExpr:
    n = _require(obj, "dim", int)
    raw = []
    for t in _require(obj, "terms", list):
        w = multipoly_from_json(t["weight"]) if isinstance(t, dict) and "weight" in t else None
        bodies = [polytope_from_json(b) for b in _require(t, "bodies", list)]
        raw.append((parse_rat(_require(t, "coeff")), w, bodies))
    return make_valuation(n, raw)
