"""Stable JSON document format for matrix tuples and differential systems.

Scalars serialize as exact strings ("7/288"), never floats; cyclotomic
scalars as arrays of phi(N) rational strings (power-basis coordinates).
Serialization is canonical (sorted keys, fixed separators) so identical
values produce identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .convolution import MatTuple
from .fields import QQ, CycloElem, CyclotomicField, euler_phi
from .fuchsian import FuchsianSystem, OkuboSystem
from .linalg import Matrix


class DocumentError(ValueError):
    pass


def field_to_json(field):
    if field == QQ:
        return {"kind": "rational"}
    if isinstance(field, CyclotomicField):
        return {"kind": "cyclotomic", "order": field.order}
    raise DocumentError(f"field {field!r} has no document form")


def field_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise DocumentError("malformed field descriptor")
    if obj["kind"] == "rational":
        return QQ
    if obj["kind"] == "cyclotomic":
        order = obj.get("order")
        if not isinstance(order, int) or order < 1:
            raise DocumentError("cyclotomic field needs a positive integer order")
        return CyclotomicField(order)
    raise DocumentError(f"unknown field kind {obj['kind']!r}")


def scalar_to_json(x):
    if isinstance(x, CycloElem):
        return [str(c) for c in x.coeffs]
    return str(Fraction(x))


def scalar_from_json(obj, field):
    if isinstance(obj, str):
        try:
            value = Fraction(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"bad scalar {obj!r}: {exc}") from exc
        return field(value)
    if isinstance(obj, list):
        if not isinstance(field, CyclotomicField):
            raise DocumentError("coefficient arrays need a cyclotomic field")
        if len(obj) != euler_phi(field.order):
            raise DocumentError(
                f"cyclotomic scalar needs {euler_phi(field.order)} coordinates")
        try:
            coeffs = [Fraction(c) for c in obj]
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"bad coefficient: {exc}") from exc
        return CycloElem(field.order, coeffs)
    raise DocumentError(f"bad scalar {obj!r}")


def matrix_to_json(m: Matrix):
    return [[scalar_to_json(x) for x in row] for row in m.entries]


def matrix_from_json(obj, field) -> Matrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise DocumentError("matrix must be a non-empty nested array")
    return Matrix(field, [[scalar_from_json(x, field) for x in row] for row in obj])


def tuple_to_document(t: MatTuple) -> dict:
    return {"kind": "mat-tuple", "field": field_to_json(t.field),
            "n": t.n, "r": t.r,
            "matrices": [matrix_to_json(m) for m in t.matrices]}


def fuchsian_to_document(s: FuchsianSystem) -> dict:
    return {"kind": "fuchsian", "field": field_to_json(s.field),
            "n": s.n, "r": s.r,
            "points": [str(t) for t in s.points],
            "matrices": [matrix_to_json(m) for m in s.residues]}


def okubo_to_document(ok: OkuboSystem) -> dict:
    return {"kind": "okubo", "field": field_to_json(ok.field),
            "n": ok.size, "r": len(ok.distinct_points()),
            "T": [str(t) for t in ok.tdiag],
            "b": matrix_to_json(ok.b)}


def parse_document(obj):
    """Dispatch a parsed JSON object to the matching value."""
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object")
    kind = obj.get("kind")
    field = field_from_json(obj.get("field", {"kind": "rational"}))
    try:
        if kind == "mat-tuple":
            mats = [matrix_from_json(m, field) for m in obj["matrices"]]
            return MatTuple(mats, field)
        if kind == "fuchsian":
            pts = [Fraction(t) for t in obj["points"]]
            mats = [matrix_from_json(m, field) for m in obj["matrices"]]
            return FuchsianSystem(pts, mats, field)
        if kind == "okubo":
            tdiag = [Fraction(t) for t in obj["T"]]
            b = matrix_from_json(obj["b"], field)
            return OkuboSystem(tdiag, b)
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"malformed {kind} document: {exc}") from exc
    raise DocumentError(f"unknown document kind {kind!r}")


def to_document(value) -> dict:
    if isinstance(value, MatTuple):
        return tuple_to_document(value)
    if isinstance(value, FuchsianSystem):
        return fuchsian_to_document(value)
    if isinstance(value, OkuboSystem):
        return okubo_to_document(value)
    raise DocumentError(f"cannot serialize {type(value).__name__}")


def dumps(obj) -> str:
    """Canonical JSON text (sorted keys, fixed separators, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def load_document(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(json.load(fh))


def save_document(path, value):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(to_document(value)))
